#include "lpvssa/equivalence.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "lpvssa/simulation.h"

namespace lpvssa {

namespace {

// max_i ||lhs_i - rhs_i|| / max_i max(||lhs_i||, ||rhs_i||)
double family_error(const std::vector<Matrix>& lhs,
                    const std::vector<Matrix>& rhs) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    num = std::max(num, (lhs[i] - rhs[i]).norm());
    den = std::max({den, lhs[i].norm(), rhs[i].norm()});
  }
  if (num == 0.0) return 0.0;
  return den > 0.0 ? num / den : num;
}

Vector flatten(const Signal& s) {
  Vector out(static_cast<Eigen::Index>(s.size()) * s.dim());
  for (std::size_t k = 0; k < s.size(); ++k) {
    out.segment(static_cast<Eigen::Index>(k) * s.dim(), s.dim()) = s.values()[k];
  }
  return out;
}

Signal zero_like(const Signal& u) {
  const Vector z = Vector::Zero(u.dim());
  if (u.domain() == TimeDomain::kDiscrete) {
    return Signal::Discrete(std::vector<Vector>(u.size(), z));
  }
  return Signal::ConstantContinuous(z, u.horizon());
}

std::mt19937_64 trial_rng(std::uint64_t seed, int trial, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), stream};
  return std::mt19937_64(seq);
}

Vector unit_ball_point(int n, std::mt19937_64& rng) {
  if (n == 0) return Vector(0);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = normal(rng);
  const double radius = std::pow(unit(rng), 1.0 / n);
  return v.normalized() * radius;
}

Signal random_input(int nu, TimeDomain domain, double horizon, int segments,
                    std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const auto draw = [&] {
    Vector v(nu);
    for (int i = 0; i < nu; ++i) v(i) = dist(rng);
    return v;
  };
  std::vector<Vector> values;
  if (domain == TimeDomain::kDiscrete) {
    const int n = static_cast<int>(std::round(horizon));
    for (int t = 0; t <= n; ++t) values.push_back(draw());
    return Signal::Discrete(std::move(values));
  }
  std::vector<double> times;
  for (int k = 0; k <= segments; ++k) {
    times.push_back(k == segments ? horizon : horizon * k / segments);
    values.push_back(draw());
  }
  return Signal::Continuous(std::move(times), std::move(values),
                            Interpolation::kPiecewiseConstant);
}

}  // namespace

const char* to_string(IsoVerdict v) {
  switch (v) {
    case IsoVerdict::kIsomorphic:
      return "isomorphic";
    case IsoVerdict::kNotIsomorphic:
      return "not-isomorphic";
    case IsoVerdict::kInconclusive:
      return "inconclusive";
  }
  return "unknown";
}

double check_isomorphism(const LpvSsa& sys1, const LpvSsa& sys2,
                         const Matrix& t) {
  require_same_signature(sys1, sys2, "check_isomorphism");
  if (t.rows() != sys2.nx() || t.cols() != sys1.nx()) {
    std::ostringstream os;
    os << "check_isomorphism: T is " << t.rows() << "x" << t.cols()
       << ", expected " << sys2.nx() << "x" << sys1.nx();
    throw InputError(os.str());
  }
  std::vector<Matrix> a_l, a_r, b_l, b_r, c_l, c_r, d_l, d_r;
  for (int i = 0; i <= sys1.np(); ++i) {
    a_l.emplace_back(sys2.A().coeff(i) * t);
    a_r.emplace_back(t * sys1.A().coeff(i));
    b_l.emplace_back(sys2.B().coeff(i));
    b_r.emplace_back(t * sys1.B().coeff(i));
    c_l.emplace_back(sys2.C().coeff(i) * t);
    c_r.emplace_back(sys1.C().coeff(i));
    d_l.emplace_back(sys2.D().coeff(i));
    d_r.emplace_back(sys1.D().coeff(i));
  }
  return std::max({family_error(a_l, a_r), family_error(b_l, b_r),
                   family_error(c_l, c_r), family_error(d_l, d_r)});
}

IsoResult find_isomorphism(const LpvSsa& sys1, const LpvSsa& sys2,
                           const IsoOptions& opts) {
  require_same_signature(sys1, sys2, "find_isomorphism");
  IsoResult result;
  const int n = sys1.nx();
  if (n != sys2.nx()) {
    result.verdict = IsoVerdict::kNotIsomorphic;
    result.residual = std::numeric_limits<double>::infinity();
    result.obstruction = "dimension mismatch (" + std::to_string(n) + " vs " +
                         std::to_string(sys2.nx()) + " states)";
    return result;
  }
  const double d_err = family_error(sys2.D().coeffs(), sys1.D().coeffs());
  if (d_err >= opts.tolerance) {
    result.verdict = IsoVerdict::kNotIsomorphic;
    result.residual = d_err;
    result.transform = Matrix::Identity(n, n);
    result.obstruction = "feedthrough matrices D_i differ";
    return result;
  }

  const int depth = std::max(n - 1, 0);
  const double rows = extended_observability_rows(sys1, depth);
  if (n == 0) {
    result.transform = Matrix(0, 0);
  } else if (rows * 2 * n <= opts.rank.max_entries) {
    const Matrix o1 = extended_observability_matrix(sys1, depth, opts.rank);
    const Matrix o2 = extended_observability_matrix(sys2, depth, opts.rank);
    result.transform = least_squares(o2, o1, opts.rank);
  } else {
    // The error system has O = [O2, -O1]; compressing it keeps the
    // least-squares problem O2 T = O1 intact.
    const Matrix r = compressed_observability_matrix(error_system(sys2, sys1),
                                                     depth);
    result.transform =
        least_squares(r.leftCols(n), -r.rightCols(n), opts.rank);
  }

  result.residual = check_isomorphism(sys1, sys2, result.transform);
  result.condition = condition_number(result.transform);
  if (result.residual < opts.tolerance &&
      result.condition < opts.max_condition) {
    result.verdict = IsoVerdict::kIsomorphic;
    return result;
  }
  const bool both_observable = is_observable(sys1, opts.rank).observable &&
                               is_observable(sys2, opts.rank).observable;
  std::ostringstream os;
  if (result.residual >= opts.tolerance) {
    os << "residual " << result.residual << " above tolerance "
       << opts.tolerance;
  } else {
    os << "transform is singular or ill-conditioned (condition "
       << result.condition << ")";
  }
  if (both_observable) {
    result.verdict = IsoVerdict::kNotIsomorphic;
  } else {
    result.verdict = IsoVerdict::kInconclusive;
    os << "; at least one system is unobservable, so T is not unique";
  }
  result.obstruction = os.str();
  return result;
}

StateMatch match_initial_state(const LpvSsa& sys_from, const Vector& x0,
                               const LpvSsa& sys_to, const Signal& u,
                               const Signal& p, double horizon,
                               const MatchOptions& opts) {
  require_same_signature(sys_from, sys_to, "match_initial_state");
  const auto response = [&](const LpvSsa& sys, const Vector& x,
                            const Signal& input) {
    return flatten(io_response(sys, x, input, p, horizon, opts.step,
                               opts.simulation));
  };
  const Vector y = response(sys_from, x0, u);
  const Vector y_forced = response(sys_to, Vector::Zero(sys_to.nx()), u);

  const int n = sys_to.nx();
  const Signal u_zero = zero_like(u);
  Matrix free_map(y.size(), n);
  for (int j = 0; j < n; ++j) {
    free_map.col(j) = response(sys_to, Vector::Unit(n, j), u_zero);
  }
  const Vector target = y - y_forced;
  StateMatch match;
  match.x0 = least_squares(free_map, target, opts.rank);
  const Vector err = target - free_map * match.x0;
  if (err.size() > 0) {
    match.residual = std::sqrt(err.squaredNorm() / err.size());
    match.output_rms = std::sqrt(y.squaredNorm() / y.size());
  }
  return match;
}

EquivalenceReport behavior_equivalence_empirical(const LpvSsa& sys1,
                                                 const LpvSsa& sys2,
                                                 const EquivalenceOptions& opts) {
  require_same_signature(sys1, sys2, "behavior_equivalence_empirical");
  if (opts.trials < 1) throw InputError("trials must be positive");
  const bool dt = sys1.domain() == TimeDomain::kDiscrete;
  EquivalenceReport report;
  report.horizon = opts.horizon > 0.0 ? opts.horizon : (dt ? 20.0 : 2.0);
  report.tolerance = opts.tolerance > 0.0 ? opts.tolerance : (dt ? 1e-6 : 1e-4);
  report.rc1 = check_rc(sys1, opts.rc_grid_per_axis);
  report.rc2 = check_rc(sys2, opts.rc_grid_per_axis);

  MatchOptions match_opts;
  match_opts.step = opts.step;
  match_opts.rank = opts.rank;

  for (int trial = 0; trial < opts.trials; ++trial) {
    std::mt19937_64 rng = trial_rng(opts.seed, trial, 0);
    const Signal p = random_scheduling(sys1.region(), sys1.domain(),
                                       report.horizon, opts.seed ^ 0x9e3779b9,
                                       trial, opts.ct_segments);
    const Signal u = random_input(sys1.nu(), sys1.domain(), report.horizon,
                                  opts.ct_segments, rng);
    const Vector x1 = unit_ball_point(sys1.nx(), rng);
    const Vector x2 = unit_ball_point(sys2.nx(), rng);
    const auto scaled = [](const StateMatch& m) {
      return m.residual / std::max(1.0, m.output_rms);
    };
    EquivalenceTrial t;
    t.residual_1_to_2 = scaled(
        match_initial_state(sys1, x1, sys2, u, p, report.horizon, match_opts));
    t.residual_2_to_1 = scaled(
        match_initial_state(sys2, x2, sys1, u, p, report.horizon, match_opts));
    report.max_residual =
        std::max({report.max_residual, t.residual_1_to_2, t.residual_2_to_1});
    report.trials.push_back(t);
  }
  report.pass = report.max_residual < report.tolerance;

  report.notes.emplace_back(
      "finite-horizon randomized test: a pass is evidence of equal manifest "
      "behaviors, not a proof");
  if (!report.rc1.holds() || !report.rc2.holds()) {
    report.notes.emplace_back(
        "RC fails for at least one system: equal behaviors need not imply "
        "equal families of i/o functions");
  }
  return report;
}

}  // namespace lpvssa
