#include "lpvssa/analysis.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "lpvssa/polynomial.h"

namespace lpvssa {

namespace {

Matrix stack_coeffs(const AffineMatrixFunction& f) {
  const auto& cs = f.coeffs();
  Matrix out(f.rows() * static_cast<Eigen::Index>(cs.size()), f.cols());
  for (std::size_t i = 0; i < cs.size(); ++i) {
    out.middleRows(static_cast<Eigen::Index>(i) * f.rows(), f.rows()) = cs[i];
  }
  return out;
}

double max_frobenius(const AffineMatrixFunction& f) {
  double m = 0.0;
  for (const auto& c : f.coeffs()) m = std::max(m, c.norm());
  return m;
}

// Upper-triangular factor R with R^T R = M^T M (same singular values as M).
Matrix compress_rows(const Matrix& m) {
  if (m.rows() <= m.cols()) return m;
  Eigen::HouseholderQR<Matrix> qr(m);
  return qr.matrixQR().topRows(m.cols()).triangularView<Eigen::Upper>();
}

// One step of the O_{n+1} = [O_n; O_n A_0; ...] recursion.
Matrix observability_step(const Matrix& o, const LpvSsa& sys) {
  const int np = sys.np();
  Matrix next(o.rows() * (np + 2), o.cols());
  next.topRows(o.rows()) = o;
  for (int i = 0; i <= np; ++i) {
    next.middleRows(o.rows() * (i + 1), o.rows()) = o * sys.A().coeff(i);
  }
  return next;
}

bool fits_cap(const LpvSsa& sys, int n, const RankOptions& opts) {
  return extended_observability_rows(sys, n) * sys.nx() <= opts.max_entries;
}

RankDecision observability_rank(const LpvSsa& sys, bool& direct,
                                const RankOptions& opts) {
  const int n = std::max(sys.nx() - 1, 0);
  const double rows = extended_observability_rows(sys, n);
  direct = fits_cap(sys, n, opts);
  if (direct) {
    return numerical_rank(extended_observability_matrix(sys, n, opts), opts);
  }
  const Matrix r = compressed_observability_matrix(sys, n);
  RankDecision d = numerical_rank(r, opts);
  if (!opts.absolute_tolerance) {
    // Tolerance convention refers to the dimensions of the full O_n.
    const double smax = d.singular_values.size() ? d.singular_values(0) : 0.0;
    d.tolerance_used = smax * std::max(rows, static_cast<double>(sys.nx())) *
                       std::numeric_limits<double>::epsilon();
    d.rank = static_cast<int>(
        (d.singular_values.array() > d.tolerance_used).count());
  }
  return d;
}

std::mt19937_64 trial_rng(std::uint64_t seed, int trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial)};
  return std::mt19937_64(seq);
}

Vector uniform_point(const SchedulingRegion& region, std::mt19937_64& rng) {
  Vector p(region.dim());
  for (int i = 0; i < region.dim(); ++i) {
    std::uniform_real_distribution<double> dist(region.lower(i),
                                                region.upper(i));
    p(i) = dist(rng);
  }
  return p;
}

}  // namespace

double extended_observability_rows(const LpvSsa& sys, int n) {
  return static_cast<double>(sys.ny()) * (sys.np() + 1) *
         std::pow(static_cast<double>(sys.np() + 2), n);
}

Matrix extended_observability_matrix(const LpvSsa& sys, int n,
                                     const RankOptions& opts) {
  if (n < 0) throw InputError("observability depth must be nonnegative");
  if (!fits_cap(sys, n, opts)) {
    std::ostringstream os;
    os << "O_" << n << " would have " << extended_observability_rows(sys, n)
       << " rows x " << sys.nx() << " columns, over the cap of "
       << opts.max_entries
       << " entries; use the subspace-iteration routines instead";
    throw ResourceLimitError(os.str());
  }
  Matrix o = stack_coeffs(sys.C());
  for (int k = 0; k < n; ++k) o = observability_step(o, sys);
  return o;
}

// If O_n = Q R with Q orthonormal, then O_{n+1} = diag(Q, ..., Q) [R; R A_i].
Matrix compressed_observability_matrix(const LpvSsa& sys, int n) {
  if (n < 0) throw InputError("observability depth must be nonnegative");
  Matrix r = compress_rows(stack_coeffs(sys.C()));
  for (int k = 0; k < n; ++k) r = compress_rows(observability_step(r, sys));
  return r;
}

Matrix extended_reachability_matrix(const LpvSsa& sys, int n,
                                    const RankOptions& opts) {
  return extended_observability_matrix(transpose_dual(sys), n, opts)
      .transpose();
}

Matrix unobservable_subspace(const LpvSsa& sys, const RankOptions& opts) {
  const int nx = sys.nx();
  if (nx == 0) return Matrix(0, 0);

  const Matrix c = stack_coeffs(sys.C());
  const double c_tol =
      opts.absolute_tolerance
          ? *opts.absolute_tolerance
          : default_rank_tolerance(max_frobenius(sys.C()), c.rows(), c.cols());
  Matrix v = kernel_basis(c, c_tol);

  const double a_scale = max_frobenius(sys.A());
  for (int iter = 0; iter < nx && v.cols() > 0; ++iter) {
    // x = V z stays in V under every A_i iff (I - V V^T) A_i V z = 0.
    const Eigen::Index k = v.cols();
    Matrix m((sys.np() + 1) * nx, k);
    for (int i = 0; i <= sys.np(); ++i) {
      const Matrix av = sys.A().coeff(i) * v;
      m.middleRows(i * nx, nx) = av - v * (v.transpose() * av);
    }
    const double tol = opts.absolute_tolerance
                           ? *opts.absolute_tolerance
                           : default_rank_tolerance(a_scale, m.rows(), nx);
    const Matrix z = kernel_basis(m, tol);
    if (z.cols() == k) break;
    v = v * z;
  }
  if (v.cols() > 0) {
    // Re-orthonormalize against accumulated rounding.
    Eigen::HouseholderQR<Matrix> qr(v);
    v = qr.householderQ() * Matrix::Identity(nx, v.cols());
    normalize_column_signs(v);
  }
  return v;
}

Matrix unobservable_subspace_direct(const LpvSsa& sys,
                                    const RankOptions& opts) {
  const int nx = sys.nx();
  if (nx == 0) return Matrix(0, 0);
  const Matrix o = extended_observability_matrix(sys, nx - 1, opts);
  const RankDecision d = numerical_rank(o, opts);
  return kernel_basis(o, d.tolerance_used);
}

ObservabilityReport is_observable(const LpvSsa& sys, const RankOptions& opts) {
  ObservabilityReport report;
  const Matrix kernel = unobservable_subspace(sys, opts);
  report.observable = kernel.cols() == 0;
  report.rank = observability_rank(sys, report.direct, opts);
  return report;
}

ObservabilityReport is_span_reachable_from_zero(const LpvSsa& sys,
                                                const RankOptions& opts) {
  return is_observable(transpose_dual(sys), opts);
}

const char* to_string(DtInvertibility v) {
  switch (v) {
    case DtInvertibility::kNotApplicable:
      return "not-applicable";
    case DtInvertibility::kCertified:
      return "certified";
    case DtInvertibility::kRefuted:
      return "refuted";
    case DtInvertibility::kHeuristicPass:
      return "heuristic-pass";
  }
  return "unknown";
}

RcCertificate check_rc(const LpvSsa& sys, int grid_per_axis) {
  if (grid_per_axis < 1) throw InputError("grid_per_axis must be positive");
  RcCertificate cert;
  // Validated boxes are convex with nonempty interior.
  cert.convex_ok = true;
  if (sys.domain() == TimeDomain::kContinuous) {
    cert.dt_invertibility = DtInvertibility::kNotApplicable;
    return cert;
  }
  const int nx = sys.nx();
  const auto& region = sys.region();
  if (nx == 0) {
    cert.dt_invertibility = DtInvertibility::kCertified;
    if (sys.np() == 1) cert.det_poly_1d = std::vector<double>{1.0};
    return cert;
  }

  if (sys.np() == 1) {
    const double lo = region.lower(0);
    const double hi = region.upper(0);
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    double det_scale = 1.0;
    const auto det_at = [&](double p) {
      const Matrix a = sys.A()(Vector::Constant(1, p));
      det_scale = std::max(det_scale, 1.0 + std::pow(a.norm(), nx));
      return a.fullPivLu().determinant();
    };
    const poly::Coeffs in_s = poly::interpolate_chebyshev(det_at, lo, hi, nx);
    cert.points_checked = static_cast<std::size_t>(nx + 1);

    poly::Coeffs report = poly::to_monomial(in_s, mid, half);
    double report_max = 0.0;
    for (double v : report) report_max = std::max(report_max, std::abs(v));
    // Interpolation noise on the unused top coefficients is dropped.
    report = poly::trim(std::move(report), 1e-12);
    for (double& v : report) {
      if (std::abs(v) <= 1e-14 * report_max) v = 0.0;
    }
    cert.det_poly_1d = report;

    double s_max = 0.0;
    for (double v : in_s) s_max = std::max(s_max, std::abs(v));
    const auto witness_at = [&](double s) {
      return Vector::Constant(1, mid + half * s);
    };
    if (s_max <= kSingularityTolerance * det_scale) {
      // det A(p) vanishes identically on the interval.
      cert.dt_invertibility = DtInvertibility::kRefuted;
      cert.witness = witness_at(0.0);
      return cert;
    }
    const poly::Coeffs q = poly::trim(in_s, 1e-12);
    for (double s : {-1.0, 1.0}) {
      if (std::abs(poly::evaluate(q, s)) <= 1e-12 * s_max) {
        cert.dt_invertibility = DtInvertibility::kRefuted;
        cert.witness = witness_at(s);
        return cert;
      }
    }
    const auto sturm = poly::sturm_sequence(q);
    if (poly::count_roots(sturm, -1.0, 1.0) == 0) {
      cert.dt_invertibility = DtInvertibility::kCertified;
    } else {
      cert.dt_invertibility = DtInvertibility::kRefuted;
      cert.witness = witness_at(*poly::isolate_root(sturm, -1.0, 1.0));
    }
    return cert;
  }

  // n_p >= 2: tensor grid plus uniform random points.
  cert.grid_per_axis = grid_per_axis;
  const int np = sys.np();
  const auto singular_at = [&](const Vector& p) {
    ++cert.points_checked;
    return is_numerically_singular(sys.A()(p), kSingularityTolerance);
  };
  std::vector<int> idx(np, 0);
  std::size_t grid_points = 1;
  for (int i = 0; i < np; ++i) grid_points *= grid_per_axis;
  for (std::size_t g = 0; g < grid_points; ++g) {
    Vector p(np);
    for (int i = 0; i < np; ++i) {
      const double w =
          grid_per_axis == 1 ? 0.5 : static_cast<double>(idx[i]) / (grid_per_axis - 1);
      p(i) = region.lower(i) + w * (region.upper(i) - region.lower(i));
    }
    if (singular_at(p)) {
      cert.dt_invertibility = DtInvertibility::kRefuted;
      cert.witness = p;
      return cert;
    }
    for (int i = 0; i < np; ++i) {
      if (++idx[i] < grid_per_axis) break;
      idx[i] = 0;
    }
  }
  std::mt19937_64 rng = trial_rng(0x5eed, 0);
  for (std::size_t r = 0; r < 10 * grid_points; ++r) {
    const Vector p = uniform_point(region, rng);
    if (singular_at(p)) {
      cert.dt_invertibility = DtInvertibility::kRefuted;
      cert.witness = p;
      return cert;
    }
  }
  cert.dt_invertibility = DtInvertibility::kHeuristicPass;
  return cert;
}

LtvSystem freeze_scheduling(const LpvSsa& sys, const Signal& p,
                            const SimulationOptions& opts) {
  if (p.domain() != sys.domain()) {
    throw InputError("scheduling signal domain does not match the system");
  }
  if (p.dim() != sys.np()) {
    throw InputError("scheduling signal has dimension " +
                     std::to_string(p.dim()) + ", expected " +
                     std::to_string(sys.np()));
  }
  check_scheduling(sys, p, p.horizon(), opts);
  LtvSystem ltv;
  ltv.domain = sys.domain();
  for (std::size_t k = 0; k < p.size(); ++k) {
    const Vector& pk = p.values()[k];
    ltv.times.push_back(p.domain() == TimeDomain::kDiscrete
                            ? static_cast<double>(k)
                            : p.times()[k]);
    ltv.A.push_back(sys.A()(pk));
    ltv.B.push_back(sys.B()(pk));
    ltv.C.push_back(sys.C()(pk));
    ltv.D.push_back(sys.D()(pk));
  }
  return ltv;
}

ObservabilityReport ltv_window_observability(const LpvSsa& sys, const Signal& p,
                                             double t_end,
                                             const LtvWindowOptions& opts) {
  ObservabilityReport report;
  report.direct = true;
  const int nx = sys.nx();
  if (p.domain() != sys.domain() || p.dim() != sys.np()) {
    throw InputError("scheduling signal does not match the system signature");
  }
  if (!p.covers(t_end)) {
    throw InputError("scheduling signal does not cover the window");
  }
  check_scheduling(sys, p, t_end, opts.simulation);

  if (sys.domain() == TimeDomain::kDiscrete) {
    const double rounded = std::round(t_end);
    if (rounded != t_end || t_end < 1) {
      throw InputError("DT window must be a positive integer");
    }
    const int n = static_cast<int>(rounded);
    Matrix stack(static_cast<Eigen::Index>(sys.ny()) * (n + 1), nx);
    Matrix phi = Matrix::Identity(nx, nx);
    // Roundoff in C(p_t) A(p_{t-1}) ... A(p_0) scales with the product of the
    // factor norms, which can exceed sigma_max of the stack by a wide margin.
    double bound_sq = 0.0;
    double phi_bound = 1.0;
    for (int t = 0; t <= n; ++t) {
      const Matrix c = sys.C()(p[t]);
      stack.middleRows(static_cast<Eigen::Index>(t) * sys.ny(), sys.ny()) =
          c * phi;
      bound_sq += std::pow(c.norm() * phi_bound, 2);
      if (t < n) {
        const Matrix a = sys.A()(p[t]);
        phi = a * phi;
        phi_bound *= a.norm();
      }
    }
    report.rank = numerical_rank_scaled(stack, std::sqrt(bound_sq), opts.rank);
  } else {
    const double step = opts.ct_step > 0.0 ? opts.ct_step : t_end / 1000.0;
    const int n = ct_step_count(t_end, step);
    const double h = t_end / n;
    // d/dt [Phi, W] = [A Phi, Phi^T C^T C Phi]
    const auto rhs = [&](const Matrix& phi, const Vector& pv, Matrix& dphi,
                         Matrix& dw) {
      const Matrix cphi = sys.C()(pv) * phi;
      dphi = sys.A()(pv) * phi;
      dw = cphi.transpose() * cphi;
    };
    Matrix phi = Matrix::Identity(nx, nx);
    Matrix w = Matrix::Zero(nx, nx);
    Matrix k1p, k2p, k3p, k4p, k1w, k2w, k3w, k4w;
    double bound = 0.0;  // integral of ||C||^2 ||Phi||^2
    for (int k = 0; k < n; ++k) {
      const double t = k * h;
      const double t_next = k + 1 < n ? t + h : t_end;
      const Vector p_mid = p.at(t + 0.5 * h);
      rhs(phi, p.right_limit(t), k1p, k1w);
      rhs(phi + 0.5 * h * k1p, p_mid, k2p, k2w);
      rhs(phi + 0.5 * h * k2p, p_mid, k3p, k3w);
      rhs(phi + h * k3p, p.at(t_next), k4p, k4w);
      phi += (h / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
      w += (h / 6.0) * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
      bound += h * std::pow(sys.C()(p.at(t_next)).norm() * phi.norm(), 2);
    }
    const Matrix sym = 0.5 * (w + w.transpose());
    report.rank = numerical_rank_scaled(sym, std::max(bound, sym.norm()),
                                        opts.rank);
  }
  report.observable = report.rank.rank == nx;
  return report;
}

Signal random_scheduling(const SchedulingRegion& region, TimeDomain domain,
                         double horizon, std::uint64_t seed, int trial,
                         int segments) {
  std::mt19937_64 rng = trial_rng(seed, trial);
  if (domain == TimeDomain::kDiscrete) {
    const int n = static_cast<int>(std::round(horizon));
    std::vector<Vector> values;
    for (int t = 0; t <= n; ++t) values.push_back(uniform_point(region, rng));
    return Signal::Discrete(std::move(values));
  }
  std::vector<double> times;
  std::vector<Vector> values;
  for (int k = 0; k <= segments; ++k) {
    times.push_back(k == segments ? horizon : horizon * k / segments);
    values.push_back(uniform_point(region, rng));
  }
  return Signal::Continuous(std::move(times), std::move(values),
                            Interpolation::kPiecewiseConstant);
}

RevealSearch find_revealing_scheduling(const LpvSsa& sys, int trials,
                                       double window, std::uint64_t seed,
                                       const LtvWindowOptions& opts) {
  RevealSearch search;
  if (trials < 1) throw InputError("trials must be positive");
  if (!is_observable(sys, opts.rank).observable) {
    search.diagnostic =
        "system is not observable; no scheduling makes the frozen LTV system "
        "observable";
    return search;
  }
  for (int trial = 0; trial < trials; ++trial) {
    ++search.trials_run;
    Signal p = random_scheduling(sys.region(), sys.domain(), window, seed, trial);
    if (ltv_window_observability(sys, p, window, opts).observable) {
      search.found = RevealingScheduling{std::move(p), window, trial};
      search.diagnostic = "found on trial " + std::to_string(trial);
      return search;
    }
  }
  search.diagnostic = "no revealing scheduling among " +
                      std::to_string(trials) + " trials";
  return search;
}

}  // namespace lpvssa
