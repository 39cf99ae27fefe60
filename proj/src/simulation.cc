#include "lpvssa/simulation.h"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

namespace lpvssa {

namespace {

void require_domain(const Signal& s, TimeDomain domain, const char* name) {
  if (s.domain() != domain) {
    throw InputError(std::string(name) + " signal is " + to_string(s.domain()) +
                     " but the system is " + to_string(domain));
  }
}

void require_dim(const Signal& s, int dim, const char* name) {
  if (s.dim() != dim) {
    std::ostringstream os;
    os << name << " signal has dimension " << s.dim() << ", expected " << dim;
    throw InputError(os.str());
  }
}

void check_common(const LpvSsa& sys, const Vector& x0, const Signal& u,
                  const Signal& p) {
  if (x0.size() != sys.nx()) {
    std::ostringstream os;
    os << "initial state has length " << x0.size() << ", expected "
       << sys.nx();
    throw InputError(os.str());
  }
  require_domain(u, sys.domain(), "input");
  require_domain(p, sys.domain(), "scheduling");
  require_dim(u, sys.nu(), "input");
  require_dim(p, sys.np(), "scheduling");
}

void check_size(const LpvSsa& sys, double samples,
                const SimulationOptions& opts) {
  const double entries = samples * (sys.nx() + sys.ny());
  if (entries > opts.max_entries) {
    std::ostringstream os;
    os << "trajectory would hold " << entries << " entries, over the cap of "
       << opts.max_entries;
    throw ResourceLimitError(os.str());
  }
}

}  // namespace

void check_scheduling(const LpvSsa& sys, const Signal& p, double horizon,
                      const SimulationOptions& opts) {
  const auto& values = p.values();
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (p.domain() == TimeDomain::kDiscrete && static_cast<double>(k) > horizon)
      break;
    if (p.domain() == TimeDomain::kContinuous && k > 0 &&
        p.times()[k - 1] >= horizon)
      break;
    if (!sys.region().contains(values[k], opts.region_slack)) {
      std::ostringstream os;
      os << "scheduling sample " << k << " lies outside the region";
      if (opts.region_policy == RegionPolicy::kReject) throw InputError(os.str());
      std::cerr << "warning: " << os.str() << "\n";
    }
  }
}

Trajectory simulate_dt(const LpvSsa& sys, const Vector& x0, const Signal& u,
                       const Signal& p, int steps,
                       const SimulationOptions& opts) {
  if (sys.domain() != TimeDomain::kDiscrete) {
    throw InputError("simulate_dt called on a CT system");
  }
  check_common(sys, x0, u, p);
  if (steps < 0) throw InputError("horizon must be nonnegative");
  check_size(sys, steps + 1.0, opts);
  if (!u.covers(steps) || !p.covers(steps)) {
    std::ostringstream os;
    os << "horizon " << steps << " exceeds signal length (input has "
       << u.size() << " samples, scheduling has " << p.size() << ")";
    throw InputError(os.str());
  }
  check_scheduling(sys, p, steps, opts);

  std::vector<Vector> xs;
  std::vector<Vector> ys;
  xs.reserve(steps + 1);
  ys.reserve(steps + 1);
  Vector x = x0;
  for (int t = 0; t <= steps; ++t) {
    const Vector& pt = p[t];
    const Vector& ut = u[t];
    ys.emplace_back(sys.C()(pt) * x + sys.D()(pt) * ut);
    xs.push_back(x);
    if (t < steps) x = sys.A()(pt) * x + sys.B()(pt) * ut;
  }
  return {Signal::Discrete(std::move(xs)), Signal::Discrete(std::move(ys))};
}

int ct_step_count(double t_end, double step, double max_steps) {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw InputError("integration step must be positive");
  }
  if (!(t_end > 0.0) || !std::isfinite(t_end)) {
    throw InputError("CT horizon must be positive");
  }
  const double n = std::ceil(t_end / step - 1e-9);
  if (n > max_steps) {
    std::ostringstream os;
    os << "horizon " << t_end << " at step " << step << " needs " << n
       << " steps, over the cap of " << max_steps;
    throw ResourceLimitError(os.str());
  }
  return std::max(1, static_cast<int>(n));
}

Trajectory simulate_ct(const LpvSsa& sys, const Vector& x0, const Signal& u,
                       const Signal& p, double t_end, double step,
                       const SimulationOptions& opts) {
  if (sys.domain() != TimeDomain::kContinuous) {
    throw InputError("simulate_ct called on a DT system");
  }
  check_common(sys, x0, u, p);
  const int n = ct_step_count(t_end, step);
  check_size(sys, n + 1.0, opts);
  if (!u.covers(t_end) || !p.covers(t_end)) {
    std::ostringstream os;
    os << "signal coverage gap: input reaches t = " << u.horizon()
       << ", scheduling reaches t = " << p.horizon() << ", need " << t_end;
    throw InputError(os.str());
  }
  check_scheduling(sys, p, t_end, opts);

  const double h = t_end / n;
  const auto f = [&](const Vector& x, const Vector& pv, const Vector& uv) {
    return Vector(sys.A()(pv) * x + sys.B()(pv) * uv);
  };

  std::vector<double> ts;
  std::vector<Vector> xs;
  std::vector<Vector> ys;
  ts.reserve(n + 1);
  xs.reserve(n + 1);
  ys.reserve(n + 1);
  Vector x = x0;
  for (int k = 0; k <= n; ++k) {
    const double t = k * h;
    const Vector pt = k < n ? p.right_limit(t) : p.at(t_end);
    const Vector ut = k < n ? u.right_limit(t) : u.at(t_end);
    ts.push_back(k < n ? t : t_end);
    ys.emplace_back(sys.C()(pt) * x + sys.D()(pt) * ut);
    xs.push_back(x);
    if (k == n) break;

    const double t_mid = t + 0.5 * h;
    const double t_next = k + 1 < n ? t + h : t_end;
    const Vector p_mid = p.at(t_mid);
    const Vector u_mid = u.at(t_mid);
    const Vector k1 = f(x, pt, ut);
    const Vector k2 = f(x + 0.5 * h * k1, p_mid, u_mid);
    const Vector k3 = f(x + 0.5 * h * k2, p_mid, u_mid);
    const Vector k4 = f(x + h * k3, p.at(t_next), u.at(t_next));
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return {Signal::Continuous(ts, std::move(xs), Interpolation::kPiecewiseLinear),
          Signal::Continuous(std::move(ts), std::move(ys),
                             Interpolation::kPiecewiseLinear)};
}

Signal io_response(const LpvSsa& sys, const Vector& x0, const Signal& u,
                   const Signal& p, double horizon, double step,
                   const SimulationOptions& opts) {
  if (sys.domain() == TimeDomain::kDiscrete) {
    const double rounded = std::round(horizon);
    if (rounded != horizon) throw InputError("DT horizon must be an integer");
    return simulate_dt(sys, x0, u, p, static_cast<int>(rounded), opts).y;
  }
  return simulate_ct(sys, x0, u, p, horizon, step, opts).y;
}

LpvSsa error_system(const LpvSsa& sys1, const LpvSsa& sys2) {
  require_same_signature(sys1, sys2, "error_system");
  const int n1 = sys1.nx();
  const int n2 = sys2.nx();
  const int n = n1 + n2;
  const int np = sys1.np();
  std::vector<Matrix> a(np + 1), b(np + 1), c(np + 1), d(np + 1);
  for (int i = 0; i <= np; ++i) {
    a[i] = Matrix::Zero(n, n);
    a[i].topLeftCorner(n1, n1) = sys1.A().coeff(i);
    a[i].bottomRightCorner(n2, n2) = sys2.A().coeff(i);
    b[i].resize(n, sys1.nu());
    b[i].topRows(n1) = sys1.B().coeff(i);
    b[i].bottomRows(n2) = sys2.B().coeff(i);
    c[i].resize(sys1.ny(), n);
    c[i].leftCols(n1) = sys1.C().coeff(i);
    c[i].rightCols(n2) = -sys2.C().coeff(i);
    d[i] = sys1.D().coeff(i) - sys2.D().coeff(i);
  }
  return LpvSsa(AffineMatrixFunction(std::move(a)),
                AffineMatrixFunction(std::move(b)),
                AffineMatrixFunction(std::move(c)),
                AffineMatrixFunction(std::move(d)), sys1.region(),
                sys1.domain());
}

}  // namespace lpvssa
