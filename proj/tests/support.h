#pragma once

// Random-system generators and reference computations shared by the test
// binaries. The references are written independently of the library code
// paths they check.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lpvssa/lpv_system.h"
#include "lpvssa/signal.h"

namespace lpvssa::testing {

inline std::string data_path(const std::string& name) {
  return std::string(LPVSSA_DATA_DIR) + "/" + name;
}

inline Matrix gaussian(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> n;
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = n(rng);
  return m;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline Matrix random_orthogonal(std::mt19937_64& rng, int n) {
  Eigen::HouseholderQR<Matrix> qr(gaussian(rng, n, n));
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j)
    if (r(j, j) < 0) q.col(j) *= -1.0;
  return q;
}

/// Q1 diag(s) Q2 with singular values in [1, max_sv].
inline Matrix random_invertible(std::mt19937_64& rng, int n, double max_sv) {
  Vector s(n);
  for (int i = 0; i < n; ++i) s(i) = uniform(rng, 1.0, max_sv);
  return random_orthogonal(rng, n) * s.asDiagonal() * random_orthogonal(rng, n);
}

struct Shape {
  int nx = 3;
  int nu = 1;
  int ny = 1;
  int np = 1;
  int unobservable = 0;  // dimension of the planted unobservable subspace
  TimeDomain domain = TimeDomain::kDiscrete;
  bool unit_box = true;
};

inline SchedulingRegion random_region(std::mt19937_64& rng, int np,
                                      bool unit_box) {
  SchedulingRegion r{Vector(np), Vector(np)};
  for (int i = 0; i < np; ++i) {
    r.lower(i) = unit_box ? -1.0 : uniform(rng, -1.0, 0.5);
    r.upper(i) = unit_box ? 1.0 : r.lower(i) + uniform(rng, 0.2, 1.5);
  }
  return r;
}

/// Planted structure in hidden coordinates: A_i = [A11 0; A21 A22],
/// C_i = [C1 0], then rotated by a random orthogonal Q. ||A(p)|| <= a_norm on
/// the region.
inline LpvSsa random_system(std::mt19937_64& rng, const Shape& s,
                            double a_norm = 0.9) {
  const int o = s.nx - s.unobservable;
  const SchedulingRegion region = random_region(rng, s.np, s.unit_box);
  const Matrix q = random_orthogonal(rng, s.nx);
  std::vector<Matrix> a, b, c, d;
  double total = 0.0;
  for (int i = 0; i <= s.np; ++i) {
    Matrix ai = gaussian(rng, s.nx, s.nx);
    ai.topRightCorner(o, s.nx - o).setZero();
    Matrix ci = gaussian(rng, s.ny, s.nx);
    ci.rightCols(s.nx - o).setZero();
    const double weight =
        i == 0 ? 1.0
               : std::max(std::abs(region.lower(i - 1)),
                          std::abs(region.upper(i - 1)));
    const double norm = s.nx > 0 ? ai.operatorNorm() : 0.0;
    total += weight * norm;
    a.push_back(q * ai * q.transpose());
    b.push_back(q * gaussian(rng, s.nx, s.nu));
    c.push_back(ci * q.transpose());
    d.push_back(gaussian(rng, s.ny, s.nu));
  }
  if (total > 0.0)
    for (auto& ai : a) ai *= a_norm / total;
  return LpvSsa(AffineMatrixFunction(a), AffineMatrixFunction(b),
                AffineMatrixFunction(c), AffineMatrixFunction(d), region,
                s.domain);
}

inline Vector random_point(std::mt19937_64& rng, const SchedulingRegion& r) {
  Vector p(r.dim());
  for (int i = 0; i < r.dim(); ++i) p(i) = uniform(rng, r.lower(i), r.upper(i));
  return p;
}

inline Signal random_dt_signal(std::mt19937_64& rng, int dim, int steps,
                               double lo = -1.0, double hi = 1.0) {
  std::vector<Vector> v;
  for (int t = 0; t <= steps; ++t) {
    Vector x(dim);
    for (int i = 0; i < dim; ++i) x(i) = uniform(rng, lo, hi);
    v.push_back(x);
  }
  return Signal::Discrete(v);
}

inline Signal random_dt_scheduling(std::mt19937_64& rng,
                                   const SchedulingRegion& r, int steps) {
  std::vector<Vector> v;
  for (int t = 0; t <= steps; ++t) v.push_back(random_point(rng, r));
  return Signal::Discrete(v);
}

/// Piecewise-linear CT signal with nodes every `dt`.
inline Signal random_ct_scheduling(std::mt19937_64& rng,
                                   const SchedulingRegion& r, double t_end,
                                   double dt) {
  std::vector<double> times;
  std::vector<Vector> v;
  const int n = static_cast<int>(std::lround(t_end / dt));
  for (int k = 0; k <= n; ++k) {
    times.push_back(k == n ? t_end : k * dt);
    v.push_back(random_point(rng, r));
  }
  return Signal::Continuous(times, v, Interpolation::kPiecewiseLinear);
}

inline Signal random_ct_input(std::mt19937_64& rng, int dim, double t_end,
                              double dt, Interpolation interp) {
  std::vector<double> times;
  std::vector<Vector> v;
  const int n = static_cast<int>(std::lround(t_end / dt));
  for (int k = 0; k <= n; ++k) {
    times.push_back(k == n ? t_end : k * dt);
    Vector x(dim);
    for (int i = 0; i < dim; ++i) x(i) = uniform(rng, -1.0, 1.0);
    v.push_back(x);
  }
  return Signal::Continuous(times, v, interp);
}

/// Plain DT recursion, written out directly.
inline std::vector<Vector> reference_dt_outputs(const LpvSsa& sys, Vector x,
                                                const Signal& u,
                                                const Signal& p, int steps) {
  std::vector<Vector> y;
  for (int t = 0; t <= steps; ++t) {
    Matrix a = sys.A().coeff(0), b = sys.B().coeff(0), c = sys.C().coeff(0),
           d = sys.D().coeff(0);
    for (int i = 0; i < sys.np(); ++i) {
      a += p[t](i) * sys.A().coeff(i + 1);
      b += p[t](i) * sys.B().coeff(i + 1);
      c += p[t](i) * sys.C().coeff(i + 1);
      d += p[t](i) * sys.D().coeff(i + 1);
    }
    y.push_back(c * x + d * u[t]);
    x = a * x + b * u[t];
  }
  return y;
}

/// Observability rows C_j A_{w_k} ... A_{w_1} over all words of length < len,
/// enumerated breadth-first.
inline Matrix word_observability(const LpvSsa& sys, int len) {
  std::vector<Matrix> level;
  for (int j = 0; j <= sys.np(); ++j) level.push_back(sys.C().coeff(j));
  std::vector<Matrix> all = level;
  for (int k = 1; k < len; ++k) {
    std::vector<Matrix> next;
    for (const auto& m : level)
      for (int i = 0; i <= sys.np(); ++i) next.push_back(m * sys.A().coeff(i));
    all.insert(all.end(), next.begin(), next.end());
    level = std::move(next);
  }
  Eigen::Index rows = 0;
  for (const auto& m : all) rows += m.rows();
  Matrix out(rows, sys.nx());
  Eigen::Index r = 0;
  for (const auto& m : all) {
    out.middleRows(r, m.rows()) = m;
    r += m.rows();
  }
  return out;
}

/// Reachability columns A_{w} B_j over all words of length < len.
inline Matrix word_reachability(const LpvSsa& sys, int len) {
  std::vector<Matrix> level;
  for (int j = 0; j <= sys.np(); ++j) level.push_back(sys.B().coeff(j));
  std::vector<Matrix> all = level;
  for (int k = 1; k < len; ++k) {
    std::vector<Matrix> next;
    for (const auto& m : level)
      for (int i = 0; i <= sys.np(); ++i) next.push_back(sys.A().coeff(i) * m);
    all.insert(all.end(), next.begin(), next.end());
    level = std::move(next);
  }
  Eigen::Index cols = 0;
  for (const auto& m : all) cols += m.cols();
  Matrix out(sys.nx(), cols);
  Eigen::Index c = 0;
  for (const auto& m : all) {
    out.middleCols(c, m.cols()) = m;
    c += m.cols();
  }
  return out;
}

inline int reference_rank(const Matrix& m, double rel = 1e-9) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector s = svd.singularValues();
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel * s(0)) ++r;
  return r;
}

/// Largest principal angle between two column spaces with orthonormal bases,
/// from the sine form (acos loses precision near zero angles).
inline double reference_angle(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) return M_PI / 2;
  if (a.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(b - a * (a.transpose() * b));
  return std::asin(std::min(1.0, svd.singularValues()(0)));
}

}  // namespace lpvssa::testing
