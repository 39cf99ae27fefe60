#include "lpvssa/polynomial.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

namespace lpvssa::poly {

namespace {

double max_abs(const Coeffs& c) {
  double m = 0.0;
  for (double v : c) m = std::max(m, std::abs(v));
  return m;
}

Coeffs normalized(Coeffs c) {
  const double m = max_abs(c);
  if (m > 0.0) {
    for (double& v : c) v /= m;
  }
  return c;
}

// Remainder of a / b (b trimmed, nonzero leading coefficient).
Coeffs remainder(Coeffs a, const Coeffs& b) {
  const std::size_t db = b.size() - 1;
  while (a.size() > db && !a.empty()) {
    const double factor = a.back() / b.back();
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t k = 0; k <= db; ++k) a[shift + k] -= factor * b[k];
    a.pop_back();
  }
  return a;
}

int sign_changes(const std::vector<Coeffs>& seq, double x) {
  int changes = 0;
  int last = 0;
  for (const auto& p : seq) {
    const double v = evaluate(p, x);
    const int s = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

double evaluate(const Coeffs& c, double x) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Coeffs derivative(const Coeffs& c) {
  if (c.size() <= 1) return {};
  Coeffs d(c.size() - 1);
  for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = k * c[k];
  return d;
}

Coeffs trim(Coeffs c, double rel_tol) {
  const double m = max_abs(c);
  while (!c.empty() && std::abs(c.back()) <= rel_tol * m) c.pop_back();
  return c;
}

std::vector<double> chebyshev_nodes(int count) {
  std::vector<double> nodes(count);
  for (int k = 0; k < count; ++k) {
    nodes[k] = std::cos((2.0 * k + 1.0) * std::numbers::pi / (2.0 * count));
  }
  return nodes;
}

Coeffs interpolate_chebyshev(const std::function<double(double)>& f,
                             double lower, double upper, int degree) {
  const double mid = 0.5 * (lower + upper);
  const double half = 0.5 * (upper - lower);
  const auto nodes = chebyshev_nodes(degree + 1);
  Eigen::MatrixXd vander(degree + 1, degree + 1);
  Eigen::VectorXd values(degree + 1);
  for (int k = 0; k <= degree; ++k) {
    double pw = 1.0;
    for (int j = 0; j <= degree; ++j) {
      vander(k, j) = pw;
      pw *= nodes[k];
    }
    values(k) = f(mid + half * nodes[k]);
  }
  const Eigen::VectorXd c = vander.fullPivLu().solve(values);
  return Coeffs(c.data(), c.data() + c.size());
}

Coeffs to_monomial(const Coeffs& in_s, double mid, double half_width) {
  // q(x) = sum_k c_k ((x - mid) / h)^k
  Coeffs out(in_s.size(), 0.0);
  for (std::size_t k = 0; k < in_s.size(); ++k) {
    const double scale = in_s[k] / std::pow(half_width, static_cast<int>(k));
    for (std::size_t j = 0; j <= k; ++j) {
      out[j] += scale * binomial(static_cast<int>(k), static_cast<int>(j)) *
                std::pow(-mid, static_cast<int>(k - j));
    }
  }
  return out;
}

std::vector<Coeffs> sturm_sequence(const Coeffs& c, double rel_tol) {
  std::vector<Coeffs> seq;
  Coeffs p0 = normalized(trim(c, rel_tol));
  if (p0.empty()) return seq;
  seq.push_back(p0);
  Coeffs p1 = normalized(trim(derivative(p0), rel_tol));
  while (!p1.empty()) {
    seq.push_back(p1);
    Coeffs r = remainder(seq[seq.size() - 2], p1);
    // A remainder that is tiny relative to its dividend is rounding noise.
    const double ref = max_abs(seq[seq.size() - 2]);
    while (!r.empty() && std::abs(r.back()) <= rel_tol * ref) r.pop_back();
    for (double& v : r) v = -v;
    p1 = normalized(std::move(r));
  }
  return seq;
}

int count_roots(const std::vector<Coeffs>& sturm, double a, double b) {
  if (sturm.empty()) return 0;
  return sign_changes(sturm, a) - sign_changes(sturm, b);
}

std::optional<double> isolate_root(const std::vector<Coeffs>& sturm, double a,
                                   double b, double tol) {
  if (count_roots(sturm, a, b) <= 0) return std::nullopt;
  while (b - a > tol * std::max(1.0, std::abs(a) + std::abs(b))) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    if (count_roots(sturm, a, m) > 0) {
      b = m;
    } else {
      a = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace lpvssa::poly
