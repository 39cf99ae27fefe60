#pragma once

#include <functional>
#include <optional>
#include <vector>

namespace lpvssa::poly {

/// Real polynomial as coefficients in ascending powers.
using Coeffs = std::vector<double>;

double evaluate(const Coeffs& c, double x);
Coeffs derivative(const Coeffs& c);

/// Drops leading (highest-power) coefficients with |c_k| <= rel_tol * max|c|.
Coeffs trim(Coeffs c, double rel_tol = 1e-12);

/// Chebyshev nodes of the first kind on [-1, 1], count of them.
std::vector<double> chebyshev_nodes(int count);

/**
 * Interpolates f on [lower, upper] by a polynomial of the given degree
 * through degree + 1 Chebyshev nodes. The result is expressed in the
 * normalized variable s = (x - mid) / half_width, s in [-1, 1].
 */
Coeffs interpolate_chebyshev(const std::function<double(double)>& f,
                             double lower, double upper, int degree);

/// Rewrites q(s), s = (x - mid) / half_width, in ascending powers of x.
Coeffs to_monomial(const Coeffs& in_s, double mid, double half_width);

/// Sturm chain p, p', -rem(p, p'), ... with each member scaled to unit
/// max-norm. `rel_tol` decides when a remainder counts as zero.
std::vector<Coeffs> sturm_sequence(const Coeffs& c, double rel_tol = 1e-12);

/// Number of distinct real roots in (a, b].
int count_roots(const std::vector<Coeffs>& sturm, double a, double b);

/// Bisects (a, b] down to width `tol` and returns a point next to one root,
/// or nothing when the interval holds none.
std::optional<double> isolate_root(const std::vector<Coeffs>& sturm, double a,
                                   double b, double tol = 1e-14);

}  // namespace lpvssa::poly
