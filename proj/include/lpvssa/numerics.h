#pragma once

#include <optional>

#include "lpvssa/lpv_system.h"

namespace lpvssa {

/// Numerical rank of a matrix together with the evidence behind it.
struct RankDecision {
  int rank = 0;
  Vector singular_values;  // descending
  double tolerance_used = 0.0;
};

/**
 * Rank-decision settings shared by the analysis, reduction and equivalence
 * code. The default tolerance is sigma_max * max(rows, cols) * 2^-52; a set
 * `absolute_tolerance` replaces it everywhere.
 */
struct RankOptions {
  std::optional<double> absolute_tolerance;
  /// Cap on rows * cols for explicitly built extended matrices.
  double max_entries = 1e7;
};

/// Name of the environment variable holding a rank-tolerance override.
inline constexpr const char* kRankToleranceEnv = "LPVSSA_RANK_TOL";

/// Reads kRankToleranceEnv into an options struct. Throws InputError when the
/// variable is set but is not a positive finite number.
RankOptions rank_options_from_env();

double default_rank_tolerance(double sigma_max, Eigen::Index rows,
                              Eigen::Index cols);

RankDecision numerical_rank(const Matrix& m, const RankOptions& opts = {});

/// Same decision with a tolerance derived from `scale` instead of the
/// matrix's own sigma_max (used when the matrix is a projection of a larger
/// operator whose size sets the noise floor).
RankDecision numerical_rank_scaled(const Matrix& m, double scale,
                                   const RankOptions& opts = {});

/// Orthonormal basis (columns) of Ker m, using `tolerance` on the singular
/// values. Columns are ordered by descending singular value of the
/// complementary part and sign-normalized.
Matrix kernel_basis(const Matrix& m, double tolerance);

/// Orthonormal basis of the orthogonal complement of span(basis) in
/// R^{basis.rows()}. `basis` must have orthonormal columns.
Matrix orthogonal_complement(const Matrix& basis);

/// Flips each column so that its largest-magnitude entry is positive.
void normalize_column_signs(Matrix& m);

/// Minimum-norm least-squares solution of a x = b with rank decided by the
/// shared tolerance convention.
Matrix least_squares(const Matrix& a, const Matrix& b,
                     const RankOptions& opts = {});

/// Cosines of the principal angles between span(a) and span(b), both with
/// orthonormal columns. Returns the largest principal angle in radians;
/// pi/2 when the dimensions differ.
double max_principal_angle(const Matrix& a, const Matrix& b);

/// True when sigma_min(m) <= rel_tol * sigma_max(m) (or m is zero).
bool is_numerically_singular(const Matrix& m, double rel_tol = 1e-10);

double condition_number(const Matrix& m);

}  // namespace lpvssa
