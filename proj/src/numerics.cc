#include "lpvssa/numerics.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <string>

namespace lpvssa {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();  // 2^-52

Vector singular_values(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return Vector(0);
  Eigen::JacobiSVD<Matrix, Eigen::ColPivHouseholderQRPreconditioner> svd(m);
  return svd.singularValues();
}

double tolerance_for(const RankOptions& opts, double scale, Eigen::Index rows,
                     Eigen::Index cols) {
  if (opts.absolute_tolerance) return *opts.absolute_tolerance;
  return default_rank_tolerance(scale, rows, cols);
}

RankDecision decide(Vector sv, double tol) {
  RankDecision d;
  d.tolerance_used = tol;
  d.rank = static_cast<int>((sv.array() > tol).count());
  d.singular_values = std::move(sv);
  return d;
}

}  // namespace

RankOptions rank_options_from_env() {
  RankOptions opts;
  if (const char* raw = std::getenv(kRankToleranceEnv); raw && *raw) {
    char* end = nullptr;
    const double v = std::strtod(raw, &end);
    if (end == raw || *end != '\0' || !std::isfinite(v) || v <= 0.0) {
      throw InputError(std::string(kRankToleranceEnv) +
                       " must be a positive number, got '" + raw + "'");
    }
    opts.absolute_tolerance = v;
  }
  return opts;
}

double default_rank_tolerance(double sigma_max, Eigen::Index rows,
                              Eigen::Index cols) {
  return sigma_max * static_cast<double>(std::max(rows, cols)) * kEps;
}

RankDecision numerical_rank(const Matrix& m, const RankOptions& opts) {
  Vector sv = singular_values(m);
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  return decide(std::move(sv), tolerance_for(opts, smax, m.rows(), m.cols()));
}

RankDecision numerical_rank_scaled(const Matrix& m, double scale,
                                   const RankOptions& opts) {
  Vector sv = singular_values(m);
  return decide(std::move(sv), tolerance_for(opts, scale, m.rows(), m.cols()));
}

void normalize_column_signs(Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    Eigen::Index imax = 0;
    m.col(j).cwiseAbs().maxCoeff(&imax);
    if (m(imax, j) < 0.0) m.col(j) = -m.col(j);
  }
}

Matrix kernel_basis(const Matrix& m, double tolerance) {
  const Eigen::Index n = m.cols();
  if (n == 0) return Matrix(0, 0);
  if (m.rows() == 0) return Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix, Eigen::ColPivHouseholderQRPreconditioner> svd(
      m, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const Eigen::Index rank = (sv.array() > tolerance).count();
  Matrix k = svd.matrixV().rightCols(n - rank);
  normalize_column_signs(k);
  return k;
}

Matrix orthogonal_complement(const Matrix& basis) {
  const Eigen::Index n = basis.rows();
  const Eigen::Index k = basis.cols();
  if (k == 0) return Matrix::Identity(n, n);
  if (k >= n) return Matrix(n, 0);
  Eigen::JacobiSVD<Matrix> svd(basis, Eigen::ComputeFullU);
  Matrix c = svd.matrixU().rightCols(n - k);
  normalize_column_signs(c);
  return c;
}

Matrix least_squares(const Matrix& a, const Matrix& b, const RankOptions& opts) {
  if (a.cols() == 0) return Matrix(0, b.cols());
  if (a.rows() == 0) return Matrix::Zero(a.cols(), b.cols());
  Eigen::JacobiSVD<Matrix, Eigen::ColPivHouseholderQRPreconditioner> svd(
      a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double smax = svd.singularValues()(0);
  if (smax == 0.0) return Matrix::Zero(a.cols(), b.cols());
  const double tol = tolerance_for(opts, smax, a.rows(), a.cols());
  svd.setThreshold(std::max(tol / smax, std::numeric_limits<double>::min()));
  return svd.solve(b);
}

double max_principal_angle(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols() || a.rows() != b.rows()) {
    return std::numbers::pi / 2.0;
  }
  if (a.cols() == 0) return 0.0;
  const Matrix residual = b - a * (a.transpose() * b);
  const Vector sv = singular_values(residual);
  const double s = sv.size() > 0 ? std::min(1.0, sv(0)) : 0.0;
  return std::asin(s);
}

bool is_numerically_singular(const Matrix& m, double rel_tol) {
  if (m.size() == 0) return false;
  const Vector sv = singular_values(m);
  const double smax = sv(0);
  if (smax == 0.0) return true;
  return sv(sv.size() - 1) <= rel_tol * smax;
}

double condition_number(const Matrix& m) {
  if (m.size() == 0) return 1.0;
  const Vector sv = singular_values(m);
  const double smin = sv(sv.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return sv(0) / smin;
}

}  // namespace lpvssa
