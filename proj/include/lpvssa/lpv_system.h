#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lpvssa {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Thrown when an argument violates a documented precondition (shapes,
/// signatures, scheduling outside the region, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when an explicit matrix construction would exceed the configured
/// entry cap.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class TimeDomain { kDiscrete, kContinuous };

const char* to_string(TimeDomain domain);

/**
 * Matrix-valued affine function M(p) = M_0 + sum_i p_i M_i.
 *
 * coeffs()[0] is the constant term, coeffs()[i] (i >= 1) multiplies the i-th
 * scheduling coordinate. All coefficients share one shape.
 */
class AffineMatrixFunction {
 public:
  AffineMatrixFunction() = default;
  /// Throws InputError when the list is empty or the shapes disagree.
  explicit AffineMatrixFunction(std::vector<Matrix> coeffs);

  /// Constant function with n_p zero-valued scheduling coefficients.
  static AffineMatrixFunction Constant(const Matrix& m, int num_scheduling);
  static AffineMatrixFunction Zero(Eigen::Index rows, Eigen::Index cols,
                                   int num_scheduling);

  [[nodiscard]] const std::vector<Matrix>& coeffs() const { return coeffs_; }
  [[nodiscard]] const Matrix& coeff(int i) const { return coeffs_.at(i); }
  [[nodiscard]] int num_scheduling() const {
    return static_cast<int>(coeffs_.size()) - 1;
  }
  [[nodiscard]] Eigen::Index rows() const;
  [[nodiscard]] Eigen::Index cols() const;

  /// M_0 + sum_i p_i M_i, accumulated in index order.
  [[nodiscard]] Matrix operator()(const Vector& p) const;

  /// Coefficient-wise transpose.
  [[nodiscard]] AffineMatrixFunction transpose() const;

  friend bool operator==(const AffineMatrixFunction& a,
                         const AffineMatrixFunction& b);

 private:
  std::vector<Matrix> coeffs_;
};

/// Axis-aligned box lower <= p <= upper.
struct SchedulingRegion {
  Vector lower;
  Vector upper;

  [[nodiscard]] int dim() const { return static_cast<int>(lower.size()); }
  [[nodiscard]] bool contains(const Vector& p, double slack = 0.0) const;
  [[nodiscard]] Vector center() const { return 0.5 * (lower + upper); }

  friend bool operator==(const SchedulingRegion& a, const SchedulingRegion& b);
};

/**
 * LPV state-space representation with affine scheduling dependence:
 *
 *   xi x(t) = A(p(t)) x(t) + B(p(t)) u(t)
 *      y(t) = C(p(t)) x(t) + D(p(t)) u(t)
 *
 * where xi is the forward shift (DT) or d/dt (CT). Instances are built
 * through the constructor, which runs validate() and rejects violations,
 * so a live LpvSsa always satisfies its invariants.
 */
class LpvSsa {
 public:
  LpvSsa(AffineMatrixFunction a, AffineMatrixFunction b,
         AffineMatrixFunction c, AffineMatrixFunction d,
         SchedulingRegion region, TimeDomain domain);

  [[nodiscard]] const AffineMatrixFunction& A() const { return a_; }
  [[nodiscard]] const AffineMatrixFunction& B() const { return b_; }
  [[nodiscard]] const AffineMatrixFunction& C() const { return c_; }
  [[nodiscard]] const AffineMatrixFunction& D() const { return d_; }
  [[nodiscard]] const SchedulingRegion& region() const { return region_; }
  [[nodiscard]] TimeDomain domain() const { return domain_; }

  [[nodiscard]] int nx() const { return static_cast<int>(a_.rows()); }
  [[nodiscard]] int nu() const { return static_cast<int>(b_.cols()); }
  [[nodiscard]] int ny() const { return static_cast<int>(c_.rows()); }
  [[nodiscard]] int np() const { return region_.dim(); }

  friend bool operator==(const LpvSsa& a, const LpvSsa& b);

 private:
  AffineMatrixFunction a_, b_, c_, d_;
  SchedulingRegion region_;
  TimeDomain domain_;
};

/// Evaluates f at p. Throws InputError when p has the wrong length.
Matrix eval(const AffineMatrixFunction& f, const Vector& p);

/// Returns one human-readable entry per violated invariant; empty when the
/// parts form a valid system.
std::vector<std::string> validate(const AffineMatrixFunction& a,
                                  const AffineMatrixFunction& b,
                                  const AffineMatrixFunction& c,
                                  const AffineMatrixFunction& d,
                                  const SchedulingRegion& region);
std::vector<std::string> validate(const LpvSsa& sys);

/// Dual system (A_i^T, C_i^T, B_i^T, D_i^T) on the same region and domain.
LpvSsa transpose_dual(const LpvSsa& sys);

/// True when both systems share n_u, n_y, n_p, region and domain.
bool same_signature(const LpvSsa& a, const LpvSsa& b);

/// Throws InputError naming `what` when the signatures differ.
void require_same_signature(const LpvSsa& a, const LpvSsa& b,
                            const char* what);

}  // namespace lpvssa
