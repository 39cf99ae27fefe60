#include "lpvssa/reduction.h"

#include <random>
#include <utility>

namespace lpvssa {

namespace {

Matrix random_orthogonal(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Matrix g(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) g(i, j) = normal(rng);
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  return qr.householderQ() * Matrix::Identity(n, n);
}

// Restriction onto the first o coordinates of T x, T orthogonal.
LpvSsa restrict(const LpvSsa& sys, const Matrix& basis) {
  std::vector<Matrix> a, b, c;
  for (int i = 0; i <= sys.np(); ++i) {
    a.emplace_back(basis.transpose() * sys.A().coeff(i) * basis);
    b.emplace_back(basis.transpose() * sys.B().coeff(i));
    c.emplace_back(sys.C().coeff(i) * basis);
  }
  return LpvSsa(AffineMatrixFunction(std::move(a)),
                AffineMatrixFunction(std::move(b)),
                AffineMatrixFunction(std::move(c)), sys.D(), sys.region(),
                sys.domain());
}

}  // namespace

ReductionResult observability_reduction(const LpvSsa& sys,
                                        const ReductionOptions& opts) {
  const int nx = sys.nx();
  const Matrix kernel = unobservable_subspace(sys, opts.rank);
  Matrix complement = orthogonal_complement(kernel);
  if (opts.complement_rotation_seed && complement.cols() > 0) {
    complement = complement * random_orthogonal(complement.cols(),
                                                *opts.complement_rotation_seed);
  }
  const auto o = static_cast<int>(complement.cols());

  // [b_1 ... b_nx] is orthogonal, so T = its transpose.
  Matrix basis(nx, nx);
  basis.leftCols(o) = complement;
  basis.rightCols(nx - o) = kernel;
  Matrix t = basis.transpose();

  return ReductionResult{restrict(sys, complement), t, t.topRows(o), o};
}

ReductionResult reachability_reduction(const LpvSsa& sys,
                                       const ReductionOptions& opts) {
  ReductionResult dual = observability_reduction(transpose_dual(sys), opts);
  // T orthogonal: the reachable part of sys is span of the first o columns
  // of T^T, and the reduced state is again the first o entries of T x.
  return ReductionResult{transpose_dual(dual.reduced), dual.transform,
                         dual.projection, dual.order};
}

const char* to_string(MinimalityClaim claim) {
  return claim == MinimalityClaim::kMinimalBehavioral
             ? "minimal (behavioral)"
             : "observable reduction only";
}

Minimization minimize(const LpvSsa& sys, const ReductionOptions& opts,
                      int rc_grid_per_axis) {
  Minimization m{observability_reduction(sys, opts),
                 check_rc(sys, rc_grid_per_axis),
                 MinimalityClaim::kObservableReductionOnly};
  if (m.rc.holds()) m.claim = MinimalityClaim::kMinimalBehavioral;
  return m;
}

LpvSsa conjugate(const LpvSsa& sys, const Matrix& t) {
  if (t.rows() != sys.nx() || t.cols() != sys.nx()) {
    throw InputError("conjugating transform must be n_x x n_x");
  }
  if (sys.nx() == 0) return sys;
  const Eigen::PartialPivLU<Matrix> lu_t(t.transpose());
  std::vector<Matrix> a, b, c;
  for (int i = 0; i <= sys.np(); ++i) {
    // A' = T A T^-1 = (T^-T (T A)^T)^T
    const Matrix ta = t * sys.A().coeff(i);
    a.emplace_back(Matrix(lu_t.solve(ta.transpose()).transpose()));
    b.emplace_back(t * sys.B().coeff(i));
    c.emplace_back(
        Matrix(lu_t.solve(sys.C().coeff(i).transpose()).transpose()));
  }
  return LpvSsa(AffineMatrixFunction(std::move(a)),
                AffineMatrixFunction(std::move(b)),
                AffineMatrixFunction(std::move(c)), sys.D(), sys.region(),
                sys.domain());
}

}  // namespace lpvssa
