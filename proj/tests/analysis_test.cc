#include "lpvssa/analysis.h"

#include <random>

#include <gtest/gtest.h>

#include "lpvssa/io.h"
#include "support.h"

namespace lpvssa {
namespace {

using testing::Shape;

LpvSsa load(const std::string& name) {
  return io::parse_system(io::read_file(testing::data_path(name)));
}

Shape random_shape(std::mt19937_64& rng) {
  Shape s;
  s.nx = testing::uniform_int(rng, 1, 5);
  s.nu = testing::uniform_int(rng, 1, 2);
  s.ny = testing::uniform_int(rng, 1, 2);
  s.np = testing::uniform_int(rng, 1, 2);
  s.unobservable = testing::uniform_int(rng, 0, s.nx - 1);
  return s;
}

TEST(Observability, RowCountFollowsRecursion) {
  std::mt19937_64 rng(31);
  Shape s;
  s.nx = 3;
  s.ny = 2;
  s.np = 2;
  const LpvSsa sys = testing::random_system(rng, s);
  for (int n = 0; n <= 3; ++n) {
    double expected = 2 * 3;
    for (int k = 0; k < n; ++k) expected *= 4;
    EXPECT_EQ(extended_observability_rows(sys, n), expected);
    EXPECT_EQ(extended_observability_matrix(sys, n).rows(), expected);
  }
}

TEST(Observability, KernelsAgreeWithWordEnumeration) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 60; ++trial) {
    const Shape s = random_shape(rng);
    const LpvSsa sys = testing::random_system(rng, s);
    const Matrix oracle = testing::word_observability(sys, s.nx);
    const Matrix k_ref = kernel_basis(oracle, 1e-9 * oracle.norm());
    const Matrix k_iter = unobservable_subspace(sys);
    const Matrix k_direct = unobservable_subspace_direct(sys);
    ASSERT_EQ(k_iter.cols(), s.unobservable) << "trial " << trial;
    ASSERT_EQ(k_direct.cols(), s.unobservable);
    ASSERT_EQ(k_ref.cols(), s.unobservable);
    EXPECT_LT(testing::reference_angle(k_ref, k_iter), 1e-8);
    EXPECT_LT(testing::reference_angle(k_direct, k_iter), 1e-8);
    const auto report = is_observable(sys);
    EXPECT_EQ(report.observable, s.unobservable == 0);
    EXPECT_EQ(report.rank.rank, s.nx - s.unobservable);
    EXPECT_EQ(testing::reference_rank(oracle), s.nx - s.unobservable);
  }
}

TEST(Observability, RankMonotoneAndStabilizes) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 30; ++trial) {
    const Shape s = random_shape(rng);
    const LpvSsa sys = testing::random_system(rng, s);
    int previous = 0;
    for (int n = 0; n <= s.nx + 1; ++n) {
      const int r = numerical_rank(extended_observability_matrix(sys, n)).rank;
      EXPECT_GE(r, previous);
      if (n >= s.nx - 1) EXPECT_EQ(r, s.nx - s.unobservable);
      previous = r;
    }
  }
}

TEST(Observability, CompressedMatrixKeepsSingularValues) {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 20; ++trial) {
    const Shape s = random_shape(rng);
    const LpvSsa sys = testing::random_system(rng, s);
    const Matrix full = extended_observability_matrix(sys, s.nx - 1);
    const Matrix comp = compressed_observability_matrix(sys, s.nx - 1);
    EXPECT_LE(comp.rows(), s.nx);
    const Vector a = Eigen::JacobiSVD<Matrix>(full).singularValues();
    const Vector b = Eigen::JacobiSVD<Matrix>(comp).singularValues();
    ASSERT_EQ(a.size(), b.size());
    EXPECT_LE((a - b).norm(), 1e-12 * a(0));
  }
}

TEST(Observability, ResourceCapFallsBackToCompression) {
  std::mt19937_64 rng(35);
  Shape s;
  s.nx = 8;
  s.np = 4;
  s.unobservable = 3;
  const LpvSsa sys = testing::random_system(rng, s);
  EXPECT_GT(extended_observability_rows(sys, 7) * 8, 1e7);
  EXPECT_THROW(extended_observability_matrix(sys, 7), ResourceLimitError);
  const auto report = is_observable(sys);
  EXPECT_FALSE(report.direct);
  EXPECT_FALSE(report.observable);
  EXPECT_EQ(report.rank.rank, 5);
  EXPECT_EQ(unobservable_subspace(sys).cols(), 3);
}

TEST(Reachability, DualityIsExact) {
  std::mt19937_64 rng(36);
  for (int trial = 0; trial < 40; ++trial) {
    const Shape s = random_shape(rng);
    const LpvSsa sys = testing::random_system(rng, s);
    for (int n = 0; n <= 3; ++n) {
      const Matrix r = extended_reachability_matrix(sys, n);
      const Matrix o = extended_observability_matrix(transpose_dual(sys), n);
      EXPECT_TRUE(r == o.transpose());
    }
    const Matrix words = testing::word_reachability(sys, s.nx);
    EXPECT_EQ(is_span_reachable_from_zero(sys).rank.rank,
              testing::reference_rank(words));
  }
}

TEST(Reachability, ZeroInputMatrixIsNotReachable) {
  const LpvSsa sys = load("p0_memory.json");
  EXPECT_FALSE(is_span_reachable_from_zero(sys).observable);
  EXPECT_TRUE(is_span_reachable_from_zero(load("three_state.json")).observable);
}

TEST(Observability, ThreeStateExample) {
  const LpvSsa sys = load("three_state.json");
  const auto report = is_observable(sys);
  EXPECT_FALSE(report.observable);
  EXPECT_EQ(report.rank.rank, 2);
  const Matrix k = unobservable_subspace(sys);
  ASSERT_EQ(k.cols(), 1);
  Vector expected(3);
  expected << 0.0, -1.0, 1.0;
  expected.normalize();
  EXPECT_LE((k.col(0) - expected).norm(), 1e-12);
}

TEST(RegularityCertificate, ThreeStateDeterminant) {
  const RcCertificate rc = check_rc(load("three_state.json"));
  EXPECT_EQ(rc.dt_invertibility, DtInvertibility::kCertified);
  EXPECT_TRUE(rc.holds());
  ASSERT_TRUE(rc.det_poly_1d.has_value());
  const std::vector<double> expected{-1.0, -3.0, -2.0};
  ASSERT_EQ(rc.det_poly_1d->size(), 3u);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR((*rc.det_poly_1d)[k], expected[k], 1e-9);
}

TEST(RegularityCertificate, RefutesWithWitness) {
  // det A(p) = p on [-1, 1]
  const SchedulingRegion region{Vector::Constant(1, -1.0),
                                Vector::Constant(1, 1.0)};
  Matrix a0 = Matrix::Zero(2, 2), a1 = Matrix::Zero(2, 2);
  a0(1, 1) = 1.0;
  a1(0, 0) = 1.0;
  const LpvSsa sys(AffineMatrixFunction({a0, a1}),
                   AffineMatrixFunction::Zero(2, 1, 1),
                   AffineMatrixFunction::Zero(1, 2, 1),
                   AffineMatrixFunction::Zero(1, 1, 1), region,
                   TimeDomain::kDiscrete);
  const RcCertificate rc = check_rc(sys);
  EXPECT_EQ(rc.dt_invertibility, DtInvertibility::kRefuted);
  EXPECT_FALSE(rc.holds());
  ASSERT_TRUE(rc.witness.has_value());
  EXPECT_TRUE(is_numerically_singular(eval(sys.A(), *rc.witness)));
}

TEST(RegularityCertificate, MemorySystemRefuted) {
  const RcCertificate rc = check_rc(load("p0_memory.json"));
  EXPECT_EQ(rc.dt_invertibility, DtInvertibility::kRefuted);
}

TEST(RegularityCertificate, MultiParameterGrid) {
  const SchedulingRegion region{Vector::Zero(2), Vector::Ones(2)};
  const auto make = [&](double shift) {
    Matrix a0 = Matrix::Identity(2, 2) * shift, a1 = Matrix::Zero(2, 2);
    a0(1, 1) = 1.0;
    a1(0, 0) = 1.0;
    return LpvSsa(AffineMatrixFunction({a0, a1, Matrix::Zero(2, 2)}),
                  AffineMatrixFunction::Zero(2, 1, 2),
                  AffineMatrixFunction::Zero(1, 2, 2),
                  AffineMatrixFunction::Zero(1, 1, 2), region,
                  TimeDomain::kDiscrete);
  };
  // A(p) = diag(p1, 1) is singular on the grid face p1 = 0.
  const RcCertificate bad = check_rc(make(0.0));
  EXPECT_EQ(bad.dt_invertibility, DtInvertibility::kRefuted);
  const RcCertificate good = check_rc(make(0.5), 5);
  EXPECT_EQ(good.dt_invertibility, DtInvertibility::kHeuristicPass);
  EXPECT_EQ(good.points_checked, 25u + 250u);
}

TEST(RegularityCertificate, NotApplicableInContinuousTime) {
  std::mt19937_64 rng(37);
  Shape s;
  s.domain = TimeDomain::kContinuous;
  const RcCertificate rc = check_rc(testing::random_system(rng, s));
  EXPECT_EQ(rc.dt_invertibility, DtInvertibility::kNotApplicable);
  EXPECT_TRUE(rc.holds());
}

TEST(LtvWindow, DiscreteStackMatchesReference) {
  std::mt19937_64 rng(38);
  for (int trial = 0; trial < 30; ++trial) {
    const Shape s = random_shape(rng);
    const LpvSsa sys = testing::random_system(rng, s);
    const Signal p = testing::random_dt_scheduling(rng, sys.region(), 6);
    Matrix stack(0, s.nx);
    Matrix phi = Matrix::Identity(s.nx, s.nx);
    for (int t = 0; t <= 6; ++t) {
      const Matrix rows = eval(sys.C(), p[t]) * phi;
      stack.conservativeResize(stack.rows() + rows.rows(), Eigen::NoChange);
      stack.bottomRows(rows.rows()) = rows;
      phi = eval(sys.A(), p[t]) * phi;
    }
    const auto report = ltv_window_observability(sys, p, 6);
    EXPECT_EQ(report.rank.rank, testing::reference_rank(stack));
    // Frozen-scheduling observability implies LPV observability.
    if (report.observable) EXPECT_TRUE(is_observable(sys).observable);
    if (!is_observable(sys).observable) EXPECT_FALSE(report.observable);
  }
}

TEST(LtvWindow, ContinuousGramian) {
  std::mt19937_64 rng(39);
  for (int trial = 0; trial < 10; ++trial) {
    Shape s = random_shape(rng);
    s.domain = TimeDomain::kContinuous;
    const LpvSsa sys = testing::random_system(rng, s);
    const Signal p = testing::random_ct_scheduling(rng, sys.region(), 1.0, 0.25);
    const auto report = ltv_window_observability(sys, p, 1.0);
    EXPECT_EQ(report.observable, s.unobservable == 0) << "trial " << trial;
  }
}

TEST(LtvWindow, FreezeScheduling) {
  const LpvSsa sys = load("three_state.json");
  const Signal p = Signal::Discrete({Vector::Constant(1, 0.0),
                                     Vector::Constant(1, 1.0)});
  const LtvSystem ltv = freeze_scheduling(sys, p);
  ASSERT_EQ(ltv.A.size(), 2u);
  EXPECT_EQ(ltv.A[0], sys.A().coeff(0));
  EXPECT_EQ(ltv.A[1], sys.A().coeff(0) + sys.A().coeff(1));
}

TEST(RevealingScheduling, DeterministicAndNegativeOnUnobservable) {
  const LpvSsa minimal = load("three_state_reduced.json");
  const RevealSearch a = find_revealing_scheduling(minimal, 10, 3, 7);
  const RevealSearch b = find_revealing_scheduling(minimal, 10, 3, 7);
  ASSERT_TRUE(a.found.has_value());
  ASSERT_TRUE(b.found.has_value());
  EXPECT_EQ(a.found->trial, b.found->trial);
  EXPECT_EQ(a.found->p.values(), b.found->p.values());
  const RevealSearch none =
      find_revealing_scheduling(load("three_state.json"), 10, 3, 7);
  EXPECT_FALSE(none.found.has_value());
  EXPECT_FALSE(none.diagnostic.empty());
}

}  // namespace
}  // namespace lpvssa
