#include "lpvssa/reduction.h"

#include <random>

#include <gtest/gtest.h>

#include "lpvssa/equivalence.h"
#include "lpvssa/io.h"
#include "lpvssa/simulation.h"
#include "support.h"

namespace lpvssa {
namespace {

using testing::Shape;

LpvSsa load(const std::string& name) {
  return io::parse_system(io::read_file(testing::data_path(name)));
}

Shape random_shape(std::mt19937_64& rng, TimeDomain domain) {
  Shape s;
  s.nx = testing::uniform_int(rng, 1, 5);
  s.nu = testing::uniform_int(rng, 1, 2);
  s.ny = testing::uniform_int(rng, 1, 2);
  s.np = testing::uniform_int(rng, 1, 2);
  s.unobservable = testing::uniform_int(rng, 0, s.nx - 1);
  s.domain = domain;
  return s;
}

TEST(ObservabilityReduction, ThreeStateExample) {
  const ReductionResult r = observability_reduction(load("three_state.json"));
  EXPECT_EQ(r.order, 2);
  EXPECT_EQ(r.reduced.nx(), 2);
  EXPECT_EQ(r.transform.rows(), 3);
  EXPECT_LE((r.transform * r.transform.transpose() - Matrix::Identity(3, 3)).norm(),
            1e-14);
  EXPECT_EQ(r.projection, r.transform.topRows(2));
  EXPECT_TRUE(is_observable(r.reduced).observable);
}

TEST(ObservabilityReduction, IoPreservationDiscrete) {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 100; ++trial) {
    const Shape s = random_shape(rng, TimeDomain::kDiscrete);
    const LpvSsa sys = testing::random_system(rng, s);
    const ReductionResult r = observability_reduction(sys);
    ASSERT_EQ(r.order, s.nx - s.unobservable);
    ASSERT_EQ(r.order,
              numerical_rank(extended_observability_matrix(sys, s.nx - 1)).rank);
    const Vector x0 = testing::gaussian(rng, s.nx, 1);
    const Signal u = testing::random_dt_signal(rng, s.nu, 20);
    const Signal p = testing::random_dt_scheduling(rng, sys.region(), 20);
    const Signal y = io_response(sys, x0, u, p, 20);
    const Signal yr = io_response(r.reduced, r.projection * x0, u, p, 20);
    for (int t = 0; t <= 20; ++t) EXPECT_LE((y[t] - yr[t]).norm(), 1e-9);
  }
}

TEST(ObservabilityReduction, IoPreservationContinuous) {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 100; ++trial) {
    const Shape s = random_shape(rng, TimeDomain::kContinuous);
    const LpvSsa sys = testing::random_system(rng, s, 2.0);
    const ReductionResult r = observability_reduction(sys);
    ASSERT_EQ(r.order, s.nx - s.unobservable);
    const Vector x0 = testing::gaussian(rng, s.nx, 1);
    const Signal u = testing::random_ct_input(rng, s.nu, 2.0, 0.1,
                                              Interpolation::kPiecewiseConstant);
    const Signal p = testing::random_ct_scheduling(rng, sys.region(), 2.0, 0.2);
    const Signal y = io_response(sys, x0, u, p, 2.0, 1e-3);
    const Signal yr = io_response(r.reduced, r.projection * x0, u, p, 2.0, 1e-3);
    for (std::size_t k = 0; k < y.size(); ++k)
      EXPECT_LE((y.values()[k] - yr.values()[k]).norm(), 1e-6);
  }
}

TEST(ObservabilityReduction, ReducedOutputsAreMatchedByOriginal) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    const Shape s = random_shape(rng, TimeDomain::kDiscrete);
    const LpvSsa sys = testing::random_system(rng, s);
    const ReductionResult r = observability_reduction(sys);
    const Vector z0 = testing::gaussian(rng, r.order, 1);
    const Matrix pinv =
        r.projection.completeOrthogonalDecomposition().pseudoInverse();
    const Vector x0 = pinv * z0;
    EXPECT_LE((r.projection * x0 - z0).norm(), 1e-12);
    const Signal u = testing::random_dt_signal(rng, s.nu, 20);
    const Signal p = testing::random_dt_scheduling(rng, sys.region(), 20);
    const Signal yr = io_response(r.reduced, z0, u, p, 20);
    const Signal y = io_response(sys, x0, u, p, 20);
    for (int t = 0; t <= 20; ++t) EXPECT_LE((y[t] - yr[t]).norm(), 1e-9);
  }
}

TEST(ObservabilityReduction, RegularityIsPreserved) {
  std::mt19937_64 rng(54);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    Shape s = random_shape(rng, TimeDomain::kDiscrete);
    s.np = 1;
    const LpvSsa sys = testing::random_system(rng, s);
    const auto grid_point = [&](int k) {
      return Vector::Constant(1, sys.region().lower(0) +
                                     (sys.region().upper(0) - sys.region().lower(0)) *
                                         k / 99.0);
    };
    bool invertible = true;
    for (int k = 0; k < 100 && invertible; ++k)
      invertible = !is_numerically_singular(eval(sys.A(), grid_point(k)));
    if (!invertible) continue;
    ++checked;
    const ReductionResult r = observability_reduction(sys);
    for (int k = 0; k < 100; ++k)
      EXPECT_FALSE(is_numerically_singular(eval(r.reduced.A(), grid_point(k))));
  }
  EXPECT_GT(checked, 30);
}

TEST(ObservabilityReduction, RotatedComplementsAreIsomorphic) {
  const LpvSsa sys = load("three_state.json");
  ReductionOptions a, b;
  a.complement_rotation_seed = 1;
  b.complement_rotation_seed = 2;
  const ReductionResult ra = observability_reduction(sys, a);
  const ReductionResult rb = observability_reduction(sys, b);
  EXPECT_FALSE(ra.reduced == rb.reduced);
  const IsoResult iso = find_isomorphism(ra.reduced, rb.reduced);
  EXPECT_EQ(iso.verdict, IsoVerdict::kIsomorphic);
  EXPECT_LT(iso.residual, 1e-8);
}

TEST(ObservabilityReduction, EdgeCases) {
  std::mt19937_64 rng(55);
  Shape s;
  const LpvSsa observable = testing::random_system(rng, s);
  EXPECT_EQ(observability_reduction(observable).order, 3);
  const LpvSsa blind(observable.A(), observable.B(),
                     AffineMatrixFunction::Zero(1, 3, 1), observable.D(),
                     observable.region(), observable.domain());
  const ReductionResult r = observability_reduction(blind);
  EXPECT_EQ(r.order, 0);
  EXPECT_EQ(r.reduced.nx(), 0);
  // A 0-state system still has the feedthrough i/o map.
  const Signal u = testing::random_dt_signal(rng, 1, 5);
  const Signal p = testing::random_dt_scheduling(rng, blind.region(), 5);
  const Signal y = io_response(blind, Vector::Ones(3), u, p, 5);
  const Signal yr = io_response(r.reduced, Vector(0), u, p, 5);
  for (int t = 0; t <= 5; ++t) EXPECT_LE((y[t] - yr[t]).norm(), 1e-14);
}

TEST(ReachabilityReduction, ProducesReachableSystem) {
  std::mt19937_64 rng(56);
  for (int trial = 0; trial < 30; ++trial) {
    Shape s = random_shape(rng, TimeDomain::kDiscrete);
    s.unobservable = 0;
    // Unreachable directions come from the dual of a planted unobservable one.
    Shape d = s;
    std::swap(d.nu, d.ny);
    d.unobservable = testing::uniform_int(rng, 0, s.nx - 1);
    const LpvSsa sys = transpose_dual(testing::random_system(rng, d));
    const ReductionResult r = reachability_reduction(sys);
    EXPECT_EQ(r.order, s.nx - d.unobservable);
    EXPECT_TRUE(is_span_reachable_from_zero(r.reduced).observable);
    // Zero-state responses agree.
    const Signal u = testing::random_dt_signal(rng, sys.nu(), 15);
    const Signal p = testing::random_dt_scheduling(rng, sys.region(), 15);
    const Signal y = io_response(sys, Vector::Zero(sys.nx()), u, p, 15);
    const Signal yr = io_response(r.reduced, Vector::Zero(r.order), u, p, 15);
    for (int t = 0; t <= 15; ++t) EXPECT_LE((y[t] - yr[t]).norm(), 1e-9);
  }
}

TEST(Minimize, ClaimFollowsRegularity) {
  const Minimization three = minimize(load("three_state.json"));
  EXPECT_EQ(three.claim, MinimalityClaim::kMinimalBehavioral);
  EXPECT_EQ(three.result.order, 2);
  const Minimization memory = minimize(load("p0_memory.json"));
  EXPECT_EQ(memory.claim, MinimalityClaim::kObservableReductionOnly);
  EXPECT_EQ(memory.result.order, 2);
}

TEST(Conjugate, RoundTrip) {
  std::mt19937_64 rng(57);
  for (int trial = 0; trial < 20; ++trial) {
    const LpvSsa sys =
        testing::random_system(rng, random_shape(rng, TimeDomain::kDiscrete));
    const Matrix t = testing::random_invertible(rng, sys.nx(), 10.0);
    const LpvSsa back = conjugate(conjugate(sys, t), t.inverse());
    for (int i = 0; i <= sys.np(); ++i) {
      EXPECT_LE((back.A().coeff(i) - sys.A().coeff(i)).norm(), 1e-12);
      EXPECT_LE((back.B().coeff(i) - sys.B().coeff(i)).norm(), 1e-12);
      EXPECT_LE((back.C().coeff(i) - sys.C().coeff(i)).norm(), 1e-12);
    }
  }
}

}  // namespace
}  // namespace lpvssa
