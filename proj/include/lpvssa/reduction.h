#pragma once

#include <cstdint>
#include <optional>

#include "lpvssa/analysis.h"
#include "lpvssa/lpv_system.h"
#include "lpvssa/numerics.h"

namespace lpvssa {

/**
 * Output of a state-space reduction.
 *
 * For observability reduction T is orthogonal, T A_i T^-1 is block
 * lower-triangular with top-left block equal to the reduced A_i, the first
 * o rows of T B_i are the reduced B_i and C_i T^-1 = [reduced C_i, 0].
 * Reachability reduction gives the transposed (block upper-triangular)
 * pattern. In both cases the reduced state is projection * x.
 */
struct ReductionResult {
  LpvSsa reduced;
  Matrix transform;   // T, n_x x n_x
  Matrix projection;  // first o rows of T
  int order = 0;      // o
};

struct ReductionOptions {
  RankOptions rank;
  /// When set, the complement basis b_1..b_o is rotated by a random
  /// orthogonal matrix drawn from this seed. Any rotation is a valid basis
  /// completion; the reduced systems differ by an orthogonal isomorphism.
  std::optional<std::uint64_t> complement_rotation_seed;
};

/// Splits off Ker O_{n_x-1} by an orthogonal change of basis and keeps the
/// observable block.
ReductionResult observability_reduction(const LpvSsa& sys,
                                        const ReductionOptions& opts = {});

/// transpose_dual . observability_reduction . transpose_dual.
ReductionResult reachability_reduction(const LpvSsa& sys,
                                       const ReductionOptions& opts = {});

enum class MinimalityClaim {
  kMinimalBehavioral,       // observable and RC holds
  kObservableReductionOnly  // RC refuted: observable, minimality not claimed
};

const char* to_string(MinimalityClaim claim);

struct Minimization {
  ReductionResult result;
  RcCertificate rc;
  MinimalityClaim claim = MinimalityClaim::kObservableReductionOnly;
};

/// Observability reduction plus the regularity certificate that decides
/// whether the result may be called minimal.
Minimization minimize(const LpvSsa& sys, const ReductionOptions& opts = {},
                      int rc_grid_per_axis = 10);

/// Builds (T A_i T^-1, T B_i, C_i T^-1, D_i).
LpvSsa conjugate(const LpvSsa& sys, const Matrix& t);

}  // namespace lpvssa
