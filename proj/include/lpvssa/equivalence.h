#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lpvssa/analysis.h"
#include "lpvssa/lpv_system.h"
#include "lpvssa/numerics.h"
#include "lpvssa/signal.h"

namespace lpvssa {

enum class IsoVerdict { kIsomorphic, kNotIsomorphic, kInconclusive };

const char* to_string(IsoVerdict v);

/// Candidate isomorphism T from the state space of sys1 to that of sys2:
/// A2_i T = T A1_i, B2_i = T B1_i, C2_i T = C1_i, D2_i = D1_i.
struct IsoResult {
  Matrix transform;
  double residual = 0.0;
  double condition = 1.0;
  IsoVerdict verdict = IsoVerdict::kInconclusive;
  /// Why the verdict is not "isomorphic"; empty otherwise.
  std::string obstruction;
};

struct IsoOptions {
  double tolerance = 1e-8;
  double max_condition = 1e12;
  RankOptions rank;
};

/**
 * Solves O_{n-1}(sys2) T = O_{n-1}(sys1) in the least-squares sense, then
 * scores T against all four defining equation families. Throws InputError
 * on a signature mismatch (n_u, n_y, n_p, domain, region).
 */
IsoResult find_isomorphism(const LpvSsa& sys1, const LpvSsa& sys2,
                           const IsoOptions& opts = {});

/**
 * Largest relative Frobenius error over the four equation families. For
 * each family the error of every coefficient i is measured against the
 * largest coefficient norm in that family, so exact zeros do not blow up
 * the ratio. 0 means T is an exact isomorphism.
 */
double check_isomorphism(const LpvSsa& sys1, const LpvSsa& sys2,
                         const Matrix& t);

struct StateMatch {
  Vector x0;
  /// RMS of y_from - y_to over all output samples of the window.
  double residual = 0.0;
  /// RMS of y_from itself.
  double output_rms = 0.0;
};

struct MatchOptions {
  /// CT integration step (ignored for DT).
  double step = 1e-3;
  RankOptions rank;
  SimulationOptions simulation;
};

/**
 * Finds the initial state of sys_to whose response to (u, p) best matches
 * the response of sys_from started at x0, via least squares on the sampled
 * free-response map of sys_to.
 */
StateMatch match_initial_state(const LpvSsa& sys_from, const Vector& x0,
                               const LpvSsa& sys_to, const Signal& u,
                               const Signal& p, double horizon,
                               const MatchOptions& opts = {});

struct EquivalenceOptions {
  int trials = 20;
  /// DT steps or CT end time; 0 selects 20 steps (DT) / 2.0 (CT).
  double horizon = 0.0;
  std::uint64_t seed = 0;
  /// 0 selects 1e-6 (DT) / 1e-4 (CT).
  double tolerance = 0.0;
  /// CT integration step.
  double step = 1e-3;
  /// Pieces of the random piecewise-constant CT input and scheduling.
  int ct_segments = 20;
  RankOptions rank;
  int rc_grid_per_axis = 10;
};

/// Residuals scaled as residual / max(1, output_rms): absolute for outputs
/// of order one, relative for growing responses.
struct EquivalenceTrial {
  double residual_1_to_2 = 0.0;
  double residual_2_to_1 = 0.0;
};

struct EquivalenceReport {
  std::vector<EquivalenceTrial> trials;
  double max_residual = 0.0;
  double tolerance = 0.0;
  double horizon = 0.0;
  bool pass = false;
  RcCertificate rc1;
  RcCertificate rc2;
  /// Human-readable caveats (finite sampling, RC status).
  std::vector<std::string> notes;
};

/**
 * Randomized manifest-behavior comparison: each trial draws x0 in the unit
 * ball, random input and scheduling signals, and matches the output of each
 * system by the other. Passing is evidence, not proof, of equal behaviors.
 */
EquivalenceReport behavior_equivalence_empirical(const LpvSsa& sys1,
                                                 const LpvSsa& sys2,
                                                 const EquivalenceOptions& opts = {});

}  // namespace lpvssa
