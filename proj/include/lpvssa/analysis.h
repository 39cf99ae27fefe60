#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lpvssa/lpv_system.h"
#include "lpvssa/numerics.h"
#include "lpvssa/signal.h"
#include "lpvssa/simulation.h"

namespace lpvssa {

// ---------------------------------------------------------------------------
// Extended observability / reachability matrices
// ---------------------------------------------------------------------------

/// Rows of O_n: O_0 stacks C_0..C_{n_p}; O_{n+1} stacks O_n, O_n A_0, ...,
/// O_n A_{n_p}, so rows(O_n) = n_y (n_p + 1) (n_p + 2)^n.
double extended_observability_rows(const LpvSsa& sys, int n);

/// Builds O_n by the stacking recursion. Throws ResourceLimitError when
/// rows * n_x would exceed opts.max_entries.
Matrix extended_observability_matrix(const LpvSsa& sys, int n,
                                     const RankOptions& opts = {});

/// Upper-triangular R (at most n_x rows) with R^T R = O_n^T O_n, computed
/// by QR-compressing each step of the recursion. Never forms O_n, so it has
/// no size cap.
Matrix compressed_observability_matrix(const LpvSsa& sys, int n);

/// R_n = O_n(dual)^T; its columns are A_w B_i for words w of length <= n.
Matrix extended_reachability_matrix(const LpvSsa& sys, int n,
                                    const RankOptions& opts = {});

/**
 * Orthonormal basis of Ker O_{n_x - 1} computed by subspace iteration:
 * V_0 = intersection of Ker C_i, V_{k+1} = V_k intersected with the
 * preimages of V_k under every A_i, until the dimension stops shrinking.
 */
Matrix unobservable_subspace(const LpvSsa& sys, const RankOptions& opts = {});

/// Same subspace from the SVD of the explicitly built O_{n_x - 1}.
Matrix unobservable_subspace_direct(const LpvSsa& sys,
                                    const RankOptions& opts = {});

struct ObservabilityReport {
  bool observable = false;
  RankDecision rank;
  /// True when `rank` came from the explicit O_{n_x-1}; false when that
  /// matrix was over the cap and the singular values came from
  /// compressed_observability_matrix instead.
  bool direct = false;
};

ObservabilityReport is_observable(const LpvSsa& sys,
                                  const RankOptions& opts = {});
/// Observability of the dual system.
ObservabilityReport is_span_reachable_from_zero(const LpvSsa& sys,
                                                const RankOptions& opts = {});

// ---------------------------------------------------------------------------
// Regularity certificate
// ---------------------------------------------------------------------------

enum class DtInvertibility {
  kNotApplicable,  // CT system
  kCertified,      // exact sign-definiteness of det A(p), n_p = 1
  kRefuted,        // witness p* with A(p*) numerically singular
  kHeuristicPass,  // no singular point among the sampled points, n_p >= 2
};

const char* to_string(DtInvertibility v);

struct RcCertificate {
  bool convex_ok = true;
  DtInvertibility dt_invertibility = DtInvertibility::kNotApplicable;
  std::optional<Vector> witness;
  /// Points per axis of the tensor grid (heuristic route only).
  int grid_per_axis = 0;
  std::size_t points_checked = 0;
  /// det A(p) coefficients in ascending powers of p (n_p = 1, DT only).
  std::optional<std::vector<double>> det_poly_1d;

  /// True unless the DT invertibility check was refuted.
  [[nodiscard]] bool holds() const {
    return convex_ok && dt_invertibility != DtInvertibility::kRefuted;
  }
};

/// Relative threshold on sigma_min / sigma_max below which A(p) counts as
/// singular.
inline constexpr double kSingularityTolerance = 1e-10;

RcCertificate check_rc(const LpvSsa& sys, int grid_per_axis = 10);

// ---------------------------------------------------------------------------
// Frozen scheduling
// ---------------------------------------------------------------------------

/// Time-varying matrices obtained by substituting a scheduling trajectory.
struct LtvSystem {
  TimeDomain domain = TimeDomain::kDiscrete;
  std::vector<double> times;
  std::vector<Matrix> A, B, C, D;
};

LtvSystem freeze_scheduling(const LpvSsa& sys, const Signal& p,
                            const SimulationOptions& opts = {});

struct LtvWindowOptions {
  RankOptions rank;
  SimulationOptions simulation;
  /// CT Gramian integration step; 0 selects t_end / 1000.
  double ct_step = 0.0;
};

/**
 * Observability of the frozen LTV system on [0, t_end].
 * DT: rank of the stack C(0), C(1) Phi(1,0), ..., C(t_end) Phi(t_end,0).
 * CT: rank of the observability Gramian, integrated together with Phi by
 * the RK4 scheme used by simulate_ct.
 */
ObservabilityReport ltv_window_observability(const LpvSsa& sys, const Signal& p,
                                             double t_end,
                                             const LtvWindowOptions& opts = {});

/// Output of the window rank check for one scheduling signal.
struct RevealingScheduling {
  Signal p;
  double window = 0.0;
  int trial = 0;
};

struct RevealSearch {
  std::optional<RevealingScheduling> found;
  int trials_run = 0;
  std::string diagnostic;
};

/// Uniform random scheduling used by the search: i.i.d. per step on the box
/// (DT) or piecewise-constant on `segments` equal intervals (CT).
Signal random_scheduling(const SchedulingRegion& region, TimeDomain domain,
                         double horizon, std::uint64_t seed, int trial,
                         int segments = 10);

/**
 * Draws `trials` random schedulings and returns the first (by trial index)
 * whose frozen LTV system is observable on [0, window]. Returns nothing, with
 * a diagnostic, when sys itself is not observable.
 */
RevealSearch find_revealing_scheduling(const LpvSsa& sys, int trials,
                                       double window, std::uint64_t seed,
                                       const LtvWindowOptions& opts = {});

}  // namespace lpvssa
