#pragma once

#include "lpvssa/lpv_system.h"
#include "lpvssa/signal.h"

namespace lpvssa {

/// What to do with scheduling samples outside the region.
enum class RegionPolicy { kReject, kWarn };

struct SimulationOptions {
  RegionPolicy region_policy = RegionPolicy::kReject;
  /// Absolute slack when testing p(t) against the region bounds.
  double region_slack = 1e-12;
  /// Cap on stored trajectory entries (samples x (n_x + n_y)).
  double max_entries = 1e7;
};

/**
 * Exact DT recursion over steps t = 0..steps:
 *   x(t+1) = A(p(t)) x(t) + B(p(t)) u(t),  y(t) = C(p(t)) x(t) + D(p(t)) u(t).
 * The returned trajectory holds x(0..steps) and y(0..steps), so u and p must
 * provide samples 0..steps.
 */
Trajectory simulate_dt(const LpvSsa& sys, const Vector& x0, const Signal& u,
                       const Signal& p, int steps,
                       const SimulationOptions& opts = {});

/**
 * Classical fixed-step RK4 for the time-varying linear ODE on [0, t_end].
 * The mesh uses ceil(t_end / step) equal steps; x and y are sampled on it
 * and returned as piecewise-linear CT signals. Matrices at each RK4 stage
 * are evaluated at the interpolated scheduling value; the first stage uses
 * right limits so that mesh-aligned breakpoints keep fourth-order accuracy.
 */
Trajectory simulate_ct(const LpvSsa& sys, const Vector& x0, const Signal& u,
                       const Signal& p, double t_end, double step,
                       const SimulationOptions& opts = {});

/// Number of RK4 steps simulate_ct uses for (t_end, step).
int ct_step_count(double t_end, double step, double max_steps = 1e9);

/// Output samples of the i/o function from x0 under (u, p). `horizon` is
/// the step count (DT) or end time (CT); `step` is ignored in DT.
Signal io_response(const LpvSsa& sys, const Vector& x0, const Signal& u,
                   const Signal& p, double horizon, double step = 1e-3,
                   const SimulationOptions& opts = {});

/**
 * Difference system: state [x; x_hat], block-diagonal A_i, stacked B_i,
 * output matrices [C_i, -C_hat_i] and feedthrough D_i - D_hat_i. Its i/o
 * function from [x0; x_hat0] is the difference of the two i/o functions.
 */
LpvSsa error_system(const LpvSsa& sys1, const LpvSsa& sys2);

/// Checks every scheduling sample used on [0, horizon] against the region.
/// Rejects (InputError) or warns on stderr per the policy.
void check_scheduling(const LpvSsa& sys, const Signal& p, double horizon,
                      const SimulationOptions& opts);

}  // namespace lpvssa
