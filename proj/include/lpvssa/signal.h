#pragma once

#include <vector>

#include "lpvssa/lpv_system.h"

namespace lpvssa {

enum class Interpolation { kPiecewiseConstant, kPiecewiseLinear };

const char* to_string(Interpolation interp);

/**
 * Sampled trajectory of an input, scheduling, state or output signal.
 *
 * DT: values v(0..N), one per time step.
 * CT: mesh t_0 = 0 < t_1 < ... < t_K with values v_k and an interpolation
 * rule. Piecewise-constant signals are left-continuous: v_k is the value on
 * (t_k, t_{k+1}], and v_0 is also the value at t = 0. Queries past the last
 * node hold the last value only up to t_K (see covers()).
 */
class Signal {
 public:
  Signal() = default;

  /// Throws InputError on an empty list or mixed dimensions.
  static Signal Discrete(std::vector<Vector> values);
  /// Throws InputError unless times start at 0 and increase strictly.
  static Signal Continuous(std::vector<double> times, std::vector<Vector> values,
                           Interpolation interp =
                               Interpolation::kPiecewiseConstant);

  /// Constant DT signal with N + 1 samples.
  static Signal ConstantDiscrete(const Vector& value, int steps);
  /// Constant CT signal on [0, t_end].
  static Signal ConstantContinuous(const Vector& value, double t_end);

  [[nodiscard]] TimeDomain domain() const { return domain_; }
  [[nodiscard]] int dim() const {
    return values_.empty() ? 0 : static_cast<int>(values_[0].size());
  }
  [[nodiscard]] std::size_t size() const { return values_.size(); }
  [[nodiscard]] const std::vector<Vector>& values() const { return values_; }
  [[nodiscard]] const std::vector<double>& times() const { return times_; }
  [[nodiscard]] Interpolation interpolation() const { return interp_; }

  /// DT: last index. CT: last mesh time.
  [[nodiscard]] double horizon() const;

  /// DT sample at step t. Throws InputError when out of range.
  [[nodiscard]] const Vector& operator[](std::size_t t) const;

  /// CT value at time t (left-continuous for piecewise-constant).
  [[nodiscard]] Vector at(double t) const;
  /// CT right limit at t; differs from at() only at piecewise-constant
  /// breakpoints.
  [[nodiscard]] Vector right_limit(double t) const;

  /// DT: defined for steps 0..t_end. CT: mesh reaches t_end.
  [[nodiscard]] bool covers(double t_end) const;

 private:
  Signal(TimeDomain domain, std::vector<double> times, std::vector<Vector> values,
         Interpolation interp);

  Vector interpolate(double t, bool right) const;

  TimeDomain domain_ = TimeDomain::kDiscrete;
  std::vector<double> times_;
  std::vector<Vector> values_;
  Interpolation interp_ = Interpolation::kPiecewiseConstant;
};

/// Solution samples (x, y) on one shared time grid.
struct Trajectory {
  Signal x;
  Signal y;
};

}  // namespace lpvssa
