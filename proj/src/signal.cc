#include "lpvssa/signal.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

namespace lpvssa {

namespace {

// Relative slack for comparing times produced by floating-point meshes.
constexpr double kTimeSlack = 1e-9;

void require_same_dims(const std::vector<Vector>& values) {
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (values[k].size() != values[0].size()) {
      std::ostringstream os;
      os << "signal sample " << k << " has dimension " << values[k].size()
         << ", expected " << values[0].size();
      throw InputError(os.str());
    }
  }
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!values[k].allFinite()) {
      throw InputError("signal sample " + std::to_string(k) +
                       " has non-finite entries");
    }
  }
}

}  // namespace

const char* to_string(Interpolation interp) {
  return interp == Interpolation::kPiecewiseConstant ? "piecewise-constant"
                                                     : "piecewise-linear";
}

Signal::Signal(TimeDomain domain, std::vector<double> times,
               std::vector<Vector> values, Interpolation interp)
    : domain_(domain),
      times_(std::move(times)),
      values_(std::move(values)),
      interp_(interp) {}

Signal Signal::Discrete(std::vector<Vector> values) {
  if (values.empty()) throw InputError("DT signal needs at least one sample");
  require_same_dims(values);
  return Signal(TimeDomain::kDiscrete, {}, std::move(values),
                Interpolation::kPiecewiseConstant);
}

Signal Signal::Continuous(std::vector<double> times, std::vector<Vector> values,
                          Interpolation interp) {
  if (values.empty()) throw InputError("CT signal needs at least one sample");
  if (times.size() != values.size()) {
    std::ostringstream os;
    os << "CT signal has " << times.size() << " times but " << values.size()
       << " values";
    throw InputError(os.str());
  }
  if (times[0] != 0.0) throw InputError("CT signal mesh must start at t = 0");
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (!(times[k] > times[k - 1]) || !std::isfinite(times[k])) {
      throw InputError("CT signal mesh must be strictly increasing (index " +
                       std::to_string(k) + ")");
    }
  }
  require_same_dims(values);
  return Signal(TimeDomain::kContinuous, std::move(times), std::move(values),
                interp);
}

Signal Signal::ConstantDiscrete(const Vector& value, int steps) {
  return Discrete(std::vector<Vector>(std::max(steps, 0) + 1, value));
}

Signal Signal::ConstantContinuous(const Vector& value, double t_end) {
  return Continuous({0.0, t_end}, {value, value},
                    Interpolation::kPiecewiseConstant);
}

double Signal::horizon() const {
  if (domain_ == TimeDomain::kDiscrete) {
    return static_cast<double>(values_.size()) - 1.0;
  }
  return times_.empty() ? 0.0 : times_.back();
}

const Vector& Signal::operator[](std::size_t t) const {
  if (t >= values_.size()) {
    throw InputError("signal index " + std::to_string(t) +
                     " beyond last sample " +
                     std::to_string(values_.size() - 1));
  }
  return values_[t];
}

bool Signal::covers(double t_end) const {
  if (values_.empty()) return false;
  if (domain_ == TimeDomain::kDiscrete) {
    return t_end <= static_cast<double>(values_.size()) - 1.0;
  }
  return t_end <= times_.back() * (1.0 + kTimeSlack) + kTimeSlack;
}

Vector Signal::at(double t) const { return interpolate(t, false); }

Vector Signal::right_limit(double t) const { return interpolate(t, true); }

Vector Signal::interpolate(double t, bool right) const {
  if (domain_ == TimeDomain::kDiscrete) {
    const auto k = static_cast<std::size_t>(std::max(0.0, std::floor(t)));
    return values_.at(std::min(k, values_.size() - 1));
  }
  if (times_.size() == 1 || t <= 0.0) return values_.front();
  if (t > times_.back() || (right && t == times_.back())) return values_.back();
  if (t == times_.back()) {
    return interp_ == Interpolation::kPiecewiseConstant
               ? values_[values_.size() - 2]
               : values_.back();
  }
  // First node strictly greater than t (right) or >= t (left).
  const auto it = right ? std::upper_bound(times_.begin(), times_.end(), t)
                        : std::lower_bound(times_.begin(), times_.end(), t);
  const auto hi = static_cast<std::size_t>(it - times_.begin());
  const std::size_t lo = hi - 1;
  if (interp_ == Interpolation::kPiecewiseConstant) return values_[lo];
  const double w = (t - times_[lo]) / (times_[hi] - times_[lo]);
  return (1.0 - w) * values_[lo] + w * values_[hi];
}

}  // namespace lpvssa
