#pragma once

#include <cmath>

#include "optibatch/errors.hpp"

namespace optibatch {

/// Conversion weight sequences alpha_t and their partial sums A_t (A_0 = 0).
///
/// Linear          alpha_t = t
/// LinearZeroLast  alpha_t = t for t < T, alpha_T = 0 (requires T up front)
/// Unit            alpha_t = 1
/// GeometricSC     alpha_1 = 1, alpha_t = A_{t-1} / (4 sqrt(kappa)) for t >= 2,
///                 so A_t = A_{t-1} * (1 + 1/(4 sqrt(kappa)))
class WeightSchedule {
 public:
  enum class Kind { Linear, LinearZeroLast, Unit, GeometricSC };

  static WeightSchedule linear() { return WeightSchedule(Kind::Linear); }

  static WeightSchedule linear_zero_last(int total_rounds) {
    if (total_rounds < 1) throw ConfigError("LinearZeroLast requires total_rounds >= 1");
    WeightSchedule s(Kind::LinearZeroLast);
    s.total_rounds_ = total_rounds;
    return s;
  }

  static WeightSchedule unit() { return WeightSchedule(Kind::Unit); }

  static WeightSchedule geometric_sc(double kappa) {
    if (!(kappa > 0.0)) throw ConfigError("GeometricSC requires kappa > 0");
    WeightSchedule s(Kind::GeometricSC);
    s.kappa_ = kappa;
    return s;
  }

  double alpha(int t) const {
    if (t < 1) throw UsageError("weights are defined for rounds t >= 1");
    switch (kind_) {
      case Kind::Linear:
        return static_cast<double>(t);
      case Kind::LinearZeroLast:
        return t == total_rounds_ ? 0.0 : static_cast<double>(t);
      case Kind::Unit:
        return 1.0;
      case Kind::GeometricSC:
        return t == 1 ? 1.0 : partial_sum(t - 1) * ratio();
    }
    return 0.0;
  }

  /// A_t; closed forms keep the geometric case free of cancellation.
  double partial_sum(int t) const {
    if (t < 0) throw UsageError("partial sums are defined for t >= 0");
    if (t == 0) return 0.0;
    switch (kind_) {
      case Kind::Linear:
        return 0.5 * static_cast<double>(t) * (t + 1);
      case Kind::LinearZeroLast: {
        const int eff = t >= total_rounds_ ? total_rounds_ - 1 : t;
        return 0.5 * static_cast<double>(eff) * (eff + 1);
      }
      case Kind::Unit:
        return static_cast<double>(t);
      case Kind::GeometricSC:
        return std::pow(1.0 + ratio(), t - 1);
    }
    return 0.0;
  }

  Kind kind() const { return kind_; }
  int total_rounds() const { return total_rounds_; }
  double kappa() const { return kappa_; }

 private:
  explicit WeightSchedule(Kind kind) : kind_(kind) {}
  double ratio() const { return 1.0 / (4.0 * std::sqrt(kappa_)); }

  Kind kind_;
  int total_rounds_ = 0;
  double kappa_ = 0.0;
};

}  // namespace optibatch
