#pragma once

#include <Eigen/Core>
#include <cmath>
#include <limits>

#include "optibatch/errors.hpp"

namespace optibatch {

/// Step-size rules for the conversion update x_{t+1} = x_t - eta * alpha * g.
///
/// Constant        eta_t = eta
/// NagEquivalent   eta for producing x_k (k 1-based) = (k+1) / (8 L k)
/// AdaGradTwoGrad  eta_t = D / sqrt(V_t), delta_s = grad f(xbar_s) - grad f(xtilde_s)
/// AdaGradOneGrad  eta_t = D / sqrt(V_t), delta_s = grad f(xtilde_{s+1}) - grad f(xtilde_s)
///
/// with V_t = sum_{s<=t} alpha_s^2 ||delta_s||^2. The empty accumulator
/// (V = 0) falls back to D / (alpha_1 ||g_1||), a null step if g_1 = 0.
/// Adaptive values are clamped to be nonincreasing across the run.
class StepSizePolicy {
 public:
  enum class Kind { Constant, NagEquivalent, AdaGradTwoGrad, AdaGradOneGrad };

  static StepSizePolicy constant(double eta) {
    if (!(eta > 0.0)) throw ConfigError("constant step size must be positive");
    StepSizePolicy p(Kind::Constant);
    p.eta_ = eta;
    return p;
  }

  static StepSizePolicy nag_equivalent(double smoothness) {
    if (!(smoothness > 0.0)) throw ConfigError("NAG-equivalent step size needs a positive L");
    StepSizePolicy p(Kind::NagEquivalent);
    p.smoothness_ = smoothness;
    return p;
  }

  static StepSizePolicy adagrad_two_grad(double diameter) {
    if (!(diameter > 0.0) || !std::isfinite(diameter))
      throw ConfigError("adaptive step size needs a finite positive diameter");
    StepSizePolicy p(Kind::AdaGradTwoGrad);
    p.diameter_ = diameter;
    return p;
  }

  static StepSizePolicy adagrad_one_grad(double diameter) {
    if (!(diameter > 0.0) || !std::isfinite(diameter))
      throw ConfigError("adaptive step size needs a finite positive diameter");
    StepSizePolicy p(Kind::AdaGradOneGrad);
    p.diameter_ = diameter;
    return p;
  }

  bool adaptive() const {
    return kind_ == Kind::AdaGradTwoGrad || kind_ == Kind::AdaGradOneGrad;
  }

  void accumulate(double alpha, const Eigen::VectorXd& delta) {
    if (!adaptive()) return;
    accumulator_ += alpha * alpha * delta.squaredNorm();
  }

  /// Step size used to produce x_{produced} (1-based). `boundary` is
  /// alpha_1 * ||g_1||, consulted only while the accumulator is empty.
  double eta(int produced, double boundary) {
    switch (kind_) {
      case Kind::Constant:
        return eta_;
      case Kind::NagEquivalent:
        if (produced < 1) throw UsageError("NAG-equivalent step size is defined from round 1");
        return static_cast<double>(produced + 1) / (8.0 * smoothness_ * produced);
      case Kind::AdaGradTwoGrad:
      case Kind::AdaGradOneGrad: {
        double raw;
        if (accumulator_ > 0.0)
          raw = diameter_ / std::sqrt(accumulator_);
        else if (boundary > 0.0)
          raw = diameter_ / boundary;
        else
          return 0.0;  // stationary first gradient: null step
        last_eta_ = std::min(last_eta_, raw);
        return last_eta_;
      }
    }
    throw UsageError("unknown step-size kind");
  }

  Kind kind() const { return kind_; }
  double accumulator() const { return accumulator_; }
  double diameter() const { return diameter_; }

 private:
  explicit StepSizePolicy(Kind kind) : kind_(kind) {}

  Kind kind_;
  double eta_ = 0.0;
  double smoothness_ = 0.0;
  double diameter_ = 0.0;
  double accumulator_ = 0.0;
  double last_eta_ = std::numeric_limits<double>::infinity();
};

}  // namespace optibatch
