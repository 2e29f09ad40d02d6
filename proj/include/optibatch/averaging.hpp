#pragma once

#include <Eigen/Core>
#include <vector>

#include "optibatch/errors.hpp"
#include "optibatch/weights.hpp"

namespace optibatch {

/// Incrementally maintained weighted averages of the conversion:
///   xbar_t   = (sum_{s<t} alpha_s x_s + alpha_t x_t)     / A_t
///   xtilde_t = (sum_{s<t} alpha_s x_s + alpha_t x_{t-1}) / A_t
/// One O(d) accumulation per round; a from-scratch recomputation lives in the
/// identity checker below for testing.
class AveragedIterates {
 public:
  explicit AveragedIterates(Eigen::VectorXd x0)
      : sum_(Eigen::VectorXd::Zero(x0.size())), last_(x0), prev_(std::move(x0)) {}

  /// Feed x_t for round t; t must be round()+1.
  void advance(const WeightSchedule& schedule, const Eigen::VectorXd& new_point, int t) {
    if (t != round_ + 1)
      throw UsageError("advance expects round " + std::to_string(round_ + 1) + ", got " + std::to_string(t));
    if (new_point.size() != sum_.size()) throw ShapeError("iterate dimension changed mid-run");
    const double a = schedule.alpha(t);
    sum_ += a * new_point;
    weight_sum_ = schedule.partial_sum(t);
    prev_ = last_;
    last_ = new_point;
    round_ = t;
  }

  /// xtilde_{t+1} = (S_t + alpha_{t+1} x_t) / A_{t+1}.
  Eigen::VectorXd tilde_next(const WeightSchedule& schedule) const {
    const double a = schedule.alpha(round_ + 1);
    const double total = schedule.partial_sum(round_ + 1);
    return (sum_ + a * last_) / total;
  }

  /// xbar_t = S_t / A_t (convention xbar_0 = x_0).
  Eigen::VectorXd bar() const {
    if (round_ == 0) return last_;
    return sum_ / weight_sum_;
  }

  const Eigen::VectorXd& last() const { return last_; }
  const Eigen::VectorXd& previous() const { return prev_; }
  int round() const { return round_; }
  double weight_sum() const { return weight_sum_; }

 private:
  Eigen::VectorXd sum_;
  Eigen::VectorXd last_;
  Eigen::VectorXd prev_;
  double weight_sum_ = 0.0;
  int round_ = 0;
};

enum class ConversionIdentity { A1, A2, A3, A4 };

/// From-scratch xtilde_t over a stored history x_0..x_n (index = round).
Eigen::VectorXd tilde_from_history(const std::vector<Eigen::VectorXd>& history,
                                   const WeightSchedule& schedule, int t);

/// From-scratch xbar_t over a stored history (xbar_0 = x_0).
Eigen::VectorXd bar_from_history(const std::vector<Eigen::VectorXd>& history,
                                 const WeightSchedule& schedule, int t);

/// Residual norm ||LHS - RHS|| of the selected conversion identity at round t.
/// A1..A3 need t >= 1, A4 needs t >= 2; history must hold x_0..x_t.
double check_identity(ConversionIdentity which, const std::vector<Eigen::VectorXd>& history,
                      const WeightSchedule& schedule, int t);

}  // namespace optibatch
