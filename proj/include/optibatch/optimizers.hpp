#pragma once

#include <Eigen/Core>
#include <functional>

#include "optibatch/averaging.hpp"
#include "optibatch/problem.hpp"
#include "optibatch/stepsize.hpp"
#include "optibatch/trace.hpp"
#include "optibatch/weights.hpp"

namespace optibatch {

/// Optimistic conversion stepper: one projected optimistic-OGD step per
/// round, x_{t+1} = project(x_t - eta_t * alpha_{t+1} * grad f(xtilde_{t+1})).
/// The two-gradient policy additionally queries grad f(xbar_t) each round.
/// A custom gradient source (e.g. a stochastic oracle) may replace the exact
/// one; the control flow is identical either way.
class OptimisticO2B {
 public:
  using GradientFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

  OptimisticO2B(const ProblemSpec& problem, WeightSchedule schedule, StepSizePolicy policy,
                Eigen::VectorXd x0);
  OptimisticO2B(const ProblemSpec& problem, WeightSchedule schedule, StepSizePolicy policy,
                Eigen::VectorXd x0, GradientFn gradient);

  /// Processes loop index round() (0-based, as the algorithm is stated).
  void step();

  int round() const { return averages_.round(); }
  const Eigen::VectorXd& iterate() const { return averages_.last(); }
  Eigen::VectorXd bar() const { return averages_.bar(); }
  /// Newest xtilde (computed during the latest step; x0 before any step).
  const Eigen::VectorXd& tilde() const { return tilde_; }
  std::uint64_t oracle_calls() const { return oracle_calls_; }
  const StepSizePolicy& policy() const { return policy_; }
  double last_eta() const { return last_eta_; }

 private:
  const ProblemSpec& problem_;
  WeightSchedule schedule_;
  StepSizePolicy policy_;
  GradientFn gradient_;
  AveragedIterates averages_;
  Eigen::VectorXd tilde_;
  Eigen::VectorXd tilde_grad_;  // grad f(xtilde_t), cached across rounds
  std::uint64_t oracle_calls_ = 0;
  double last_eta_ = 0.0;
  double first_boundary_ = 0.0;  // alpha_1 * ||g_1||, the empty-accumulator fallback
};

/// Runs T rounds and returns the schedule-appropriate output: xbar_T for
/// Constant/NagEquivalent/AdaGradTwoGrad + Linear, xtilde_T for
/// AdaGradOneGrad + LinearZeroLast(T). Other combinations are rejected.
RunTrace run_optimistic_o2b(const ProblemSpec& problem, const WeightSchedule& schedule,
                            StepSizePolicy policy, int T, const Eigen::VectorXd& x0,
                            double f_star);

/// Strongly convex conversion (geometric weights, kappa = L / lambda,
/// unconstrained only). `unscaled_momentum` switches to a bookkeeping variant
/// that drops the lambda factor from the momentum term, for comparison.
RunTrace run_strongly_convex_o2b(const ProblemSpec& problem, int T, const Eigen::VectorXd& x0,
                                 double f_star, bool unscaled_momentum = false);

/// Nesterov's method: y_t = project(z_{t-1} - grad f(z_{t-1}) / (4L)),
/// z_t = y_t + (t-1)/(t+2) * (y_t - y_{t-1}); output y_T.
RunTrace run_nag(const ProblemSpec& problem, int T, const Eigen::VectorXd& x0, double f_star);

/// Projected gradient descent with step 1/L.
RunTrace run_gd(const ProblemSpec& problem, int T, const Eigen::VectorXd& x0, double f_star);

/// Heavy-Ball: z_t = z_{t-1} - beta (z_{t-1} - z_{t-2}) - grad f(z_{t-1}) / L.
RunTrace run_heavy_ball(const ProblemSpec& problem, int T, const Eigen::VectorXd& x0,
                        double f_star, double beta = 0.9);

enum class StabilizedKind { UniXGrad, JRGS };

/// Per-round observer for the stabilized methods: receives the loop index t,
/// xbar_t, the step size eta_t, and the multi-step gradient g_t.
using StabilizedObserver =
    std::function<void(int, const Eigen::VectorXd&, double, const Eigen::VectorXd&)>;

/// One-step stabilized-optimistic baselines (unconstrained, alpha_t = t):
/// x_{t+1} = x_t - eta_t g_t with the UniXGrad or JRGS multi-step gradient.
/// Bootstrap: x_1 = x_0, xbar_0 = x_0, grad f(xbar_0) = grad f(x_0).
RunTrace run_stabilized(const ProblemSpec& problem, StabilizedKind kind, StepSizePolicy policy,
                        int T, const Eigen::VectorXd& x0, double f_star,
                        const StabilizedObserver& observer = nullptr);

/// One-gradient universal conversion driven by a stochastic oracle; same
/// control flow as run_optimistic_o2b with AdaGradOneGrad + LinearZeroLast.
RunTrace run_stochastic_o2b(StochasticOracle& oracle, int T, const Eigen::VectorXd& x0,
                            double f_star);

struct NagEquivalenceReport {
  double deviation_bar = 0.0;    // max_t ||y_t - xbar_t|| / (1 + ||y_t||)
  double deviation_tilde = 0.0;  // max_t ||z_t - xtilde_{t+1}|| / (1 + ||z_t||)
};

/// Runs the NAG-equivalent conversion and NAG side by side from the same x0.
NagEquivalenceReport check_nag_equivalence(const ProblemSpec& problem, int T,
                                           const Eigen::VectorXd& x0);

}  // namespace optibatch
