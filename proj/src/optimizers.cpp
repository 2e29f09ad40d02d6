#include "optibatch/optimizers.hpp"

#include <chrono>
#include <cmath>

namespace optibatch {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void require_finite_gradient(const Eigen::VectorXd& g, int round) {
  if (!g.allFinite())
    throw NumericError("non-finite gradient at round " + std::to_string(round));
}

void require_rounds(int T) {
  if (T < 1) throw ConfigError("iteration count must be at least 1");
}

}  // namespace

OptimisticO2B::OptimisticO2B(const ProblemSpec& problem, WeightSchedule schedule,
                             StepSizePolicy policy, Eigen::VectorXd x0)
    : OptimisticO2B(problem, schedule, policy, std::move(x0), nullptr) {}

OptimisticO2B::OptimisticO2B(const ProblemSpec& problem, WeightSchedule schedule,
                             StepSizePolicy policy, Eigen::VectorXd x0, GradientFn gradient)
    : problem_(problem), schedule_(schedule), policy_(policy), gradient_(std::move(gradient)),
      averages_(problem.domain().project(x0)), tilde_(averages_.last()) {
  if (!gradient_) gradient_ = [&p = problem_](const Eigen::VectorXd& x) { return p.gradient(x); };
}

void OptimisticO2B::step() {
  const int t = averages_.round();

  if (policy_.kind() == StepSizePolicy::Kind::AdaGradTwoGrad) {
    Eigen::VectorXd bar_grad = gradient_(averages_.bar());
    ++oracle_calls_;
    require_finite_gradient(bar_grad, t);
    if (t >= 1) policy_.accumulate(schedule_.alpha(t), bar_grad - tilde_grad_);
  }

  tilde_ = averages_.tilde_next(schedule_);
  Eigen::VectorXd g = gradient_(tilde_);
  ++oracle_calls_;
  require_finite_gradient(g, t);

  if (policy_.kind() == StepSizePolicy::Kind::AdaGradOneGrad && t >= 1)
    policy_.accumulate(schedule_.alpha(t), g - tilde_grad_);
  tilde_grad_ = g;
  if (t == 0) first_boundary_ = schedule_.alpha(1) * g.norm();

  last_eta_ = policy_.eta(t + 1, first_boundary_);
  Eigen::VectorXd next = problem_.domain().project(
      averages_.last() - (last_eta_ * schedule_.alpha(t + 1)) * g);
  averages_.advance(schedule_, next, t + 1);
}

namespace {

RunTrace run_optimistic_core(const ProblemSpec& problem, const WeightSchedule& schedule,
                             StepSizePolicy policy, int T, const Eigen::VectorXd& x0,
                             double f_star, bool tilde_output,
                             OptimisticO2B::GradientFn gradient) {
  require_rounds(T);
  const auto start = Clock::now();
  OptimisticO2B stepper(problem, schedule, policy, x0, std::move(gradient));
  RunTrace trace;
  trace.points.reserve(T);
  for (int t = 0; t < T; ++t) {
    stepper.step();
    const Eigen::VectorXd& running = tilde_output ? stepper.tilde() : stepper.bar();
    trace.points.push_back(
        {t + 1, problem.value(running) - f_star, seconds_since(start), stepper.oracle_calls()});
  }
  trace.output = tilde_output ? stepper.tilde() : stepper.bar();
  trace.oracle_calls = stepper.oracle_calls();
  trace.total_time_s = seconds_since(start);
  return trace;
}

}  // namespace

RunTrace run_optimistic_o2b(const ProblemSpec& problem, const WeightSchedule& schedule,
                            StepSizePolicy policy, int T, const Eigen::VectorXd& x0,
                            double f_star) {
  require_rounds(T);
  const bool adaptive = policy.adaptive();
  if (adaptive && !problem.domain().bounded())
    throw ConfigError("adaptive step sizes need a bounded domain (the diameter is undefined)");

  bool tilde_output = false;
  switch (policy.kind()) {
    case StepSizePolicy::Kind::Constant:
    case StepSizePolicy::Kind::NagEquivalent:
    case StepSizePolicy::Kind::AdaGradTwoGrad:
      if (schedule.kind() != WeightSchedule::Kind::Linear)
        throw ConfigError("this step-size policy requires the linear weight schedule");
      break;
    case StepSizePolicy::Kind::AdaGradOneGrad:
      if (schedule.kind() != WeightSchedule::Kind::LinearZeroLast ||
          schedule.total_rounds() != T)
        throw ConfigError(
            "the one-gradient policy requires the linear schedule with a zero final weight "
            "matching the horizon");
      tilde_output = true;
      break;
  }
  return run_optimistic_core(problem, schedule, policy, T, x0, f_star, tilde_output, nullptr);
}

RunTrace run_stochastic_o2b(StochasticOracle& oracle, int T, const Eigen::VectorXd& x0,
                            double f_star) {
  require_rounds(T);
  const ProblemSpec& problem = oracle.base();
  if (!problem.domain().bounded())
    throw ConfigError("the stochastic conversion needs a bounded domain");
  WeightSchedule schedule = WeightSchedule::linear_zero_last(T);
  StepSizePolicy policy = StepSizePolicy::adagrad_one_grad(problem.domain().diameter());
  return run_optimistic_core(problem, schedule, policy, T, x0, f_star, true,
                             [&oracle](const Eigen::VectorXd& x) { return oracle.gradient(x); });
}

RunTrace run_strongly_convex_o2b(const ProblemSpec& problem, int T, const Eigen::VectorXd& x0,
                                 double f_star, bool unscaled_momentum) {
  require_rounds(T);
  if (problem.domain().bounded())
    throw ConfigError("the strongly convex conversion supports unconstrained domains only");
  if (!problem.smooth()) throw ConfigError("the strongly convex conversion needs a smooth objective");
  const double lambda = problem.strong_convexity();
  if (!(lambda > 0.0)) throw ConfigError("the strongly convex conversion needs lambda > 0");
  const double L = problem.smoothness();
  const WeightSchedule schedule = WeightSchedule::geometric_sc(L / lambda);

  const auto start = Clock::now();
  RunTrace trace;
  trace.points.reserve(T);

  // Bootstrap: x_1 = x_0, xtilde_1 = x_0, one gradient query.
  Eigen::VectorXd x = x0;
  AveragedIterates averages(x0);
  averages.advance(schedule, x, 1);
  Eigen::VectorXd fhat_grad = problem.gradient(x0) - lambda * x0;  // grad fhat(xtilde_1)
  std::uint64_t calls = 1;
  require_finite_gradient(fhat_grad, 0);

  const double a1 = schedule.alpha(1);
  Eigen::VectorXd M = unscaled_momentum ? Eigen::VectorXd(a1 * fhat_grad + a1 * x)
                                      : Eigen::VectorXd(a1 * fhat_grad + lambda * a1 * x);
  trace.points.push_back({1, problem.value(averages.bar()) - f_star, seconds_since(start), calls});

  for (int t = 1; t < T; ++t) {
    const Eigen::VectorXd tilde_next = averages.tilde_next(schedule);
    Eigen::VectorXd fhat_grad_next = problem.gradient(tilde_next) - lambda * tilde_next;
    ++calls;
    require_finite_gradient(fhat_grad_next, t);

    const double a_t = schedule.alpha(t);
    const double a_next = schedule.alpha(t + 1);
    const double A_t = schedule.partial_sum(t);

    Eigen::VectorXd M_next, update;
    if (unscaled_momentum) {
      M_next = a_next * fhat_grad_next + a_next * x;
      update = (fhat_grad + lambda * x) - M + M_next;
    } else {
      M_next = a_next * fhat_grad_next + lambda * a_next * x;
      update = (a_t * fhat_grad + lambda * a_t * x) - M + M_next;
    }
    x -= update / (lambda * A_t);
    averages.advance(schedule, x, t + 1);
    fhat_grad = fhat_grad_next;
    M = M_next;
    trace.points.push_back(
        {t + 1, problem.value(averages.bar()) - f_star, seconds_since(start), calls});
  }

  trace.output = averages.bar();
  trace.oracle_calls = calls;
  trace.total_time_s = seconds_since(start);
  return trace;
}

RunTrace run_nag(const ProblemSpec& problem, int T, const Eigen::VectorXd& x0, double f_star) {
  require_rounds(T);
  if (!problem.smooth()) throw ConfigError("NAG needs a smoothness constant");
  const double theta = 1.0 / (4.0 * problem.smoothness());

  const auto start = Clock::now();
  RunTrace trace;
  trace.points.reserve(T);
  Eigen::VectorXd y_prev = x0, z = x0;
  std::uint64_t calls = 0;
  for (int t = 1; t <= T; ++t) {
    Eigen::VectorXd g = problem.gradient(z);
    ++calls;
    require_finite_gradient(g, t);
    Eigen::VectorXd y = problem.domain().project(z - theta * g);
    const double beta = static_cast<double>(t - 1) / (t + 2);
    z = y + beta * (y - y_prev);
    y_prev = y;
    trace.points.push_back({t, problem.value(y) - f_star, seconds_since(start), calls});
  }
  trace.output = y_prev;
  trace.oracle_calls = calls;
  trace.total_time_s = seconds_since(start);
  return trace;
}

RunTrace run_gd(const ProblemSpec& problem, int T, const Eigen::VectorXd& x0, double f_star) {
  require_rounds(T);
  if (!problem.smooth()) throw ConfigError("gradient descent needs a smoothness constant");
  const double eta = 1.0 / problem.smoothness();

  const auto start = Clock::now();
  RunTrace trace;
  trace.points.reserve(T);
  Eigen::VectorXd x = problem.domain().project(x0);
  std::uint64_t calls = 0;
  for (int t = 1; t <= T; ++t) {
    Eigen::VectorXd g = problem.gradient(x);
    ++calls;
    require_finite_gradient(g, t);
    x = problem.domain().project(x - eta * g);
    trace.points.push_back({t, problem.value(x) - f_star, seconds_since(start), calls});
  }
  trace.output = x;
  trace.oracle_calls = calls;
  trace.total_time_s = seconds_since(start);
  return trace;
}

RunTrace run_heavy_ball(const ProblemSpec& problem, int T, const Eigen::VectorXd& x0,
                        double f_star, double beta) {
  require_rounds(T);
  if (!problem.smooth()) throw ConfigError("Heavy-Ball needs a smoothness constant");
  if (beta < 0.0 || beta >= 1.0) throw ConfigError("momentum must lie in [0, 1)");
  const double eta = 1.0 / problem.smoothness();

  const auto start = Clock::now();
  RunTrace trace;
  trace.points.reserve(T);
  Eigen::VectorXd z = x0, z_prev = x0;
  std::uint64_t calls = 0;
  for (int t = 1; t <= T; ++t) {
    Eigen::VectorXd g = problem.gradient(z);
    ++calls;
    require_finite_gradient(g, t);
    Eigen::VectorXd next = z - beta * (z - z_prev) - eta * g;
    z_prev = z;
    z = next;
    trace.points.push_back({t, problem.value(z) - f_star, seconds_since(start), calls});
  }
  trace.output = z;
  trace.oracle_calls = calls;
  trace.total_time_s = seconds_since(start);
  return trace;
}

RunTrace run_stabilized(const ProblemSpec& problem, StabilizedKind kind, StepSizePolicy policy,
                        int T, const Eigen::VectorXd& x0, double f_star,
                        const StabilizedObserver& observer) {
  require_rounds(T);
  if (problem.domain().bounded())
    throw ConfigError("the one-step stabilized forms support unconstrained domains only");
  if (policy.adaptive() &&
      (kind != StabilizedKind::UniXGrad || policy.kind() != StepSizePolicy::Kind::AdaGradTwoGrad))
    throw ConfigError("adaptive stabilized runs support AdaGradTwoGrad with UniXGrad only");

  const WeightSchedule schedule = WeightSchedule::linear();
  const auto start = Clock::now();
  RunTrace trace;
  trace.points.reserve(T);

  // Bootstrap: x_1 = x_0, so xbar_1 = xtilde_1 = x_0.
  Eigen::VectorXd x = x0;
  AveragedIterates averages(x0);
  averages.advance(schedule, x, 1);
  std::uint64_t calls = 0;
  Eigen::VectorXd tilde_grad;  // grad f(xtilde_t), UniXGrad cache
  Eigen::VectorXd bar_grad;    // grad f(xbar_{t-1}), JRGS cache
  double boundary = 0.0;

  for (int t = 1; t <= T; ++t) {
    const double a_t = schedule.alpha(t);
    const double a_next = schedule.alpha(t + 1);
    const Eigen::VectorXd bar_t = averages.bar();
    Eigen::VectorXd g;

    if (kind == StabilizedKind::UniXGrad) {
      Eigen::VectorXd bar_t_grad;
      if (t == 1) {
        tilde_grad = problem.gradient(x0);  // xtilde_1 = x_0
        ++calls;
        bar_t_grad = tilde_grad;  // xbar_1 = xtilde_1, reuse the cached value
        boundary = schedule.alpha(1) * tilde_grad.norm();
      } else {
        bar_t_grad = problem.gradient(bar_t);
        ++calls;
      }
      Eigen::VectorXd tilde_next_grad = problem.gradient(averages.tilde_next(schedule));
      ++calls;
      require_finite_gradient(tilde_next_grad, t);
      policy.accumulate(a_t, bar_t_grad - tilde_grad);
      g = -a_t * tilde_grad + a_t * bar_t_grad + a_next * tilde_next_grad;
      tilde_grad = tilde_next_grad;
    } else {
      if (t == 1) {
        bar_grad = problem.gradient(x0);  // the xbar_0 bootstrap call
        ++calls;
      }
      Eigen::VectorXd bar_t_grad = problem.gradient(bar_t);
      ++calls;
      require_finite_gradient(bar_t_grad, t);
      g = -a_t * bar_grad + (a_t + a_next) * bar_t_grad;
      bar_grad = bar_t_grad;
    }

    const double eta = policy.eta(t, boundary);
    if (observer) observer(t, bar_t, eta, g);
    x -= eta * g;
    if (!x.allFinite()) throw NumericError("non-finite iterate at round " + std::to_string(t));
    averages.advance(schedule, x, t + 1);
    trace.points.push_back(
        {t, problem.value(averages.bar()) - f_star, seconds_since(start), calls});
  }

  trace.output = averages.bar();
  trace.oracle_calls = calls;
  trace.total_time_s = seconds_since(start);
  return trace;
}

NagEquivalenceReport check_nag_equivalence(const ProblemSpec& problem, int T,
                                           const Eigen::VectorXd& x0) {
  require_rounds(T);
  if (problem.domain().bounded())
    throw ConfigError("the NAG equivalence holds for unconstrained domains only");
  if (!problem.smooth()) throw ConfigError("the NAG equivalence needs a smoothness constant");
  const double L = problem.smoothness();
  const double theta = 1.0 / (4.0 * L);

  OptimisticO2B converted(problem, WeightSchedule::linear(), StepSizePolicy::nag_equivalent(L),
                          x0);
  NagEquivalenceReport report;
  Eigen::VectorXd y_prev = x0, z = x0;
  for (int t = 0; t < T; ++t) {
    converted.step();
    // z_t was formed before this round's gradient step; it should match the
    // xtilde_{t+1} the conversion just queried.
    report.deviation_tilde = std::max(
        report.deviation_tilde, (z - converted.tilde()).norm() / (1.0 + z.norm()));

    Eigen::VectorXd y = z - theta * problem.gradient(z);
    const double beta = static_cast<double>(t) / (t + 3);  // (s-1)/(s+2) at s = t+1
    z = y + beta * (y - y_prev);
    y_prev = y;
    report.deviation_bar =
        std::max(report.deviation_bar, (y - converted.bar()).norm() / (1.0 + y.norm()));
  }
  return report;
}

}  // namespace optibatch
