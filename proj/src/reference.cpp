#include "optibatch/reference.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>

#include "optibatch/optimizers.hpp"

namespace optibatch {

namespace {

Eigen::VectorXd long_run_start(const ProblemSpec& problem, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd x(problem.dim());
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = gauss(rng);
  const ProjectionDomain& domain = problem.domain();
  if (domain.bounded())
    return domain.project(domain.kind() == ProjectionDomain::Kind::L2Ball
                              ? Eigen::VectorXd(domain.center() + 0.5 * domain.radius() * x /
                                                                      std::max(x.norm(), 1e-300))
                              : x);
  return x;
}

ReferenceOptimum long_run(const ProblemSpec& problem, int horizon, int multiplier) {
  if (multiplier < 10) throw ConfigError("long-run reference multiplier must be at least 10");
  if (horizon < 2) throw ConfigError("long-run reference horizon must be at least 2");
  if (!problem.smooth())
    throw ConfigError("the long-run reference needs a smooth objective");
  const double L = problem.smoothness();
  const StepSizePolicy policy = StepSizePolicy::constant(1.0 / (4.0 * L));
  const int iters = horizon * multiplier;

  double best = std::numeric_limits<double>::infinity();
  double worst = -std::numeric_limits<double>::infinity();
  double span = 0.0;  // ||x_0 - output|| upper bound proxy for the rate term
  for (std::uint64_t s = 0; s < 3; ++s) {
    Eigen::VectorXd x0 = long_run_start(problem, 715 + s);
    RunTrace trace =
        run_optimistic_o2b(problem, WeightSchedule::linear(), policy, iters, x0, 0.0);
    const double value = problem.value(trace.output);
    best = std::min(best, value);
    worst = std::max(worst, value);
    span = std::max(span, (x0 - trace.output).norm());
  }
  // Accelerated-rate bound 2 L R^2 / A_T at the long horizon.
  const double A_T = 0.5 * static_cast<double>(iters) * (iters + 1);
  const double rate_bound = 2.0 * L * span * span / A_T;
  ReferenceOptimum ref;
  ref.f_star = best;
  ref.tolerance = (worst - best) + rate_bound + 1e-15 * std::max(1.0, std::abs(best));
  return ref;
}

}  // namespace

ReferenceOptimum compute_reference_optimum(const ProblemSpec& problem, ReferenceMode mode,
                                           int horizon, int multiplier) {
  if (mode == ReferenceMode::ClosedForm) {
    if (problem.kind() != ProblemSpec::Kind::LeastSquares) {
      ReferenceOptimum ref = long_run(problem, horizon, multiplier);
      ref.warning = "closed form is only available for least squares; used a long run";
      return ref;
    }
    const Eigen::MatrixXd& A = problem.data();
    Eigen::MatrixXd gram = A.transpose() * A;
    Eigen::VectorXd rhs = A.transpose() * problem.targets();
    Eigen::LDLT<Eigen::MatrixXd> solver(gram);
    Eigen::VectorXd minimizer = solver.solve(rhs);
    const bool solved = solver.info() == Eigen::Success && minimizer.allFinite() &&
                        (gram * minimizer - rhs).norm() <= 1e-8 * std::max(1.0, rhs.norm());
    if (!solved || problem.domain().distance(minimizer) > 1e-9) {
      ReferenceOptimum ref = long_run(problem, horizon, multiplier);
      ref.warning = solved ? "unconstrained minimizer leaves the domain; used a long run"
                           : "normal equations are numerically singular; used a long run";
      return ref;
    }
    ReferenceOptimum ref;
    ref.f_star = problem.value(minimizer);
    const double residual = (A * minimizer - problem.targets()).norm();
    ref.tolerance = 1e-12 * std::max(1.0, residual * residual / A.rows());
    return ref;
  }
  return long_run(problem, horizon, multiplier);
}

}  // namespace optibatch
