#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <random>

#include "optibatch/domain.hpp"
#include "optibatch/errors.hpp"
#include "optibatch/kernels.hpp"

namespace optibatch {

using kernels::Evaluation;

/// A convex objective with its gradient oracle and the constants the
/// optimizers consume (smoothness L, strong convexity lambda, subgradient
/// bound G for the nonsmooth kind).
class ProblemSpec {
 public:
  enum class Kind { LeastSquares, Logistic, L1Residual };

  static ProblemSpec least_squares(Eigen::MatrixXd A, Eigen::VectorXd b, ProjectionDomain domain);
  static ProblemSpec logistic(Eigen::MatrixXd features, Eigen::VectorXd labels, double mu,
                              ProjectionDomain domain);
  static ProblemSpec l1_residual(Eigen::MatrixXd A, Eigen::VectorXd b, ProjectionDomain domain);

  Evaluation evaluate(const Eigen::VectorXd& x) const;
  double value(const Eigen::VectorXd& x) const { return evaluate(x).value; }
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const { return evaluate(x).gradient; }

  Kind kind() const { return kind_; }
  Eigen::Index dim() const { return data_.cols(); }
  Eigen::Index samples() const { return data_.rows(); }
  const Eigen::MatrixXd& data() const { return data_; }
  const Eigen::VectorXd& targets() const { return targets_; }
  double mu() const { return mu_; }
  const ProjectionDomain& domain() const { return domain_; }

  bool smooth() const { return kind_ != Kind::L1Residual; }
  double smoothness() const;         // L; throws for L1Residual
  double strong_convexity() const;   // lambda (0 when unknown/absent)
  double lipschitz_bound() const;    // G; defined for L1Residual

  kernels::Mode kernel_mode() const { return kernel_mode_; }
  void set_kernel_mode(kernels::Mode mode) { kernel_mode_ = mode; }
  ProblemSpec with_domain(ProjectionDomain domain) const;

 private:
  ProblemSpec(Kind kind, Eigen::MatrixXd data, Eigen::VectorXd targets, double mu,
              ProjectionDomain domain);
  void compute_constants();

  Kind kind_;
  Eigen::MatrixXd data_;
  Eigen::VectorXd targets_;
  double mu_ = 0.0;
  ProjectionDomain domain_;
  std::optional<double> smoothness_;
  double strong_convexity_ = 0.0;
  std::optional<double> lipschitz_bound_;
  kernels::Mode kernel_mode_ = kernels::Mode::Parallel;
};

/// D_f(x, y) = f(x) - f(y) - <grad f(y), x - y>.
double bregman_divergence(const ProblemSpec& problem, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& y);

/// Largest curvature of the data term plus the regularizer contribution,
/// via power iteration on A^T A (relative Rayleigh-quotient tolerance).
double estimate_smoothness(const ProblemSpec& problem, double tolerance = 1e-10);

/// Max over coordinates of the relative central-difference gradient error.
double finite_difference_check(const ProblemSpec& problem, const Eigen::VectorXd& x, double h);

/// Planted least squares: A with iid N(0, sigma_A^2) entries, x* in the ball
/// of the given radius, b = A x* + eps with eps iid N(0, noise_var), domain
/// L2Ball(0, radius). Deterministic per seed.
ProblemSpec generate_synthetic_ls(int n, int d, double sigma_A, double noise_var, double radius,
                                  std::uint64_t seed);

/// Planted minimizer of the most recent generate_synthetic_ls call is not
/// retained; this variant also returns it for harness radius defaults.
ProblemSpec generate_synthetic_ls(int n, int d, double sigma_A, double noise_var, double radius,
                                  std::uint64_t seed, Eigen::VectorXd* planted_out);

/// Gradient oracle with bounded, unbiased noise: returns grad f(x) + sigma *
/// r * s * u with u uniform on the unit sphere, s uniform on [0,1], r a
/// random sign. The perturbation norm never exceeds sigma; sigma = 0 returns
/// the exact gradient bit for bit.
class StochasticOracle {
 public:
  StochasticOracle(ProblemSpec base, double sigma, std::uint64_t seed)
      : base_(std::move(base)), sigma_(sigma), rng_(seed) {
    if (sigma < 0.0) throw ConfigError("noise level must be nonnegative");
  }

  Eigen::VectorXd gradient(const Eigen::VectorXd& x);
  const ProblemSpec& base() const { return base_; }
  double sigma() const { return sigma_; }
  std::uint64_t calls() const { return calls_; }

 private:
  ProblemSpec base_;
  double sigma_;
  std::mt19937_64 rng_;
  std::uint64_t calls_ = 0;
};

}  // namespace optibatch
