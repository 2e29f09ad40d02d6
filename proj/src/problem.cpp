#include "optibatch/problem.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace optibatch {

ProblemSpec::ProblemSpec(Kind kind, Eigen::MatrixXd data, Eigen::VectorXd targets, double mu,
                         ProjectionDomain domain)
    : kind_(kind), data_(std::move(data)), targets_(std::move(targets)), mu_(mu),
      domain_(std::move(domain)) {
  if (data_.rows() < 1 || data_.cols() < 1) throw InputError("problem data must be nonempty");
  if (targets_.size() != data_.rows())
    throw ShapeError("target vector length does not match the number of rows");
  if (!data_.allFinite() || !targets_.allFinite())
    throw InputError("problem data must be finite");
  compute_constants();
}

ProblemSpec ProblemSpec::least_squares(Eigen::MatrixXd A, Eigen::VectorXd b,
                                       ProjectionDomain domain) {
  return ProblemSpec(Kind::LeastSquares, std::move(A), std::move(b), 0.0, std::move(domain));
}

ProblemSpec ProblemSpec::logistic(Eigen::MatrixXd features, Eigen::VectorXd labels, double mu,
                                  ProjectionDomain domain) {
  if (mu < 0.0) throw InputError("regularization must be nonnegative");
  for (Eigen::Index i = 0; i < labels.size(); ++i)
    if (labels(i) != 1.0 && labels(i) != -1.0)
      throw InputError("logistic labels must be -1 or +1");
  return ProblemSpec(Kind::Logistic, std::move(features), std::move(labels), mu,
                     std::move(domain));
}

ProblemSpec ProblemSpec::l1_residual(Eigen::MatrixXd A, Eigen::VectorXd b,
                                     ProjectionDomain domain) {
  return ProblemSpec(Kind::L1Residual, std::move(A), std::move(b), 0.0, std::move(domain));
}

void ProblemSpec::compute_constants() {
  switch (kind_) {
    case Kind::LeastSquares:
      break;  // L and lambda filled lazily; see smoothness()/strong_convexity()
    case Kind::Logistic:
      strong_convexity_ = 2.0 * mu_;
      break;
    case Kind::L1Residual: {
      double g = 0.0;
      for (Eigen::Index i = 0; i < data_.rows(); ++i) g += data_.row(i).norm();
      lipschitz_bound_ = g / static_cast<double>(data_.rows());
      break;
    }
  }
}

Evaluation ProblemSpec::evaluate(const Eigen::VectorXd& x) const {
  if (!x.allFinite()) throw InputError("query point must be finite");
  if (x.size() != data_.cols()) throw ShapeError("query point dimension does not match problem");
  switch (kind_) {
    case Kind::LeastSquares:
      return kernels::least_squares(data_, targets_, x, kernel_mode_);
    case Kind::Logistic:
      return kernels::logistic(data_, targets_, mu_, x, kernel_mode_);
    case Kind::L1Residual:
      return kernels::l1_residual(data_, targets_, x, kernel_mode_);
  }
  throw UsageError("unknown problem kind");
}

double ProblemSpec::smoothness() const {
  if (!smooth()) throw UsageError("the l1 residual objective has no smoothness constant");
  if (!smoothness_) {
    // Cached on first use through the const interface.
    auto* self = const_cast<ProblemSpec*>(this);
    self->smoothness_ = estimate_smoothness(*this);
    if (kind_ == Kind::LeastSquares) {
      // lambda = sigma_min(A)^2 / N via the smallest eigenvalue of A^T A.
      Eigen::MatrixXd gram = data_.transpose() * data_;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
      self->strong_convexity_ =
          std::max(0.0, eig.eigenvalues().minCoeff()) / static_cast<double>(data_.rows());
    }
  }
  return *smoothness_;
}

double ProblemSpec::strong_convexity() const {
  if (kind_ == Kind::LeastSquares) smoothness();  // forces the eigen pass
  return strong_convexity_;
}

double ProblemSpec::lipschitz_bound() const {
  if (!lipschitz_bound_) throw UsageError("no subgradient bound for this objective kind");
  return *lipschitz_bound_;
}

ProblemSpec ProblemSpec::with_domain(ProjectionDomain domain) const {
  ProblemSpec copy = *this;
  copy.domain_ = std::move(domain);
  return copy;
}

double bregman_divergence(const ProblemSpec& problem, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& y) {
  const Evaluation at_x = problem.evaluate(x);
  const Evaluation at_y = problem.evaluate(y);
  return at_x.value - at_y.value - at_y.gradient.dot(x - y);
}

double estimate_smoothness(const ProblemSpec& problem, double tolerance) {
  if (!problem.smooth())
    throw UsageError("smoothness estimation applies to smooth objectives only");
  const Eigen::MatrixXd& A = problem.data();
  if (A.isZero(0.0)) throw NumericError("data matrix is zero; the data term has no curvature");

  std::mt19937_64 rng(20240517ULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd v(A.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = gauss(rng);
  v.normalize();

  double rayleigh = 0.0;
  for (int iter = 0; iter < 10000; ++iter) {
    Eigen::VectorXd w = kernels::normal_matvec(A, v, problem.kernel_mode());
    const double next = v.dot(w);
    const double norm = w.norm();
    if (norm == 0.0) throw NumericError("power iteration collapsed to the null space");
    v = w / norm;
    if (iter > 0 && std::abs(next - rayleigh) <= tolerance * std::abs(next)) {
      rayleigh = next;
      break;
    }
    rayleigh = next;
  }

  const double n = static_cast<double>(A.rows());
  if (problem.kind() == ProblemSpec::Kind::LeastSquares) return rayleigh / n;
  return rayleigh / (4.0 * n) + 2.0 * problem.mu();
}

double finite_difference_check(const ProblemSpec& problem, const Eigen::VectorXd& x, double h) {
  if (!(h > 0.0)) throw InputError("finite-difference step must be positive");
  if (problem.kind() == ProblemSpec::Kind::L1Residual) {
    const Eigen::VectorXd residual = problem.data() * x - problem.targets();
    if ((residual.array().abs() < 10.0 * h).any())
      throw InputError("query point is too close to an l1 kink for finite differences");
  }
  const Eigen::VectorXd grad = problem.gradient(x);
  double worst = 0.0;
  Eigen::VectorXd probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe(i) = x(i) + h;
    const double plus = problem.value(probe);
    probe(i) = x(i) - h;
    const double minus = problem.value(probe);
    probe(i) = x(i);
    const double approx = (plus - minus) / (2.0 * h);
    worst = std::max(worst, std::abs(approx - grad(i)) / (1.0 + std::abs(grad(i))));
  }
  return worst;
}

ProblemSpec generate_synthetic_ls(int n, int d, double sigma_A, double noise_var, double radius,
                                  std::uint64_t seed) {
  return generate_synthetic_ls(n, d, sigma_A, noise_var, radius, seed, nullptr);
}

ProblemSpec generate_synthetic_ls(int n, int d, double sigma_A, double noise_var, double radius,
                                  std::uint64_t seed, Eigen::VectorXd* planted_out) {
  if (n < 1 || d < 1) throw InputError("synthetic dimensions must be positive");
  if (!(sigma_A > 0.0) || !(radius > 0.0))
    throw InputError("sigma_A and radius must be positive");
  if (noise_var < 0.0) throw InputError("noise variance must be nonnegative");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  Eigen::MatrixXd A(n, d);
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j) A(i, j) = sigma_A * gauss(rng);

  // x* uniform in direction, radius scaled so it lands strictly inside.
  Eigen::VectorXd star(d);
  for (Eigen::Index j = 0; j < star.size(); ++j) star(j) = gauss(rng);
  star.normalize();
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  star *= radius * 0.9 * std::pow(unif(rng), 1.0 / static_cast<double>(d));

  const double noise_sd = std::sqrt(noise_var);
  Eigen::VectorXd b = A * star;
  for (Eigen::Index i = 0; i < b.size(); ++i) b(i) += noise_sd * gauss(rng);

  if (planted_out) *planted_out = star;
  return ProblemSpec::least_squares(
      std::move(A), std::move(b),
      ProjectionDomain::l2_ball(Eigen::VectorXd::Zero(d), radius));
}

Eigen::VectorXd StochasticOracle::gradient(const Eigen::VectorXd& x) {
  ++calls_;
  Eigen::VectorXd g = base_.gradient(x);
  if (sigma_ == 0.0) return g;
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd u(g.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) u(i) = gauss(rng_);
  const double norm = u.norm();
  if (norm == 0.0) return g;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double scale = unif(rng_);
  const double sign = unif(rng_) < 0.5 ? -1.0 : 1.0;
  return g + (sigma_ * scale * sign / norm) * u;
}

}  // namespace optibatch
