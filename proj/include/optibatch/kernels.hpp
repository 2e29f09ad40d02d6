#pragma once

#include <Eigen/Core>

namespace optibatch::kernels {

enum class Mode { Serial, Parallel };

struct Evaluation {
  double value = 0.0;
  Eigen::VectorXd gradient;
};

/// f(x) = (1/2N) ||Ax - b||^2, grad = (1/N) A^T (Ax - b).
Evaluation least_squares(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                         const Eigen::VectorXd& x, Mode mode);

/// f(x) = (1/N) sum log(1 + exp(-y_i a_i^T x)) + mu ||x||^2.
/// Stable softplus: log(1+exp(z)) = max(z,0) + log1p(exp(-|z|)).
Evaluation logistic(const Eigen::MatrixXd& A, const Eigen::VectorXd& y, double mu,
                    const Eigen::VectorXd& x, Mode mode);

/// f(x) = (1/N) ||Ax - b||_1, subgradient (1/N) A^T sign(Ax - b), sign(0) = 0.
Evaluation l1_residual(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                       const Eigen::VectorXd& x, Mode mode);

/// v -> A^T (A v), the power-iteration matvec; never materializes A^T A.
Eigen::VectorXd normal_matvec(const Eigen::MatrixXd& A, const Eigen::VectorXd& v, Mode mode);

}  // namespace optibatch::kernels
