#include "optibatch/kernels.hpp"

#include <cmath>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace optibatch::kernels {

namespace {

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

double sigmoid(double z) {
  // 1/(1+exp(-z)) without overflow on either tail.
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

struct Partial {
  double value = 0.0;
  Eigen::VectorXd gradient;
};

// Runs `row_term(i, value_acc, grad_acc)` over all rows, accumulating per
// thread on contiguous row blocks and combining partials in thread order so
// the rounding is identical from run to run for a fixed thread count.
template <typename RowTerm>
Evaluation accumulate_rows(Eigen::Index rows, Eigen::Index dim, Mode mode, RowTerm&& row_term) {
  Evaluation out;
  out.gradient = Eigen::VectorXd::Zero(dim);
#ifdef _OPENMP
  if (mode == Mode::Parallel) {
    const int threads = omp_get_max_threads();
    std::vector<Partial> partials(threads);
#pragma omp parallel num_threads(threads)
    {
      const int id = omp_get_thread_num();
      const int team = omp_get_num_threads();
      Partial& p = partials[id];
      p.gradient = Eigen::VectorXd::Zero(dim);
      const Eigen::Index chunk = (rows + team - 1) / team;
      const Eigen::Index begin = std::min<Eigen::Index>(rows, id * chunk);
      const Eigen::Index end = std::min<Eigen::Index>(rows, begin + chunk);
      for (Eigen::Index i = begin; i < end; ++i) row_term(i, p.value, p.gradient);
    }
    for (const Partial& p : partials) {
      if (p.gradient.size() == 0) continue;
      out.value += p.value;
      out.gradient += p.gradient;
    }
    return out;
  }
#else
  (void)mode;
#endif
  for (Eigen::Index i = 0; i < rows; ++i) row_term(i, out.value, out.gradient);
  return out;
}

}  // namespace

Evaluation least_squares(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                         const Eigen::VectorXd& x, Mode mode) {
  const double inv_n = 1.0 / static_cast<double>(A.rows());
  Evaluation out = accumulate_rows(A.rows(), A.cols(), mode,
                                   [&](Eigen::Index i, double& value, Eigen::VectorXd& grad) {
                                     const double r = A.row(i).dot(x) - b(i);
                                     value += 0.5 * r * r;
                                     grad += r * A.row(i).transpose();
                                   });
  out.value *= inv_n;
  out.gradient *= inv_n;
  return out;
}

Evaluation logistic(const Eigen::MatrixXd& A, const Eigen::VectorXd& y, double mu,
                    const Eigen::VectorXd& x, Mode mode) {
  const double inv_n = 1.0 / static_cast<double>(A.rows());
  Evaluation out = accumulate_rows(A.rows(), A.cols(), mode,
                                   [&](Eigen::Index i, double& value, Eigen::VectorXd& grad) {
                                     const double margin = y(i) * A.row(i).dot(x);
                                     value += softplus(-margin);
                                     grad += (-y(i) * sigmoid(-margin)) * A.row(i).transpose();
                                   });
  out.value = out.value * inv_n + mu * x.squaredNorm();
  out.gradient = out.gradient * inv_n + 2.0 * mu * x;
  return out;
}

Evaluation l1_residual(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                       const Eigen::VectorXd& x, Mode mode) {
  const double inv_n = 1.0 / static_cast<double>(A.rows());
  Evaluation out = accumulate_rows(A.rows(), A.cols(), mode,
                                   [&](Eigen::Index i, double& value, Eigen::VectorXd& grad) {
                                     const double r = A.row(i).dot(x) - b(i);
                                     value += std::abs(r);
                                     const double s = r > 0.0 ? 1.0 : (r < 0.0 ? -1.0 : 0.0);
                                     if (s != 0.0) grad += s * A.row(i).transpose();
                                   });
  out.value *= inv_n;
  out.gradient *= inv_n;
  return out;
}

Eigen::VectorXd normal_matvec(const Eigen::MatrixXd& A, const Eigen::VectorXd& v, Mode mode) {
  Evaluation out = accumulate_rows(A.rows(), A.cols(), mode,
                                   [&](Eigen::Index i, double&, Eigen::VectorXd& grad) {
                                     grad += A.row(i).dot(v) * A.row(i).transpose();
                                   });
  return out.gradient;
}

}  // namespace optibatch::kernels
