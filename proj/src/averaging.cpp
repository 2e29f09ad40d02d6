#include "optibatch/averaging.hpp"

namespace optibatch {

namespace {

void require_history(const std::vector<Eigen::VectorXd>& history, int t) {
  if (t < 0) throw UsageError("round index must be nonnegative");
  if (static_cast<int>(history.size()) < t + 1)
    throw UsageError("history must hold x_0..x_t");
}

}  // namespace

Eigen::VectorXd tilde_from_history(const std::vector<Eigen::VectorXd>& history,
                                   const WeightSchedule& schedule, int t) {
  require_history(history, t);
  if (t < 1) throw UsageError("xtilde_t is defined for t >= 1");
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(history[0].size());
  for (int s = 1; s < t; ++s) sum += schedule.alpha(s) * history[s];
  sum += schedule.alpha(t) * history[t - 1];
  return sum / schedule.partial_sum(t);
}

Eigen::VectorXd bar_from_history(const std::vector<Eigen::VectorXd>& history,
                                 const WeightSchedule& schedule, int t) {
  require_history(history, t);
  if (t == 0) return history[0];
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(history[0].size());
  for (int s = 1; s <= t; ++s) sum += schedule.alpha(s) * history[s];
  return sum / schedule.partial_sum(t);
}

double check_identity(ConversionIdentity which, const std::vector<Eigen::VectorXd>& history,
                      const WeightSchedule& schedule, int t) {
  const int min_round = which == ConversionIdentity::A4 ? 2 : 1;
  if (t < min_round)
    throw UsageError("identity requires t >= " + std::to_string(min_round));
  require_history(history, t);

  const double a_t = schedule.alpha(t);
  const double A_t = schedule.partial_sum(t);
  const double A_prev = schedule.partial_sum(t - 1);

  switch (which) {
    case ConversionIdentity::A1: {
      const Eigen::VectorXd bar_t = bar_from_history(history, schedule, t);
      const Eigen::VectorXd bar_prev = bar_from_history(history, schedule, t - 1);
      return (A_prev * (bar_prev - bar_t) - a_t * (bar_t - history[t])).norm();
    }
    case ConversionIdentity::A2: {
      const Eigen::VectorXd bar_t = bar_from_history(history, schedule, t);
      const Eigen::VectorXd tilde_t = tilde_from_history(history, schedule, t);
      return (A_t * (tilde_t - bar_t) - a_t * (history[t - 1] - history[t])).norm();
    }
    case ConversionIdentity::A3: {
      const Eigen::VectorXd bar_prev = bar_from_history(history, schedule, t - 1);
      const Eigen::VectorXd tilde_t = tilde_from_history(history, schedule, t);
      return (A_prev * (bar_prev - tilde_t) - a_t * (tilde_t - history[t - 1])).norm();
    }
    case ConversionIdentity::A4: {
      const double a_prev = schedule.alpha(t - 1);
      const Eigen::VectorXd tilde_t = tilde_from_history(history, schedule, t);
      const Eigen::VectorXd tilde_prev = tilde_from_history(history, schedule, t - 1);
      return (A_prev * (tilde_t - tilde_prev) - a_t * (history[t - 1] - tilde_t) -
              a_prev * (history[t - 1] - history[t - 2]))
          .norm();
    }
  }
  throw UsageError("unknown identity");
}

}  // namespace optibatch
