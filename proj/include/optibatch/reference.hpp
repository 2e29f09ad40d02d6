#pragma once

#include <string>

#include "optibatch/problem.hpp"

namespace optibatch {

enum class ReferenceMode { ClosedForm, LongRun };

struct ReferenceOptimum {
  double f_star = 0.0;
  double tolerance = 0.0;
  std::string warning;  // nonempty when ClosedForm fell back to LongRun
};

/// ClosedForm solves the least-squares normal equations and checks the
/// minimizer lies in the domain, falling back to LongRun with a warning
/// otherwise. LongRun takes the best value of three long constant-step
/// conversion runs of multiplier * horizon iterations; its tolerance is the
/// three-start spread plus the theoretical bound at that length.
ReferenceOptimum compute_reference_optimum(const ProblemSpec& problem, ReferenceMode mode,
                                           int horizon = 500, int multiplier = 50);

}  // namespace optibatch
