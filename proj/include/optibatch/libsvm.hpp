#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <string>
#include <vector>

#include "optibatch/problem.hpp"

namespace optibatch {

/// LIBSVM-format dataset: rows of (label, sparse features with 1-based,
/// strictly increasing indices). Labels are normalized to {-1, +1} at parse
/// time.
struct SparseDataset {
  struct Feature {
    int index = 0;  // 1-based, as in the file
    double value = 0.0;
    bool operator==(const Feature&) const = default;
  };
  struct Row {
    double label = 0.0;
    std::vector<Feature> features;
    bool operator==(const Row&) const = default;
  };

  std::vector<Row> rows;
  int dimension = 0;

  int sample_count() const { return static_cast<int>(rows.size()); }
  bool operator==(const SparseDataset&) const = default;

  Eigen::MatrixXd densify() const;
  Eigen::VectorXd labels() const;
};

/// Parses `<label> <idx>:<val> ...` lines; `#` starts a comment, blank lines
/// are skipped, LF and CRLF both accepted. Label alphabets {-1,+1} (kept),
/// {0,1} (mapped to {-1,+1}), {1,2} (mapped to {+1,-1}); anything else is an
/// error. If min_dimension exceeds the largest observed index, it wins.
SparseDataset parse_libsvm(std::istream& input, int min_dimension = 0);
SparseDataset parse_libsvm_file(const std::string& path, int min_dimension = 0);

std::string serialize_libsvm(const SparseDataset& dataset);

/// Regularized logistic regression over L2Ball(0, radius) on the dataset.
ProblemSpec to_problem(const SparseDataset& dataset, double mu, double radius);

}  // namespace optibatch
