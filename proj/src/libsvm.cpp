#include "optibatch/libsvm.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

namespace optibatch {

namespace {

// Parses a double starting at `pos`; advances `pos` past it.
double parse_number(const std::string& line, std::size_t& pos, int line_no) {
  const char* begin = line.c_str() + pos;
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || !std::isfinite(v))
    throw ParseError("expected a number", line_no, static_cast<int>(pos) + 1);
  pos += static_cast<std::size_t>(end - begin);
  return v;
}

int parse_index(const std::string& line, std::size_t& pos, int line_no) {
  const std::size_t start = pos;
  long idx = 0;
  while (pos < line.size() && line[pos] >= '0' && line[pos] <= '9') {
    idx = idx * 10 + (line[pos] - '0');
    ++pos;
    if (idx > 1'000'000'000) throw ParseError("feature index out of range", line_no,
                                              static_cast<int>(start) + 1);
  }
  if (pos == start) throw ParseError("expected a feature index", line_no,
                                     static_cast<int>(start) + 1);
  return static_cast<int>(idx);
}

void skip_spaces(const std::string& line, std::size_t& pos) {
  while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
}

std::string alphabet_string(const std::set<double>& labels) {
  std::ostringstream out;
  out << "{";
  bool first = true;
  for (double v : labels) {
    if (!first) out << ", ";
    out << v;
    first = false;
  }
  out << "}";
  return out.str();
}

}  // namespace

Eigen::MatrixXd SparseDataset::densify() const {
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(sample_count(), dimension);
  for (int i = 0; i < sample_count(); ++i)
    for (const Feature& f : rows[i].features) dense(i, f.index - 1) = f.value;
  return dense;
}

Eigen::VectorXd SparseDataset::labels() const {
  Eigen::VectorXd y(sample_count());
  for (int i = 0; i < sample_count(); ++i) y(i) = rows[i].label;
  return y;
}

SparseDataset parse_libsvm(std::istream& input, int min_dimension) {
  SparseDataset dataset;
  std::set<double> observed_labels;
  int max_index = 0;
  std::string line;
  int line_no = 0;

  while (std::getline(input, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (const std::size_t hash = line.find('#'); hash != std::string::npos)
      line.resize(hash);

    std::size_t pos = 0;
    skip_spaces(line, pos);
    if (pos == line.size()) continue;

    SparseDataset::Row row;
    row.label = parse_number(line, pos, line_no);
    observed_labels.insert(row.label);

    int prev_index = 0;
    while (true) {
      skip_spaces(line, pos);
      if (pos == line.size()) break;
      const int column = static_cast<int>(pos) + 1;
      const int index = parse_index(line, pos, line_no);
      if (pos == line.size() || line[pos] != ':')
        throw ParseError("expected ':' after the feature index", line_no,
                         static_cast<int>(pos) + 1);
      ++pos;
      const double value = parse_number(line, pos, line_no);
      if (index < 1) throw ParseError("feature indices are 1-based", line_no, column);
      if (index == prev_index)
        throw ParseError("duplicate feature index " + std::to_string(index), line_no, column);
      if (index < prev_index)
        throw ParseError("feature indices must be strictly increasing", line_no, column);
      prev_index = index;
      max_index = std::max(max_index, index);
      row.features.push_back({index, value});
    }
    dataset.rows.push_back(std::move(row));
  }

  if (dataset.rows.empty()) throw ParseError("no data rows found", line_no ? line_no : 1);

  const std::set<double> pm{-1.0, 1.0}, zo{0.0, 1.0}, ot{1.0, 2.0};
  auto subset_of = [&observed_labels](const std::set<double>& alphabet) {
    for (double v : observed_labels)
      if (!alphabet.count(v)) return false;
    return true;
  };
  if (subset_of(pm)) {
    // already normalized
  } else if (subset_of(zo)) {
    for (auto& row : dataset.rows) row.label = row.label == 0.0 ? -1.0 : 1.0;
  } else if (subset_of(ot)) {
    for (auto& row : dataset.rows) row.label = row.label == 1.0 ? 1.0 : -1.0;
  } else {
    throw ParseError("unsupported label alphabet " + alphabet_string(observed_labels), 1);
  }

  dataset.dimension = std::max(max_index, min_dimension);
  return dataset;
}

SparseDataset parse_libsvm_file(const std::string& path, int min_dimension) {
  std::ifstream input(path);
  if (!input) throw InputError("cannot open dataset file: " + path);
  return parse_libsvm(input, min_dimension);
}

std::string serialize_libsvm(const SparseDataset& dataset) {
  std::string out;
  char buf[64];
  for (const auto& row : dataset.rows) {
    std::snprintf(buf, sizeof(buf), "%.17g", row.label);
    out += buf;
    for (const auto& f : row.features) {
      std::snprintf(buf, sizeof(buf), " %d:%.17g", f.index, f.value);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

ProblemSpec to_problem(const SparseDataset& dataset, double mu, double radius) {
  if (dataset.dimension == 0) throw InputError("dataset has no features");
  return ProblemSpec::logistic(
      dataset.densify(), dataset.labels(), mu,
      ProjectionDomain::l2_ball(Eigen::VectorXd::Zero(dataset.dimension), radius));
}

}  // namespace optibatch
