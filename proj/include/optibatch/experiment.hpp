#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "optibatch/problem.hpp"
#include "optibatch/reference.hpp"
#include "optibatch/trace.hpp"

namespace optibatch {

/// One benchmark entry: an algorithm name plus optional policy/schedule
/// qualifiers. Names: optimistic, strongly_convex, nag, gd, heavy_ball,
/// unixgrad, jrgs, stochastic. Policies: constant, nag_equivalent,
/// adagrad_two, adagrad_one.
struct AlgorithmSpec {
  std::string name;
  std::string policy;    // empty: algorithm default
  std::string schedule;  // empty: policy default
  double eta = 0.0;      // explicit constant step (0: 1/(4L))
  double sigma = 0.0;    // stochastic noise level
  double beta = 0.9;     // heavy-ball momentum

  std::string label() const;
};

struct ExperimentConfig {
  enum class Source { SyntheticLS, LibsvmFile };

  Source source = Source::SyntheticLS;
  // synthetic least squares
  int n = 500;
  int d = 100;
  double sigma_a = 1.0;
  double noise_var = 1e-3;
  double radius = 0.0;  // 0: default 2||x*||; inf: unconstrained
  std::uint64_t problem_seed = 1;
  // libsvm
  std::string path;
  double mu = 0.005;

  std::vector<AlgorithmSpec> algorithms;
  int iterations = 2;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  ReferenceMode reference = ReferenceMode::ClosedForm;
  int multiplier = 50;
  std::string output_dir = "out";

  void validate() const;
};

/// Parses the flat `key = value` config format; `algorithm` lines repeat.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(std::istream& input);

struct RunRecord {
  AlgorithmSpec algorithm;
  std::uint64_t seed = 0;
  RunTrace trace;
  std::string trace_file;
  std::string error;  // nonempty when the combination was rejected

  bool failed() const { return !error.empty(); }
};

struct ExperimentResult {
  ReferenceOptimum reference;
  std::vector<RunRecord> runs;
  std::string summary_file;
  std::vector<std::string> plot_files;
};

/// Builds the problem from the config source (kernel mode per run-level
/// parallelism; see OPTIBATCH_THREADS in the README).
ProblemSpec build_problem(const ExperimentConfig& config);

ExperimentResult run_experiment(const ExperimentConfig& config);

/// Writes one trace to CSV: header `t,suboptimality,elapsed_s,oracle_calls`,
/// 17 significant digits, LF endings.
void write_trace_csv(const RunTrace& trace, const std::string& path);

/// Writes (iteration, mean log10 gap, std log10 gap) rows across same-grid
/// traces; mismatched iteration grids are an error.
void emit_plot_data(const std::vector<const RunTrace*>& traces, const std::string& path);

/// Run-level parallelism cap from OPTIBATCH_THREADS (0 or unset: sequential).
int configured_thread_cap();

}  // namespace optibatch
