#include "optibatch/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "optibatch/libsvm.hpp"
#include "optibatch/optimizers.hpp"

namespace optibatch {

namespace {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double_value(const std::string& value, const std::string& key, int line) {
  if (value == "inf") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ParseError("invalid number for '" + key + "'", line);
  }
}

long parse_int_value(const std::string& value, const std::string& key, int line) {
  try {
    std::size_t used = 0;
    const long v = std::stol(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ParseError("invalid integer for '" + key + "'", line);
  }
}

std::vector<std::string> split_words(const std::string& text) {
  std::istringstream stream(text);
  std::vector<std::string> words;
  std::string word;
  while (stream >> word) words.push_back(word);
  return words;
}

AlgorithmSpec parse_algorithm(const std::string& value, int line) {
  const std::vector<std::string> words = split_words(value);
  if (words.empty()) throw ParseError("empty algorithm entry", line);
  AlgorithmSpec spec;
  spec.name = words[0];
  static const std::vector<std::string> names{"optimistic", "strongly_convex", "nag",
                                              "gd",         "heavy_ball",      "unixgrad",
                                              "jrgs",       "stochastic"};
  if (std::find(names.begin(), names.end(), spec.name) == names.end())
    throw ParseError("unknown algorithm '" + spec.name + "'", line);
  for (std::size_t i = 1; i < words.size(); ++i) {
    const std::string& w = words[i];
    if (w == "constant" || w == "nag_equivalent" || w == "adagrad_two" || w == "adagrad_one")
      spec.policy = w;
    else if (w == "linear" || w == "linear_zero_last" || w == "unit" || w == "geometric")
      spec.schedule = w;
    else if (w.rfind("eta=", 0) == 0)
      spec.eta = parse_double_value(w.substr(4), "eta", line);
    else if (w.rfind("sigma=", 0) == 0)
      spec.sigma = parse_double_value(w.substr(6), "sigma", line);
    else if (w.rfind("beta=", 0) == 0)
      spec.beta = parse_double_value(w.substr(5), "beta", line);
    else
      throw ParseError("unknown algorithm qualifier '" + w + "'", line);
  }
  return spec;
}

}  // namespace

std::string AlgorithmSpec::label() const {
  std::string out = name;
  if (!policy.empty()) out += "_" + policy;
  if (!schedule.empty()) out += "_" + schedule;
  if (sigma > 0.0) {
    std::ostringstream s;
    s << "_sigma" << sigma;
    out += s.str();
  }
  return out;
}

void ExperimentConfig::validate() const {
  if (iterations < 2) throw ConfigError("iterations must be at least 2");
  if (seeds.empty()) throw ConfigError("at least one seed is required");
  if (algorithms.empty()) throw ConfigError("at least one algorithm entry is required");
  if (reference == ReferenceMode::LongRun && multiplier < 10)
    throw ConfigError("long-run reference multiplier must be at least 10");
  if (source == Source::SyntheticLS) {
    if (n < 1 || d < 1) throw ConfigError("synthetic dimensions must be positive");
    if (!(sigma_a > 0.0)) throw ConfigError("sigma_a must be positive");
    if (noise_var < 0.0) throw ConfigError("noise_var must be nonnegative");
  } else if (path.empty()) {
    throw ConfigError("a libsvm source needs a path");
  }
}

ExperimentConfig parse_config(std::istream& input) {
  ExperimentConfig config;
  bool saw_seeds = false;
  std::string line;
  int line_no = 0;
  while (std::getline(input, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (const std::size_t hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const std::size_t eq = line.find('=');
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", line_no);

    auto trim = [](std::string s) {
      const std::size_t b = s.find_first_not_of(" \t");
      const std::size_t e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) throw ParseError("expected 'key = value'", line_no);

    if (key == "problem") {
      if (value == "synthetic_ls")
        config.source = ExperimentConfig::Source::SyntheticLS;
      else if (value == "libsvm")
        config.source = ExperimentConfig::Source::LibsvmFile;
      else
        throw ParseError("unknown problem source '" + value + "'", line_no);
    } else if (key == "n") {
      config.n = static_cast<int>(parse_int_value(value, key, line_no));
    } else if (key == "d") {
      config.d = static_cast<int>(parse_int_value(value, key, line_no));
    } else if (key == "sigma_a") {
      config.sigma_a = parse_double_value(value, key, line_no);
    } else if (key == "noise_var") {
      config.noise_var = parse_double_value(value, key, line_no);
    } else if (key == "radius") {
      config.radius = parse_double_value(value, key, line_no);
    } else if (key == "problem_seed") {
      config.problem_seed = static_cast<std::uint64_t>(parse_int_value(value, key, line_no));
    } else if (key == "path") {
      config.path = value;
    } else if (key == "mu") {
      config.mu = parse_double_value(value, key, line_no);
    } else if (key == "iterations") {
      config.iterations = static_cast<int>(parse_int_value(value, key, line_no));
    } else if (key == "seeds") {
      config.seeds.clear();
      for (const std::string& word : split_words(value))
        config.seeds.push_back(static_cast<std::uint64_t>(parse_int_value(word, key, line_no)));
      saw_seeds = true;
    } else if (key == "reference") {
      if (value == "closed_form")
        config.reference = ReferenceMode::ClosedForm;
      else if (value == "long_run")
        config.reference = ReferenceMode::LongRun;
      else
        throw ParseError("unknown reference mode '" + value + "'", line_no);
    } else if (key == "multiplier") {
      config.multiplier = static_cast<int>(parse_int_value(value, key, line_no));
    } else if (key == "output_dir") {
      config.output_dir = value;
    } else if (key == "algorithm") {
      config.algorithms.push_back(parse_algorithm(value, line_no));
    } else {
      throw ParseError("unknown config key '" + key + "'", line_no);
    }
  }
  (void)saw_seeds;
  config.validate();
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream input(path);
  if (!input) throw ConfigError("cannot open config file: " + path);
  return parse_config(input);
}

ProblemSpec build_problem(const ExperimentConfig& config) {
  if (config.source == ExperimentConfig::Source::LibsvmFile) {
    const double radius = config.radius > 0.0 ? config.radius : 10.0;
    SparseDataset dataset = parse_libsvm_file(config.path);
    if (std::isinf(radius))
      return to_problem(dataset, config.mu, 1.0).with_domain(ProjectionDomain::unconstrained());
    return to_problem(dataset, config.mu, radius);
  }
  const bool explicit_radius = config.radius > 0.0 && !std::isinf(config.radius);
  Eigen::VectorXd planted;
  ProblemSpec problem =
      generate_synthetic_ls(config.n, config.d, config.sigma_a, config.noise_var,
                            explicit_radius ? config.radius : 1.0, config.problem_seed,
                            &planted);
  if (std::isinf(config.radius))
    return problem.with_domain(ProjectionDomain::unconstrained());
  if (explicit_radius) return problem;
  // Default: keep the generated data but widen the ball to 2||x*|| so the
  // minimizer stays interior while the diameter remains finite.
  return problem.with_domain(
      ProjectionDomain::l2_ball(Eigen::VectorXd::Zero(config.d), 2.0 * planted.norm()));
}

int configured_thread_cap() {
  const char* env = std::getenv("OPTIBATCH_THREADS");
  if (!env || !*env) return 0;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end || v < 0) throw ConfigError("OPTIBATCH_THREADS must be a nonnegative integer");
  return static_cast<int>(v);
}

void write_trace_csv(const RunTrace& trace, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write trace file: " + path);
  out << "t,suboptimality,elapsed_s,oracle_calls\n";
  for (const TracePoint& p : trace.points)
    out << p.t << ',' << format_g17(p.suboptimality) << ',' << format_g17(p.elapsed_s) << ','
        << p.oracle_calls << '\n';
}

namespace {

double log10_gap(double gap) {
  return std::log10(std::max(gap, std::numeric_limits<double>::min()));
}

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

MeanStd mean_std(const std::vector<double>& values) {
  MeanStd out;
  if (values.empty()) return out;
  for (double v : values) out.mean += v;
  out.mean /= values.size();
  for (double v : values) out.std += (v - out.mean) * (v - out.mean);
  out.std = std::sqrt(out.std / values.size());
  return out;
}

double suboptimality_at(const RunTrace& trace, int t) {
  for (const TracePoint& p : trace.points)
    if (p.t == t) return p.suboptimality;
  throw ConfigError("trace has no checkpoint at t = " + std::to_string(t));
}

}  // namespace

void emit_plot_data(const std::vector<const RunTrace*>& traces, const std::string& path) {
  if (traces.empty()) throw ConfigError("no traces to aggregate");
  const std::size_t rows = traces.front()->points.size();
  for (const RunTrace* trace : traces) {
    if (trace->points.size() != rows)
      throw ConfigError("traces have mismatched iteration grids");
    for (std::size_t i = 0; i < rows; ++i)
      if (trace->points[i].t != traces.front()->points[i].t)
        throw ConfigError("traces have mismatched iteration grids");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write plot file: " + path);
  out << "t,mean_log10_gap,std_log10_gap\n";
  std::vector<double> column(traces.size());
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < traces.size(); ++j)
      column[j] = log10_gap(traces[j]->points[i].suboptimality);
    const MeanStd agg = mean_std(column);
    out << traces.front()->points[i].t << ',' << format_g17(agg.mean) << ','
        << format_g17(agg.std) << '\n';
  }
}

namespace {

Eigen::VectorXd draw_initial_point(const ProblemSpec& problem, std::uint64_t seed,
                                   double unconstrained_scale) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd x(problem.dim());
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = gauss(rng);
  const ProjectionDomain& domain = problem.domain();
  if (domain.kind() == ProjectionDomain::Kind::L2Ball) {
    x.normalize();
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double r = domain.radius() * std::pow(unif(rng), 1.0 / problem.dim());
    return domain.center() + r * x;
  }
  if (domain.kind() == ProjectionDomain::Kind::Box) return domain.project(x);
  const double norm = x.norm();
  return norm > 0.0 ? Eigen::VectorXd(x * (unconstrained_scale / norm)) : x;
}

RunTrace dispatch_run(const ProblemSpec& problem, const AlgorithmSpec& spec, int T,
                      const Eigen::VectorXd& x0, double f_star, std::uint64_t seed) {
  auto constant_policy = [&] {
    return StepSizePolicy::constant(spec.eta > 0.0 ? spec.eta
                                                   : 1.0 / (4.0 * problem.smoothness()));
  };
  auto schedule_for = [&](const std::string& fallback) {
    const std::string name = spec.schedule.empty() ? fallback : spec.schedule;
    if (name == "linear") return WeightSchedule::linear();
    if (name == "linear_zero_last") return WeightSchedule::linear_zero_last(T);
    if (name == "unit") return WeightSchedule::unit();
    throw ConfigError("schedule '" + name + "' is not valid here");
  };

  if (spec.name == "optimistic") {
    const std::string policy_name = spec.policy.empty() ? "constant" : spec.policy;
    if (policy_name == "constant")
      return run_optimistic_o2b(problem, schedule_for("linear"), constant_policy(), T, x0,
                                f_star);
    if (policy_name == "nag_equivalent")
      return run_optimistic_o2b(problem, schedule_for("linear"),
                                StepSizePolicy::nag_equivalent(problem.smoothness()), T, x0,
                                f_star);
    if (policy_name == "adagrad_two")
      return run_optimistic_o2b(problem, schedule_for("linear"),
                                StepSizePolicy::adagrad_two_grad(problem.domain().diameter()),
                                T, x0, f_star);
    if (policy_name == "adagrad_one")
      return run_optimistic_o2b(problem, schedule_for("linear_zero_last"),
                                StepSizePolicy::adagrad_one_grad(problem.domain().diameter()),
                                T, x0, f_star);
    throw ConfigError("unknown policy '" + policy_name + "'");
  }
  if (spec.name == "strongly_convex") return run_strongly_convex_o2b(problem, T, x0, f_star);
  if (spec.name == "nag") return run_nag(problem, T, x0, f_star);
  if (spec.name == "gd") return run_gd(problem, T, x0, f_star);
  if (spec.name == "heavy_ball") return run_heavy_ball(problem, T, x0, f_star, spec.beta);
  if (spec.name == "unixgrad" || spec.name == "jrgs") {
    const StabilizedKind kind =
        spec.name == "unixgrad" ? StabilizedKind::UniXGrad : StabilizedKind::JRGS;
    StepSizePolicy policy = spec.policy == "adagrad_two"
                                ? StepSizePolicy::adagrad_two_grad(problem.domain().diameter())
                                : constant_policy();
    return run_stabilized(problem, kind, policy, T, x0, f_star);
  }
  if (spec.name == "stochastic") {
    StochasticOracle oracle(problem, spec.sigma, seed ^ 0x9e3779b97f4a7c15ULL);
    return run_stochastic_o2b(oracle, T, x0, f_star);
  }
  throw ConfigError("unknown algorithm '" + spec.name + "'");
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  std::filesystem::create_directories(config.output_dir);

  ProblemSpec problem = build_problem(config);
  const int T = config.iterations;
  ExperimentResult result;
  result.reference =
      compute_reference_optimum(problem, config.reference, T, config.multiplier);
  const double f_star = result.reference.f_star;

  const double x0_scale = std::isfinite(config.radius) && config.radius > 0.0
                              ? config.radius / 2.0
                              : 1.0;

  for (const AlgorithmSpec& spec : config.algorithms)
    for (std::uint64_t seed : config.seeds) {
      RunRecord record;
      record.algorithm = spec;
      record.seed = seed;
      result.runs.push_back(std::move(record));
    }

  const int cap = configured_thread_cap();
  const int workers = std::min<int>(std::max(cap, 1), static_cast<int>(result.runs.size()));
  ProblemSpec worker_problem = problem;
  if (workers > 1) worker_problem.set_kernel_mode(kernels::Mode::Serial);

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < result.runs.size(); i = next.fetch_add(1)) {
      RunRecord& record = result.runs[i];
      const ProblemSpec& p = workers > 1 ? worker_problem : problem;
      try {
        const Eigen::VectorXd x0 = draw_initial_point(p, record.seed, x0_scale);
        record.trace = dispatch_run(p, record.algorithm, T, x0, f_star, record.seed);
      } catch (const ConfigError& e) {
        record.error = e.what();
      } catch (const UsageError& e) {
        record.error = e.what();
      }
    }
  };
  if (workers > 1) {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& thread : pool) thread.join();
  } else {
    work();
  }

  for (RunRecord& record : result.runs) {
    if (record.failed()) continue;
    record.trace_file = config.output_dir + "/" + record.algorithm.label() + "_seed" +
                        std::to_string(record.seed) + ".csv";
    write_trace_csv(record.trace, record.trace_file);
  }

  // Summary: per-algorithm mean/std of log10 gap at {T/8, T/4, T/2, T}.
  const std::vector<int> checkpoints{std::max(1, T / 8), std::max(1, T / 4), std::max(1, T / 2),
                                     T};
  result.summary_file = config.output_dir + "/summary.csv";
  std::ofstream summary(result.summary_file, std::ios::binary);
  if (!summary) throw ConfigError("cannot write summary file: " + result.summary_file);
  summary << "algorithm,checkpoint_t,mean_log10_gap,std_log10_gap,mean_time_s\n";

  std::map<std::string, std::vector<const RunRecord*>> by_algorithm;
  for (const RunRecord& record : result.runs)
    if (!record.failed()) by_algorithm[record.algorithm.label()].push_back(&record);

  for (const auto& [label, records] : by_algorithm) {
    double mean_time = 0.0;
    for (const RunRecord* r : records) mean_time += r->trace.total_time_s;
    mean_time /= records.size();
    for (int checkpoint : checkpoints) {
      std::vector<double> gaps;
      gaps.reserve(records.size());
      for (const RunRecord* r : records)
        gaps.push_back(log10_gap(suboptimality_at(r->trace, checkpoint)));
      const MeanStd agg = mean_std(gaps);
      summary << label << ',' << checkpoint << ',' << format_g17(agg.mean) << ','
              << format_g17(agg.std) << ',' << format_g17(mean_time) << '\n';
    }

    std::vector<const RunTrace*> traces;
    for (const RunRecord* r : records) traces.push_back(&r->trace);
    const std::string plot_file = config.output_dir + "/" + label + "_plot.csv";
    emit_plot_data(traces, plot_file);
    result.plot_files.push_back(plot_file);
  }
  return result;
}

}  // namespace optibatch
