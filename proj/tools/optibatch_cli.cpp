#include <CLI11.hpp>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "optibatch/averaging.hpp"
#include "optibatch/experiment.hpp"
#include "optibatch/libsvm.hpp"
#include "optibatch/optimizers.hpp"

namespace {

using namespace optibatch;

int command_run(const std::string& config_path) {
  ExperimentConfig config = load_config(config_path);
  ExperimentResult result = run_experiment(config);
  std::cout << "reference f_star = " << result.reference.f_star
            << " (tolerance " << result.reference.tolerance << ")\n";
  if (!result.reference.warning.empty())
    std::cout << "warning: " << result.reference.warning << "\n";
  int ok = 0, failed = 0;
  for (const RunRecord& record : result.runs) {
    if (record.failed()) {
      ++failed;
      std::cout << "failed: " << record.algorithm.label() << " seed " << record.seed << ": "
                << record.error << "\n";
    } else {
      ++ok;
    }
  }
  std::cout << ok << " run(s) written, " << failed << " rejected\n";
  std::cout << "summary: " << result.summary_file << "\n";
  return 0;
}

int command_verify() {
  bool all_ok = true;
  auto report = [&all_ok](const std::string& name, bool ok, double value) {
    all_ok = all_ok && ok;
    std::cout << (ok ? "pass" : "FAIL") << "  " << name << "  (max residual " << value << ")\n";
  };

  // Conversion identities on random histories under both schedule families.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int dim = 1 + static_cast<int>(rng() % 8);
    const int rounds = 3 + static_cast<int>(rng() % 10);
    std::vector<Eigen::VectorXd> history;
    for (int t = 0; t <= rounds; ++t) {
      Eigen::VectorXd x(dim);
      for (int i = 0; i < dim; ++i) x(i) = unif(rng);
      history.push_back(x);
    }
    for (const WeightSchedule& schedule :
         {WeightSchedule::linear(), WeightSchedule::geometric_sc(25.0)}) {
      for (int t = 1; t <= rounds; ++t)
        for (ConversionIdentity which : {ConversionIdentity::A1, ConversionIdentity::A2,
                                         ConversionIdentity::A3, ConversionIdentity::A4}) {
          if (which == ConversionIdentity::A4 && t < 2) continue;
          worst = std::max(worst, check_identity(which, history, schedule, t));
        }
    }
  }
  report("conversion identities (A.1-A.4)", worst <= 1e-10, worst);

  // NAG equivalence on a random unconstrained quadratic.
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd A(80, 50);
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j) A(i, j) = gauss(rng);
  Eigen::VectorXd b(80), x0(50);
  for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = gauss(rng);
  for (Eigen::Index i = 0; i < x0.size(); ++i) x0(i) = gauss(rng);
  ProblemSpec quadratic =
      ProblemSpec::least_squares(A, b, ProjectionDomain::unconstrained());
  NagEquivalenceReport equivalence = check_nag_equivalence(quadratic, 500, x0);
  report("NAG trajectory equivalence (bar)", equivalence.deviation_bar <= 1e-8,
         equivalence.deviation_bar);
  report("NAG trajectory equivalence (tilde)", equivalence.deviation_tilde <= 1e-8,
         equivalence.deviation_tilde);

  return all_ok ? 0 : 2;
}

ProblemSpec problem_from_spec(const std::string& spec, double mu, double radius) {
  if (spec.rfind("synthetic:", 0) != 0) {
    SparseDataset dataset = parse_libsvm_file(spec);
    return to_problem(dataset, mu, radius);
  }
  int n = 500, d = 100;
  double sigma_a = 1.0, noise_var = 1e-3, ball = 2.0;
  std::uint64_t seed = 1;
  std::stringstream fields(spec.substr(10));
  std::string field;
  while (std::getline(fields, field, ',')) {
    const std::size_t eq = field.find('=');
    if (eq == std::string::npos)
      throw ConfigError("synthetic spec fields look like key=value: " + field);
    const std::string key = field.substr(0, eq);
    const std::string value = field.substr(eq + 1);
    if (key == "n") n = std::stoi(value);
    else if (key == "d") d = std::stoi(value);
    else if (key == "sigma_a") sigma_a = std::stod(value);
    else if (key == "noise_var") noise_var = std::stod(value);
    else if (key == "radius") ball = std::stod(value);
    else if (key == "seed") seed = std::stoull(value);
    else throw ConfigError("unknown synthetic spec key: " + key);
  }
  // An infinite radius means unconstrained: generate inside the unit ball,
  // then drop the constraint.
  if (std::isinf(ball))
    return generate_synthetic_ls(n, d, sigma_a, noise_var, 1.0, seed)
        .with_domain(ProjectionDomain::unconstrained());
  return generate_synthetic_ls(n, d, sigma_a, noise_var, ball, seed);
}

int command_reference(const std::string& spec, double mu, double radius,
                      const std::string& mode_name, int horizon, int multiplier) {
  ProblemSpec problem = problem_from_spec(spec, mu, radius);
  const ReferenceMode mode =
      mode_name == "long_run" ? ReferenceMode::LongRun : ReferenceMode::ClosedForm;
  ReferenceOptimum reference = compute_reference_optimum(problem, mode, horizon, multiplier);
  if (!reference.warning.empty()) std::cout << "warning: " << reference.warning << "\n";
  std::cout << "f_star = " << reference.f_star << "\n";
  std::cout << "tolerance = " << reference.tolerance << "\n";
  return 0;
}

int command_parse(const std::string& path) {
  SparseDataset dataset = parse_libsvm_file(path);
  std::set<double> alphabet;
  for (const auto& row : dataset.rows) alphabet.insert(row.label);
  std::cout << "N = " << dataset.sample_count() << "\n";
  std::cout << "d = " << dataset.dimension << "\n";
  std::cout << "labels (normalized) = {";
  bool first = true;
  for (double v : alphabet) {
    if (!first) std::cout << ", ";
    std::cout << v;
    first = false;
  }
  std::cout << "}\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convex-optimization benchmark harness"};
  app.require_subcommand(1);

  std::string config_path;
  CLI::App* run = app.add_subcommand("run", "Execute a benchmark config");
  run->add_option("--config", config_path, "Config file path")->required();

  CLI::App* verify = app.add_subcommand("verify", "Run identity and equivalence checks");

  std::string problem_spec, reference_mode = "closed_form";
  double mu = 0.005, radius = 10.0;
  int horizon = 500, multiplier = 50;
  CLI::App* reference = app.add_subcommand("reference", "Compute a reference optimum");
  reference->add_option("--problem", problem_spec, "libsvm path or synthetic:k=v,... spec")
      ->required();
  reference->add_option("--mu", mu, "logistic regularization (libsvm sources)");
  reference->add_option("--radius", radius, "domain radius (libsvm sources)");
  reference->add_option("--mode", reference_mode, "closed_form or long_run");
  reference->add_option("--horizon", horizon, "long-run base horizon");
  reference->add_option("--multiplier", multiplier, "long-run multiplier");

  std::string dataset_path;
  CLI::App* parse = app.add_subcommand("parse", "Validate a LIBSVM dataset");
  parse->add_option("--libsvm", dataset_path, "dataset path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return command_run(config_path);
    if (verify->parsed()) return command_verify();
    if (reference->parsed())
      return command_reference(problem_spec, mu, radius, reference_mode, horizon, multiplier);
    if (parse->parsed()) return command_parse(dataset_path);
  } catch (const optibatch::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 1;
  } catch (const optibatch::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const optibatch::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const optibatch::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
