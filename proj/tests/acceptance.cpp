// Acceptance gate: one line per criterion, exit code = number of failures.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <sstream>
#include <vector>

#include "optibatch/libsvm.hpp"
#include "optibatch/optimizers.hpp"
#include "optibatch/reference.hpp"

using namespace optibatch;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("%s criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
  if (!pass) ++failures;
}

Eigen::MatrixXd gaussian(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = g(rng);
  return m;
}

Eigen::VectorXd gaussian_vec(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = g(rng);
  return v;
}

// A = U diag(svals) V^T with Haar-ish orthogonal factors from QR.
Eigen::MatrixXd spectrum_matrix(std::mt19937_64& rng, int n, const Eigen::VectorXd& svals) {
  const int d = static_cast<int>(svals.size());
  Eigen::MatrixXd U = Eigen::HouseholderQR<Eigen::MatrixXd>(gaussian(rng, n, d))
                          .householderQ() *
                      Eigen::MatrixXd::Identity(n, d);
  Eigen::MatrixXd V = Eigen::HouseholderQR<Eigen::MatrixXd>(gaussian(rng, d, d))
                          .householderQ() *
                      Eigen::MatrixXd::Identity(d, d);
  return U * svals.asDiagonal() * V.transpose();
}

Eigen::VectorXd logspace_svals(int count, double log10_hi, double log10_lo) {
  Eigen::VectorXd s(count);
  for (int i = 0; i < count; ++i) {
    const double e = log10_hi + (log10_lo - log10_hi) * i / (count - 1);
    s(i) = std::pow(10.0, e);
  }
  return s;
}

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double safe_log10(double gap) {
  return std::log10(std::max(gap, std::numeric_limits<double>::min()));
}

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

// ---- shared instances -------------------------------------------------------

// Consistent ill-conditioned least squares (singular values 1 .. 1e-2) whose
// gap stays resolvable across the fitted windows.
struct PlantedLS {
  ProblemSpec problem;
  Eigen::VectorXd x_star;
};

PlantedLS ill_conditioned_ls(std::uint64_t seed, int n, int d, ProjectionDomain domain) {
  std::mt19937_64 rng(seed);
  Eigen::MatrixXd A = spectrum_matrix(rng, n, logspace_svals(d, 0.0, -2.0));
  Eigen::VectorXd x_star = gaussian_vec(rng, d);
  return {ProblemSpec::least_squares(A, A * x_star, std::move(domain)), x_star};
}

// ---- criteria ---------------------------------------------------------------

void criterion_1() {
  bool pass = true;
  double worst_ratio = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    std::mt19937_64 rng(100 + seed);
    Eigen::MatrixXd A = gaussian(rng, 40, 20);
    Eigen::VectorXd x_star = gaussian_vec(rng, 20);
    ProblemSpec p = ProblemSpec::least_squares(A, A * x_star,
                                               ProjectionDomain::unconstrained());
    Eigen::VectorXd x0 = gaussian_vec(rng, 20);
    const double L = p.smoothness();
    const int T = 1000;
    RunTrace trace = run_optimistic_o2b(p, WeightSchedule::linear(),
                                        StepSizePolicy::constant(1.0 / (4.0 * L)), T, x0, 0.0);
    const double lhs = 0.5 * T * (T + 1) * trace.final_suboptimality();
    const double rhs = 2.0 * L * (x0 - x_star).squaredNorm();
    worst_ratio = std::max(worst_ratio, lhs / rhs);
    pass = pass && lhs <= rhs;
  }
  report(1, pass, fmt("accelerated constant: worst A_T*gap / (2L||x0-x*||^2) = %.3g", worst_ratio));
}

void criterion_2() {
  PlantedLS inst = ill_conditioned_ls(202, 40, 20, ProjectionDomain::unconstrained());
  std::mt19937_64 rng(303);
  Eigen::VectorXd x0 = gaussian_vec(rng, 20);
  RunTrace trace = run_optimistic_o2b(inst.problem, WeightSchedule::linear(),
                                      StepSizePolicy::constant(1.0 / (4.0 * inst.problem.smoothness())),
                                      1000, x0, 0.0);
  std::vector<double> xs, ys;
  for (const TracePoint& p : trace.points)
    if (p.t >= 100) {
      xs.push_back(std::log10(static_cast<double>(p.t)));
      ys.push_back(safe_log10(p.suboptimality));
    }
  const double slope = fit_slope(xs, ys);
  report(2, slope <= -1.8, fmt("accelerated decay: log-log slope over [100,1000] = %.3f", slope));
}

void criterion_3() {
  std::mt19937_64 rng(404);
  ProblemSpec p = ProblemSpec::least_squares(gaussian(rng, 80, 50), gaussian_vec(rng, 80),
                                             ProjectionDomain::unconstrained());
  NagEquivalenceReport r = check_nag_equivalence(p, 500, gaussian_vec(rng, 50));
  const double worst = std::max(r.deviation_bar, r.deviation_tilde);
  report(3, worst <= 1e-8, fmt("NAG equivalence: max normalized deviation = %.3g", worst));
}

void criterion_4() {
  std::mt19937_64 rng(505);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int dim = 1 + static_cast<int>(rng() % 8);
    const int rounds = 2 + static_cast<int>(rng() % 10);
    std::vector<Eigen::VectorXd> history;
    for (int t = 0; t <= rounds; ++t) {
      Eigen::VectorXd x(dim);
      for (int i = 0; i < dim; ++i) x(i) = unif(rng);
      history.push_back(std::move(x));
    }
    for (const WeightSchedule& schedule :
         {WeightSchedule::linear(), WeightSchedule::geometric_sc(64.0)})
      for (int t = 1; t <= rounds; ++t)
        for (ConversionIdentity which : {ConversionIdentity::A1, ConversionIdentity::A2,
                                         ConversionIdentity::A3, ConversionIdentity::A4}) {
          if (which == ConversionIdentity::A4 && t < 2) continue;
          worst = std::max(worst, check_identity(which, history, schedule, t));
        }
  }
  report(4, worst <= 1e-10, fmt("conversion identities: max residual = %.3g", worst));
}

void criterion_5() {
  const int d = 10, T = 300;
  const double kappa = 100.0;
  std::mt19937_64 rng(707);
  Eigen::MatrixXd A = spectrum_matrix(rng, d, logspace_svals(d, 0.0, -1.0));  // sigma^2: 1..1e-2
  Eigen::VectorXd x_star = gaussian_vec(rng, d);
  ProblemSpec p = ProblemSpec::least_squares(A, A * x_star, ProjectionDomain::unconstrained());
  Eigen::VectorXd x0 = gaussian_vec(rng, d);
  RunTrace trace = run_strongly_convex_o2b(p, T, x0, 0.0);

  std::vector<double> xs, ys;
  for (const TracePoint& pt : trace.points)
    if (pt.t >= 50) {
      xs.push_back(static_cast<double>(pt.t));
      ys.push_back(std::log(std::max(pt.suboptimality, std::numeric_limits<double>::min())));
    }
  const double slope = fit_slope(xs, ys);
  const double slope_threshold = -0.9 / (1.0 + 2.0 * std::sqrt(kappa));

  const double lambda = p.strong_convexity();
  const double bound =
      10.0 * lambda * (x0 - x_star).squaredNorm() * std::exp(-(T - 1) / (1.0 + 2.0 * std::sqrt(kappa)));
  const bool pass = slope <= slope_threshold && trace.final_suboptimality() <= bound;
  report(5, pass,
         fmt("strongly convex rate: ln-gap slope %.4f (need <= %.4f), final gap %.3g (bound %.3g)",
             slope, slope_threshold, trace.final_suboptimality(), bound));
}

struct UniversalSmooth {
  PlantedLS inst;
  ProjectionDomain ball;
  Eigen::VectorXd x0;
};

UniversalSmooth universal_smooth_setup() {
  std::mt19937_64 rng(808);
  Eigen::MatrixXd A = spectrum_matrix(rng, 40, logspace_svals(20, 0.0, -2.0));
  Eigen::VectorXd x_star = gaussian_vec(rng, 20);
  ProjectionDomain ball =
      ProjectionDomain::l2_ball(Eigen::VectorXd::Zero(20), 2.0 * x_star.norm());
  ProblemSpec p = ProblemSpec::least_squares(A, A * x_star, ball);
  std::mt19937_64 rng2(809);
  Eigen::VectorXd x0 = ball.project(gaussian_vec(rng2, 20));
  return {{std::move(p), std::move(x_star)}, std::move(ball), std::move(x0)};
}

void criterion_6() {
  UniversalSmooth s = universal_smooth_setup();
  const double D = s.ball.diameter();
  double gaps[3];
  bool calls_ok = true;
  const int horizons[3] = {256, 512, 1024};
  for (int i = 0; i < 3; ++i) {
    const int T = horizons[i];
    RunTrace trace = run_optimistic_o2b(s.inst.problem, WeightSchedule::linear_zero_last(T),
                                        StepSizePolicy::adagrad_one_grad(D), T, s.x0, 0.0);
    gaps[i] = trace.final_suboptimality();
    calls_ok = calls_ok && trace.oracle_calls == static_cast<std::uint64_t>(T);
  }
  const double r1 = gaps[1] / gaps[0], r2 = gaps[2] / gaps[1];
  report(6, calls_ok && r1 <= 0.35 && r2 <= 0.35,
         fmt("universal smooth: gap ratios %.3f, %.3f (need <= 0.35), T calls %s", r1, r2,
             calls_ok ? "exact" : "WRONG"));
}

void criterion_7() {
  std::mt19937_64 rng(909);
  Eigen::MatrixXd A = gaussian(rng, 30, 10);
  Eigen::VectorXd b = gaussian_vec(rng, 30);
  ProjectionDomain ball = ProjectionDomain::l2_ball(Eigen::VectorXd::Zero(10), 2.0);
  ProblemSpec p = ProblemSpec::l1_residual(A, b, ball);
  const double D = ball.diameter();

  // Nonsmooth reference: take the best value seen along a much longer run.
  double f_star = std::numeric_limits<double>::infinity();
  {
    const int T_long = 65536;
    RunTrace longest =
        run_optimistic_o2b(p, WeightSchedule::linear_zero_last(T_long),
                           StepSizePolicy::adagrad_one_grad(D), T_long,
                           ball.project(gaussian_vec(rng, 10)), 0.0);
    for (const TracePoint& pt : longest.points) f_star = std::min(f_star, pt.suboptimality);
    f_star -= 1e-12 * std::max(1.0, std::abs(f_star));
  }

  std::vector<double> ratios;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    std::mt19937_64 srng(1000 + seed);
    Eigen::VectorXd x0 = ball.project(gaussian_vec(srng, 10));
    double gap[2];
    const int horizons[2] = {1024, 4096};
    for (int i = 0; i < 2; ++i) {
      const int T = horizons[i];
      RunTrace trace = run_optimistic_o2b(p, WeightSchedule::linear_zero_last(T),
                                          StepSizePolicy::adagrad_one_grad(D), T, x0, f_star);
      gap[i] = trace.final_suboptimality();
    }
    ratios.push_back(gap[1] / gap[0]);
  }
  const double med = median(ratios);
  report(7, med <= 0.7, fmt("universal nonsmooth: median gap(4T)/gap(T) = %.3f (need <= 0.7)", med));
}

void criterion_8() {
  UniversalSmooth s = universal_smooth_setup();
  const double D = s.ball.diameter();
  double gaps[3];
  bool calls_ok = true;
  const int horizons[3] = {256, 512, 1024};
  for (int i = 0; i < 3; ++i) {
    const int T = horizons[i];
    RunTrace trace = run_optimistic_o2b(s.inst.problem, WeightSchedule::linear(),
                                        StepSizePolicy::adagrad_two_grad(D), T, s.x0, 0.0);
    gaps[i] = trace.final_suboptimality();
    calls_ok = calls_ok && trace.oracle_calls == static_cast<std::uint64_t>(2 * T);
  }
  const double r1 = gaps[1] / gaps[0], r2 = gaps[2] / gaps[1];

  RunTrace one_grad = run_optimistic_o2b(s.inst.problem, WeightSchedule::linear_zero_last(1024),
                                         StepSizePolicy::adagrad_one_grad(D), 1024, s.x0, 0.0);
  const double log_gap_delta =
      std::abs(safe_log10(gaps[2]) - safe_log10(one_grad.final_suboptimality()));
  report(8, calls_ok && r1 <= 0.35 && r2 <= 0.35 && log_gap_delta <= 1.0,
         fmt("two-grad universal: ratios %.3f, %.3f, |dlog10 vs one-grad| %.2f, 2T calls %s", r1,
             r2, log_gap_delta, calls_ok ? "exact" : "WRONG"));
}

void criterion_9() {
  UniversalSmooth s = universal_smooth_setup();
  const int T = 4096;

  // sigma = 0 degenerates to the deterministic one-gradient run.
  std::mt19937_64 rng(1111);
  Eigen::VectorXd x0 = s.ball.project(gaussian_vec(rng, 20));
  RunTrace deterministic =
      run_optimistic_o2b(s.inst.problem, WeightSchedule::linear_zero_last(T),
                         StepSizePolicy::adagrad_one_grad(s.ball.diameter()), T, x0, 0.0);
  StochasticOracle zero_noise(s.inst.problem, 0.0, 77);
  RunTrace degenerate = run_stochastic_o2b(zero_noise, T, x0, 0.0);
  const double deviation = (degenerate.output - deterministic.output).norm();

  // sigma = 0.1: median gap across seeds is nonincreasing over the checkpoints.
  const int checkpoints[4] = {T / 8, T / 4, T / 2, T};
  std::vector<std::vector<double>> gaps(4);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    StochasticOracle oracle(s.inst.problem, 0.1, 2200 + seed);
    std::mt19937_64 srng(3200 + seed);
    RunTrace trace =
        run_stochastic_o2b(oracle, T, s.ball.project(gaussian_vec(srng, 20)), 0.0);
    for (int c = 0; c < 4; ++c) gaps[c].push_back(trace.points[checkpoints[c] - 1].suboptimality);
  }
  bool monotone = true;
  double med[4];
  for (int c = 0; c < 4; ++c) {
    med[c] = median(gaps[c]);
    if (c > 0 && med[c] > med[c - 1]) monotone = false;
  }
  report(9, deviation <= 1e-12 && monotone,
         fmt("stochastic: sigma=0 deviation %.3g, medians %.2g %.2g %.2g %.2g (%s)", deviation,
             med[0], med[1], med[2], med[3], monotone ? "nonincreasing" : "NOT monotone"));
}

void criterion_10() {
  ProblemSpec p = generate_synthetic_ls(500, 100, 1.0, 1e-3, 1.0, 42)
                      .with_domain(ProjectionDomain::unconstrained());
  ReferenceOptimum ref = compute_reference_optimum(p, ReferenceMode::ClosedForm);
  std::mt19937_64 rng(1212);
  Eigen::VectorXd x0 = gaussian_vec(rng, 100);
  const int T = 500;
  RunTrace opt = run_optimistic_o2b(p, WeightSchedule::linear(),
                                    StepSizePolicy::constant(1.0 / (4.0 * p.smoothness())), T,
                                    x0, ref.f_star);
  RunTrace nag = run_nag(p, T, x0, ref.f_star);
  RunTrace gd = run_gd(p, T, x0, ref.f_star);
  const double lo = safe_log10(opt.final_suboptimality());
  const double ln = safe_log10(nag.final_suboptimality());
  const double lg = safe_log10(gd.final_suboptimality());
  const bool close_to_nag = std::abs(lo - ln) <= 1.0;
  const bool beats_gd = lo <= lg - 1.0 && ln <= lg - 1.0;
  report(10, close_to_nag && beats_gd,
         fmt("baseline concordance: log10 gaps O2B %.2f, NAG %.2f, GD %.2f (|O2B-NAG| %s, beats GD %s)",
             lo, ln, lg, close_to_nag ? "ok" : "EXCEEDED", beats_gd ? "yes" : "NO"));
}

void criterion_11() {
  std::mt19937_64 rng(1313);
  Eigen::MatrixXd A = gaussian(rng, 30, 8);
  ProblemSpec ls = ProblemSpec::least_squares(A, gaussian_vec(rng, 30),
                                              ProjectionDomain::unconstrained());
  Eigen::VectorXd y(30);
  for (int i = 0; i < 30; ++i) y(i) = rng() % 2 ? 1.0 : -1.0;
  ProblemSpec logistic = ProblemSpec::logistic(gaussian(rng, 30, 8), y, 0.01,
                                               ProjectionDomain::unconstrained());
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd x = gaussian_vec(rng, 8);
    worst = std::max(worst, finite_difference_check(ls, x, 1e-5));
    worst = std::max(worst, finite_difference_check(logistic, x, 1e-5));
  }
  report(11, worst <= 1e-6, fmt("gradient correctness: worst relative FD error = %.3g", worst));
}

void criterion_12() {
  std::mt19937_64 rng(1414);
  ProblemSpec p = ProblemSpec::least_squares(gaussian(rng, 40, 20), gaussian_vec(rng, 40),
                                             ProjectionDomain::unconstrained());
  Eigen::VectorXd x0 = gaussian_vec(rng, 20);
  const WeightSchedule s = WeightSchedule::linear();
  double worst = 0.0;
  for (StabilizedKind kind : {StabilizedKind::UniXGrad, StabilizedKind::JRGS}) {
    std::vector<Eigen::VectorXd> bars{x0};
    std::vector<double> etas;
    std::vector<Eigen::VectorXd> gs;
    run_stabilized(p, kind, StepSizePolicy::constant(1.0 / (4.0 * p.smoothness())), 200, x0,
                   0.0,
                   [&](int, const Eigen::VectorXd& bar, double eta, const Eigen::VectorXd& g) {
                     bars.push_back(bar);
                     etas.push_back(eta);
                     gs.push_back(g);
                   });
    for (int t = 2; t < static_cast<int>(bars.size()); ++t) {
      const double beta = s.alpha(t) * s.partial_sum(t - 2) / (s.partial_sum(t) * s.alpha(t - 1));
      const Eigen::VectorXd rhs = bars[t - 1] + beta * (bars[t - 1] - bars[t - 2]) -
                                  etas[t - 2] * (s.alpha(t) / s.partial_sum(t)) * gs[t - 2];
      worst = std::max(worst, (bars[t] - rhs).norm());
    }
  }
  report(12, worst <= 1e-10, fmt("one-step recurrence: max residual = %.3g", worst));
}

void criterion_13() {
  bool pass = true;
  std::string note = "parser: round-trip, normalizations, ordering";
  try {
    // Round-trip fixpoint.
    std::istringstream fixture("1 1:0.25 3:-0.5\n-1 2:0.125\n1 1:1e-3 4:2\n");
    SparseDataset d = parse_libsvm(fixture);
    const std::string text = serialize_libsvm(d);
    std::istringstream again(text);
    pass = pass && parse_libsvm(again, d.dimension) == d;

    // The three label alphabets.
    std::istringstream pm("1 1:1\n-1 1:2\n"), zo("0 1:1\n1 1:2\n"), ot("1 1:1\n2 1:2\n");
    SparseDataset plus_minus = parse_libsvm(pm);
    pass = pass && plus_minus.labels()(0) == 1.0 && plus_minus.labels()(1) == -1.0;
    SparseDataset zero_one = parse_libsvm(zo);
    pass = pass && zero_one.labels()(0) == -1.0 && zero_one.labels()(1) == 1.0;
    SparseDataset ones_twos = parse_libsvm(ot);
    pass = pass && ones_twos.labels()(0) == 1.0 && ones_twos.labels()(1) == -1.0;

    // Non-monotone indices are rejected.
    bool threw = false;
    try {
      std::istringstream bad("1 3:1 2:1\n");
      parse_libsvm(bad);
    } catch (const ParseError&) {
      threw = true;
    }
    pass = pass && threw;
  } catch (const std::exception& e) {
    pass = false;
    note = std::string("parser: unexpected error: ") + e.what();
  }
  report(13, pass, note);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  criterion_12();
  criterion_13();
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures;
}
