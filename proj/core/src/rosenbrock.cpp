#include "arcgd/rosenbrock.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "arcgd/rng.hpp"

namespace arcgd {

namespace {

void require_dim(std::size_t n) {
  if (n < 2) throw std::invalid_argument("rosenbrock requires n >= 2");
}

bool all_finite(std::span<const double> v) {
  for (double e : v)
    if (!std::isfinite(e)) return false;
  return true;
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double e : v) s += e * e;
  return std::sqrt(s);
}

}  // namespace

RosenbrockProblem make_problem(std::size_t n, double sigma_f, double sigma_g,
                               std::uint64_t master_seed,
                               std::uint64_t run_index) {
  require_dim(n);
  if (sigma_f < 0.0 || sigma_g < 0.0)
    throw std::invalid_argument("noise std must be non-negative");
  RosenbrockProblem p;
  p.n = n;
  p.sigma_f = sigma_f;
  p.sigma_g = sigma_g;
  p.rng = make_stream(master_seed, run_index, kStreamNoise);
  return p;
}

double rosenbrock_value(std::span<const double> x) {
  require_dim(x.size());
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double a = x[i + 1] - x[i] * x[i];
    const double b = 1.0 - x[i];
    sum += 100.0 * a * a + b * b;
  }
  return sum;
}

std::vector<double> rosenbrock_gradient(std::span<const double> x) {
  require_dim(x.size());
  const std::size_t n = x.size();
  std::vector<double> g(n);
  g[0] = -400.0 * x[0] * (x[1] - x[0] * x[0]) - 2.0 * (1.0 - x[0]);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    g[i] = 200.0 * (x[i] - x[i - 1] * x[i - 1]) -
           400.0 * x[i] * (x[i + 1] - x[i] * x[i]) - 2.0 * (1.0 - x[i]);
  }
  g[n - 1] = 200.0 * (x[n - 1] - x[n - 2] * x[n - 2]);
  return g;
}

double noisy_value(RosenbrockProblem& problem, std::span<const double> x) {
  double v = rosenbrock_value(x);
  if (problem.sigma_f > 0.0) {
    std::normal_distribution<double> noise(0.0, problem.sigma_f);
    v += noise(problem.rng);
  }
  return v;
}

std::vector<double> noisy_gradient(RosenbrockProblem& problem,
                                   std::span<const double> x) {
  std::vector<double> g = rosenbrock_gradient(x);
  if (problem.sigma_g > 0.0) {
    std::normal_distribution<double> noise(0.0, problem.sigma_g);
    for (double& gi : g) gi += noise(problem.rng);
  }
  return g;
}

std::vector<double> sample_initial_point(std::size_t n,
                                         std::uint64_t master_seed,
                                         std::uint64_t run_index) {
  require_dim(n);
  std::mt19937_64 rng = make_stream(master_seed, run_index, kStreamInit);
  std::uniform_real_distribution<double> uniform(-3.0, 3.0);
  std::vector<double> x(n);
  for (double& xi : x) xi = uniform(rng);
  return x;
}

double ema_smooth(double prev, double current, double prev_weight) {
  return prev_weight * prev + (1.0 - prev_weight) * current;
}

double distance_to_minimum(std::span<const double> x) {
  double s = 0.0;
  for (double xi : x) {
    const double d = xi - 1.0;
    s += d * d;
  }
  return std::sqrt(s);
}

void ConvergencePolicy::validate() const {
  if (!(ema_prev_weight > 0.0 && ema_prev_weight < 1.0))
    throw std::invalid_argument("ema_prev_weight must lie in (0, 1)");
  if (patience < 1) throw std::invalid_argument("patience must be >= 1");
  if (max_iterations <= patience)
    throw std::invalid_argument("max_iterations must exceed patience");
}

RunStatus ConvergenceTracker::check(double smoothed_loss,
                                    std::uint64_t iteration) {
  if (smoothed_loss > best_ - policy_.min_improvement) {
    ++stagnant_;
  } else {
    stagnant_ = 0;
    best_ = smoothed_loss;
  }
  if (stagnant_ > policy_.patience)
    return smoothed_loss <= policy_.loss_threshold ? RunStatus::ConvergedTrue
                                                   : RunStatus::FailedHighLoss;
  if (iteration >= policy_.max_iterations) return RunStatus::FailedMaxIter;
  return RunStatus::Continue;
}

RunSummary summarize_runs(const std::vector<RunRecord>& records) {
  if (records.empty())
    throw std::invalid_argument("summarize_runs: empty record list");
  RunSummary s;
  s.test_set = records.front().test_set;
  s.optimizer = records.front().optimizer;
  s.total_runs = records.size();

  double iters = 0, time = 0, dist = 0, loss = 0, gnorm = 0;
  for (const RunRecord& r : records) {
    if (r.optimizer != s.optimizer)
      throw std::invalid_argument("summarize_runs: mixed optimizers");
    if (!r.converged) continue;
    ++s.converged_runs;
    iters += static_cast<double>(r.iterations);
    time += r.wall_time_s;
    dist += r.distance_to_minimum;
    loss += r.final_loss;
    gnorm += r.final_grad_norm;
  }
  s.convergence_rate_pct = 100.0 * static_cast<double>(s.converged_runs) /
                           static_cast<double>(s.total_runs);
  if (s.converged_runs > 0) {
    const double k = static_cast<double>(s.converged_runs);
    s.avg_iterations = iters / k;
    s.avg_time_s = time / k;
    s.avg_distance = dist / k;
    s.avg_final_loss = loss / k;
    s.avg_final_grad_norm = gnorm / k;
  }
  return s;
}

RunRecord run_single(RosenbrockProblem problem, const OptimizerSpec& spec,
                     const ConvergencePolicy& policy,
                     std::uint64_t master_seed, std::uint64_t run_index,
                     int trace_every, std::vector<TracePoint>* trace) {
  policy.validate();
  RunRecord rec;
  rec.run_index = run_index;
  rec.optimizer = spec.name;

  std::vector<double> x0 = sample_initial_point(problem.n, master_seed, run_index);
  VectorOptimizer opt(spec, std::move(x0));

  ConvergenceTracker tracker(policy);
  RunStatus status = RunStatus::Continue;
  double smoothed = 0.0;
  double loss = 0.0;
  std::uint64_t iter = 0;

  // Snapshot for divergence handling: final values come from the last
  // finite state.
  std::vector<double> last_finite_x = opt.x();
  double last_finite_loss = rosenbrock_value(last_finite_x);
  double last_finite_smoothed = last_finite_loss;
  bool diverged = false;

  const auto t_start = std::chrono::steady_clock::now();
  while (status == RunStatus::Continue) {
    ++iter;
    const std::vector<double> g = noisy_gradient(problem, opt.x());
    opt.step(g);
    loss = noisy_value(problem, opt.x());
    smoothed = (iter == 1) ? loss
                           : ema_smooth(smoothed, loss, policy.ema_prev_weight);

    if (!std::isfinite(loss) || !all_finite(opt.x())) {
      diverged = true;
      break;
    }
    last_finite_x = opt.x();
    last_finite_loss = loss;
    last_finite_smoothed = smoothed;

    if (trace_every > 0 && trace &&
        iter % static_cast<std::uint64_t>(trace_every) == 0)
      trace->push_back({iter, loss, smoothed, norm2(g)});

    status = tracker.check(smoothed, iter);
  }
  const auto t_end = std::chrono::steady_clock::now();

  rec.converged = !diverged && status == RunStatus::ConvergedTrue;
  rec.iterations = iter;
  rec.final_loss = last_finite_loss;
  rec.final_smoothed_loss = last_finite_smoothed;
  rec.final_grad_norm = norm2(rosenbrock_gradient(last_finite_x));
  rec.distance_to_minimum = distance_to_minimum(last_finite_x);
  rec.wall_time_s = std::chrono::duration<double>(t_end - t_start).count();
  return rec;
}

ConfigPair matrix_config(MatrixConfig cfg) {
  ConfigPair pair;
  if (cfg == MatrixConfig::A) {
    pair.label = "A";
    AdamConfig adam;
    adam.lr = 0.0109;  // ArcGD's effective learning rate a+b-c
    pair.adam = {"Adam", adam};
    pair.arcgd = make_optimizer_spec("arcgd");
  } else {
    pair.label = "B";
    pair.adam = {"Adam", AdamConfig{}};
    ArcGDConfig arc;
    arc.a = 0.0009;
    arc.b = 0.0001;
    arc.c = 1e-5;
    arc.adaptive_c = true;
    arc.use_momentum = true;
    pair.arcgd = {"ArcGD", arc};
  }
  return pair;
}

std::vector<TestSetResult> run_matrix(MatrixConfig cfg,
                                      const std::vector<std::size_t>& dims,
                                      std::size_t runs_per_dim,
                                      const ConvergencePolicy& policy,
                                      std::uint64_t master_seed,
                                      int trace_every) {
  if (dims.empty()) throw std::invalid_argument("run_matrix: no dimensions");
  for (std::size_t d : dims) require_dim(d);
  if (runs_per_dim == 0)
    throw std::invalid_argument("run_matrix: runs_per_dim must be positive");
  policy.validate();

  const ConfigPair pair = matrix_config(cfg);

  std::vector<TestSetResult> results;
  for (std::size_t dim : dims) {
    TestSetResult set;
    set.dim = dim;
    set.name = pair.label + std::to_string(dim);

    std::vector<RunRecord> adam_records, arcgd_records;
    for (std::uint64_t run = 1; run <= runs_per_dim; ++run) {
      // Both optimizers of a run share the initial point and see the same
      // noise stream from its start.
      for (const OptimizerSpec* spec : {&pair.adam, &pair.arcgd}) {
        RosenbrockProblem problem =
            make_problem(dim, 1e-3, 1e-4, master_seed, run);
        std::vector<TracePoint> points;
        RunRecord rec = run_single(
            std::move(problem), *spec, policy, master_seed, run, trace_every,
            trace_every > 0 ? &points : nullptr);
        rec.test_set = set.name;
        if (trace_every > 0)
          set.traces.push_back({run, spec->name, std::move(points)});
        (spec == &pair.adam ? adam_records : arcgd_records)
            .push_back(std::move(rec));
      }
    }

    std::vector<RunSummary> summaries{summarize_runs(adam_records),
                                      summarize_runs(arcgd_records)};

    for (std::uint64_t run = 0; run < runs_per_dim; ++run) {
      set.records.push_back(adam_records[run]);   // "Adam" < "ArcGD"
      set.records.push_back(arcgd_records[run]);
    }
    set.summaries = std::move(summaries);
    results.push_back(std::move(set));
  }
  return results;
}

}  // namespace arcgd
