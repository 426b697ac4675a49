#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "arcgd/driver.hpp"

namespace arcgd {

/// Coupled Rosenbrock objective, optionally with additive Gaussian noise on
/// both the objective value and the gradient. The noise stream is owned by
/// the problem and consumed deterministically.
struct RosenbrockProblem {
  std::size_t n = 2;      // dimension, >= 2
  double sigma_f = 1e-3;  // objective noise std; 0 disables
  double sigma_g = 1e-4;  // gradient noise std; 0 disables
  std::mt19937_64 rng;
};

/// Problem with the noise stream derived from (master_seed, run_index).
RosenbrockProblem make_problem(std::size_t n, double sigma_f, double sigma_g,
                               std::uint64_t master_seed,
                               std::uint64_t run_index);

/// sum_{i=1}^{n-1} [ 100*(x_{i+1} - x_i^2)^2 + (1 - x_i)^2 ].
/// Zero exactly at the all-ones point. Throws for n < 2.
double rosenbrock_value(std::span<const double> x);

/// Analytic gradient of rosenbrock_value with the boundary cases
///   df/dx_1 = -400 x_1 (x_2 - x_1^2) - 2 (1 - x_1)
///   df/dx_n =  200 (x_n - x_{n-1}^2).
std::vector<double> rosenbrock_gradient(std::span<const double> x);

/// Value plus one N(0, sigma_f^2) draw from the problem stream.
double noisy_value(RosenbrockProblem& problem, std::span<const double> x);

/// Gradient plus i.i.d. N(0, sigma_g^2) per component.
std::vector<double> noisy_gradient(RosenbrockProblem& problem,
                                   std::span<const double> x);

/// Uniform draw from [-3, 3]^n, reproducible from (master_seed, run_index).
std::vector<double> sample_initial_point(std::size_t n,
                                         std::uint64_t master_seed,
                                         std::uint64_t run_index);

/// prev_weight*prev + (1-prev_weight)*current.
double ema_smooth(double prev, double current, double prev_weight = 0.9);

/// Euclidean distance to the all-ones minimizer.
double distance_to_minimum(std::span<const double> x);

/// Stopping rules: an exponentially smoothed loss that stops improving by
/// more than min_improvement for more than `patience` consecutive iterations
/// terminates the run; the run converged only if the smoothed loss is at or
/// below loss_threshold. Gradient norms are never consulted.
struct ConvergencePolicy {
  double ema_prev_weight = 0.9;
  double min_improvement = 1e-5;
  std::uint64_t patience = 1000;
  double loss_threshold = 0.1;
  std::uint64_t max_iterations = 1000000;

  /// Throws std::invalid_argument unless 0 < ema_prev_weight < 1,
  /// patience >= 1 and max_iterations > patience.
  void validate() const;
};

enum class RunStatus { Continue, ConvergedTrue, FailedHighLoss, FailedMaxIter };

class ConvergenceTracker {
 public:
  explicit ConvergenceTracker(const ConvergencePolicy& policy)
      : policy_(policy) {}

  /// Feed one smoothed loss; `iteration` is 1-based.
  RunStatus check(double smoothed_loss, std::uint64_t iteration);

  double best() const { return best_; }
  std::uint64_t stagnant_iterations() const { return stagnant_; }

 private:
  ConvergencePolicy policy_;
  double best_ = std::numeric_limits<double>::infinity();
  std::uint64_t stagnant_ = 0;
};

/// One benchmark run's outcome row.
struct RunRecord {
  std::string test_set;          // e.g. "A2"
  std::uint64_t run_index = 0;   // 1-based
  std::string optimizer;
  bool converged = false;
  std::uint64_t iterations = 0;
  double final_loss = 0.0;           // last noisy observation
  double final_smoothed_loss = 0.0;  // EMA at termination
  double final_grad_norm = 0.0;      // noiseless gradient at the final point
  double distance_to_minimum = 0.0;
  double wall_time_s = 0.0;
};

/// Aggregate over one (test set, optimizer); averages cover converged runs
/// only and are absent when none converged.
struct RunSummary {
  std::string test_set;
  std::string optimizer;
  std::uint64_t total_runs = 0;
  std::uint64_t converged_runs = 0;
  double convergence_rate_pct = 0.0;
  std::optional<double> avg_iterations;
  std::optional<double> avg_time_s;
  std::optional<double> avg_distance;
  std::optional<double> avg_final_loss;
  std::optional<double> avg_final_grad_norm;
};

/// Throws for an empty list or mixed optimizer names.
RunSummary summarize_runs(const std::vector<RunRecord>& records);

struct TracePoint {
  std::uint64_t iteration = 0;
  double loss = 0.0;           // noisy observation
  double smoothed_loss = 0.0;
  double grad_norm = 0.0;      // norm of the gradient consumed this iteration
};

/// Runs one optimizer on one problem instance until the tracker terminates.
/// The initial point comes from (master_seed, run_index); the problem's own
/// stream supplies the noise. When trace_every > 0 and `trace` is non-null,
/// every trace_every-th iteration is appended to it.
RunRecord run_single(RosenbrockProblem problem, const OptimizerSpec& spec,
                     const ConvergencePolicy& policy,
                     std::uint64_t master_seed, std::uint64_t run_index,
                     int trace_every = 0,
                     std::vector<TracePoint>* trace = nullptr);

enum class MatrixConfig { A, B };

/// The two learning-rate-matched pairings:
///   A: Adam at ArcGD's effective learning rate (lr = a+b-c = 0.0109) vs
///      ArcGD defaults (adaptive floor, momentum).
///   B: Adam defaults (lr = 0.001) vs ArcGD a=0.0009, b=0.0001, c=1e-5
///      (effective learning rate 0.00099).
struct ConfigPair {
  std::string label;  // "A" or "B"
  OptimizerSpec adam;
  OptimizerSpec arcgd;
};

ConfigPair matrix_config(MatrixConfig cfg);

struct LabeledTrace {
  std::uint64_t run_index = 0;
  std::string optimizer;
  std::vector<TracePoint> points;
};

struct TestSetResult {
  std::string name;  // e.g. "A100"
  std::size_t dim = 0;
  std::vector<RunRecord> records;      // ordered by (run, optimizer)
  std::vector<RunSummary> summaries;   // one per optimizer
  std::vector<LabeledTrace> traces;    // only when tracing was requested
};

/// Runs the full (dims x runs) grid for both optimizers of the chosen
/// configuration. Both optimizers of a given run index share the initial
/// point and start from the same noise stream. Throws for empty dims, any
/// dim < 2, or runs_per_dim == 0.
std::vector<TestSetResult> run_matrix(MatrixConfig cfg,
                                      const std::vector<std::size_t>& dims,
                                      std::size_t runs_per_dim,
                                      const ConvergencePolicy& policy,
                                      std::uint64_t master_seed = 42,
                                      int trace_every = 0);

}  // namespace arcgd
