#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "arcgd/dataset.hpp"
#include "arcgd/driver.hpp"
#include "arcgd/matrix.hpp"

namespace arcgd {

struct MLPArchitecture {
  std::size_t input_dim = 3072;
  std::vector<std::size_t> hidden;
  std::size_t output_dim = 10;
};

/// Named hidden-layer presets: tiny [32], shallow [64], medium [512,256],
/// deep [1024,512,256,128], very_deep [512,512,512,256,256],
/// const_shallow [256], const_medium [256,256], const_deep [256,256,256].
/// Throws std::invalid_argument for unknown names.
MLPArchitecture make_architecture(std::string_view preset,
                                  std::size_t input_dim = 3072,
                                  std::size_t output_dim = 10);

const std::vector<std::string>& architecture_names();

/// Per-layer weights (fan_in x fan_out) and biases (fan_out).
struct MLPParams {
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> biases;
};

std::size_t parameter_count(const MLPParams& params);

/// Weights ~ N(0, 2/fan_in), biases zero. Deterministic in seed.
MLPParams he_normal_init(const MLPArchitecture& arch, std::uint64_t seed);

/// Everything backward() needs from the matching forward() call.
struct ForwardCache {
  Matrix input;
  std::vector<Matrix> pre_activations;  // one per layer
  std::vector<Matrix> activations;      // post-ReLU, hidden layers only
};

/// Hidden layers affine+ReLU, output affine+softmax (max-subtracted).
/// Returns the class probabilities, one row per sample.
Matrix forward(const MLPParams& params, const Matrix& batch,
               ForwardCache* cache = nullptr);

/// Mean over the batch of -log p[label], with p clamped at 1e-12.
double cross_entropy(const Matrix& probabilities, std::span<const int> labels);

/// Exact gradients of the mean cross-entropy; same shapes as the params.
MLPParams backward(const MLPParams& params, const ForwardCache& cache,
                   std::span<const int> labels);

/// Argmax match rate in [0,1]; ties resolve to the lowest class index.
double evaluate(const MLPParams& params, const Matrix& features,
                std::span<const int> labels);

/// Mean cross-entropy over a full split, evaluated in chunks.
double mean_loss(const MLPParams& params, const Matrix& features,
                 std::span<const int> labels);

struct TrainPolicy {
  std::size_t batch_size = 128;
  std::uint64_t max_iterations = 20000;
  std::vector<std::uint64_t> eval_checkpoints = {5000, 20000};
  std::uint64_t early_stop_patience = 500;   // iterations
  double early_stop_min_delta = 1e-4;        // accuracy delta
  std::uint64_t eval_every = 100;            // metric/monitor cadence
  std::uint64_t seed = 42;
};

struct CurvePoint {
  std::uint64_t iteration = 0;
  double train_loss = 0.0;
  double train_acc = 0.0;
  double test_acc = 0.0;
};

struct TrainResult {
  std::string optimizer;
  std::vector<CurvePoint> curve;
  MLPParams params;
  std::uint64_t iterations = 0;     // last iteration executed
  bool early_stopped = false;
  double max_abs_step = 0.0;        // largest per-weight |dx| over the run
};

/// Minibatch training loop: full shuffle each epoch, sequential batches of
/// policy.batch_size, metrics recorded every eval_every iterations and at
/// every checkpoint. Early stopping monitors test-split accuracy and halts
/// once it has not improved by early_stop_min_delta for more than
/// early_stop_patience iterations. Deterministic given the policy seed.
TrainResult train(const MLPArchitecture& arch, const OptimizerSpec& spec,
                  const TrainPolicy& policy, const Dataset& dataset);

struct AblationRow {
  std::string arch;
  std::uint64_t iteration = 0;
  double eta_low_first = 0.0;
  double acc_first = 0.0;
  double eta_low_second = 0.0;
  double acc_second = 0.0;
  double delta = 0.0;  // acc_second - acc_first
};

/// Trains the adaptive-floor ArcGD variant twice per architecture, identical
/// in everything except eta_low, and tabulates test accuracy at each
/// checkpoint of the policy.
std::vector<AblationRow> eta_low_ablation(const std::vector<std::string>& archs,
                                          const Dataset& dataset,
                                          const TrainPolicy& policy,
                                          double eta_low_first = 0.01,
                                          double eta_low_second = 0.1);

}  // namespace arcgd
