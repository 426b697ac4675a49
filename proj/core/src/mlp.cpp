#include "arcgd/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "arcgd/rng.hpp"

namespace arcgd {

namespace {

const std::vector<std::pair<std::string, std::vector<std::size_t>>>&
preset_table() {
  static const std::vector<std::pair<std::string, std::vector<std::size_t>>>
      presets = {
          {"tiny", {32}},
          {"shallow", {64}},
          {"medium", {512, 256}},
          {"deep", {1024, 512, 256, 128}},
          {"very_deep", {512, 512, 512, 256, 256}},
          {"const_shallow", {256}},
          {"const_medium", {256, 256}},
          {"const_deep", {256, 256, 256}},
      };
  return presets;
}

std::vector<std::size_t> layer_sizes(const MLPArchitecture& arch) {
  std::vector<std::size_t> sizes;
  sizes.push_back(arch.input_dim);
  sizes.insert(sizes.end(), arch.hidden.begin(), arch.hidden.end());
  sizes.push_back(arch.output_dim);
  return sizes;
}

void add_bias_rows(Matrix& m, const std::vector<double>& bias) {
  for (std::size_t i = 0; i < m.rows; ++i) {
    double* row = m.row(i);
    for (std::size_t j = 0; j < m.cols; ++j) row[j] += bias[j];
  }
}

void softmax_rows(Matrix& m) {
  for (std::size_t i = 0; i < m.rows; ++i) {
    double* row = m.row(i);
    double mx = row[0];
    for (std::size_t j = 1; j < m.cols; ++j) mx = std::max(mx, row[j]);
    double sum = 0.0;
    for (std::size_t j = 0; j < m.cols; ++j) {
      row[j] = std::exp(row[j] - mx);
      sum += row[j];
    }
    for (std::size_t j = 0; j < m.cols; ++j) row[j] /= sum;
  }
}

Matrix gather_rows(const Matrix& src, std::span<const std::size_t> indices) {
  Matrix out(indices.size(), src.cols);
  for (std::size_t i = 0; i < indices.size(); ++i)
    std::copy_n(src.row(indices[i]), src.cols, out.row(i));
  return out;
}

std::size_t argmax_row(const double* row, std::size_t n) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < n; ++j)
    if (row[j] > row[best]) best = j;  // ties keep the lowest index
  return best;
}

constexpr std::size_t kEvalChunk = 512;

}  // namespace

MLPArchitecture make_architecture(std::string_view preset,
                                  std::size_t input_dim,
                                  std::size_t output_dim) {
  for (const auto& [name, hidden] : preset_table())
    if (name == preset) return {input_dim, hidden, output_dim};
  throw std::invalid_argument("unknown architecture preset: " +
                              std::string(preset));
}

const std::vector<std::string>& architecture_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, hidden] : preset_table()) out.push_back(name);
    return out;
  }();
  return names;
}

std::size_t parameter_count(const MLPParams& params) {
  std::size_t count = 0;
  for (const Matrix& w : params.weights) count += w.data.size();
  for (const auto& b : params.biases) count += b.size();
  return count;
}

MLPParams he_normal_init(const MLPArchitecture& arch, std::uint64_t seed) {
  const std::vector<std::size_t> sizes = layer_sizes(arch);
  std::mt19937_64 rng = make_stream(seed, 0, kStreamHeInit);

  MLPParams params;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const std::size_t fan_in = sizes[l];
    const std::size_t fan_out = sizes[l + 1];
    std::normal_distribution<double> dist(
        0.0, std::sqrt(2.0 / static_cast<double>(fan_in)));
    Matrix w(fan_in, fan_out);
    for (double& v : w.data) v = dist(rng);
    params.weights.push_back(std::move(w));
    params.biases.emplace_back(fan_out, 0.0);
  }
  return params;
}

Matrix forward(const MLPParams& params, const Matrix& batch,
               ForwardCache* cache) {
  if (params.weights.empty()) throw std::invalid_argument("empty network");
  if (batch.cols != params.weights.front().rows)
    throw std::invalid_argument("batch width does not match input_dim");

  if (cache) {
    cache->input = batch;
    cache->pre_activations.clear();
    cache->activations.clear();
  }

  const std::size_t n_layers = params.weights.size();
  Matrix act = batch;
  for (std::size_t l = 0; l < n_layers; ++l) {
    Matrix z = matmul(act, params.weights[l]);
    add_bias_rows(z, params.biases[l]);
    if (cache) cache->pre_activations.push_back(z);
    if (l + 1 < n_layers) {
      for (double& v : z.data) v = std::max(0.0, v);
      if (cache) cache->activations.push_back(z);
      act = std::move(z);
    } else {
      softmax_rows(z);
      act = std::move(z);
    }
  }
  return act;
}

double cross_entropy(const Matrix& probabilities,
                     std::span<const int> labels) {
  if (probabilities.rows != labels.size())
    throw std::invalid_argument("cross_entropy: batch/label size mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < probabilities.rows; ++i) {
    const int label = labels[i];
    if (label < 0 || static_cast<std::size_t>(label) >= probabilities.cols)
      throw std::invalid_argument("cross_entropy: label out of range");
    const double p =
        std::max(probabilities(i, static_cast<std::size_t>(label)), 1e-12);
    sum -= std::log(p);
  }
  return sum / static_cast<double>(probabilities.rows);
}

MLPParams backward(const MLPParams& params, const ForwardCache& cache,
                   std::span<const int> labels) {
  const std::size_t n_layers = params.weights.size();
  if (cache.pre_activations.size() != n_layers)
    throw std::invalid_argument("backward: cache does not match params");
  const std::size_t batch = cache.input.rows;
  if (labels.size() != batch)
    throw std::invalid_argument("backward: label count mismatch");

  MLPParams grads;
  grads.weights.resize(n_layers);
  grads.biases.resize(n_layers);

  // Output delta: (probabilities - one_hot) / batch.
  Matrix delta = cache.pre_activations.back();
  softmax_rows(delta);
  for (std::size_t i = 0; i < batch; ++i)
    delta(i, static_cast<std::size_t>(labels[i])) -= 1.0;
  const double inv_batch = 1.0 / static_cast<double>(batch);
  for (double& v : delta.data) v *= inv_batch;

  for (std::size_t l = n_layers; l-- > 0;) {
    const Matrix& below =
        (l == 0) ? cache.input : cache.activations[l - 1];
    grads.weights[l] = matmul_tn(below, delta);
    std::vector<double> bias_grad(delta.cols, 0.0);
    for (std::size_t i = 0; i < delta.rows; ++i) {
      const double* row = delta.row(i);
      for (std::size_t j = 0; j < delta.cols; ++j) bias_grad[j] += row[j];
    }
    grads.biases[l] = std::move(bias_grad);

    if (l > 0) {
      Matrix next_delta = matmul_nt(delta, params.weights[l]);
      const Matrix& z = cache.pre_activations[l - 1];
      for (std::size_t i = 0; i < next_delta.data.size(); ++i)
        if (z.data[i] <= 0.0) next_delta.data[i] = 0.0;
      delta = std::move(next_delta);
    }
  }
  return grads;
}

double evaluate(const MLPParams& params, const Matrix& features,
                std::span<const int> labels) {
  if (features.rows != labels.size())
    throw std::invalid_argument("evaluate: feature/label size mismatch");
  std::size_t correct = 0;
  for (std::size_t start = 0; start < features.rows; start += kEvalChunk) {
    const std::size_t count = std::min(kEvalChunk, features.rows - start);
    Matrix chunk(count, features.cols);
    std::copy_n(features.row(start), count * features.cols,
                chunk.data.begin());
    const Matrix probs = forward(params, chunk);
    for (std::size_t i = 0; i < count; ++i)
      if (argmax_row(probs.row(i), probs.cols) ==
          static_cast<std::size_t>(labels[start + i]))
        ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(features.rows);
}

double mean_loss(const MLPParams& params, const Matrix& features,
                 std::span<const int> labels) {
  if (features.rows != labels.size())
    throw std::invalid_argument("mean_loss: feature/label size mismatch");
  double sum = 0.0;
  for (std::size_t start = 0; start < features.rows; start += kEvalChunk) {
    const std::size_t count = std::min(kEvalChunk, features.rows - start);
    Matrix chunk(count, features.cols);
    std::copy_n(features.row(start), count * features.cols,
                chunk.data.begin());
    const Matrix probs = forward(params, chunk);
    sum += cross_entropy(probs, labels.subspan(start, count)) *
           static_cast<double>(count);
  }
  return sum / static_cast<double>(features.rows);
}

TrainResult train(const MLPArchitecture& arch, const OptimizerSpec& spec,
                  const TrainPolicy& policy, const Dataset& dataset) {
  if (arch.input_dim != dataset.train_features.cols)
    throw std::invalid_argument("train: architecture/dataset width mismatch");
  if (arch.output_dim < dataset.num_classes)
    throw std::invalid_argument("train: output_dim below class count");
  if (policy.batch_size == 0 || policy.max_iterations == 0)
    throw std::invalid_argument("train: degenerate policy");

  TrainResult result;
  result.optimizer = spec.name;

  MLPParams params = he_normal_init(arch, policy.seed);

  // One driver per tensor, in layer order: weights then bias.
  std::vector<VectorOptimizer> opts;
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    opts.emplace_back(spec, params.weights[l].data);
    opts.emplace_back(spec, params.biases[l]);
  }

  const std::size_t n_train = dataset.train_features.rows;
  const std::size_t batch_size = std::min(policy.batch_size, n_train);
  std::mt19937_64 shuffle_rng = make_stream(policy.seed, 0, kStreamShuffle);
  std::vector<std::size_t> order(n_train);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), shuffle_rng);
  std::size_t cursor = 0;

  double best_acc = -1.0;
  std::uint64_t last_improvement = 0;

  std::vector<std::size_t> batch_idx(batch_size);
  std::vector<int> batch_labels(batch_size);
  ForwardCache cache;

  auto record_point = [&](std::uint64_t iter) {
    CurvePoint p;
    p.iteration = iter;
    p.train_loss =
        mean_loss(params, dataset.train_features, dataset.train_labels);
    p.train_acc =
        evaluate(params, dataset.train_features, dataset.train_labels);
    p.test_acc = evaluate(params, dataset.test_features, dataset.test_labels);
    result.curve.push_back(p);
    return p;
  };

  for (std::uint64_t iter = 1; iter <= policy.max_iterations; ++iter) {
    if (cursor + batch_size > n_train) {
      std::shuffle(order.begin(), order.end(), shuffle_rng);
      cursor = 0;
    }
    for (std::size_t i = 0; i < batch_size; ++i) {
      batch_idx[i] = order[cursor + i];
      batch_labels[i] = dataset.train_labels[batch_idx[i]];
    }
    cursor += batch_size;

    const Matrix batch = gather_rows(dataset.train_features, batch_idx);
    forward(params, batch, &cache);
    const MLPParams grads = backward(params, cache, batch_labels);

    for (std::size_t l = 0; l < params.weights.size(); ++l) {
      opts[2 * l].step(grads.weights[l].data);
      std::copy(opts[2 * l].x().begin(), opts[2 * l].x().end(),
                params.weights[l].data.begin());
      opts[2 * l + 1].step(grads.biases[l]);
      std::copy(opts[2 * l + 1].x().begin(), opts[2 * l + 1].x().end(),
                params.biases[l].begin());
    }
    result.iterations = iter;

    const bool checkpoint =
        std::find(policy.eval_checkpoints.begin(),
                  policy.eval_checkpoints.end(),
                  iter) != policy.eval_checkpoints.end();
    if (iter % policy.eval_every == 0 || checkpoint ||
        iter == policy.max_iterations) {
      const CurvePoint p = record_point(iter);
      if (p.test_acc >= best_acc + policy.early_stop_min_delta) {
        best_acc = p.test_acc;
        last_improvement = iter;
      } else if (iter - last_improvement > policy.early_stop_patience) {
        result.early_stopped = true;
        break;
      }
    }
  }

  for (const VectorOptimizer& opt : opts)
    result.max_abs_step = std::max(result.max_abs_step, opt.max_abs_step());
  result.params = std::move(params);
  return result;
}

std::vector<AblationRow> eta_low_ablation(
    const std::vector<std::string>& archs, const Dataset& dataset,
    const TrainPolicy& policy, double eta_low_first, double eta_low_second) {
  if (archs.empty())
    throw std::invalid_argument("eta_low_ablation: no architectures");

  std::vector<AblationRow> rows;
  for (const std::string& name : archs) {
    const MLPArchitecture arch = make_architecture(
        name, dataset.train_features.cols, dataset.num_classes);

    auto run_arm = [&](double eta) {
      OptimizerSpec spec = make_optimizer_spec("arcgd");
      std::get<ArcGDConfig>(spec.config).eta_low = eta;
      return train(arch, spec, policy, dataset);
    };
    const TrainResult first = run_arm(eta_low_first);
    const TrainResult second = run_arm(eta_low_second);

    auto acc_at = [](const TrainResult& r, std::uint64_t iter) {
      // Accuracy at the last recorded point at or before `iter` (runs may
      // stop early).
      double acc = 0.0;
      for (const CurvePoint& p : r.curve)
        if (p.iteration <= iter) acc = p.test_acc;
      return acc;
    };

    for (std::uint64_t checkpoint : policy.eval_checkpoints) {
      if (checkpoint > policy.max_iterations) continue;
      AblationRow row;
      row.arch = name;
      row.iteration = checkpoint;
      row.eta_low_first = eta_low_first;
      row.acc_first = acc_at(first, checkpoint);
      row.eta_low_second = eta_low_second;
      row.acc_second = acc_at(second, checkpoint);
      row.delta = row.acc_second - row.acc_first;
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace arcgd
