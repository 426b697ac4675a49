#include "arcgd/mlp.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>

#include "oracles.hpp"

using namespace arcgd;

namespace {

const std::filesystem::path kTmp =
    std::filesystem::temp_directory_path() / "arcgd_mlp_tests";

// Writes CIFAR-10-format records where every pixel of a sample equals
// label * 25, so samples are identifiable by content after splitting.
std::filesystem::path write_flat_cifar(const std::filesystem::path& name,
                                       std::size_t records) {
  const auto path = kTmp / name;
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  for (std::size_t i = 0; i < records; ++i) {
    const int label = static_cast<int>(i % 10);
    out.put(static_cast<char>(label));
    for (int j = 0; j < 3072; ++j)
      out.put(static_cast<char>(label * 25));
  }
  return path;
}

double stddev(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  return std::sqrt(var / static_cast<double>(v.size()));
}

}  // namespace

TEST(CifarLoader, RecordArithmeticAndScaling) {
  const auto path = write_flat_cifar("flat.bin", 25);
  const Dataset ds = load_cifar10_binary(path, 42);
  EXPECT_EQ(ds.train_features.rows + ds.test_features.rows, 25u);
  EXPECT_EQ(ds.train_features.rows, 20u);  // 80:20
  EXPECT_EQ(ds.train_features.cols, 3072u);

  // Content identifies the label: pixel = label*25/255; label 9 appears.
  bool saw_nine = false;
  for (std::size_t i = 0; i < ds.train_features.rows; ++i) {
    const int label = ds.train_labels[i];
    EXPECT_GE(label, 0);
    EXPECT_LE(label, 9);
    saw_nine |= label == 9;
    for (std::size_t j = 0; j < 8; ++j)
      EXPECT_DOUBLE_EQ(ds.train_features(i, j), label * 25 / 255.0);
  }
  for (std::size_t i = 0; i < ds.test_features.rows; ++i)
    saw_nine |= ds.test_labels[i] == 9;
  EXPECT_TRUE(saw_nine);
}

TEST(CifarLoader, PixelByte255MapsToOne) {
  std::filesystem::create_directories(kTmp);
  const auto path = kTmp / "bright.bin";
  std::ofstream out(path, std::ios::binary);
  for (int rec = 0; rec < 10; ++rec) {
    out.put(static_cast<char>(rec));
    for (int j = 0; j < 3072; ++j) out.put(static_cast<char>(255));
  }
  out.close();
  const Dataset ds = load_cifar10_binary(path, 1);
  EXPECT_DOUBLE_EQ(ds.train_features(0, 0), 1.0);
}

TEST(CifarLoader, SubsetAndDirectory) {
  write_flat_cifar("combined/part_a.bin", 10);
  write_flat_cifar("combined/part_b.bin", 10);
  const Dataset both = load_cifar10_binary(kTmp / "combined", 42);
  EXPECT_EQ(both.train_features.rows + both.test_features.rows, 20u);

  const auto single = write_flat_cifar("flat20.bin", 20);
  const Dataset subset = load_cifar10_binary(single, 42, 10);
  EXPECT_EQ(subset.train_features.rows + subset.test_features.rows, 10u);
}

TEST(CifarLoader, MalformedInputsRejected) {
  std::filesystem::create_directories(kTmp);
  {
    const auto path = kTmp / "truncated.bin";
    std::ofstream out(path, std::ios::binary);
    for (int i = 0; i < 3072 * 5; ++i) out.put(char(7));
    out.close();
    EXPECT_THROW(load_cifar10_binary(path, 42), std::runtime_error);
  }
  {
    const auto path = kTmp / "badlabel.bin";
    std::ofstream out(path, std::ios::binary);
    out.put(char(12));  // label out of range
    for (int j = 0; j < 3072; ++j) out.put(char(0));
    out.put(char(3));
    for (int j = 0; j < 3072; ++j) out.put(char(0));
    out.close();
    EXPECT_THROW(load_cifar10_binary(path, 42), std::runtime_error);
  }
  EXPECT_THROW(load_cifar10_binary(kTmp / "missing.bin", 42),
               std::runtime_error);
}

TEST(SyntheticDataset, DeterministicAndCovering) {
  const Dataset a = synthetic_dataset(100, 8, 4, 7);
  const Dataset b = synthetic_dataset(100, 8, 4, 7);
  EXPECT_EQ(a.train_features.data, b.train_features.data);
  EXPECT_EQ(a.train_labels, b.train_labels);
  EXPECT_EQ(a.test_labels, b.test_labels);

  std::set<int> seen(a.train_labels.begin(), a.train_labels.end());
  seen.insert(a.test_labels.begin(), a.test_labels.end());
  EXPECT_EQ(seen.size(), 4u);

  const Dataset c = synthetic_dataset(100, 8, 4, 8);
  EXPECT_NE(a.train_features.data, c.train_features.data);
}

TEST(SyntheticDataset, LinearOracleBeatsChance) {
  const Dataset ds = synthetic_dataset(2000, 32, 4, 42);
  const oracles::LeastSquaresClassifier oracle(ds.train_features,
                                               ds.train_labels, 4);
  const double acc = oracle.accuracy(ds.test_features, ds.test_labels);
  EXPECT_GT(acc, 0.8);  // comfortably above the 0.25 chance level
}

TEST(HeInit, StdAndBiases) {
  const MLPArchitecture arch{3072, {512, 512}, 10};
  const MLPParams params = he_normal_init(arch, 42);
  ASSERT_EQ(params.weights.size(), 3u);

  EXPECT_NEAR(stddev(params.weights[0].data), std::sqrt(2.0 / 3072.0),
              0.05 * std::sqrt(2.0 / 3072.0));
  EXPECT_NEAR(stddev(params.weights[1].data), std::sqrt(2.0 / 512.0),
              0.05 * std::sqrt(2.0 / 512.0));

  for (const auto& bias : params.biases)
    for (double b : bias) EXPECT_EQ(b, 0.0);

  const MLPParams again = he_normal_init(arch, 42);
  EXPECT_EQ(params.weights[0].data, again.weights[0].data);
}

TEST(Architectures, PresetsAndParameterCounts) {
  EXPECT_EQ(architecture_names().size(), 8u);
  const MLPArchitecture tiny = make_architecture("tiny");
  EXPECT_EQ(tiny.hidden, std::vector<std::size_t>{32});
  EXPECT_EQ(parameter_count(he_normal_init(tiny, 1)), 98666u);  // ~98K

  EXPECT_EQ(make_architecture("deep").hidden,
            (std::vector<std::size_t>{1024, 512, 256, 128}));
  EXPECT_EQ(make_architecture("const_medium").hidden,
            (std::vector<std::size_t>{256, 256}));
  EXPECT_THROW(make_architecture("huge"), std::invalid_argument);
}

TEST(Forward, ZeroParamsGiveUniformProbabilities) {
  MLPArchitecture arch{8, {4}, 10};
  MLPParams params = he_normal_init(arch, 3);
  for (Matrix& w : params.weights) std::fill(w.data.begin(), w.data.end(), 0.0);

  Matrix batch(5, 8);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (double& v : batch.data) v = dist(rng);

  const Matrix probs = forward(params, batch);
  for (double p : probs.data) EXPECT_DOUBLE_EQ(p, 0.1);
}

TEST(Forward, RowsSumToOneAndShiftInvariance) {
  MLPArchitecture arch{6, {12}, 4};
  MLPParams params = he_normal_init(arch, 5);
  Matrix batch(17, 6);
  std::mt19937_64 rng(6);
  std::normal_distribution<double> dist(0.0, 2.0);
  for (double& v : batch.data) v = dist(rng);

  const Matrix probs = forward(params, batch);
  for (std::size_t i = 0; i < probs.rows; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < probs.cols; ++j) {
      EXPECT_GT(probs(i, j), 0.0);
      EXPECT_LT(probs(i, j), 1.0);
      sum += probs(i, j);
    }
    EXPECT_NEAR(sum, 1.0, 1e-9);
  }

  // Adding a constant to every output logit leaves probabilities unchanged.
  MLPParams shifted = params;
  for (double& b : shifted.biases.back()) b += 37.5;
  const Matrix probs2 = forward(shifted, batch);
  for (std::size_t i = 0; i < probs.data.size(); ++i)
    EXPECT_NEAR(probs.data[i], probs2.data[i], 1e-12);

  Matrix wrong(3, 5);
  EXPECT_THROW(forward(params, wrong), std::invalid_argument);
}

TEST(CrossEntropy, Examples) {
  Matrix uniform(3, 10);
  std::fill(uniform.data.begin(), uniform.data.end(), 0.1);
  EXPECT_NEAR(cross_entropy(uniform, std::vector<int>{0, 5, 9}),
              std::log(10.0), 1e-12);

  Matrix onehot(1, 4);
  onehot(0, 2) = 1.0;
  EXPECT_EQ(cross_entropy(onehot, std::vector<int>{2}), 0.0);

  Matrix half(1, 2);
  half(0, 0) = 0.5;
  half(0, 1) = 0.5;
  EXPECT_NEAR(cross_entropy(half, std::vector<int>{1}), std::log(2.0), 1e-12);

  // Clamp keeps the loss finite even for probability zero.
  Matrix zero(1, 2);
  zero(0, 1) = 1.0;
  EXPECT_NEAR(cross_entropy(zero, std::vector<int>{0}), -std::log(1e-12),
              1e-9);
}

TEST(Backward, FiniteDifferenceOracle) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> dist(0.0, 1.0);
  const MLPArchitecture arch{4, {2}, 3};

  for (int draw = 0; draw < 20; ++draw) {
    MLPParams params = he_normal_init(arch, 100 + draw);
    Matrix batch(8, 4);
    for (double& v : batch.data) v = dist(rng);
    std::vector<int> labels(8);
    for (int& l : labels) l = static_cast<int>(rng() % 3);

    ForwardCache cache;
    forward(params, batch, &cache);
    const MLPParams grads = backward(params, cache, labels);

    // Flatten: loss as a function of one packed parameter vector.
    auto unpack = [&](const std::vector<double>& flat) {
      MLPParams p = params;
      std::size_t k = 0;
      for (Matrix& w : p.weights)
        for (double& v : w.data) v = flat[k++];
      for (auto& b : p.biases)
        for (double& v : b) v = flat[k++];
      return p;
    };
    std::vector<double> flat;
    for (const Matrix& w : params.weights)
      flat.insert(flat.end(), w.data.begin(), w.data.end());
    for (const auto& b : params.biases)
      flat.insert(flat.end(), b.begin(), b.end());

    const auto numeric = oracles::central_difference_gradient(
        [&](const std::vector<double>& f) {
          return cross_entropy(forward(unpack(f), batch), labels);
        },
        flat, 1e-5);

    std::vector<double> analytic;
    for (const Matrix& w : grads.weights)
      analytic.insert(analytic.end(), w.data.begin(), w.data.end());
    for (const auto& b : grads.biases)
      analytic.insert(analytic.end(), b.begin(), b.end());

    ASSERT_EQ(analytic.size(), numeric.size());
    for (std::size_t i = 0; i < analytic.size(); ++i)
      EXPECT_LT(std::abs(analytic[i] - numeric[i]),
                1e-4 * std::max(1.0, std::abs(analytic[i])));
  }
}

TEST(Backward, ZeroAtExactOneHot) {
  // A single linear layer with huge weights drives softmax to exact one-hot.
  MLPArchitecture arch{3, {}, 3};
  MLPParams params = he_normal_init(arch, 2);
  std::fill(params.weights[0].data.begin(), params.weights[0].data.end(), 0.0);
  for (std::size_t j = 0; j < 3; ++j) params.weights[0](j, j) = 1e5;

  Matrix batch(3, 3);
  for (std::size_t i = 0; i < 3; ++i) batch(i, i) = 1.0;
  const std::vector<int> labels{0, 1, 2};

  ForwardCache cache;
  const Matrix probs = forward(params, batch, &cache);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(probs(i, i), 1.0);

  const MLPParams grads = backward(params, cache, labels);
  for (const Matrix& w : grads.weights)
    for (double v : w.data) EXPECT_EQ(v, 0.0);
  for (const auto& b : grads.biases)
    for (double v : b) EXPECT_EQ(v, 0.0);
}

TEST(Backward, DeadReluUnitHasZeroIncomingGradient) {
  MLPArchitecture arch{4, {3}, 2};
  MLPParams params = he_normal_init(arch, 9);
  params.biases[0][1] = -1e6;  // unit 1 never activates

  Matrix batch(6, 4);
  std::mt19937_64 rng(12);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (double& v : batch.data) v = dist(rng);
  const std::vector<int> labels{0, 1, 0, 1, 0, 1};

  ForwardCache cache;
  forward(params, batch, &cache);
  const MLPParams grads = backward(params, cache, labels);
  for (std::size_t i = 0; i < 4; ++i)
    EXPECT_EQ(grads.weights[0](i, 1), 0.0);
  EXPECT_EQ(grads.biases[0][1], 0.0);
}

TEST(Evaluate, ExamplesAndInvariance) {
  // Perfect classifier via the identity construction.
  MLPArchitecture arch{3, {}, 3};
  MLPParams params = he_normal_init(arch, 2);
  std::fill(params.weights[0].data.begin(), params.weights[0].data.end(), 0.0);
  for (std::size_t j = 0; j < 3; ++j) params.weights[0](j, j) = 10.0;
  Matrix x(6, 3);
  std::vector<int> y(6);
  for (std::size_t i = 0; i < 6; ++i) {
    x(i, i % 3) = 1.0;
    y[i] = static_cast<int>(i % 3);
  }
  EXPECT_EQ(evaluate(params, x, y), 1.0);

  // Reordering samples leaves accuracy unchanged.
  Matrix xr(6, 3);
  std::vector<int> yr(6);
  for (std::size_t i = 0; i < 6; ++i) {
    const std::size_t src = 5 - i;
    std::copy_n(x.row(src), 3, xr.row(i));
    yr[i] = y[src];
  }
  EXPECT_EQ(evaluate(params, xr, yr), evaluate(params, x, y));
}

TEST(Evaluate, UniformParamsScoreChance) {
  const Dataset ds = synthetic_dataset(5000, 16, 10, 17);
  MLPArchitecture arch{16, {8}, 10};
  MLPParams params = he_normal_init(arch, 3);
  for (Matrix& w : params.weights) std::fill(w.data.begin(), w.data.end(), 0.0);
  // All probabilities tie, argmax resolves to class 0 everywhere.
  const double acc = evaluate(params, ds.test_features, ds.test_labels);
  EXPECT_NEAR(acc, 0.1, 0.03);
}

TEST(Train, FrozenSgdIsFlat) {
  const Dataset ds = synthetic_dataset(400, 8, 4, 3);
  const MLPArchitecture arch{8, {8}, 4};
  OptimizerSpec frozen{"SGD", SGDConfig{0.0}};
  TrainPolicy policy;
  policy.max_iterations = 300;
  policy.eval_every = 50;
  policy.eval_checkpoints = {150, 300};
  policy.seed = 5;
  const TrainResult r = train(arch, frozen, policy, ds);
  ASSERT_GE(r.curve.size(), 2u);
  for (const CurvePoint& p : r.curve) {
    EXPECT_DOUBLE_EQ(p.train_acc, r.curve.front().train_acc);
    EXPECT_DOUBLE_EQ(p.train_loss, r.curve.front().train_loss);
  }
  EXPECT_EQ(r.max_abs_step, 0.0);
}

TEST(Train, DeterministicUnderFixedSeed) {
  const Dataset ds = synthetic_dataset(500, 12, 3, 11);
  const MLPArchitecture arch{12, {16}, 3};
  TrainPolicy policy;
  policy.max_iterations = 250;
  policy.eval_every = 50;
  policy.eval_checkpoints = {250};
  policy.seed = 21;

  for (const char* id : {"arcgd", "adam", "adamw", "lion", "sgd"}) {
    const TrainResult a = train(arch, make_optimizer_spec(id), policy, ds);
    const TrainResult b = train(arch, make_optimizer_spec(id), policy, ds);
    ASSERT_EQ(a.curve.size(), b.curve.size()) << id;
    for (std::size_t i = 0; i < a.curve.size(); ++i) {
      EXPECT_EQ(a.curve[i].iteration, b.curve[i].iteration) << id;
      EXPECT_EQ(a.curve[i].train_loss, b.curve[i].train_loss) << id;
      EXPECT_EQ(a.curve[i].train_acc, b.curve[i].train_acc) << id;
      EXPECT_EQ(a.curve[i].test_acc, b.curve[i].test_acc) << id;
    }
  }
}

TEST(Train, EarlyStopNeverBeforePatience) {
  const Dataset ds = synthetic_dataset(500, 8, 4, 13);
  const MLPArchitecture arch{8, {8}, 4};
  TrainPolicy policy;
  policy.max_iterations = 3000;
  policy.eval_every = 25;
  policy.eval_checkpoints = {};
  policy.early_stop_patience = 200;
  policy.seed = 2;
  const TrainResult r =
      train(arch, make_optimizer_spec("arcgd"), policy, ds);
  if (r.early_stopped) EXPECT_GT(r.iterations, policy.early_stop_patience);
}

TEST(Train, ArcGDLearnsSyntheticTask) {
  const Dataset ds = synthetic_dataset(2000, 32, 4, 42);
  const MLPArchitecture arch{32, {32}, 4};
  TrainPolicy policy;
  policy.max_iterations = 2000;
  policy.eval_every = 100;
  policy.eval_checkpoints = {1000, 2000};
  const TrainResult r =
      train(arch, make_optimizer_spec("arcgd"), policy, ds);
  double best_train = 0.0;
  for (const CurvePoint& p : r.curve)
    best_train = std::max(best_train, p.train_acc);
  EXPECT_GT(best_train, 0.8);
  EXPECT_LE(r.max_abs_step, 0.0111);
}

TEST(EtaLowAblation, SchemaAndEqualArms) {
  const Dataset ds = synthetic_dataset(400, 8, 4, 19);
  TrainPolicy policy;
  policy.max_iterations = 200;
  policy.eval_every = 50;
  policy.eval_checkpoints = {100, 200};
  policy.seed = 4;

  const auto rows = eta_low_ablation({"tiny", "shallow"}, ds, policy);
  ASSERT_EQ(rows.size(), 4u);  // 2 archs x 2 checkpoints
  EXPECT_EQ(rows[0].arch, "tiny");
  EXPECT_EQ(rows[0].iteration, 100u);
  EXPECT_EQ(rows[1].iteration, 200u);
  EXPECT_EQ(rows[2].arch, "shallow");
  for (const AblationRow& r : rows) {
    EXPECT_TRUE(std::isfinite(r.acc_first));
    EXPECT_TRUE(std::isfinite(r.acc_second));
    EXPECT_DOUBLE_EQ(r.delta, r.acc_second - r.acc_first);
  }

  const auto equal = eta_low_ablation({"tiny"}, ds, policy, 0.01, 0.01);
  for (const AblationRow& r : equal) EXPECT_EQ(r.delta, 0.0);
}
