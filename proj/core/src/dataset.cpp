#include "arcgd/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>

#include "arcgd/rng.hpp"

namespace arcgd {

namespace {

constexpr std::size_t kCifarFeatures = 3072;
constexpr std::size_t kCifarRecord = kCifarFeatures + 1;

Dataset split_80_20(Matrix features, std::vector<int> labels,
                    std::size_t num_classes, std::uint64_t seed) {
  const std::size_t n = features.rows;
  if (n < 2) throw std::invalid_argument("split requires at least 2 samples");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng = make_stream(seed, 0, kStreamSplit);
  std::shuffle(order.begin(), order.end(), rng);

  const std::size_t n_train = (n * 8) / 10;
  Dataset out;
  out.num_classes = num_classes;
  out.train_features = Matrix(n_train, features.cols);
  out.test_features = Matrix(n - n_train, features.cols);
  out.train_labels.reserve(n_train);
  out.test_labels.reserve(n - n_train);

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t src = order[i];
    if (i < n_train) {
      std::copy_n(features.row(src), features.cols,
                  out.train_features.row(i));
      out.train_labels.push_back(labels[src]);
    } else {
      std::copy_n(features.row(src), features.cols,
                  out.test_features.row(i - n_train));
      out.test_labels.push_back(labels[src]);
    }
  }
  return out;
}

void read_cifar_file(const std::filesystem::path& file,
                     std::vector<std::uint8_t>& raw) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  in.seekg(0, std::ios::end);
  const auto size = static_cast<std::size_t>(in.tellg());
  in.seekg(0, std::ios::beg);
  if (size == 0 || size % kCifarRecord != 0)
    throw std::runtime_error(file.string() +
                             ": size is not a multiple of 3073 bytes");
  const std::size_t offset = raw.size();
  raw.resize(offset + size);
  in.read(reinterpret_cast<char*>(raw.data() + offset),
          static_cast<std::streamsize>(size));
  if (!in) throw std::runtime_error("short read on " + file.string());
}

}  // namespace

Dataset load_cifar10_binary(const std::filesystem::path& path,
                            std::uint64_t seed, std::size_t subset) {
  std::vector<std::uint8_t> raw;
  if (std::filesystem::is_directory(path)) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(path))
      if (entry.is_regular_file() && entry.path().extension() == ".bin")
        files.push_back(entry.path());
    if (files.empty())
      throw std::runtime_error("no .bin files in " + path.string());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) read_cifar_file(f, raw);
  } else {
    read_cifar_file(path, raw);
  }

  std::size_t n = raw.size() / kCifarRecord;
  if (subset > 0) n = std::min(n, subset);

  Matrix features(n, kCifarFeatures);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t* rec = raw.data() + i * kCifarRecord;
    const int label = rec[0];
    if (label > 9)
      throw std::runtime_error("label out of range at record " +
                               std::to_string(i));
    labels[i] = label;
    double* row = features.row(i);
    for (std::size_t j = 0; j < kCifarFeatures; ++j)
      row[j] = static_cast<double>(rec[1 + j]) / 255.0;
  }
  return split_80_20(std::move(features), std::move(labels), 10, seed);
}

Dataset synthetic_dataset(std::size_t n_samples, std::size_t n_features,
                          std::size_t n_classes, std::uint64_t seed) {
  if (n_samples < 2 || n_features == 0 || n_classes < 2)
    throw std::invalid_argument("synthetic_dataset: degenerate sizes");

  std::mt19937_64 rng = make_stream(seed, 0, kStreamSynth);
  std::normal_distribution<double> center_dist(0.0, 2.0);
  std::normal_distribution<double> noise(0.0, 1.0);

  Matrix centers(n_classes, n_features);
  for (double& c : centers.data) c = center_dist(rng);

  Matrix features(n_samples, n_features);
  std::vector<int> labels(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const int label = static_cast<int>(i % n_classes);
    labels[i] = label;
    const double* center = centers.row(static_cast<std::size_t>(label));
    double* row = features.row(i);
    for (std::size_t j = 0; j < n_features; ++j)
      row[j] = center[j] + noise(rng);
  }
  return split_80_20(std::move(features), std::move(labels), n_classes, seed);
}

}  // namespace arcgd
