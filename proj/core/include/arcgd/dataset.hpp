#pragma once

#include <cstdint>
#include <filesystem>

#include "arcgd/matrix.hpp"

namespace arcgd {

/// Classification data, already split 80:20 into train and test.
struct Dataset {
  Matrix train_features;
  std::vector<int> train_labels;
  Matrix test_features;
  std::vector<int> test_labels;
  std::size_t num_classes = 10;
};

/// Reads CIFAR-10 binary batch files: records of 1 label byte followed by
/// 3072 pixel bytes (row-major RGB planes). `path` may be a single .bin file
/// or a directory whose *.bin files are read in sorted order. Pixels are
/// scaled to [0,1]; labels must lie in [0,9]. A positive `subset` keeps only
/// the first `subset` records (file order) before the seeded 80:20 split.
/// Throws std::runtime_error for truncated records or out-of-range labels.
Dataset load_cifar10_binary(const std::filesystem::path& path,
                            std::uint64_t seed, std::size_t subset = 0);

/// Gaussian class clusters: centers drawn N(0, 2^2) per feature, samples are
/// center + N(0, 1). Labels are assigned round-robin before splitting, so all
/// classes are populated whenever n_samples >= n_classes. Deterministic in
/// `seed`.
Dataset synthetic_dataset(std::size_t n_samples, std::size_t n_features,
                          std::size_t n_classes, std::uint64_t seed);

}  // namespace arcgd
