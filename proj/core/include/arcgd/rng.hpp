#pragma once

#include <cstdint>
#include <random>

namespace arcgd {

// Stream purposes, mixed into the seed sequence so that draws for different
// jobs never alias even under the same (master_seed, run_index).
inline constexpr std::uint64_t kStreamInit = 1;      // initial-point sampling
inline constexpr std::uint64_t kStreamNoise = 2;     // objective/gradient noise
inline constexpr std::uint64_t kStreamSplit = 3;     // dataset train/test split
inline constexpr std::uint64_t kStreamSynth = 4;     // synthetic dataset content
inline constexpr std::uint64_t kStreamHeInit = 5;    // weight initialization
inline constexpr std::uint64_t kStreamShuffle = 6;   // minibatch shuffling

/// Derives an independent, reproducible engine from (master_seed, run_index,
/// purpose). Same triple, same sequence.
inline std::mt19937_64 make_stream(std::uint64_t master_seed,
                                   std::uint64_t run_index,
                                   std::uint64_t purpose) {
  std::seed_seq seq{
      static_cast<std::uint32_t>(master_seed),
      static_cast<std::uint32_t>(master_seed >> 32),
      static_cast<std::uint32_t>(run_index),
      static_cast<std::uint32_t>(run_index >> 32),
      static_cast<std::uint32_t>(purpose),
      static_cast<std::uint32_t>(purpose >> 32),
  };
  return std::mt19937_64(seq);
}

}  // namespace arcgd
