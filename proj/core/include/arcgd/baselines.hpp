#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace arcgd {

struct SGDConfig {
  double lr = 0.005;
};

/// Plain gradient descent: x - lr*g.
std::vector<double> sgd_step(std::span<const double> x,
                             std::span<const double> g, const SGDConfig& cfg);

/// Adam hyperparameters. weight_decay = 0 gives Adam; a positive value is
/// applied as decoupled decay (AdamW), independent of the adaptive delta.
struct AdamConfig {
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 0.0;
};

struct AdamState {
  std::vector<double> m;  // first moment
  std::vector<double> v;  // second moment, elementwise >= 0
  std::uint64_t t = 0;
};

AdamState make_adam_state(std::size_t n);

struct AdamStepResult {
  AdamState state;
  std::vector<double> x;
};

/// Bias-corrected Adam update; decoupled weight decay is applied to x before
/// the adaptive delta when cfg.weight_decay > 0.
AdamStepResult adam_step(const AdamState& state, std::span<const double> x,
                         std::span<const double> g, const AdamConfig& cfg);

struct LionConfig {
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.99;
  double weight_decay = 0.01;
};

struct LionStepResult {
  std::vector<double> m;
  std::vector<double> x;
};

/// Sign-of-interpolation update:
///   c_t = beta1*m + (1-beta1)*g
///   x  <- x - lr*(sign(c_t) + wd*x)
///   m  <- beta2*m + (1-beta2)*g
LionStepResult lion_step(std::span<const double> m, std::span<const double> x,
                         std::span<const double> g, const LionConfig& cfg);

}  // namespace arcgd
