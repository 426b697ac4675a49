#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "arcgd/baselines.hpp"
#include "arcgd/optimizer.hpp"

namespace arcgd {

/// A named optimizer choice plus its resolved hyperparameters. `name` is the
/// label used in reports ("ArcGD", "Adam", "AdamW", "Lion", "SGD").
struct OptimizerSpec {
  std::string name;
  std::variant<ArcGDConfig, AdamConfig, LionConfig, SGDConfig> config;
};

/// Standard presets by CLI id ("arcgd", "adam", "adamw", "lion", "sgd").
/// arcgd resolves to the adaptive-floor, momentum-filtered variant with the
/// default constants a=0.01, b=0.001, c=1e-4, beta=0.9, eta_low=0.01;
/// the rest use their config defaults (AdamW adds weight_decay=0.01).
/// Throws std::invalid_argument for unknown ids.
OptimizerSpec make_optimizer_spec(std::string_view id);

/// Drives one parameter vector with any supported rule. Holds the optimizer
/// memory internally; step() consumes one gradient and advances x.
class VectorOptimizer {
 public:
  VectorOptimizer(OptimizerSpec spec, std::vector<double> x0);

  void step(std::span<const double> g);

  const std::vector<double>& x() const;
  const std::string& name() const { return spec_.name; }
  /// Largest per-coordinate |dx| applied so far, across all steps.
  double max_abs_step() const { return max_abs_step_; }

 private:
  OptimizerSpec spec_;
  OptimizerState arc_;          // arcgd: owns x
  AdamState adam_;              // adam family
  std::vector<double> lion_m_;  // lion momentum
  std::vector<double> x_;       // x for the non-arcgd rules
  double max_abs_step_ = 0.0;
};

}  // namespace arcgd
