#include "arcgd/driver.hpp"

#include <cmath>
#include <stdexcept>

namespace arcgd {

OptimizerSpec make_optimizer_spec(std::string_view id) {
  if (id == "arcgd") {
    ArcGDConfig cfg;
    cfg.adaptive_c = true;
    cfg.use_momentum = true;
    return {"ArcGD", cfg};
  }
  if (id == "adam") return {"Adam", AdamConfig{}};
  if (id == "adamw") {
    AdamConfig cfg;
    cfg.weight_decay = 0.01;
    return {"AdamW", cfg};
  }
  if (id == "lion") return {"Lion", LionConfig{}};
  if (id == "sgd") return {"SGD", SGDConfig{}};
  throw std::invalid_argument("unknown optimizer id: " + std::string(id));
}

VectorOptimizer::VectorOptimizer(OptimizerSpec spec, std::vector<double> x0)
    : spec_(std::move(spec)) {
  if (std::holds_alternative<ArcGDConfig>(spec_.config)) {
    std::get<ArcGDConfig>(spec_.config).validate();
    arc_ = make_state(std::move(x0));
  } else {
    if (std::holds_alternative<AdamConfig>(spec_.config))
      adam_ = make_adam_state(x0.size());
    else if (std::holds_alternative<LionConfig>(spec_.config))
      lion_m_.assign(x0.size(), 0.0);
    x_ = std::move(x0);
  }
}

const std::vector<double>& VectorOptimizer::x() const {
  return std::holds_alternative<ArcGDConfig>(spec_.config) ? arc_.x : x_;
}

void VectorOptimizer::step(std::span<const double> g) {
  if (const auto* cfg = std::get_if<ArcGDConfig>(&spec_.config)) {
    OptimizerState next = arcgd_step(arc_, g, *cfg);
    for (std::size_t i = 0; i < next.x.size(); ++i)
      max_abs_step_ =
          std::max(max_abs_step_, std::abs(next.x[i] - arc_.x[i]));
    arc_ = std::move(next);
    return;
  }

  std::vector<double> after;

  if (const auto* cfg = std::get_if<AdamConfig>(&spec_.config)) {
    AdamStepResult res = adam_step(adam_, x_, g, *cfg);
    adam_ = std::move(res.state);
    after = std::move(res.x);
  } else if (const auto* cfg = std::get_if<LionConfig>(&spec_.config)) {
    LionStepResult res = lion_step(lion_m_, x_, g, *cfg);
    lion_m_ = std::move(res.m);
    after = std::move(res.x);
  } else {
    after = sgd_step(x_, g, std::get<SGDConfig>(spec_.config));
  }

  for (std::size_t i = 0; i < after.size(); ++i)
    max_abs_step_ = std::max(max_abs_step_, std::abs(after[i] - x_[i]));
  x_ = std::move(after);
}

}  // namespace arcgd
