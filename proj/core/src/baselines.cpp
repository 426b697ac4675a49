#include "arcgd/baselines.hpp"

#include <cmath>
#include <stdexcept>

namespace arcgd {

namespace {

inline double sign_of(double v) {
  return static_cast<double>(v > 0.0) - static_cast<double>(v < 0.0);
}

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw std::invalid_argument(what);
}

}  // namespace

std::vector<double> sgd_step(std::span<const double> x,
                             std::span<const double> g, const SGDConfig& cfg) {
  require_same_size(x.size(), g.size(), "sgd: x/g length mismatch");
  if (cfg.lr < 0.0) throw std::invalid_argument("sgd: lr must be non-negative");
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - cfg.lr * g[i];
  return out;
}

AdamState make_adam_state(std::size_t n) {
  AdamState s;
  s.m.assign(n, 0.0);
  s.v.assign(n, 0.0);
  return s;
}

AdamStepResult adam_step(const AdamState& state, std::span<const double> x,
                         std::span<const double> g, const AdamConfig& cfg) {
  require_same_size(x.size(), g.size(), "adam: x/g length mismatch");
  require_same_size(state.m.size(), x.size(), "adam: state length mismatch");
  require_same_size(state.v.size(), x.size(), "adam: state length mismatch");
  if (!(cfg.lr > 0.0)) throw std::invalid_argument("adam: lr must be positive");
  if (!(cfg.beta1 >= 0.0 && cfg.beta1 < 1.0) ||
      !(cfg.beta2 >= 0.0 && cfg.beta2 < 1.0))
    throw std::invalid_argument("adam: betas must lie in [0, 1)");
  if (!(cfg.epsilon > 0.0))
    throw std::invalid_argument("adam: epsilon must be positive");
  if (cfg.weight_decay < 0.0)
    throw std::invalid_argument("adam: weight_decay must be non-negative");

  AdamStepResult res;
  res.state.t = state.t + 1;
  res.state.m.resize(x.size());
  res.state.v.resize(x.size());
  res.x.resize(x.size());

  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(res.state.t));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(res.state.t));

  for (std::size_t i = 0; i < x.size(); ++i) {
    double xi = x[i];
    if (cfg.weight_decay > 0.0) xi -= cfg.lr * cfg.weight_decay * xi;
    const double m = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * g[i];
    const double v = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
    const double m_hat = m / bc1;
    const double v_hat = v / bc2;
    res.state.m[i] = m;
    res.state.v[i] = v;
    res.x[i] = xi - cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
  }
  return res;
}

LionStepResult lion_step(std::span<const double> m, std::span<const double> x,
                         std::span<const double> g, const LionConfig& cfg) {
  require_same_size(x.size(), g.size(), "lion: x/g length mismatch");
  require_same_size(m.size(), x.size(), "lion: m length mismatch");
  if (!(cfg.lr > 0.0)) throw std::invalid_argument("lion: lr must be positive");
  if (!(cfg.beta1 >= 0.0 && cfg.beta1 < 1.0) ||
      !(cfg.beta2 >= 0.0 && cfg.beta2 < 1.0))
    throw std::invalid_argument("lion: betas must lie in [0, 1)");
  if (cfg.weight_decay < 0.0)
    throw std::invalid_argument("lion: weight_decay must be non-negative");

  LionStepResult res;
  res.m.resize(x.size());
  res.x.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double c_t = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
    res.x[i] = x[i] - cfg.lr * (sign_of(c_t) + cfg.weight_decay * x[i]);
    res.m[i] = cfg.beta2 * m[i] + (1.0 - cfg.beta2) * g[i];
  }
  return res;
}

}  // namespace arcgd
