#include "arcgd/optimizer.hpp"

#include <cmath>
#include <stdexcept>

namespace arcgd {

namespace {

constexpr double kDenomGuard = 1e-12;

// sign with sign(0) = sign(-0) = 0, so stationary points are exact fixed
// points of the update.
inline double sign_of(double v) {
  return static_cast<double>(v > 0.0) - static_cast<double>(v < 0.0);
}

inline double transform_unchecked(double g) {
  // Above 1e8 the exact value 1/sqrt(1+1/g^2) rounds to 1 in double
  // precision; returning the sign directly also avoids overflow in g*g.
  if (std::abs(g) >= 1e8) return std::copysign(1.0, g);
  return g / std::sqrt(1.0 + g * g);
}

inline double adaptive_floor_unchecked(double t, double c, double eta_low) {
  const double at = std::abs(t);
  const double denom = std::max(1.0 - at, kDenomGuard);
  return std::min(c, eta_low * at / denom);
}

inline double bounded_floor_unchecked(double t, double c_low, double c_high,
                                      double eta_low) {
  const double at = std::abs(t);
  const double denom = std::max(1.0 - at, kDenomGuard);
  return std::max(c_low, std::min(c_high, eta_low * at / denom));
}

inline double alternative_floor_unchecked(double t, double c, double epsilon) {
  const double at = std::abs(t);
  return c * (1.0 - at) / (at + epsilon) * t;
}

void require_step_preconditions(const OptimizerState& state,
                                std::span<const double> g) {
  if (g.size() != state.x.size())
    throw std::invalid_argument("gradient length does not match state");
  if (state.m.size() != state.x.size())
    throw std::invalid_argument("momentum buffer length does not match state");
}

void require_valid(const ArcGDConfig& cfg) {
  if (!(cfg.a > 0.0)) throw std::invalid_argument("a must be positive");
  if (cfg.b < 0.0) throw std::invalid_argument("b must be non-negative");
  if (cfg.c < 0.0) throw std::invalid_argument("c must be non-negative");
  if (!(cfg.a + cfg.b + cfg.c < 1.0))
    throw std::invalid_argument("a + b + c must be < 1");
  if (!(cfg.eta_low > 0.0)) throw std::invalid_argument("eta_low must be positive");
  if (!(cfg.beta >= 0.0 && cfg.beta < 1.0))
    throw std::invalid_argument("beta must lie in [0, 1)");
  if (cfg.floor_mode == FloorMode::bounded &&
      !(cfg.c_low > 0.0 && cfg.c_low <= cfg.c_high))
    throw std::invalid_argument("bounded floor requires 0 < c_low <= c_high");
  if (cfg.floor_mode == FloorMode::alternative && !(cfg.floor_epsilon > 0.0))
    throw std::invalid_argument("floor_epsilon must be positive");
  if (cfg.overshoot_control &&
      !(cfg.overshoot_tau == 0.1 || cfg.overshoot_tau == 0.01))
    throw std::invalid_argument("overshoot_tau must be 0.1 or 0.01");
}

}  // namespace

std::vector<std::string> ArcGDConfig::validate() const {
  require_valid(*this);
  std::vector<std::string> warnings;
  if (a + b + c >= 0.1)
    warnings.push_back("a + b + c = " + std::to_string(a + b + c) +
                       " is not small against 1; expected a + b + c << 1");
  if (eta_low != 0.1 && eta_low != 0.01 && eta_low != 0.001)
    warnings.push_back("eta_low = " + std::to_string(eta_low) +
                       " is outside the usual choices {0.1, 0.01, 0.001}");
  return warnings;
}

OptimizerState make_state(std::vector<double> x0) {
  OptimizerState s;
  s.m.assign(x0.size(), 0.0);
  s.x = std::move(x0);
  return s;
}

double transform_gradient(double g) {
  if (!std::isfinite(g)) throw std::domain_error("gradient must be finite");
  return transform_unchecked(g);
}

double middle_weight(double t) {
  if (!(std::abs(t) < 1.0))
    throw std::domain_error("middle_weight requires |T| < 1");
  return t * (1.0 - std::abs(t));
}

double adaptive_floor_coefficient(double t, double c, double eta_low) {
  if (!(std::abs(t) < 1.0))
    throw std::domain_error("adaptive floor requires |T| < 1");
  if (c < 0.0) throw std::domain_error("c must be non-negative");
  if (!(eta_low > 0.0)) throw std::domain_error("eta_low must be positive");
  return adaptive_floor_unchecked(t, c, eta_low);
}

double bounded_floor_coefficient(double t, double c_low, double c_high,
                                 double eta_low) {
  if (!(c_low > 0.0 && c_low <= c_high))
    throw std::invalid_argument("bounded floor requires 0 < c_low <= c_high");
  if (!(std::abs(t) < 1.0))
    throw std::domain_error("bounded floor requires |T| < 1");
  return bounded_floor_unchecked(t, c_low, c_high, eta_low);
}

double alternative_floor_term(double t, double c, double epsilon) {
  return alternative_floor_unchecked(t, c, epsilon);
}

std::vector<double> momentum_update(std::span<const double> m,
                                    std::span<const double> g, double beta,
                                    bool initialized) {
  if (m.size() != g.size())
    throw std::invalid_argument("momentum/gradient length mismatch");
  if (!(beta >= 0.0 && beta < 1.0))
    throw std::invalid_argument("beta must lie in [0, 1)");
  if (!initialized) return std::vector<double>(g.begin(), g.end());
  std::vector<double> out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    out[i] = beta * m[i] + (1.0 - beta) * g[i];
  return out;
}

OptimizerState arcgd_step(const OptimizerState& state,
                          std::span<const double> g, const ArcGDConfig& cfg,
                          UpdateBreakdown* breakdown) {
  require_step_preconditions(state, g);
  require_valid(cfg);
  const std::size_t n = state.x.size();
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(g[i]))
      throw std::domain_error("gradient must be finite elementwise");

  OptimizerState next;
  next.x.resize(n);
  next.t = state.t + 1;
  if (cfg.use_momentum) {
    next.m = momentum_update(state.m, g, cfg.beta, state.momentum_initialized);
    next.momentum_initialized = true;
  } else {
    next.m = state.m;
    next.momentum_initialized = state.momentum_initialized;
  }
  const double* signal = cfg.use_momentum ? next.m.data() : g.data();

  if (breakdown) {
    breakdown->high_term.resize(n);
    breakdown->middle_term.resize(n);
    breakdown->floor_term.resize(n);
  }

  for (std::size_t i = 0; i < n; ++i) {
    const double t_i = transform_unchecked(signal[i]);
    const double at = std::abs(t_i);

    double c_work = cfg.c;
    const bool smooth = cfg.overshoot_control && at < cfg.overshoot_tau;
    if (smooth) c_work *= 0.5;

    double floor = 0.0;
    switch (cfg.floor_mode) {
      case FloorMode::standard: {
        const double coef =
            cfg.adaptive_c ? adaptive_floor_unchecked(t_i, c_work, cfg.eta_low)
                           : c_work;
        floor = coef * sign_of(t_i) * (1.0 - at);
        break;
      }
      case FloorMode::bounded: {
        const double coef =
            bounded_floor_unchecked(t_i, cfg.c_low, cfg.c_high, cfg.eta_low);
        floor = coef * sign_of(t_i) * (1.0 - at);
        break;
      }
      case FloorMode::alternative:
        floor = alternative_floor_unchecked(t_i, c_work, cfg.floor_epsilon);
        break;
    }

    const double high = cfg.a * t_i;
    const double middle = cfg.b * (t_i * (1.0 - at));
    const double delta = -(high + middle + floor);

    double xi = state.x[i] + delta;
    if (smooth) xi = 0.5 * (xi + state.x[i]);
    next.x[i] = xi;

    if (breakdown) {
      breakdown->high_term[i] = high;
      breakdown->middle_term[i] = middle;
      breakdown->floor_term[i] = floor;
    }
  }
  return next;
}

OptimizerState lion_limit_step(const OptimizerState& state,
                               std::span<const double> g, double gamma,
                               double beta) {
  require_step_preconditions(state, g);
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");

  OptimizerState next;
  next.t = state.t + 1;
  next.m = momentum_update(state.m, g, beta, state.momentum_initialized);
  next.momentum_initialized = true;
  next.x.resize(state.x.size());
  for (std::size_t i = 0; i < state.x.size(); ++i) {
    const double t_i = transform_unchecked(next.m[i]);
    next.x[i] = state.x[i] - gamma * sign_of(t_i);
  }
  return next;
}

OptimizerState global_norm_step(const OptimizerState& state,
                                std::span<const double> g, double alpha) {
  require_step_preconditions(state, g);
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");

  double norm_sq = 0.0;
  for (double gi : g) norm_sq += gi * gi;
  const double scale = alpha / std::sqrt(1.0 + norm_sq);

  OptimizerState next = state;
  next.t = state.t + 1;
  for (std::size_t i = 0; i < state.x.size(); ++i)
    next.x[i] = state.x[i] - scale * g[i];
  return next;
}

OptimizerState arc_length_descent_step(const OptimizerState& state,
                                       std::span<const double> g,
                                       double alpha) {
  require_step_preconditions(state, g);
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");

  OptimizerState next = state;
  next.t = state.t + 1;
  for (std::size_t i = 0; i < state.x.size(); ++i) {
    const double gi = g[i];
    // 1+g^2 may overflow to inf for extreme gradients; the step then rounds
    // to zero, which is the correct limit.
    next.x[i] = state.x[i] - alpha * sign_of(gi) / std::sqrt(1.0 + gi * gi);
  }
  return next;
}

}  // namespace arcgd
