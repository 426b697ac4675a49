#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace arcgd {

/// How the floor coefficient is produced for each coordinate.
enum class FloorMode {
  standard,     // constant c, or min(c, eta_low|T|/(1-|T|)) when adaptive_c
  bounded,      // max(c_low, min(c_high, eta_low|T|/(1-|T|)))
  alternative,  // full term c(1-|T|)/(|T|+eps) * T
};

/// Hyperparameters for one ArcGD instance.
///
/// The update per coordinate is
///   dx = -( a*T + b*T*(1-|T|) + c_eff*sign(T)*(1-|T|) ),  T = g/sqrt(1+g^2),
/// so `a` caps the step under huge gradients (ceiling), `b` boosts
/// mid-magnitude gradients (transition, peaks at |T|=0.5) and `c` guarantees
/// progress as gradients vanish (floor).
struct ArcGDConfig {
  double a = 0.01;        // ceiling constant
  double b = 0.001;       // transition constant
  double c = 1e-4;        // floor constant
  double eta_low = 0.01;  // budget bounding the adaptive floor coefficient
  double beta = 0.9;      // gradient EMA coefficient (noisy-landscape variants)

  bool adaptive_c = false;    // floor coefficient follows min(c, eta_low|T|/(1-|T|))
  bool use_momentum = false;  // drive T from an EMA of gradients instead of g

  FloorMode floor_mode = FloorMode::standard;
  double c_low = 1e-8;           // bounded mode: lower clamp
  double c_high = 1e-4;          // bounded mode: upper clamp
  double floor_epsilon = 1e-8;   // alternative mode: stabilizer

  bool overshoot_control = false;  // halve c and average the step where |T| < tau
  double overshoot_tau = 0.1;      // 0.1 or 0.01

  // Throws std::invalid_argument when a hard invariant is violated
  // (a > 0, b >= 0, c >= 0, a+b+c < 1, eta_low > 0, beta in [0,1),
  // 0 < c_low <= c_high, tau in {0.1, 0.01}). Returns soft-guidance
  // warnings: a+b+c >= 0.1, or eta_low outside {0.1, 0.01, 0.001}.
  std::vector<std::string> validate() const;
};

/// Parameter vector plus the optimizer's own memory.
struct OptimizerState {
  std::vector<double> x;
  std::vector<double> m;  // gradient EMA; same length as x
  std::uint64_t t = 0;
  bool momentum_initialized = false;
};

/// Fresh state over x0 with a zeroed EMA buffer.
OptimizerState make_state(std::vector<double> x0);

/// The three additive contributions to one update, per coordinate.
/// high + middle + floor equals the negated update, in that summation order.
struct UpdateBreakdown {
  std::vector<double> high_term;    // a*T
  std::vector<double> middle_term;  // b*T*(1-|T|)
  std::vector<double> floor_term;   // c_eff*sign(T)*(1-|T|) (or alternative form)
};

/// T = g / sqrt(1 + g^2). Odd, strictly increasing, range (-1, 1).
/// Throws std::domain_error for non-finite g. For |g| >= 1e8 the true value
/// rounds to +/-1 in double precision and is returned as such.
double transform_gradient(double g);

/// T*(1-|T|): the transition weighting. Peaks at 0.25 for |T| = 0.5.
/// Throws std::domain_error unless |T| < 1.
double middle_weight(double t);

/// min(c, eta_low*|T|/(1-|T|)). The denominator is guarded at 1e-12.
/// Throws std::domain_error unless |T| < 1, c >= 0, eta_low > 0.
double adaptive_floor_coefficient(double t, double c, double eta_low);

/// max(c_low, min(c_high, eta_low*|T|/(1-|T|))).
/// Throws std::invalid_argument unless 0 < c_low <= c_high;
/// std::domain_error unless |T| < 1.
double bounded_floor_coefficient(double t, double c_low, double c_high,
                                 double eta_low);

/// The full alternative floor term c*(1-|T|)/(|T|+epsilon) * T.
/// Finite for all |T| <= 1, zero at T = 0.
double alternative_floor_term(double t, double c, double epsilon = 1e-8);

/// beta*m + (1-beta)*g elementwise; returns a copy of g when the filter has
/// not been primed yet (m0 is the first evaluated gradient).
std::vector<double> momentum_update(std::span<const double> m,
                                    std::span<const double> g, double beta,
                                    bool initialized);

/// One ArcGD update. The driving signal per coordinate is T computed from g
/// (or from the EMA of gradients when cfg.use_momentum). Variant behavior --
/// adaptive floor, floor mode, overshoot control -- comes from cfg. When
/// `breakdown` is non-null it receives the three additive terms of the raw
/// update (before overshoot averaging).
OptimizerState arcgd_step(const OptimizerState& state,
                          std::span<const double> g, const ArcGDConfig& cfg,
                          UpdateBreakdown* breakdown = nullptr);

/// The b=0, a=c=gamma limit: dx = -gamma*sign(T) with T from the
/// momentum-filtered gradient. A pure sign-based momentum update.
OptimizerState lion_limit_step(const OptimizerState& state,
                               std::span<const double> g, double gamma,
                               double beta);

/// Whole-vector variant: dx = -alpha*g / sqrt(1 + |g|^2) (Euclidean norm).
OptimizerState global_norm_step(const OptimizerState& state,
                                std::span<const double> g, double alpha);

/// Strict arc-length step dx_i = -alpha*sign(g_i)/sqrt(1+g_i^2). Reference
/// variant only; overshoots in flat regions and stalls in steep ones.
OptimizerState arc_length_descent_step(const OptimizerState& state,
                                       std::span<const double> g, double alpha);

}  // namespace arcgd
