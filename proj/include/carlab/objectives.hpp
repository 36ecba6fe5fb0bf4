#pragma once

#include <functional>
#include <span>
#include <string>

namespace carlab {

// Log arguments are clamped to [kProbEps, 1-kProbEps] everywhere.
inline constexpr double kProbEps = 1e-7;

inline double clamp_prob(double p) {
  if (p < kProbEps) return kProbEps;
  if (p > 1.0 - kProbEps) return 1.0 - kProbEps;
  return p;
}

enum class HKind { log_pair, linear_pair, custom };

// Monotone pair (h0, h1) scoring the factual / counterfactual generators.
// Admissible pairs keep x*h0(x/(x+a)) convex and x*h1(a/(x+a)) concave in x
// on (0,1]^2; the two shipped pairs satisfy this.
struct HPair {
  HKind kind = HKind::linear_pair;
  std::function<double(double)> h0, h1;
  std::function<double(double)> dh0, dh1;

  static HPair log_pair();     // h0 = log x, h1 = -log(1-x)
  static HPair linear_pair();  // h0 = h1 = identity
  // Extension point. Certify new pairs with check_h_conditions before use;
  // configs only ever name the two shipped pairs.
  static HPair custom(std::function<double(double)> h0,
                      std::function<double(double)> h1,
                      std::function<double(double)> dh0 = {},
                      std::function<double(double)> dh1 = {});
  // name in {"log", "linear"}; throws on anything else.
  static HPair from_name(const std::string& name);
  std::string name() const;
};

enum class GeneratorRole { factual, counterfactual };

// -p0*mean(log d_factual) - p1*mean(log(1 - d_counterfactual)).
// prior is the (p0, p1) weight pair; lower is better for the discriminator.
double discriminator_loss(std::span<const double> d_factual,
                          std::span<const double> d_counterfactual,
                          std::span<const double> prior);

// mean h0(d) for the factual role, mean h1(d) for the counterfactual one;
// higher is better for both generators.
double generator_objective(std::span<const double> d_outputs, const HPair& h,
                           GeneratorRole role);

// Same aggregation for C classes; the caller conditions d_outputs on Y=t
// (factual) or Y!=t (counterfactual) and picks h accordingly.
double generator_objective_multiclass(
    std::span<const double> d_outputs,
    const std::function<double(double)>& h_f_or_c);

struct RegularizerConfig {
  double lambda1 = 0.0;  // sparsity weight
  double lambda2 = 0.0;  // continuity weight
  double alpha = 0.0;    // target selected fraction in [0,1]
};

void validate_regularizer(const RegularizerConfig& cfg);

// lambda1*|mean(mask) - alpha| + lambda2*sum_k |mask_k - mask_{k-1}|.
// Relaxed (fractional) masks are allowed; unordered (bag) masks have no
// continuity term.
double sparsity_continuity_penalty(std::span<const double> mask,
                                   const RegularizerConfig& cfg,
                                   bool ordered = true);

struct HConditionReport {
  bool pass = false;
  bool h0_monotone = false, h1_monotone = false;
  bool h0_composite_convex = false, h1_composite_concave = false;
  double fail_x = 0.0, fail_a = 0.0;  // first failing grid point
  std::string detail;
};

// Grid certification of the admissibility conditions at the given step.
HConditionReport check_h_conditions(const HPair& h, double grid_step);

struct FDivergenceReport {
  std::function<double(double)> f;  // f(x) = x*h0(x) - h0(1)
  bool convex = false;              // grid second differences on (0,4]
  double at_one = 0.0;              // f(1), exactly 0 by construction
  double fail_x = 0.0;
};

FDivergenceReport f_from_h(const HPair& h);

}  // namespace carlab
