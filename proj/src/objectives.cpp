#include "carlab/objectives.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace carlab {

namespace {
// h0 must accept density ratios above 1, so only the log argument's lower
// end is floored.
double floor_eps(double x) { return x < kProbEps ? kProbEps : x; }
}  // namespace

HPair HPair::log_pair() {
  HPair h;
  h.kind = HKind::log_pair;
  h.h0 = [](double x) { return std::log(floor_eps(x)); };
  h.h1 = [](double x) { return -std::log(floor_eps(1.0 - x)); };
  // Exact derivatives of the floored forms (zero where the floor binds).
  h.dh0 = [](double x) { return x > kProbEps ? 1.0 / x : 0.0; };
  h.dh1 = [](double x) { return 1.0 - x > kProbEps ? 1.0 / (1.0 - x) : 0.0; };
  return h;
}

HPair HPair::linear_pair() {
  HPair h;
  h.kind = HKind::linear_pair;
  h.h0 = [](double x) { return x; };
  h.h1 = [](double x) { return x; };
  h.dh0 = [](double) { return 1.0; };
  h.dh1 = [](double) { return 1.0; };
  return h;
}

HPair HPair::custom(std::function<double(double)> h0,
                    std::function<double(double)> h1,
                    std::function<double(double)> dh0,
                    std::function<double(double)> dh1) {
  HPair h;
  h.kind = HKind::custom;
  h.h0 = std::move(h0);
  h.h1 = std::move(h1);
  h.dh0 = std::move(dh0);
  h.dh1 = std::move(dh1);
  return h;
}

HPair HPair::from_name(const std::string& name) {
  if (name == "log") return log_pair();
  if (name == "linear") return linear_pair();
  throw std::invalid_argument("unknown h kind \"" + name +
                              "\" (expected \"log\" or \"linear\")");
}

std::string HPair::name() const {
  switch (kind) {
    case HKind::log_pair: return "log";
    case HKind::linear_pair: return "linear";
    default: return "custom";
  }
}

double discriminator_loss(std::span<const double> d_factual,
                          std::span<const double> d_counterfactual,
                          std::span<const double> prior) {
  if (d_factual.empty() || d_counterfactual.empty())
    throw std::invalid_argument("discriminator_loss: empty input list");
  if (prior.size() != 2)
    throw std::invalid_argument("discriminator_loss: prior must have 2 entries");
  double lf = 0.0, lc = 0.0;
  for (double d : d_factual) lf += std::log(clamp_prob(d));
  for (double d : d_counterfactual) lc += std::log(clamp_prob(1.0 - d));
  return -prior[0] * lf / static_cast<double>(d_factual.size()) -
         prior[1] * lc / static_cast<double>(d_counterfactual.size());
}

double generator_objective(std::span<const double> d_outputs, const HPair& h,
                           GeneratorRole role) {
  if (d_outputs.empty())
    throw std::invalid_argument("generator_objective: empty input list");
  const auto& fn = role == GeneratorRole::factual ? h.h0 : h.h1;
  double sum = 0.0;
  for (double d : d_outputs) sum += fn(d);
  return sum / static_cast<double>(d_outputs.size());
}

double generator_objective_multiclass(
    std::span<const double> d_outputs,
    const std::function<double(double)>& h_f_or_c) {
  if (d_outputs.empty())
    throw std::invalid_argument("generator_objective: empty input list");
  double sum = 0.0;
  for (double d : d_outputs) sum += h_f_or_c(d);
  return sum / static_cast<double>(d_outputs.size());
}

void validate_regularizer(const RegularizerConfig& cfg) {
  if (cfg.lambda1 < 0.0 || cfg.lambda2 < 0.0)
    throw std::invalid_argument("regularizer weights must be nonnegative");
  if (cfg.alpha < 0.0 || cfg.alpha > 1.0)
    throw std::invalid_argument("alpha must lie in [0,1]");
}

double sparsity_continuity_penalty(std::span<const double> mask,
                                   const RegularizerConfig& cfg,
                                   bool ordered) {
  if (mask.empty())
    throw std::invalid_argument("sparsity_continuity_penalty: empty mask");
  double mean = 0.0;
  for (double m : mask) mean += m;
  mean /= static_cast<double>(mask.size());
  double penalty = cfg.lambda1 * std::abs(mean - cfg.alpha);
  if (ordered) {
    double transitions = 0.0;
    for (std::size_t k = 1; k < mask.size(); ++k)
      transitions += std::abs(mask[k] - mask[k - 1]);
    penalty += cfg.lambda2 * transitions;
  }
  return penalty;
}

namespace {

constexpr double kCurvatureTol = 1e-9;

// Grid second differences of x -> fn(x, a) for every a on the grid.
// Returns true when all of them satisfy the predicate; on failure fills
// (fail_x, fail_a) with the offending point.
template <class Fn, class Pred>
bool grid_curvature_ok(Fn&& fn, Pred&& pred, double step, double* fail_x,
                       double* fail_a) {
  const int n = static_cast<int>(std::round(1.0 / step));
  for (int ja = 1; ja <= n; ++ja) {
    const double a = ja * step;
    for (int jx = 2; jx <= n - 1; ++jx) {
      const double x = jx * step;
      const double d2 = fn(x - step, a) - 2.0 * fn(x, a) + fn(x + step, a);
      if (!pred(d2)) {
        *fail_x = x;
        *fail_a = a;
        return false;
      }
    }
  }
  return true;
}

bool grid_monotone(const std::function<double(double)>& fn, double lo,
                   double hi, double step, double* fail_x) {
  double prev = fn(lo);
  for (double x = lo + step; x <= hi + 1e-15; x += step) {
    const double cur = fn(x);
    if (cur < prev - 1e-12) {
      *fail_x = x;
      return false;
    }
    prev = cur;
  }
  return true;
}

}  // namespace

HConditionReport check_h_conditions(const HPair& h, double grid_step) {
  if (!(grid_step > 0.0 && grid_step <= 0.1))
    throw std::invalid_argument("grid_step must lie in (0, 0.1]");
  HConditionReport rep;
  char buf[128];

  // Monotonicity precheck on the pair's own domains.
  rep.h0_monotone = grid_monotone(h.h0, grid_step, 1.0, grid_step, &rep.fail_x);
  if (!rep.h0_monotone) {
    std::snprintf(buf, sizeof buf, "h0 not increasing near x=%g", rep.fail_x);
    rep.detail = buf;
    return rep;
  }
  rep.h1_monotone =
      grid_monotone(h.h1, 0.0, 1.0 - grid_step, grid_step, &rep.fail_x);
  if (!rep.h1_monotone) {
    std::snprintf(buf, sizeof buf, "h1 not increasing near x=%g", rep.fail_x);
    rep.detail = buf;
    return rep;
  }

  rep.h0_composite_convex = grid_curvature_ok(
      [&](double x, double a) { return x * h.h0(x / (x + a)); },
      [](double d2) { return d2 >= -kCurvatureTol; }, grid_step, &rep.fail_x,
      &rep.fail_a);
  if (!rep.h0_composite_convex) {
    std::snprintf(buf, sizeof buf, "x*h0(x/(x+a)) not convex at x=%g a=%g",
                  rep.fail_x, rep.fail_a);
    rep.detail = buf;
    return rep;
  }
  rep.h1_composite_concave = grid_curvature_ok(
      [&](double x, double a) { return x * h.h1(a / (x + a)); },
      [](double d2) { return d2 <= kCurvatureTol; }, grid_step, &rep.fail_x,
      &rep.fail_a);
  if (!rep.h1_composite_concave) {
    std::snprintf(buf, sizeof buf, "x*h1(a/(x+a)) not concave at x=%g a=%g",
                  rep.fail_x, rep.fail_a);
    rep.detail = buf;
    return rep;
  }
  rep.pass = true;
  rep.detail = "ok";
  return rep;
}

FDivergenceReport f_from_h(const HPair& h) {
  FDivergenceReport rep;
  const double h0_at_one = h.h0(1.0);
  auto h0 = h.h0;
  rep.f = [h0, h0_at_one](double x) { return x * h0(x) - h0_at_one; };
  rep.at_one = rep.f(1.0);

  rep.convex = true;
  const double step = 0.01;
  for (double x = 2 * step; x <= 4.0 - step; x += step) {
    const double d2 = rep.f(x - step) - 2.0 * rep.f(x) + rep.f(x + step);
    if (d2 < -kCurvatureTol) {
      rep.convex = false;
      rep.fail_x = x;
      break;
    }
  }
  return rep;
}

}  // namespace carlab
