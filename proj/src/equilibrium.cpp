#include "carlab/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace carlab {

namespace {

void require_two_class(const BowModel& model, const char* where) {
  if (model.class_count != 2)
    throw std::invalid_argument(std::string(where) +
                                ": two-class model required");
}

void require_dim(const SelectionPolicy& policy, const BowModel& model,
                 const char* where) {
  if (policy.select_prob.size() !=
      static_cast<std::size_t>(model.vocab_size))
    throw std::invalid_argument(std::string(where) +
                                ": policy/model dimension mismatch");
}

}  // namespace

std::vector<double> induced_distribution(const SelectionPolicy& policy,
                                         const BowModel& model, int y) {
  require_dim(policy, model, "induced_distribution");
  if (y < 0 || y >= model.class_count)
    throw std::invalid_argument("induced_distribution: class out of range");
  std::vector<double> out(model.vocab_size);
  for (int i = 0; i < model.vocab_size; ++i)
    out[i] = model.occ(y, i) * policy.select_prob[i];
  return out;
}

double optimal_discriminator(double z_mass_factual,
                             double z_mass_counterfactual) {
  if (z_mass_factual < 0.0 || z_mass_counterfactual < 0.0)
    throw std::invalid_argument("optimal_discriminator: negative mass");
  const double total = z_mass_factual + z_mass_counterfactual;
  if (total == 0.0)
    throw std::invalid_argument(
        "optimal_discriminator: both masses zero, value undefined");
  return z_mass_factual / total;
}

SelectionPolicy best_response_counterfactual(const SelectionPolicy& factual,
                                             const BowModel& model, int t) {
  require_two_class(model, "best_response_counterfactual");
  require_dim(factual, model, "best_response_counterfactual");
  if (factual.class_t != t)
    throw std::invalid_argument(
        "best_response_counterfactual: factual policy targets another class");
  const int other = 1 - t;
  SelectionPolicy out;
  out.class_t = t;
  out.role = PolicyRole::counterfactual;
  out.select_prob.resize(model.vocab_size);
  for (int i = 0; i < model.vocab_size; ++i) {
    const double want =
        std::min(model.occ(t, i) * factual.select_prob[i], model.occ(other, i));
    const double bound = model.occ(other, i);
    out.select_prob[i] =
        bound > 0.0 ? std::clamp(want / bound, 0.0, 1.0) : 0.0;
  }
  return out;
}

SelectionPolicy unconstrained_factual_best_response(const BowModel& model,
                                                    int t) {
  require_two_class(model, "unconstrained_factual_best_response");
  SelectionPolicy out;
  out.class_t = t;
  out.role = PolicyRole::factual;
  out.select_prob.resize(model.vocab_size);
  for (int i = 0; i < model.vocab_size; ++i)
    out.select_prob[i] =
        model.occ(t, i) - model.occ(1 - t, i) > kEligibilityTol ? 1.0 : 0.0;
  return out;
}

namespace {

void require_index_set(const BowModel& model, std::span<const int> index_set,
                       const char* where) {
  for (int i : index_set)
    if (i < 0 || i >= model.vocab_size)
      throw std::invalid_argument(std::string(where) +
                                  ": word index out of range");
}

// p(outcome | y) for the subvector restricted to index_set, outcome encoded
// as a bitmask over positions in the set.
double outcome_prob(const BowModel& model, std::span<const int> index_set,
                    int y, std::uint32_t outcome) {
  double p = 1.0;
  for (std::size_t k = 0; k < index_set.size(); ++k) {
    const double q = model.occ(y, index_set[k]);
    p *= (outcome >> k) & 1u ? q : 1.0 - q;
  }
  return p;
}

}  // namespace

MiEstimate classwise_mi(const BowModel& model, std::span<const int> index_set,
                        int t, const HPair& h, MiMethod method, long samples,
                        std::uint64_t seed) {
  require_index_set(model, index_set, "classwise_mi");
  if (t < 0 || t >= model.class_count)
    throw std::invalid_argument("classwise_mi: class out of range");
  const int n = static_cast<int>(index_set.size());
  MiEstimate est;

  auto ratio_term = [&](double p_t, double p_mix) {
    return h.h0(p_t / p_mix);
  };

  if (method == MiMethod::exact) {
    if (n > kExactEnumLimit)
      throw std::invalid_argument("classwise_mi: index set too large for "
                                  "exact enumeration (limit " +
                                  std::to_string(kExactEnumLimit) + ")");
    double value = 0.0;
    const std::uint32_t total = 1u << n;
    for (std::uint32_t z = 0; z < total; ++z) {
      const double p_t = outcome_prob(model, index_set, t, z);
      if (p_t == 0.0) continue;
      double p_mix = 0.0;
      for (int y = 0; y < model.class_count; ++y)
        p_mix += model.prior[y] * outcome_prob(model, index_set, y, z);
      value += p_t * ratio_term(p_t, p_mix);
    }
    est.value = value;
    est.samples = static_cast<long>(total);
    return est;
  }

  if (samples < 1)
    throw std::invalid_argument("classwise_mi: samples must be >= 1");
  SplitRng rng(seed);
  double sum = 0.0, sum_sq = 0.0;
  for (long s = 0; s < samples; ++s) {
    std::uint32_t z = 0;
    for (int k = 0; k < n; ++k)
      if (rng.bernoulli(model.occ(t, index_set[k]))) z |= 1u << k;
    const double p_t = outcome_prob(model, index_set, t, z);
    double p_mix = 0.0;
    for (int y = 0; y < model.class_count; ++y)
      p_mix += model.prior[y] * outcome_prob(model, index_set, y, z);
    const double v = ratio_term(p_t, p_mix);
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / static_cast<double>(samples);
  const double var =
      std::max(0.0, sum_sq / static_cast<double>(samples) - mean * mean);
  est.value = mean;
  est.std_error = std::sqrt(var / static_cast<double>(samples));
  est.samples = samples;
  return est;
}

double shannon_mi(const BowModel& model, std::span<const int> index_set) {
  require_index_set(model, index_set, "shannon_mi");
  const int n = static_cast<int>(index_set.size());
  if (n > kExactEnumLimit)
    throw std::invalid_argument("shannon_mi: index set too large");
  double mi = 0.0;
  const std::uint32_t total = 1u << n;
  std::vector<double> p_y(model.class_count);
  for (std::uint32_t z = 0; z < total; ++z) {
    double p_mix = 0.0;
    for (int y = 0; y < model.class_count; ++y) {
      p_y[y] = outcome_prob(model, index_set, y, z);
      p_mix += model.prior[y] * p_y[y];
    }
    if (p_mix == 0.0) continue;
    for (int y = 0; y < model.class_count; ++y) {
      if (model.prior[y] == 0.0 || p_y[y] == 0.0) continue;
      mi += model.prior[y] * p_y[y] * std::log(p_y[y] / p_mix);
    }
  }
  return mi;
}

EquilibriumSolution optimal_factual_index_set(const BowModel& model, int t,
                                              double alpha, const HPair& h) {
  require_two_class(model, "optimal_factual_index_set");
  if (alpha < 0.0)
    throw std::invalid_argument("optimal_factual_index_set: alpha < 0");

  std::vector<int> eligible;
  for (int i = 0; i < model.vocab_size; ++i)
    if (model.occ(t, i) - model.occ(1 - t, i) > kEligibilityTol)
      eligible.push_back(i);
  if (static_cast<int>(eligible.size()) > kExactEnumLimit)
    throw std::invalid_argument(
        "optimal_factual_index_set: " + std::to_string(eligible.size()) +
        " eligible words exceed the brute-force limit of " +
        std::to_string(kExactEnumLimit));

  const double budget_tol = 1e-12;
  std::vector<int> best_set;       // empty set is always feasible
  double best_obj = h.h0(1.0);
  double best_budget = 0.0;

  std::vector<int> subset;
  const std::uint32_t total = 1u << eligible.size();
  for (std::uint32_t mask = 1; mask < total; ++mask) {
    double budget = 0.0;
    subset.clear();
    for (std::size_t k = 0; k < eligible.size(); ++k) {
      if ((mask >> k) & 1u) {
        subset.push_back(eligible[k]);
        budget += model.occ(t, eligible[k]);
      }
    }
    if (budget > alpha + budget_tol) continue;
    const double obj = classwise_mi(model, subset, t, h).value;
    const bool better =
        obj > best_obj ||
        (obj == best_obj &&
         (budget < best_budget ||
          (budget == best_budget &&
           std::lexicographical_compare(subset.begin(), subset.end(),
                                        best_set.begin(), best_set.end()))));
    if (better) {
      best_set = subset;
      best_obj = obj;
      best_budget = budget;
    }
  }

  EquilibriumSolution sol;
  sol.index_set = std::move(best_set);
  sol.objective = best_obj;
  sol.budget_used = best_budget;
  sol.factual_policy.class_t = t;
  sol.factual_policy.role = PolicyRole::factual;
  sol.factual_policy.select_prob.assign(model.vocab_size, 0.0);
  for (int i : sol.index_set) sol.factual_policy.select_prob[i] = 1.0;
  sol.counterfactual_policy =
      best_response_counterfactual(sol.factual_policy, model, t);
  return sol;
}

EquilibriumReport verify_equilibrium(const SelectionPolicy& factual,
                                     const SelectionPolicy& counterfactual,
                                     const BowModel& model, int t,
                                     double alpha, double tol) {
  require_two_class(model, "verify_equilibrium");
  require_dim(factual, model, "verify_equilibrium");
  require_dim(counterfactual, model, "verify_equilibrium");
  EquilibriumReport rep;
  rep.tol = tol;

  const auto induced_f = induced_distribution(factual, model, t);
  const auto induced_c = induced_distribution(counterfactual, model, 1 - t);
  for (int i = 0; i < model.vocab_size; ++i) {
    const double want = std::min(induced_f[i], model.occ(1 - t, i));
    rep.counterfactual_linf =
        std::max(rep.counterfactual_linf, std::abs(induced_c[i] - want));
  }

  for (int i = 0; i < model.vocab_size; ++i) {
    const bool eligible =
        model.occ(t, i) - model.occ(1 - t, i) > kEligibilityTol;
    if (!eligible)
      rep.ineligible_mass = std::max(rep.ineligible_mass, induced_f[i]);
    rep.budget_used += induced_f[i];
  }
  rep.budget_slack = alpha - rep.budget_used;
  rep.pass = rep.counterfactual_linf <= tol && rep.ineligible_mass <= tol &&
             rep.budget_slack >= -tol;
  return rep;
}

}  // namespace carlab
