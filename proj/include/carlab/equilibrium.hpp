#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "carlab/bow_model.hpp"
#include "carlab/objectives.hpp"

namespace carlab {

// Strict-inequality margin for a word to count as class-t evidence.
inline constexpr double kEligibilityTol = 1e-9;
// Largest index set enumerated exactly (2^|I| outcomes).
inline constexpr int kExactEnumLimit = 20;

enum class PolicyRole { factual, counterfactual };

// Per-word conditional selection probabilities: select_prob[i] is the chance
// of keeping word i given it is present. Induced rationale marginals are
// occurrence[y][i] * select_prob[i], so the presence upper bound holds by
// construction.
struct SelectionPolicy {
  int class_t = 0;
  PolicyRole role = PolicyRole::factual;
  std::vector<double> select_prob;
};

std::vector<double> induced_distribution(const SelectionPolicy& policy,
                                         const BowModel& model, int y);

// z_f / (z_f + z_c) where the masses are the joint probabilities of a
// rationale outcome under the factual and counterfactual generators.
double optimal_discriminator(double z_mass_factual,
                             double z_mass_counterfactual);

// Matches the factual rationale distribution wherever the counterfactual
// upper bound allows: induced marginal on class 1-t text becomes
// min(factual induced on class t, occurrence[1-t]).
SelectionPolicy best_response_counterfactual(const SelectionPolicy& factual,
                                             const BowModel& model, int t);

// Without a sparsity budget: keep every word occurring strictly more often
// in class t, drop the rest (the objective is indifferent there).
SelectionPolicy unconstrained_factual_best_response(const BowModel& model,
                                                    int t);

enum class MiMethod { exact, monte_carlo };

struct MiEstimate {
  double value = 0.0;
  double std_error = 0.0;  // 0 for the exact method
  long samples = 0;
};

// E over X_I ~ p(.|t) of h0( p(X_I|t) / p(X_I) ), in nats for the log pair.
// Exact enumerates 2^|I| outcomes; monte_carlo reports a standard error.
MiEstimate classwise_mi(const BowModel& model, std::span<const int> index_set,
                        int t, const HPair& h,
                        MiMethod method = MiMethod::exact,
                        long samples = 100000, std::uint64_t seed = 0);

// Exact I(Y; X_I) in nats by enumeration.
double shannon_mi(const BowModel& model, std::span<const int> index_set);

struct EquilibriumSolution {
  std::vector<int> index_set;
  double objective = 0.0;
  double budget_used = 0.0;
  SelectionPolicy factual_policy;
  SelectionPolicy counterfactual_policy;
};

// Brute-force search over subsets of eligible words (occurrence[t] strictly
// above occurrence[1-t]) with total occurrence budget <= alpha, maximizing
// classwise_mi. Ties break toward smaller budget, then the lexicographically
// smallest subset. Two-class models only.
EquilibriumSolution optimal_factual_index_set(const BowModel& model, int t,
                                              double alpha, const HPair& h);

struct EquilibriumReport {
  double counterfactual_linf = 0.0;  // vs the min-formula best response
  double ineligible_mass = 0.0;      // max factual induced marginal off the
                                     // eligible set
  double budget_used = 0.0;
  double budget_slack = 0.0;         // alpha - budget_used
  double tol = 0.0;
  bool pass = false;
};

EquilibriumReport verify_equilibrium(const SelectionPolicy& factual,
                                     const SelectionPolicy& counterfactual,
                                     const BowModel& model, int t,
                                     double alpha, double tol);

}  // namespace carlab
