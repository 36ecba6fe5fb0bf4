#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "carlab/bow_model.hpp"
#include "carlab/equilibrium.hpp"

namespace carlab {

// Micro-averaged mask agreement: counts pooled over all documents before
// the ratios are taken.
struct MetricsReport {
  double sparsity = 0.0;
  double precision = 0.0;  // 0 when nothing is selected
  double recall = 0.0;
  double f1 = 0.0;
  long true_positives = 0;
  long selected = 0;
  long truth = 0;
  long tokens = 0;
};

using Mask = std::vector<std::uint8_t>;

MetricsReport prf1(std::span<const Mask> predicted, std::span<const Mask> truth);

// Fraction of selected word occurrences whose polarity is neutral; 0 means
// every selection is class evidence. Masks align with sequence positions
// when the document has tokens, with vocabulary words otherwise.
double degeneration_score(std::span<const Mask> masks,
                          std::span<const Document> documents,
                          const BowModel& model, double polarity_tol = 1e-6);

// One row per word, sorted by the class-t occurrence gap (descending): the
// two occurrence upper bounds and the two induced rationale marginals.
struct CurveRow {
  int rank = 0;
  int word = 0;
  double p_x_t = 0.0;
  double p_x_other = 0.0;
  double p_zf = 0.0;
  double p_zc = 0.0;
};

std::vector<CurveRow> export_curves(const BowModel& model,
                                    const SelectionPolicy& factual,
                                    const SelectionPolicy& counterfactual,
                                    int t);

std::string curves_to_csv(std::span<const CurveRow> rows);

}  // namespace carlab
