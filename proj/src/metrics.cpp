#include "carlab/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace carlab {

MetricsReport prf1(std::span<const Mask> predicted,
                   std::span<const Mask> truth) {
  if (predicted.size() != truth.size())
    throw std::invalid_argument("prf1: document count mismatch");
  MetricsReport rep;
  for (std::size_t j = 0; j < predicted.size(); ++j) {
    if (predicted[j].size() != truth[j].size())
      throw std::invalid_argument("prf1: mask length mismatch at document " +
                                  std::to_string(j));
    rep.tokens += static_cast<long>(predicted[j].size());
    for (std::size_t k = 0; k < predicted[j].size(); ++k) {
      const bool p = predicted[j][k] != 0;
      const bool g = truth[j][k] != 0;
      rep.selected += p;
      rep.truth += g;
      rep.true_positives += p && g;
    }
  }
  rep.sparsity =
      rep.tokens > 0 ? static_cast<double>(rep.selected) / rep.tokens : 0.0;
  rep.precision = rep.selected > 0
                      ? static_cast<double>(rep.true_positives) / rep.selected
                      : 0.0;
  rep.recall =
      rep.truth > 0 ? static_cast<double>(rep.true_positives) / rep.truth
                    : 0.0;
  rep.f1 = rep.precision + rep.recall > 0.0
               ? 2.0 * rep.precision * rep.recall /
                     (rep.precision + rep.recall)
               : 0.0;
  return rep;
}

double degeneration_score(std::span<const Mask> masks,
                          std::span<const Document> documents,
                          const BowModel& model, double polarity_tol) {
  if (masks.size() != documents.size())
    throw std::invalid_argument("degeneration_score: size mismatch");
  const auto polarity = word_polarity(model, polarity_tol);
  long selected = 0, neutral = 0;
  for (std::size_t j = 0; j < masks.size(); ++j) {
    const auto& mask = masks[j];
    const auto& doc = documents[j];
    if (!doc.tokens.empty() && mask.size() == doc.tokens.size()) {
      for (std::size_t k = 0; k < mask.size(); ++k) {
        if (!mask[k]) continue;
        ++selected;
        neutral += polarity[doc.tokens[k]] == kNeutralWord;
      }
    } else if (mask.size() == static_cast<std::size_t>(model.vocab_size)) {
      for (int i = 0; i < model.vocab_size; ++i) {
        if (!mask[i]) continue;
        ++selected;
        neutral += polarity[i] == kNeutralWord;
      }
    } else {
      throw std::invalid_argument(
          "degeneration_score: mask aligns with neither tokens nor vocab");
    }
  }
  return selected > 0 ? static_cast<double>(neutral) / selected : 0.0;
}

std::vector<CurveRow> export_curves(const BowModel& model,
                                    const SelectionPolicy& factual,
                                    const SelectionPolicy& counterfactual,
                                    int t) {
  if (model.class_count != 2)
    throw std::invalid_argument("export_curves: two-class model required");
  const int other = 1 - t;
  const auto induced_f = induced_distribution(factual, model, t);
  const auto induced_c = induced_distribution(counterfactual, model, other);

  std::vector<int> order(model.vocab_size);
  for (int i = 0; i < model.vocab_size; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double ga = model.occ(t, a) - model.occ(other, a);
    const double gb = model.occ(t, b) - model.occ(other, b);
    if (ga != gb) return ga > gb;
    return a < b;
  });

  std::vector<CurveRow> rows(model.vocab_size);
  for (int r = 0; r < model.vocab_size; ++r) {
    const int i = order[r];
    rows[r] = {r, i, model.occ(t, i), model.occ(other, i), induced_f[i],
               induced_c[i]};
  }
  return rows;
}

std::string curves_to_csv(std::span<const CurveRow> rows) {
  std::string csv = "rank,word,p_x_t,p_x_other,p_zf,p_zc\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g,%.17g\n", r.rank,
                  r.word, r.p_x_t, r.p_x_other, r.p_zf, r.p_zc);
    csv += buf;
  }
  return csv;
}

}  // namespace carlab
