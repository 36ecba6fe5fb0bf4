#include "carlab/bow_model.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <string>

namespace carlab {

void validate_model(const BowModel& model) {
  if (model.vocab_size < 1)
    throw std::invalid_argument("vocab_size must be >= 1, got " +
                                std::to_string(model.vocab_size));
  if (model.class_count < 2)
    throw std::invalid_argument("class_count must be >= 2, got " +
                                std::to_string(model.class_count));
  const std::size_t want =
      static_cast<std::size_t>(model.class_count) * model.vocab_size;
  if (model.occurrence.size() != want)
    throw std::invalid_argument(
        "occurrence has " + std::to_string(model.occurrence.size()) +
        " entries, expected " + std::to_string(want));
  for (int y = 0; y < model.class_count; ++y) {
    for (int i = 0; i < model.vocab_size; ++i) {
      const double p = model.occ(y, i);
      if (!(p >= 0.0 && p <= 1.0)) {
        char buf[96];
        std::snprintf(buf, sizeof buf,
                      "occurrence[%d][%d]=%g outside [0,1]", y, i, p);
        throw std::invalid_argument(buf);
      }
    }
  }
  if (model.prior.size() != static_cast<std::size_t>(model.class_count))
    throw std::invalid_argument("prior length " +
                                std::to_string(model.prior.size()) +
                                " != class_count");
  double sum = 0.0;
  for (std::size_t y = 0; y < model.prior.size(); ++y) {
    if (model.prior[y] < 0.0)
      throw std::invalid_argument("prior[" + std::to_string(y) +
                                  "] is negative");
    sum += model.prior[y];
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("prior not normalized: sums to " +
                                std::to_string(sum));
  if (!model.word_names.empty() &&
      model.word_names.size() != static_cast<std::size_t>(model.vocab_size))
    throw std::invalid_argument("word_names length != vocab_size");
}

std::vector<int> word_polarity(const BowModel& model, double tol) {
  std::vector<int> out(model.vocab_size, kNeutralWord);
  for (int i = 0; i < model.vocab_size; ++i) {
    int best = 0;
    for (int y = 1; y < model.class_count; ++y)
      if (model.occ(y, i) > model.occ(best, i)) best = y;
    bool dominant = true;
    for (int y = 0; y < model.class_count; ++y) {
      if (y == best) continue;
      if (!(model.occ(best, i) - model.occ(y, i) > tol)) {
        dominant = false;
        break;
      }
    }
    if (dominant) out[i] = best;
  }
  return out;
}

Document sample_document(const BowModel& model, int y, SplitRng& rng) {
  if (y < 0 || y >= model.class_count)
    throw std::invalid_argument("class index " + std::to_string(y) +
                                " out of range");
  Document doc;
  doc.label = y;
  doc.bag.resize(model.vocab_size);
  for (int i = 0; i < model.vocab_size; ++i)
    doc.bag[i] = rng.bernoulli(model.occ(y, i)) ? 1 : 0;
  return doc;
}

namespace {

// Cumulative-weight categorical draw; weights need not be normalized.
int draw_weighted(std::span<const int> ids, std::span<const double> weights,
                  SplitRng& rng) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (total <= 0.0) {  // all-zero weights: fall back to uniform
    return ids[static_cast<std::size_t>(rng.below(ids.size()))];
  }
  double u = rng.next_double() * total;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    u -= weights[k];
    if (u < 0.0) return ids[k];
  }
  return ids[ids.size() - 1];
}

}  // namespace

std::vector<Document> sample_sequence_corpus(const BowModel& model,
                                             const SequenceCorpusConfig& cfg,
                                             SplitRng& rng) {
  if (cfg.phrase_len > cfg.seq_len)
    throw std::invalid_argument("phrase_len exceeds seq_len");
  if (cfg.seq_len < 1) throw std::invalid_argument("seq_len must be >= 1");
  const auto polarity = word_polarity(model, cfg.polarity_tol);

  // Per class: phrase inventory (its own words) and background pool.
  std::vector<std::vector<int>> phrase_ids(model.class_count);
  std::vector<std::vector<int>> bg_ids(model.class_count);
  for (int i = 0; i < model.vocab_size; ++i) {
    if (polarity[i] != kNeutralWord) phrase_ids[polarity[i]].push_back(i);
    for (int y = 0; y < model.class_count; ++y) {
      if (polarity[i] == y) continue;
      if (polarity[i] != kNeutralWord && !cfg.mixed_background) continue;
      bg_ids[y].push_back(i);
    }
  }
  for (int y = 0; y < model.class_count; ++y) {
    if (cfg.phrase_len > 0 && phrase_ids[y].empty())
      throw std::invalid_argument("model has no class-" + std::to_string(y) +
                                  " words to plant");
    if (cfg.phrase_len < cfg.seq_len && bg_ids[y].empty())
      throw std::invalid_argument("no background words for class " +
                                  std::to_string(y));
  }

  std::vector<Document> corpus;
  corpus.reserve(static_cast<std::size_t>(cfg.docs_per_class) *
                 model.class_count);
  const int total = cfg.docs_per_class * model.class_count;
  for (int d = 0; d < total; ++d) {
    const int y = d % model.class_count;
    SplitRng sub = rng.split(static_cast<std::uint64_t>(d));
    Document doc;
    doc.label = y;
    doc.tokens.resize(cfg.seq_len);
    doc.truth_mask.assign(cfg.seq_len, 0);

    const int offset =
        cfg.phrase_len > 0
            ? static_cast<int>(sub.below(cfg.seq_len - cfg.phrase_len + 1))
            : 0;
    std::vector<double> w;
    for (int k = 0; k < cfg.seq_len; ++k) {
      const bool planted = cfg.phrase_len > 0 && k >= offset &&
                           k < offset + cfg.phrase_len;
      const auto& pool = planted ? phrase_ids[y] : bg_ids[y];
      w.resize(pool.size());
      for (std::size_t j = 0; j < pool.size(); ++j)
        w[j] = model.occ(y, pool[j]);
      doc.tokens[k] = draw_weighted(pool, w, sub);
      doc.truth_mask[k] = planted ? 1 : 0;
    }
    doc.bag.assign(model.vocab_size, 0);
    for (int tok : doc.tokens) doc.bag[tok] = 1;
    corpus.push_back(std::move(doc));
  }
  return corpus;
}

std::vector<Document> sample_bag_corpus(const BowModel& model,
                                        int docs_per_class, SplitRng& rng) {
  std::vector<Document> corpus;
  const int total = docs_per_class * model.class_count;
  corpus.reserve(total);
  for (int d = 0; d < total; ++d) {
    SplitRng sub = rng.split(static_cast<std::uint64_t>(d));
    corpus.push_back(sample_document(model, d % model.class_count, sub));
  }
  return corpus;
}

}  // namespace carlab
