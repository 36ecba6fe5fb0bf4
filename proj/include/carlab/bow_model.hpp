#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "carlab/rng.hpp"

namespace carlab {

// Class-conditional bag-of-words text model: word i occurs in a class-y text
// with probability occurrence[y][i], independently across words.
struct BowModel {
  int vocab_size = 0;
  int class_count = 0;
  std::vector<double> occurrence;       // row-major [class_count x vocab_size]
  std::vector<double> prior;            // length class_count, sums to 1
  std::vector<std::string> word_names;  // optional, length vocab_size

  double occ(int y, int i) const {
    return occurrence[static_cast<std::size_t>(y) * vocab_size + i];
  }
  double& occ(int y, int i) {
    return occurrence[static_cast<std::size_t>(y) * vocab_size + i];
  }
  std::span<const double> occ_row(int y) const {
    return {occurrence.data() + static_cast<std::size_t>(y) * vocab_size,
            static_cast<std::size_t>(vocab_size)};
  }
};

// A sampled instance. `bag` is the presence vector; `tokens`/`truth_mask`
// are filled only for sequence corpora (truth_mask marks planted positions).
struct Document {
  int label = 0;
  std::vector<std::uint8_t> bag;
  std::vector<int> tokens;
  std::vector<std::uint8_t> truth_mask;
};

inline constexpr int kNeutralWord = -1;

// Throws std::invalid_argument naming the first violated field.
void validate_model(const BowModel& model);

// polarity[i] = t when word i occurs more often in class t than in every
// other class by more than tol; kNeutralWord otherwise.
std::vector<int> word_polarity(const BowModel& model, double tol = 1e-6);

Document sample_document(const BowModel& model, int y, SplitRng& rng);

struct SequenceCorpusConfig {
  int docs_per_class = 0;
  int seq_len = 0;
  int phrase_len = 0;
  // When true, backgrounds may contain other classes' words (mixed-sentiment
  // documents); by default backgrounds are neutral words only.
  bool mixed_background = false;
  double polarity_tol = 1e-6;
};

// Token sequences of length seq_len with one contiguous planted phrase of
// class-label words at a uniform offset; truth_mask marks exactly the phrase.
// Labels alternate 0..C-1 so every prefix is balanced. Deterministic in rng;
// each document uses its own sub-stream.
std::vector<Document> sample_sequence_corpus(const BowModel& model,
                                             const SequenceCorpusConfig& cfg,
                                             SplitRng& rng);

// Bag documents, labels alternating, docs_per_class each.
std::vector<Document> sample_bag_corpus(const BowModel& model,
                                        int docs_per_class, SplitRng& rng);

}  // namespace carlab
