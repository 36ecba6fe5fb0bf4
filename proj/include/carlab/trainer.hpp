#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "carlab/bow_model.hpp"
#include "carlab/equilibrium.hpp"
#include "carlab/objectives.hpp"

namespace carlab {

enum class TrainVariant { bow, sequence };

struct TrainConfig {
  std::string h_kind = "linear";  // "log" | "linear"
  RegularizerConfig reg;          // alpha = target selected fraction
  double lr_generator = 0.05;
  double lr_discriminator = 0.05;
  int batch_size = 64;  // split equally across labels each step
  long steps = 1000;
  std::uint64_t seed = 0;
  TrainVariant variant = TrainVariant::bow;
  int embed_dim = 8;  // sequence variant only
};

// One generator per class t; the ground-truth label is an extra input that
// switches it between factual (label == t) and counterfactual modes.
struct GeneratorParams {
  int class_t = 0;
  // bow: one logit per (label input, word), row-major [class_count x vocab].
  std::vector<double> logits;
  // sequence: per-word-type embeddings plus a linear scorer over
  // (embedding, mean neighbor embedding, label one-hot).
  std::vector<double> embed;    // [vocab x embed_dim]
  std::vector<double> w_word;   // [embed_dim]
  std::vector<double> w_ctx;    // [embed_dim]
  std::vector<double> w_label;  // [class_count]
  double bias = 0.0;
};

// Shared discriminator d(., t); t selects a weight row / output head.
struct DiscriminatorParams {
  // bow: linear score over selected-word indicators, [class_count x vocab].
  std::vector<double> weights;
  std::vector<double> bias;  // [class_count]
  // sequence: masked token embeddings max-pooled, then a per-t linear head.
  std::vector<double> embed;  // [vocab x embed_dim]
  std::vector<double> head;   // [class_count x embed_dim]
};

struct RationaleMask {
  std::vector<std::uint8_t> hard;  // {0,1}
  std::vector<double> relaxed;     // selection probabilities
};

struct HistoryRow {
  long step = 0;
  int t = 0;
  double disc_loss = 0.0;
  double gen_obj = 0.0;
  double sparsity = 0.0;  // expected factual selected fraction of the batch
  double penalty = 0.0;
};

struct StepLosses {
  double disc_loss = 0.0;
  double gen_obj = 0.0;
  double sparsity = 0.0;
  double penalty = 0.0;
};

struct TrainedModel {
  TrainConfig cfg;
  int vocab_size = 0;
  int class_count = 0;
  std::vector<double> prior;  // Eq-weighting of the two loss terms
  std::vector<GeneratorParams> generators;
  DiscriminatorParams discriminator;
  std::vector<HistoryRow> history;
};

// Logits and embeddings i.i.d. uniform in [-0.1, 0.1]; deterministic in
// cfg.seed. Validates the config.
TrainedModel init_params(int vocab_size, int class_count,
                         std::span<const double> prior,
                         const TrainConfig& cfg);

// Forward value is an independent Bernoulli draw per entry; downstream
// gradients pass through to the probabilities unchanged.
RationaleMask straight_through_mask(std::span<const double> probs,
                                    SplitRng& rng);

// One simultaneous gradient step of the class-t group: the discriminator
// descends its loss, generator t ascends its objective minus the
// regularizer. Factual/counterfactual roles follow each document's label.
StepLosses train_step_class(TrainedModel& model, int t,
                            std::span<const Document> batch, SplitRng& rng);

// Alternates class-t steps with fresh bag batches sampled from the model.
TrainedModel train(const BowModel& model, const TrainConfig& cfg);

// Same loop over a fixed corpus (bow or sequence documents). Works for any
// class_count >= 2; every class must appear in the corpus.
TrainedModel train(std::span<const Document> corpus, int vocab_size,
                   int class_count, const TrainConfig& cfg);

TrainedModel multiclass_train(std::span<const Document> corpus,
                              int vocab_size, int class_count,
                              const TrainConfig& cfg);

// Factual mode g_t(., t) unless a ground-truth label is supplied, in which
// case the label drives the mode input. Quantized at 0.5, deterministic.
RationaleMask infer_rationale(const TrainedModel& model, const Document& doc,
                              int t, std::optional<int> label = std::nullopt);

// Bow selection probabilities of generator t in the given role (two-class
// counterfactual mode reads the opposite label input).
SelectionPolicy bow_policy(const TrainedModel& model, int t, PolicyRole role);

// --- relaxed-mode evaluation (masks = probabilities, no sampling) ---------
// Used to verify analytic gradients against finite differences.

struct LossBreakdown {
  double disc_loss = 0.0;
  double gen_obj_factual = 0.0;
  double gen_obj_counterfactual = 0.0;
  double penalty = 0.0;
  double sparsity_factual = 0.0;
};

struct StepGradients {
  LossBreakdown values;
  std::vector<double> disc_grad;         // d disc_loss / d disc params
  std::vector<double> gen_grad_factual;  // d factual objective / d gen params
  std::vector<double> gen_grad_counter;
  std::vector<double> gen_grad_penalty;
};

LossBreakdown eval_losses_relaxed(const TrainedModel& model, int t,
                                  std::span<const Document> batch);
StepGradients eval_gradients_relaxed(const TrainedModel& model, int t,
                                     std::span<const Document> batch);

// Mutable views over every parameter of generator t / the discriminator,
// in the exact order the gradient vectors use.
std::vector<double*> gen_param_refs(TrainedModel& model, int t);
std::vector<double*> disc_param_refs(TrainedModel& model);

std::string history_to_csv(std::span<const HistoryRow> history);

}  // namespace carlab
