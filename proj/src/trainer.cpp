#include "carlab/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace carlab {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

bool clamp_active(double d) { return d <= kProbEps || d >= 1.0 - kProbEps; }

// Parameter layouts; gradient vectors and *_param_refs share these offsets.
struct GenLayout {
  int vocab, classes, dim;
  bool seq;
  std::size_t size() const {
    if (!seq) return static_cast<std::size_t>(classes) * vocab;
    return static_cast<std::size_t>(vocab) * dim + 2 * dim + classes + 1;
  }
  std::size_t logit(int label, int word) const {
    return static_cast<std::size_t>(label) * vocab + word;
  }
  std::size_t embed(int word, int d) const {
    return static_cast<std::size_t>(word) * dim + d;
  }
  std::size_t w_word(int d) const {
    return static_cast<std::size_t>(vocab) * dim + d;
  }
  std::size_t w_ctx(int d) const {
    return static_cast<std::size_t>(vocab) * dim + dim + d;
  }
  std::size_t w_label(int y) const {
    return static_cast<std::size_t>(vocab) * dim + 2 * dim + y;
  }
  std::size_t bias() const {
    return static_cast<std::size_t>(vocab) * dim + 2 * dim + classes;
  }
};

struct DiscLayout {
  int vocab, classes, dim;
  bool seq;
  std::size_t size() const {
    if (!seq) return static_cast<std::size_t>(classes) * vocab + classes;
    return static_cast<std::size_t>(vocab) * dim +
           static_cast<std::size_t>(classes) * dim + classes;
  }
  std::size_t weight(int t, int word) const {
    return static_cast<std::size_t>(t) * vocab + word;
  }
  std::size_t bias(int t) const {
    if (!seq) return static_cast<std::size_t>(classes) * vocab + t;
    return static_cast<std::size_t>(vocab) * dim +
           static_cast<std::size_t>(classes) * dim + t;
  }
  std::size_t embed(int word, int d) const {
    return static_cast<std::size_t>(word) * dim + d;
  }
  std::size_t head(int t, int d) const {
    return static_cast<std::size_t>(vocab) * dim +
           static_cast<std::size_t>(t) * dim + d;
  }
};

GenLayout gen_layout(const TrainedModel& m) {
  return {m.vocab_size, m.class_count, m.cfg.embed_dim,
          m.cfg.variant == TrainVariant::sequence};
}
DiscLayout disc_layout(const TrainedModel& m) {
  return {m.vocab_size, m.class_count, m.cfg.embed_dim,
          m.cfg.variant == TrainVariant::sequence};
}

// Per-document forward products kept for the backward pass.
struct DocForward {
  const Document* doc = nullptr;
  bool factual = false;
  std::vector<double> probs;  // bow: per word (0 if absent); seq: per position
  std::vector<double> z;      // mask actually fed to the discriminator
  std::vector<int> arg;       // seq: argmax position per pooled dim
  std::vector<double> pooled; // seq
  double d = 0.5;
};

void check_document(const TrainedModel& m, const Document& doc) {
  if (m.cfg.variant == TrainVariant::bow) {
    if (doc.bag.size() != static_cast<std::size_t>(m.vocab_size))
      throw std::invalid_argument("document bag size != vocab_size");
  } else {
    if (doc.tokens.empty())
      throw std::invalid_argument("sequence variant requires token documents");
    for (int tok : doc.tokens)
      if (tok < 0 || tok >= m.vocab_size)
        throw std::invalid_argument("token id out of vocabulary");
  }
  if (doc.label < 0 || doc.label >= m.class_count)
    throw std::invalid_argument("document label out of range");
}

std::vector<double> generator_probs(const TrainedModel& m, int t,
                                    const Document& doc, int mode_label) {
  const auto& gen = m.generators[t];
  const GenLayout L = gen_layout(m);
  if (m.cfg.variant == TrainVariant::bow) {
    std::vector<double> probs(m.vocab_size, 0.0);
    for (int i = 0; i < m.vocab_size; ++i)
      if (doc.bag[i]) probs[i] = sigmoid(gen.logits[L.logit(mode_label, i)]);
    return probs;
  }
  const int K = static_cast<int>(doc.tokens.size());
  const int D = m.cfg.embed_dim;
  std::vector<double> probs(K);
  for (int k = 0; k < K; ++k) {
    double a = gen.w_label[mode_label] + gen.bias;
    const double* e = gen.embed.data() + L.embed(doc.tokens[k], 0);
    for (int d = 0; d < D; ++d) a += gen.w_word[d] * e[d];
    const int lo = k > 0 ? k - 1 : k + 1;
    const int hi = k + 1 < K ? k + 1 : k - 1;
    if (lo >= 0 && lo < K) {
      const int n_ngb = (k > 0 && k + 1 < K) ? 2 : 1;
      double cd;
      for (int d = 0; d < D; ++d) {
        cd = gen.embed[L.embed(doc.tokens[lo], d)];
        if (n_ngb == 2) cd += gen.embed[L.embed(doc.tokens[hi], d)];
        a += gen.w_ctx[d] * cd / n_ngb;
      }
    }
    probs[k] = sigmoid(a);
  }
  return probs;
}

// Gradients of one batch at fixed parameters. `sampled` selects the
// straight-through forward; otherwise masks are the probabilities.
struct BatchResult {
  LossBreakdown values;
  std::vector<double> disc_grad;
  std::vector<double> gen_f, gen_c, gen_pen;
};

BatchResult run_batch(const TrainedModel& m, int t,
                      std::span<const Document> batch, bool sampled,
                      SplitRng* rng) {
  if (t < 0 || t >= m.class_count)
    throw std::invalid_argument("train step: class out of range");
  if (batch.empty()) throw std::invalid_argument("train step: empty batch");
  const bool seq = m.cfg.variant == TrainVariant::sequence;
  const int D = m.cfg.embed_dim;
  const GenLayout GL = gen_layout(m);
  const DiscLayout DL = disc_layout(m);
  const HPair h = HPair::from_name(m.cfg.h_kind);
  const auto& disc = m.discriminator;

  int n_f = 0, n_c = 0;
  for (const auto& doc : batch) {
    check_document(m, doc);
    (doc.label == t ? n_f : n_c)++;
  }
  if (n_f == 0 || n_c == 0)
    throw std::invalid_argument(
        "train step: batch must contain factual and counterfactual labels");

  // Forward.
  std::vector<DocForward> fwd(batch.size());
  for (std::size_t j = 0; j < batch.size(); ++j) {
    DocForward& f = fwd[j];
    f.doc = &batch[j];
    f.factual = batch[j].label == t;
    f.probs = generator_probs(m, t, batch[j], batch[j].label);
    f.z.resize(f.probs.size());
    if (sampled) {
      for (std::size_t k = 0; k < f.probs.size(); ++k)
        f.z[k] = (f.probs[k] > 0.0 && rng->bernoulli(f.probs[k])) ? 1.0 : 0.0;
    } else {
      f.z = f.probs;
    }
    double score;
    if (!seq) {
      score = disc.bias[t];
      for (int i = 0; i < m.vocab_size; ++i)
        if (f.z[i] != 0.0) score += disc.weights[DL.weight(t, i)] * f.z[i];
    } else {
      const int K = static_cast<int>(batch[j].tokens.size());
      f.pooled.assign(D, 0.0);
      f.arg.assign(D, -1);
      // Masked-out tokens contribute zero vectors, which take part in the
      // max-pool; seed with position 0's contribution.
      for (int d = 0; d < D; ++d) {
        f.pooled[d] = f.z[0] * disc.embed[DL.embed(batch[j].tokens[0], d)];
        f.arg[d] = 0;
      }
      for (int k = 1; k < K; ++k) {
        for (int d = 0; d < D; ++d) {
          const double v = f.z[k] * disc.embed[DL.embed(batch[j].tokens[k], d)];
          if (v > f.pooled[d]) {
            f.pooled[d] = v;
            f.arg[d] = k;
          }
        }
      }
      score = disc.bias[t];
      for (int d = 0; d < D; ++d)
        score += disc.head[static_cast<std::size_t>(t) * D + d] * f.pooled[d];
    }
    f.d = sigmoid(score);
  }

  BatchResult out;
  out.disc_grad.assign(DL.size(), 0.0);
  out.gen_f.assign(GL.size(), 0.0);
  out.gen_c.assign(GL.size(), 0.0);
  out.gen_pen.assign(GL.size(), 0.0);

  // Loss values.
  const double w_f = m.prior[t];
  const double w_c = 1.0 - m.prior[t];
  double log_f = 0.0, log_c = 0.0, obj_f = 0.0, obj_c = 0.0;
  for (const auto& f : fwd) {
    if (f.factual) {
      log_f += std::log(clamp_prob(f.d));
      obj_f += h.h0(f.d);
    } else {
      log_c += std::log(clamp_prob(1.0 - f.d));
      obj_c += h.h1(f.d);
    }
  }
  out.values.disc_loss = -w_f * log_f / n_f - w_c * log_c / n_c;
  out.values.gen_obj_factual = obj_f / n_f;
  out.values.gen_obj_counterfactual = obj_c / n_c;

  // Regularizer on the relaxed probabilities (exact mask expectation).
  // The selected-fraction denominator is the vocabulary size for bags and
  // the sequence length for token documents.
  double frac[2] = {0.0, 0.0};   // [factual, counterfactual]
  double trans[2] = {0.0, 0.0};
  for (const auto& f : fwd) {
    const int r = f.factual ? 0 : 1;
    double s = 0.0;
    for (double p : f.probs) s += p;
    frac[r] += s / static_cast<double>(f.probs.size());
    if (seq) {
      // Expected transition count of the sampled mask:
      // E|S_k - S_{k-1}| = p_k + p_{k-1} - 2 p_k p_{k-1}.
      for (std::size_t k = 1; k < f.probs.size(); ++k)
        trans[r] += f.probs[k] + f.probs[k - 1] -
                    2.0 * f.probs[k] * f.probs[k - 1];
    }
  }
  frac[0] /= n_f;
  frac[1] /= n_c;
  trans[0] /= n_f;
  trans[1] /= n_c;
  const auto& reg = m.cfg.reg;
  out.values.penalty =
      reg.lambda1 * (std::abs(frac[0] - reg.alpha) +
                     std::abs(frac[1] - reg.alpha)) +
      reg.lambda2 * (trans[0] + trans[1]);
  out.values.sparsity_factual = frac[0];

  // Backward.
  for (const auto& f : fwd) {
    const Document& doc = *f.doc;
    const int r = f.factual ? 0 : 1;
    const int n_r = f.factual ? n_f : n_c;

    // Discriminator loss gradient w.r.t. the pre-sigmoid score.
    double g_disc_score = 0.0;
    if (!clamp_active(f.d))
      g_disc_score = f.factual ? -w_f * (1.0 - f.d) / n_f
                               : w_c * f.d / n_c;

    // Generator objective gradient w.r.t. the score (role-specific).
    const double dh = f.factual ? h.dh0(f.d) : h.dh1(f.d);
    const double g_gen_score = dh * f.d * (1.0 - f.d) / n_r;
    auto& gen_obj_grad = f.factual ? out.gen_f : out.gen_c;

    // Scatter through the discriminator input and the mask.
    if (!seq) {
      out.disc_grad[DL.bias(t)] += g_disc_score;
      for (int i = 0; i < m.vocab_size; ++i) {
        if (!doc.bag[i]) continue;
        out.disc_grad[DL.weight(t, i)] += g_disc_score * f.z[i];
        // Straight-through: d score / d prob_i = weight, then sigmoid'.
        const double g_prob = g_gen_score * disc.weights[DL.weight(t, i)];
        gen_obj_grad[GL.logit(doc.label, i)] +=
            g_prob * f.probs[i] * (1.0 - f.probs[i]);
      }
    } else {
      const int K = static_cast<int>(doc.tokens.size());
      out.disc_grad[DL.bias(t)] += g_disc_score;
      std::vector<double> g_z(K, 0.0);
      for (int d = 0; d < D; ++d) {
        out.disc_grad[DL.head(t, d)] += g_disc_score * f.pooled[d];
        const int k = f.arg[d];
        if (k < 0) continue;
        const double head_td = disc.head[static_cast<std::size_t>(t) * D + d];
        out.disc_grad[DL.embed(doc.tokens[k], d)] +=
            g_disc_score * head_td * f.z[k];
        g_z[k] += head_td * disc.embed[DL.embed(doc.tokens[k], d)];
      }
      // Generator parameters via straight-through mask gradients.
      const auto& gen = m.generators[t];
      for (int k = 0; k < K; ++k) {
        if (g_z[k] == 0.0) continue;
        const double g_a =
            g_gen_score * g_z[k] * f.probs[k] * (1.0 - f.probs[k]);
        const double* e = gen.embed.data() + GL.embed(doc.tokens[k], 0);
        const int lo = k > 0 ? k - 1 : k + 1;
        const int hi = k + 1 < K ? k + 1 : k - 1;
        const int n_ngb = (k > 0 && k + 1 < K) ? 2 : (K > 1 ? 1 : 0);
        for (int d = 0; d < D; ++d) {
          gen_obj_grad[GL.w_word(d)] += g_a * e[d];
          gen_obj_grad[GL.embed(doc.tokens[k], d)] += g_a * gen.w_word[d];
          if (n_ngb > 0) {
            double cd = gen.embed[GL.embed(doc.tokens[lo], d)];
            if (n_ngb == 2) cd += gen.embed[GL.embed(doc.tokens[hi], d)];
            gen_obj_grad[GL.w_ctx(d)] += g_a * cd / n_ngb;
            gen_obj_grad[GL.embed(doc.tokens[lo], d)] +=
                g_a * gen.w_ctx[d] / n_ngb;
            if (n_ngb == 2)
              gen_obj_grad[GL.embed(doc.tokens[hi], d)] +=
                  g_a * gen.w_ctx[d] / n_ngb;
          }
        }
        gen_obj_grad[GL.w_label(doc.label)] += g_a;
        gen_obj_grad[GL.bias()] += g_a;
      }
    }

    // Penalty gradient w.r.t. the probabilities.
    const double denom = static_cast<double>(f.probs.size());
    const double g_sparse =
        reg.lambda1 * sign(frac[r] - reg.alpha) / (n_r * denom);
    const int K = static_cast<int>(f.probs.size());
    for (int k = 0; k < K; ++k) {
      double g_p = 0.0;
      if (!seq) {
        if (!doc.bag[k]) continue;
        g_p = g_sparse;
      } else {
        g_p = g_sparse;
        if (k > 0)
          g_p += reg.lambda2 * (1.0 - 2.0 * f.probs[k - 1]) / n_r;
        if (k + 1 < K)
          g_p += reg.lambda2 * (1.0 - 2.0 * f.probs[k + 1]) / n_r;
      }
      const double g_logit = g_p * f.probs[k] * (1.0 - f.probs[k]);
      if (!seq) {
        out.gen_pen[GL.logit(doc.label, k)] += g_logit;
      } else {
        const auto& gen = m.generators[t];
        const double* e = gen.embed.data() + GL.embed(doc.tokens[k], 0);
        const int lo = k > 0 ? k - 1 : k + 1;
        const int hi = k + 1 < K ? k + 1 : k - 1;
        const int n_ngb = (k > 0 && k + 1 < K) ? 2 : (K > 1 ? 1 : 0);
        for (int d = 0; d < D; ++d) {
          out.gen_pen[GL.w_word(d)] += g_logit * e[d];
          out.gen_pen[GL.embed(doc.tokens[k], d)] += g_logit * gen.w_word[d];
          if (n_ngb > 0) {
            double cd = gen.embed[GL.embed(doc.tokens[lo], d)];
            if (n_ngb == 2) cd += gen.embed[GL.embed(doc.tokens[hi], d)];
            out.gen_pen[GL.w_ctx(d)] += g_logit * cd / n_ngb;
            out.gen_pen[GL.embed(doc.tokens[lo], d)] +=
                g_logit * gen.w_ctx[d] / n_ngb;
            if (n_ngb == 2)
              out.gen_pen[GL.embed(doc.tokens[hi], d)] +=
                  g_logit * gen.w_ctx[d] / n_ngb;
          }
        }
        out.gen_pen[GL.w_label(doc.label)] += g_logit;
        out.gen_pen[GL.bias()] += g_logit;
      }
    }
  }
  return out;
}

void validate_config(const TrainConfig& cfg, int class_count) {
  HPair::from_name(cfg.h_kind);
  validate_regularizer(cfg.reg);
  if (cfg.lr_generator < 0.0 || cfg.lr_discriminator < 0.0)
    throw std::invalid_argument("learning rates must be nonnegative");
  if (cfg.batch_size < 1)
    throw std::invalid_argument("batch_size must be >= 1");
  if (cfg.steps < 0) throw std::invalid_argument("steps must be >= 0");
  if (cfg.variant == TrainVariant::sequence && cfg.embed_dim < 1)
    throw std::invalid_argument("sequence variant requires embed_dim >= 1");
  if (class_count < 2) throw std::invalid_argument("class_count must be >= 2");
}

}  // namespace

TrainedModel init_params(int vocab_size, int class_count,
                         std::span<const double> prior,
                         const TrainConfig& cfg) {
  validate_config(cfg, class_count);
  if (vocab_size < 1) throw std::invalid_argument("vocab_size must be >= 1");
  if (prior.size() != static_cast<std::size_t>(class_count))
    throw std::invalid_argument("prior length != class_count");

  TrainedModel m;
  m.cfg = cfg;
  m.vocab_size = vocab_size;
  m.class_count = class_count;
  m.prior.assign(prior.begin(), prior.end());

  SplitRng rng = SplitRng(cfg.seed).split(0);
  auto fill = [&](std::vector<double>& v, std::size_t n) {
    v.resize(n);
    for (auto& x : v) x = rng.uniform(-0.1, 0.1);
  };

  const bool seq = cfg.variant == TrainVariant::sequence;
  const int D = cfg.embed_dim;
  m.generators.resize(class_count);
  for (int t = 0; t < class_count; ++t) {
    auto& gen = m.generators[t];
    gen.class_t = t;
    if (!seq) {
      fill(gen.logits, static_cast<std::size_t>(class_count) * vocab_size);
    } else {
      fill(gen.embed, static_cast<std::size_t>(vocab_size) * D);
      fill(gen.w_word, D);
      fill(gen.w_ctx, D);
      fill(gen.w_label, class_count);
      gen.bias = rng.uniform(-0.1, 0.1);
    }
  }
  if (!seq) {
    fill(m.discriminator.weights,
         static_cast<std::size_t>(class_count) * vocab_size);
    fill(m.discriminator.bias, class_count);
  } else {
    fill(m.discriminator.embed, static_cast<std::size_t>(vocab_size) * D);
    fill(m.discriminator.head, static_cast<std::size_t>(class_count) * D);
    fill(m.discriminator.bias, class_count);
  }
  return m;
}

RationaleMask straight_through_mask(std::span<const double> probs,
                                    SplitRng& rng) {
  RationaleMask mask;
  mask.relaxed.assign(probs.begin(), probs.end());
  mask.hard.resize(probs.size());
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (!(probs[k] >= 0.0 && probs[k] <= 1.0))
      throw std::invalid_argument("mask probability outside [0,1]");
    mask.hard[k] = rng.bernoulli(probs[k]) ? 1 : 0;
  }
  return mask;
}

StepLosses train_step_class(TrainedModel& model, int t,
                            std::span<const Document> batch, SplitRng& rng) {
  const BatchResult g = run_batch(model, t, batch, /*sampled=*/true, &rng);

  auto drefs = disc_param_refs(model);
  for (std::size_t k = 0; k < drefs.size(); ++k)
    *drefs[k] -= model.cfg.lr_discriminator * g.disc_grad[k];
  auto grefs = gen_param_refs(model, t);
  for (std::size_t k = 0; k < grefs.size(); ++k)
    *grefs[k] += model.cfg.lr_generator *
                 (g.gen_f[k] + g.gen_c[k] - g.gen_pen[k]);

  StepLosses losses;
  losses.disc_loss = g.values.disc_loss;
  losses.gen_obj =
      g.values.gen_obj_factual + g.values.gen_obj_counterfactual;
  losses.sparsity = g.values.sparsity_factual;
  losses.penalty = g.values.penalty;
  return losses;
}

namespace {

TrainedModel train_loop(
    const TrainConfig& cfg, int vocab_size, int class_count,
    std::span<const double> prior,
    const std::function<Document(int label, SplitRng&)>& draw_doc) {
  TrainedModel m = init_params(vocab_size, class_count, prior, cfg);
  SplitRng root(cfg.seed);
  const int n_per = std::max(1, cfg.batch_size / class_count);
  std::vector<Document> batch;
  for (long s = 0; s < cfg.steps; ++s) {
    SplitRng step_rng = root.split(static_cast<std::uint64_t>(s) + 1);
    batch.clear();
    for (int y = 0; y < class_count; ++y)
      for (int j = 0; j < n_per; ++j) batch.push_back(draw_doc(y, step_rng));
    const int t = static_cast<int>(s % class_count);
    const StepLosses losses = train_step_class(m, t, batch, step_rng);
    m.history.push_back({s, t, losses.disc_loss, losses.gen_obj,
                         losses.sparsity, losses.penalty});
  }
  return m;
}

}  // namespace

TrainedModel train(const BowModel& model, const TrainConfig& cfg) {
  validate_model(model);
  if (cfg.variant != TrainVariant::bow)
    throw std::invalid_argument(
        "training directly from a model is bow-variant only");
  return train_loop(cfg, model.vocab_size, model.class_count, model.prior,
                    [&](int y, SplitRng& rng) {
                      return sample_document(model, y, rng);
                    });
}

TrainedModel train(std::span<const Document> corpus, int vocab_size,
                   int class_count, const TrainConfig& cfg) {
  std::vector<std::vector<int>> pool(class_count);
  for (std::size_t j = 0; j < corpus.size(); ++j) {
    const int y = corpus[j].label;
    if (y < 0 || y >= class_count)
      throw std::invalid_argument("corpus label out of range");
    pool[y].push_back(static_cast<int>(j));
  }
  std::vector<double> prior(class_count);
  for (int y = 0; y < class_count; ++y) {
    if (pool[y].empty())
      throw std::invalid_argument("corpus has no documents of class " +
                                  std::to_string(y));
    prior[y] = static_cast<double>(pool[y].size()) /
               static_cast<double>(corpus.size());
  }
  return train_loop(cfg, vocab_size, class_count, prior,
                    [&](int y, SplitRng& rng) {
                      const auto& ids = pool[y];
                      return corpus[ids[static_cast<std::size_t>(
                          rng.below(ids.size()))]];
                    });
}

TrainedModel multiclass_train(std::span<const Document> corpus,
                              int vocab_size, int class_count,
                              const TrainConfig& cfg) {
  return train(corpus, vocab_size, class_count, cfg);
}

RationaleMask infer_rationale(const TrainedModel& model, const Document& doc,
                              int t, std::optional<int> label) {
  if (t < 0 || t >= model.class_count)
    throw std::invalid_argument("infer_rationale: class out of range");
  if (label && (*label < 0 || *label >= model.class_count))
    throw std::invalid_argument("infer_rationale: label out of range");
  check_document(model, doc);
  const int mode = label.value_or(t);
  RationaleMask mask;
  mask.relaxed = generator_probs(model, t, doc, mode);
  mask.hard.resize(mask.relaxed.size());
  for (std::size_t k = 0; k < mask.relaxed.size(); ++k)
    mask.hard[k] = mask.relaxed[k] > 0.5 ? 1 : 0;
  return mask;
}

SelectionPolicy bow_policy(const TrainedModel& model, int t, PolicyRole role) {
  if (model.cfg.variant != TrainVariant::bow)
    throw std::invalid_argument("bow_policy: bow variant only");
  if (t < 0 || t >= model.class_count)
    throw std::invalid_argument("bow_policy: class out of range");
  int mode = t;
  if (role == PolicyRole::counterfactual) {
    if (model.class_count != 2)
      throw std::invalid_argument(
          "bow_policy: counterfactual mode needs a two-class model");
    mode = 1 - t;
  }
  const GenLayout L = gen_layout(model);
  SelectionPolicy policy;
  policy.class_t = t;
  policy.role = role;
  policy.select_prob.resize(model.vocab_size);
  for (int i = 0; i < model.vocab_size; ++i)
    policy.select_prob[i] =
        sigmoid(model.generators[t].logits[L.logit(mode, i)]);
  return policy;
}

LossBreakdown eval_losses_relaxed(const TrainedModel& model, int t,
                                  std::span<const Document> batch) {
  return run_batch(model, t, batch, /*sampled=*/false, nullptr).values;
}

StepGradients eval_gradients_relaxed(const TrainedModel& model, int t,
                                     std::span<const Document> batch) {
  BatchResult r = run_batch(model, t, batch, /*sampled=*/false, nullptr);
  StepGradients g;
  g.values = r.values;
  g.disc_grad = std::move(r.disc_grad);
  g.gen_grad_factual = std::move(r.gen_f);
  g.gen_grad_counter = std::move(r.gen_c);
  g.gen_grad_penalty = std::move(r.gen_pen);
  return g;
}

std::vector<double*> gen_param_refs(TrainedModel& model, int t) {
  auto& gen = model.generators.at(t);
  std::vector<double*> refs;
  if (model.cfg.variant == TrainVariant::bow) {
    refs.reserve(gen.logits.size());
    for (auto& x : gen.logits) refs.push_back(&x);
  } else {
    refs.reserve(gen.embed.size() + gen.w_word.size() + gen.w_ctx.size() +
                 gen.w_label.size() + 1);
    for (auto& x : gen.embed) refs.push_back(&x);
    for (auto& x : gen.w_word) refs.push_back(&x);
    for (auto& x : gen.w_ctx) refs.push_back(&x);
    for (auto& x : gen.w_label) refs.push_back(&x);
    refs.push_back(&gen.bias);
  }
  return refs;
}

std::vector<double*> disc_param_refs(TrainedModel& model) {
  auto& d = model.discriminator;
  std::vector<double*> refs;
  if (model.cfg.variant == TrainVariant::bow) {
    for (auto& x : d.weights) refs.push_back(&x);
    for (auto& x : d.bias) refs.push_back(&x);
  } else {
    for (auto& x : d.embed) refs.push_back(&x);
    for (auto& x : d.head) refs.push_back(&x);
    for (auto& x : d.bias) refs.push_back(&x);
  }
  return refs;
}

std::string history_to_csv(std::span<const HistoryRow> history) {
  std::string csv = "step,t,disc_loss,gen_obj,sparsity,penalty\n";
  char buf[192];
  for (const auto& row : history) {
    std::snprintf(buf, sizeof buf, "%ld,%d,%.17g,%.17g,%.17g,%.17g\n",
                  row.step, row.t, row.disc_loss, row.gen_obj, row.sparsity,
                  row.penalty);
    csv += buf;
  }
  return csv;
}

}  // namespace carlab
