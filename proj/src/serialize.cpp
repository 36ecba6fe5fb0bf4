#include "carlab/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace carlab {

json model_to_json(const BowModel& model) {
  json j;
  j["vocab_size"] = model.vocab_size;
  j["class_count"] = model.class_count;
  j["prior"] = model.prior;
  j["occurrence"] = model.occurrence;  // row-major
  j["word_names"] = model.word_names;
  return j;
}

BowModel model_from_json(const json& j) {
  BowModel model;
  model.vocab_size = j.at("vocab_size").get<int>();
  model.class_count = j.at("class_count").get<int>();
  model.prior = j.at("prior").get<std::vector<double>>();
  model.occurrence = j.at("occurrence").get<std::vector<double>>();
  if (j.contains("word_names") && !j["word_names"].is_null())
    model.word_names = j["word_names"].get<std::vector<std::string>>();
  validate_model(model);
  return model;
}

json document_to_json(const Document& doc) {
  json j;
  j["label"] = doc.label;
  j["bag"] = doc.bag;
  if (!doc.tokens.empty()) {
    j["tokens"] = doc.tokens;
    j["truth_mask"] = doc.truth_mask;
  }
  return j;
}

Document document_from_json(const json& j) {
  Document doc;
  doc.label = j.at("label").get<int>();
  doc.bag = j.at("bag").get<std::vector<std::uint8_t>>();
  if (j.contains("tokens")) {
    doc.tokens = j["tokens"].get<std::vector<int>>();
    doc.truth_mask = j.value("truth_mask", std::vector<std::uint8_t>{});
    if (!doc.truth_mask.empty() && doc.truth_mask.size() != doc.tokens.size())
      throw std::invalid_argument("truth_mask length != tokens length");
  }
  return doc;
}

std::string corpus_to_jsonl(std::span<const Document> corpus) {
  std::string out;
  for (const auto& doc : corpus) {
    out += document_to_json(doc).dump();
    out += '\n';
  }
  return out;
}

std::vector<Document> corpus_from_jsonl(const std::string& text) {
  std::vector<Document> corpus;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    corpus.push_back(document_from_json(json::parse(line)));
  }
  return corpus;
}

json solution_to_json(const EquilibriumSolution& sol, int class_t,
                      double alpha) {
  json j;
  j["index_set"] = sol.index_set;
  j["objective"] = sol.objective;
  j["budget_used"] = sol.budget_used;
  j["factual_select_prob"] = sol.factual_policy.select_prob;
  j["counterfactual_select_prob"] = sol.counterfactual_policy.select_prob;
  j["class_t"] = class_t;
  j["alpha"] = alpha;
  return j;
}

EquilibriumSolution solution_from_json(const json& j, int* class_t,
                                       double* alpha) {
  EquilibriumSolution sol;
  sol.index_set = j.at("index_set").get<std::vector<int>>();
  sol.objective = j.at("objective").get<double>();
  sol.budget_used = j.at("budget_used").get<double>();
  const int t = j.value("class_t", 0);
  sol.factual_policy.class_t = t;
  sol.factual_policy.role = PolicyRole::factual;
  sol.factual_policy.select_prob =
      j.at("factual_select_prob").get<std::vector<double>>();
  sol.counterfactual_policy.class_t = t;
  sol.counterfactual_policy.role = PolicyRole::counterfactual;
  sol.counterfactual_policy.select_prob =
      j.at("counterfactual_select_prob").get<std::vector<double>>();
  if (class_t) *class_t = t;
  if (alpha) *alpha = j.value("alpha", 0.0);
  return sol;
}

json train_config_to_json(const TrainConfig& cfg) {
  json j;
  j["h_kind"] = cfg.h_kind;
  j["lambda1"] = cfg.reg.lambda1;
  j["lambda2"] = cfg.reg.lambda2;
  j["alpha"] = cfg.reg.alpha;
  j["lr_generator"] = cfg.lr_generator;
  j["lr_discriminator"] = cfg.lr_discriminator;
  j["batch_size"] = cfg.batch_size;
  j["steps"] = cfg.steps;
  j["seed"] = cfg.seed;
  j["variant"] = cfg.variant == TrainVariant::bow ? "bow" : "sequence";
  j["embed_dim"] = cfg.embed_dim;
  return j;
}

TrainConfig train_config_from_json(const json& j) {
  TrainConfig cfg;
  cfg.h_kind = j.value("h_kind", cfg.h_kind);
  cfg.reg.lambda1 = j.value("lambda1", cfg.reg.lambda1);
  cfg.reg.lambda2 = j.value("lambda2", cfg.reg.lambda2);
  cfg.reg.alpha = j.value("alpha", cfg.reg.alpha);
  cfg.lr_generator = j.value("lr_generator", cfg.lr_generator);
  cfg.lr_discriminator = j.value("lr_discriminator", cfg.lr_discriminator);
  cfg.batch_size = j.value("batch_size", cfg.batch_size);
  cfg.steps = j.value("steps", cfg.steps);
  cfg.seed = j.value("seed", cfg.seed);
  const std::string variant = j.value("variant", "bow");
  if (variant == "bow") {
    cfg.variant = TrainVariant::bow;
  } else if (variant == "sequence") {
    cfg.variant = TrainVariant::sequence;
  } else {
    throw std::invalid_argument("unknown variant \"" + variant + "\"");
  }
  cfg.embed_dim = j.value("embed_dim", cfg.embed_dim);
  return cfg;
}

json trained_to_json(const TrainedModel& m) {
  json j;
  j["config"] = train_config_to_json(m.cfg);
  j["vocab_size"] = m.vocab_size;
  j["class_count"] = m.class_count;
  j["prior"] = m.prior;
  json gens = json::array();
  for (const auto& g : m.generators) {
    json jg;
    jg["class_t"] = g.class_t;
    if (m.cfg.variant == TrainVariant::bow) {
      jg["logits"] = g.logits;
      jg["logits_shape"] = {m.class_count, m.vocab_size};
    } else {
      jg["embed"] = g.embed;
      jg["embed_shape"] = {m.vocab_size, m.cfg.embed_dim};
      jg["w_word"] = g.w_word;
      jg["w_ctx"] = g.w_ctx;
      jg["w_label"] = g.w_label;
      jg["bias"] = g.bias;
    }
    gens.push_back(std::move(jg));
  }
  j["generators"] = std::move(gens);
  json jd;
  if (m.cfg.variant == TrainVariant::bow) {
    jd["weights"] = m.discriminator.weights;
    jd["weights_shape"] = {m.class_count, m.vocab_size};
    jd["bias"] = m.discriminator.bias;
  } else {
    jd["embed"] = m.discriminator.embed;
    jd["embed_shape"] = {m.vocab_size, m.cfg.embed_dim};
    jd["head"] = m.discriminator.head;
    jd["head_shape"] = {m.class_count, m.cfg.embed_dim};
    jd["bias"] = m.discriminator.bias;
  }
  j["discriminator"] = std::move(jd);
  return j;
}

TrainedModel trained_from_json(const json& j) {
  TrainedModel m;
  m.cfg = train_config_from_json(j.at("config"));
  m.vocab_size = j.at("vocab_size").get<int>();
  m.class_count = j.at("class_count").get<int>();
  m.prior = j.at("prior").get<std::vector<double>>();
  for (const auto& jg : j.at("generators")) {
    GeneratorParams g;
    g.class_t = jg.at("class_t").get<int>();
    if (m.cfg.variant == TrainVariant::bow) {
      g.logits = jg.at("logits").get<std::vector<double>>();
    } else {
      g.embed = jg.at("embed").get<std::vector<double>>();
      g.w_word = jg.at("w_word").get<std::vector<double>>();
      g.w_ctx = jg.at("w_ctx").get<std::vector<double>>();
      g.w_label = jg.at("w_label").get<std::vector<double>>();
      g.bias = jg.at("bias").get<double>();
    }
    m.generators.push_back(std::move(g));
  }
  const auto& jd = j.at("discriminator");
  if (m.cfg.variant == TrainVariant::bow) {
    m.discriminator.weights = jd.at("weights").get<std::vector<double>>();
    m.discriminator.bias = jd.at("bias").get<std::vector<double>>();
  } else {
    m.discriminator.embed = jd.at("embed").get<std::vector<double>>();
    m.discriminator.head = jd.at("head").get<std::vector<double>>();
    m.discriminator.bias = jd.at("bias").get<std::vector<double>>();
  }
  return m;
}

json metrics_to_json(const MetricsReport& rep) {
  json j;
  j["sparsity"] = rep.sparsity;
  j["precision"] = rep.precision;
  j["recall"] = rep.recall;
  j["f1"] = rep.f1;
  j["true_positives"] = rep.true_positives;
  j["selected"] = rep.selected;
  j["truth"] = rep.truth;
  j["tokens"] = rep.tokens;
  return j;
}

json equilibrium_report_to_json(const EquilibriumReport& rep) {
  json j;
  j["counterfactual_linf"] = rep.counterfactual_linf;
  j["ineligible_mass"] = rep.ineligible_mass;
  j["budget_used"] = rep.budget_used;
  j["budget_slack"] = rep.budget_slack;
  j["tol"] = rep.tol;
  j["pass"] = rep.pass;
  return j;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw std::runtime_error("read failed for " + path);
  return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("rename failed for " + path);
}

void save_model(const BowModel& model, const std::string& path) {
  write_file_atomic(path, model_to_json(model).dump(2) + "\n");
}

BowModel load_model(const std::string& path) {
  return model_from_json(json::parse(read_file(path)));
}

void save_corpus(std::span<const Document> corpus, const std::string& path) {
  write_file_atomic(path, corpus_to_jsonl(corpus));
}

std::vector<Document> load_corpus(const std::string& path) {
  return corpus_from_jsonl(read_file(path));
}

void save_trained(const TrainedModel& m, const std::string& path) {
  write_file_atomic(path, trained_to_json(m).dump() + "\n");
}

TrainedModel load_trained(const std::string& path) {
  return trained_from_json(json::parse(read_file(path)));
}

}  // namespace carlab
