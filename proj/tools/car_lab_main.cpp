// car-lab: command-line front end for the class-wise adversarial
// rationalization laboratory. Every command resolves its config, runs, and
// writes a manifest with artifact checksums next to its outputs.

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "carlab/manifest.hpp"
#include "carlab/serialize.hpp"

namespace fs = std::filesystem;
using namespace carlab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct Common {
  std::optional<std::uint64_t> seed_flag;
  bool dry_run = false;
  bool pretty = false;

  std::uint64_t seed() const {
    if (seed_flag) return *seed_flag;
    if (const char* env = std::getenv("CAR_LAB_SEED"))
      return std::strtoull(env, nullptr, 10);
    return 42;
  }
};

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("--seed", common.seed_flag,
                  "RNG seed (default: CAR_LAB_SEED env var, else 42)");
  cmd->add_flag("--dry-run", common.dry_run,
                "validate config and write only the manifest");
  cmd->add_flag("--pretty", common.pretty, "add human-readable tables");
}

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

std::vector<double> parse_doubles(const std::string& csv) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    std::size_t next = csv.find(',', pos);
    if (next == std::string::npos) next = csv.size();
    out.push_back(std::stod(csv.substr(pos, next - pos)));
    pos = next + 1;
  }
  return out;
}

std::vector<int> parse_ints(const std::string& csv) {
  std::vector<int> out;
  for (double v : parse_doubles(csv)) out.push_back(static_cast<int>(v));
  return out;
}

void run_jobs(int jobs, int count, const std::function<void(int)>& work) {
  jobs = std::max(1, std::min(jobs, count));
  if (jobs == 1) {
    for (int k = 0; k < count; ++k) work(k);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < jobs; ++w)
    pool.emplace_back([&] {
      for (int k = next++; k < count; k = next++) work(k);
    });
  for (auto& th : pool) th.join();
}

// ---------------------------------------------------------------- make-model

struct MakeModelArgs {
  Common common;
  int vocab = 6;
  std::string class_words = "2,2";
  double occ_own = 0.7, occ_other = 0.1, occ_neutral = 0.9;
  std::string prior;
  double jitter = 0.0;
  std::string out;
};

int cmd_make_model(const MakeModelArgs& a) {
  Timer timer;
  const auto counts = parse_ints(a.class_words);
  if (counts.size() < 2)
    throw CLI::ValidationError("--class-words needs at least two counts");
  int class_total = 0;
  for (int c : counts) {
    if (c < 0) throw CLI::ValidationError("negative class word count");
    class_total += c;
  }
  if (class_total > a.vocab)
    throw CLI::ValidationError("class word counts exceed --vocab");
  const int C = static_cast<int>(counts.size());

  BowModel model;
  model.vocab_size = a.vocab;
  model.class_count = C;
  model.occurrence.assign(static_cast<std::size_t>(C) * a.vocab, 0.0);
  model.prior.assign(C, 1.0 / C);
  if (!a.prior.empty()) {
    model.prior = parse_doubles(a.prior);
    if (model.prior.size() != static_cast<std::size_t>(C))
      throw CLI::ValidationError("--prior length must match class count");
  }
  char name[32];
  int word = 0;
  for (int t = 0; t < C; ++t) {
    for (int k = 0; k < counts[t]; ++k, ++word) {
      std::snprintf(name, sizeof name, "c%d_%d", t, k);
      model.word_names.push_back(name);
      for (int y = 0; y < C; ++y)
        model.occ(y, word) = y == t ? a.occ_own : a.occ_other;
    }
  }
  for (int k = 0; word < a.vocab; ++k, ++word) {
    std::snprintf(name, sizeof name, "neu_%d", k);
    model.word_names.push_back(name);
    for (int y = 0; y < C; ++y) model.occ(y, word) = a.occ_neutral;
  }
  if (a.jitter > 0.0) {
    SplitRng rng(a.common.seed());
    for (auto& p : model.occurrence) {
      p += rng.uniform(-a.jitter, a.jitter);
      p = std::min(0.99, std::max(0.01, p));
    }
  }
  validate_model(model);

  RunManifest manifest;
  manifest.command = "make-model";
  manifest.config = {{"vocab", a.vocab},
                     {"class_words", a.class_words},
                     {"occ_own", a.occ_own},
                     {"occ_other", a.occ_other},
                     {"occ_neutral", a.occ_neutral},
                     {"prior", model.prior},
                     {"jitter", a.jitter},
                     {"out", a.out}};
  manifest.seed = a.common.seed();
  if (!a.common.dry_run) {
    const std::string content = model_to_json(model).dump(2) + "\n";
    write_file_atomic(a.out, content);
    manifest.add_artifact(a.out, content);
  }
  if (a.common.pretty) {
    std::printf("word        ");
    for (int y = 0; y < C; ++y) std::printf("  p(1|%d)", y);
    std::printf("\n");
    for (int i = 0; i < a.vocab; ++i) {
      std::printf("%-12s", model.word_names[i].c_str());
      for (int y = 0; y < C; ++y) std::printf("  %6.3f", model.occ(y, i));
      std::printf("\n");
    }
  }
  manifest.duration_sec = timer.seconds();
  manifest.write(a.out + ".manifest.json");
  return kExitOk;
}

// ------------------------------------------------------------- sample-corpus

struct SampleCorpusArgs {
  Common common;
  std::string model_path;
  std::string kind = "sequence";
  int docs_per_class = 100;
  int seq_len = 30;
  int phrase_len = 6;
  bool mixed = false;
  std::string out;
};

int cmd_sample_corpus(const SampleCorpusArgs& a) {
  Timer timer;
  const auto model = load_model(a.model_path);
  SplitRng rng(a.common.seed());
  std::vector<Document> corpus;
  if (a.kind == "sequence") {
    SequenceCorpusConfig cfg;
    cfg.docs_per_class = a.docs_per_class;
    cfg.seq_len = a.seq_len;
    cfg.phrase_len = a.phrase_len;
    cfg.mixed_background = a.mixed;
    corpus = sample_sequence_corpus(model, cfg, rng);
  } else if (a.kind == "bag") {
    corpus = sample_bag_corpus(model, a.docs_per_class, rng);
  } else {
    throw CLI::ValidationError("--kind must be sequence or bag");
  }

  RunManifest manifest;
  manifest.command = "sample-corpus";
  manifest.config = {{"model", a.model_path},
                     {"kind", a.kind},
                     {"docs_per_class", a.docs_per_class},
                     {"seq_len", a.seq_len},
                     {"phrase_len", a.phrase_len},
                     {"mixed", a.mixed},
                     {"out", a.out}};
  manifest.seed = a.common.seed();
  manifest.inputs = {a.model_path};
  if (!a.common.dry_run) {
    const std::string content = corpus_to_jsonl(corpus);
    write_file_atomic(a.out, content);
    manifest.add_artifact(a.out, content);
  }
  if (a.common.pretty)
    std::printf("sampled %zu documents (%d per class)\n", corpus.size(),
                a.docs_per_class);
  manifest.duration_sec = timer.seconds();
  manifest.write(a.out + ".manifest.json");
  return kExitOk;
}

// --------------------------------------------------------------------- solve

struct SolveArgs {
  Common common;
  std::string model_path;
  int t = 0;
  double alpha = 0.0;  // expected selected word count budget
  std::string alpha_sweep;
  std::string h_kind = "log";
  std::string out;
  std::string curves;
  int jobs = 1;
};

void solve_one(const BowModel& model, const SolveArgs& a, double alpha,
               const std::string& out_path, const std::string& curves_path,
               RunManifest& manifest, std::mutex& mu) {
  const HPair h = HPair::from_name(a.h_kind);
  const auto sol = optimal_factual_index_set(model, a.t, alpha, h);
  const std::string sol_content =
      solution_to_json(sol, a.t, alpha).dump(2) + "\n";
  const auto rows =
      export_curves(model, sol.factual_policy, sol.counterfactual_policy, a.t);
  const std::string curves_content = curves_to_csv(rows);
  if (!a.common.dry_run) {
    write_file_atomic(out_path, sol_content);
    write_file_atomic(curves_path, curves_content);
  }
  std::lock_guard<std::mutex> lock(mu);
  if (!a.common.dry_run) {
    manifest.add_artifact(out_path, sol_content);
    manifest.add_artifact(curves_path, curves_content);
  }
  if (a.common.pretty) {
    std::printf("alpha=%g -> index_set {", alpha);
    for (std::size_t k = 0; k < sol.index_set.size(); ++k)
      std::printf("%s%d", k ? "," : "", sol.index_set[k]);
    std::printf("} objective=%.6g budget=%.6g\n", sol.objective,
                sol.budget_used);
  }
}

int cmd_solve(const SolveArgs& a) {
  Timer timer;
  const auto model = load_model(a.model_path);
  RunManifest manifest;
  manifest.command = "solve";
  manifest.config = {{"model", a.model_path}, {"t", a.t},
                     {"alpha", a.alpha},      {"alpha_sweep", a.alpha_sweep},
                     {"h", a.h_kind},         {"out", a.out},
                     {"jobs", a.jobs}};
  manifest.seed = a.common.seed();
  manifest.inputs = {a.model_path};

  std::mutex mu;
  if (a.alpha_sweep.empty()) {
    const std::string curves =
        a.curves.empty() ? a.out + ".curves.csv" : a.curves;
    solve_one(model, a, a.alpha, a.out, curves, manifest, mu);
  } else {
    const auto alphas = parse_doubles(a.alpha_sweep);
    const fs::path base(a.out);
    run_jobs(a.jobs, static_cast<int>(alphas.size()), [&](int k) {
      char suffix[48];
      std::snprintf(suffix, sizeof suffix, "alpha_%g", alphas[k]);
      const std::string stem =
          (base.parent_path() / (base.stem().string() + "_" + suffix))
              .string();
      solve_one(model, a, alphas[k], stem + ".json", stem + ".curves.csv",
                manifest, mu);
    });
  }
  manifest.duration_sec = timer.seconds();
  manifest.write(a.out + ".manifest.json");
  return kExitOk;
}

// --------------------------------------------------------------------- train

struct TrainArgs {
  Common common;
  std::string model_path;
  std::string corpus_path;
  std::string variant = "bow";
  std::string h_kind = "linear";
  long steps = 20000;
  int batch = 64;
  double lr_g = 0.3, lr_d = 0.4;
  double lambda1 = 0.5, lambda2 = 0.0, alpha = 0.2;
  int embed_dim = 8;
  std::string seed_sweep;
  int jobs = 1;
  std::string out_dir;
};

TrainConfig train_config_from(const TrainArgs& a, std::uint64_t seed) {
  TrainConfig cfg;
  cfg.h_kind = a.h_kind;
  cfg.reg = {a.lambda1, a.lambda2, a.alpha};
  cfg.lr_generator = a.lr_g;
  cfg.lr_discriminator = a.lr_d;
  cfg.batch_size = a.batch;
  cfg.steps = a.steps;
  cfg.seed = seed;
  cfg.variant =
      a.variant == "sequence" ? TrainVariant::sequence : TrainVariant::bow;
  cfg.embed_dim = a.embed_dim;
  return cfg;
}

int cmd_train(const TrainArgs& a) {
  Timer timer;
  if (a.variant != "bow" && a.variant != "sequence")
    throw CLI::ValidationError("--variant must be bow or sequence");
  if (a.model_path.empty() == a.corpus_path.empty())
    throw CLI::ValidationError("pass exactly one of --model / --corpus");

  BowModel model;
  std::vector<Document> corpus;
  int vocab = 0, classes = 0;
  if (!a.model_path.empty()) {
    model = load_model(a.model_path);
    vocab = model.vocab_size;
    classes = model.class_count;
  } else {
    corpus = load_corpus(a.corpus_path);
    if (corpus.empty()) throw std::runtime_error("corpus is empty");
    vocab = static_cast<int>(corpus.front().bag.size());
    for (const auto& doc : corpus) classes = std::max(classes, doc.label + 1);
    classes = std::max(classes, 2);
  }

  std::vector<std::uint64_t> seeds = {a.common.seed()};
  if (!a.seed_sweep.empty()) {
    seeds.clear();
    for (double s : parse_doubles(a.seed_sweep))
      seeds.push_back(static_cast<std::uint64_t>(s));
  }

  // Config validation precedes any training compute.
  init_params(vocab, classes, std::vector<double>(classes, 1.0 / classes),
              train_config_from(a, seeds.front()));

  RunManifest manifest;
  manifest.command = "train";
  manifest.config = train_config_to_json(train_config_from(a, seeds.front()));
  manifest.config["model"] = a.model_path;
  manifest.config["corpus"] = a.corpus_path;
  manifest.config["out_dir"] = a.out_dir;
  manifest.config["seed_sweep"] = a.seed_sweep;
  manifest.seed = seeds.front();
  if (!a.model_path.empty()) manifest.inputs.push_back(a.model_path);
  if (!a.corpus_path.empty()) manifest.inputs.push_back(a.corpus_path);

  fs::create_directories(a.out_dir);
  std::mutex mu;
  run_jobs(a.jobs, static_cast<int>(seeds.size()), [&](int k) {
    TrainConfig cfg = train_config_from(a, seeds[k]);
    if (a.common.dry_run) return;
    TrainedModel trained = a.model_path.empty()
                               ? train(corpus, vocab, classes, cfg)
                               : train(model, cfg);
    fs::path dir(a.out_dir);
    if (seeds.size() > 1) {
      dir /= "seed_" + std::to_string(seeds[k]);
      fs::create_directories(dir);
    }
    const std::string params = trained_to_json(trained).dump() + "\n";
    const std::string history = history_to_csv(trained.history);
    write_file_atomic((dir / "params.json").string(), params);
    write_file_atomic((dir / "history.csv").string(), history);
    std::lock_guard<std::mutex> lock(mu);
    manifest.add_artifact((dir / "params.json").string(), params);
    manifest.add_artifact((dir / "history.csv").string(), history);
    if (a.common.pretty && !trained.history.empty()) {
      const auto& last = trained.history.back();
      std::printf(
          "seed %llu: final disc_loss=%.4f gen_obj=%.4f sparsity=%.4f\n",
          static_cast<unsigned long long>(seeds[k]), last.disc_loss,
          last.gen_obj, last.sparsity);
    }
  });
  manifest.duration_sec = timer.seconds();
  manifest.write((fs::path(a.out_dir) / "manifest.json").string());
  return kExitOk;
}

// ---------------------------------------------------------------------- eval

struct EvalArgs {
  Common common;
  std::string params_path;
  std::string corpus_path;
  std::string model_path;
  bool with_label = false;
  std::string out;
};

int cmd_eval(const EvalArgs& a) {
  Timer timer;
  const auto trained = load_trained(a.params_path);
  const auto corpus = load_corpus(a.corpus_path);
  if (corpus.empty()) throw std::runtime_error("corpus is empty");
  for (const auto& doc : corpus)
    if (doc.bag.size() != static_cast<std::size_t>(trained.vocab_size))
      throw std::invalid_argument(
          "corpus vocabulary does not match trained parameters");

  std::optional<BowModel> model;
  if (!a.model_path.empty()) model = load_model(a.model_path);

  const bool sequences = !corpus.front().tokens.empty();
  const bool has_truth = sequences && !corpus.front().truth_mask.empty();

  std::vector<Mask> factual, counterfactual, truth, counter_truth;
  std::vector<int> polarity;
  if (model) polarity = word_polarity(*model);
  for (const auto& doc : corpus) {
    const int y = doc.label;
    const std::optional<int> label =
        a.with_label ? std::optional<int>(y) : std::nullopt;
    factual.push_back(infer_rationale(trained, doc, y, label).hard);
    if (trained.class_count == 2) {
      counterfactual.push_back(infer_rationale(trained, doc, 1 - y, label).hard);
      if (model && sequences) {
        // Opposite-class phrase inventory: positions holding words whose
        // polarity is the other class.
        Mask inv(doc.tokens.size(), 0);
        for (std::size_t k = 0; k < doc.tokens.size(); ++k)
          inv[k] = polarity[doc.tokens[k]] == 1 - y ? 1 : 0;
        counter_truth.push_back(std::move(inv));
      }
    }
    if (has_truth) truth.push_back(doc.truth_mask);
  }

  json report;
  if (has_truth) {
    report["factual"] = metrics_to_json(prf1(factual, truth));
  } else {
    long selected = 0, tokens = 0;
    for (const auto& mask : factual) {
      tokens += static_cast<long>(mask.size());
      for (auto v : mask) selected += v;
    }
    report["factual"] = {
        {"sparsity", tokens ? double(selected) / tokens : 0.0}};
  }
  if (!counter_truth.empty())
    report["counterfactual"] =
        metrics_to_json(prf1(counterfactual, counter_truth));
  if (model)
    report["degeneration"] = degeneration_score(factual, corpus, *model);
  report["with_label"] = a.with_label;
  report["documents"] = corpus.size();

  RunManifest manifest;
  manifest.command = "eval";
  manifest.config = {{"params", a.params_path},
                     {"corpus", a.corpus_path},
                     {"model", a.model_path},
                     {"with_label", a.with_label},
                     {"out", a.out}};
  manifest.seed = a.common.seed();
  manifest.inputs = {a.params_path, a.corpus_path};
  if (!a.common.dry_run) {
    const std::string content = report.dump(2) + "\n";
    write_file_atomic(a.out, content);
    manifest.add_artifact(a.out, content);
  }
  if (a.common.pretty) std::printf("%s\n", report.dump(2).c_str());
  manifest.duration_sec = timer.seconds();
  manifest.write(a.out + ".manifest.json");
  return kExitOk;
}

// -------------------------------------------------------------------- verify

struct VerifyArgs {
  Common common;
  std::string model_path;
  std::string params_path;
  double tol = 0.05;
  std::string out;
};

int cmd_verify(const VerifyArgs& a) {
  Timer timer;
  const auto model = load_model(a.model_path);
  const json j = json::parse(read_file(a.params_path));

  struct Case {
    int t = 0;
    double alpha = 0.0;
    SelectionPolicy factual, counterfactual;
  };
  std::vector<Case> cases;
  if (j.contains("index_set")) {
    Case c;
    auto sol = solution_from_json(j, &c.t, &c.alpha);
    c.factual = sol.factual_policy;
    c.counterfactual = sol.counterfactual_policy;
    cases.push_back(std::move(c));
  } else {
    const auto trained = trained_from_json(j);
    if (trained.class_count != 2)
      throw std::invalid_argument("verify needs two-class parameters");
    for (int t = 0; t < 2; ++t) {
      Case c;
      c.t = t;
      c.alpha = trained.cfg.reg.alpha * trained.vocab_size;
      c.factual = bow_policy(trained, t, PolicyRole::factual);
      c.counterfactual = bow_policy(trained, t, PolicyRole::counterfactual);
      cases.push_back(std::move(c));
    }
  }

  bool all_pass = true;
  json reports = json::array();
  for (const auto& c : cases) {
    const auto rep = verify_equilibrium(c.factual, c.counterfactual, model,
                                        c.t, c.alpha, a.tol);
    all_pass = all_pass && rep.pass;
    json jr = equilibrium_report_to_json(rep);
    jr["t"] = c.t;
    jr["alpha"] = c.alpha;
    reports.push_back(jr);
    std::printf(
        "t=%d: counterfactual_linf=%.6g ineligible_mass=%.6g "
        "budget_used=%.6g slack=%.6g -> %s\n",
        c.t, rep.counterfactual_linf, rep.ineligible_mass, rep.budget_used,
        rep.budget_slack, rep.pass ? "pass" : "FAIL");
  }

  RunManifest manifest;
  manifest.command = "verify";
  manifest.config = {{"model", a.model_path},
                     {"params", a.params_path},
                     {"tol", a.tol},
                     {"out", a.out}};
  manifest.seed = a.common.seed();
  manifest.inputs = {a.model_path, a.params_path};
  if (!a.out.empty() && !a.common.dry_run) {
    const std::string content = reports.dump(2) + "\n";
    write_file_atomic(a.out, content);
    manifest.add_artifact(a.out, content);
  }
  manifest.duration_sec = timer.seconds();
  const std::string manifest_path =
      a.out.empty() ? a.params_path + ".verify.manifest.json"
                    : a.out + ".manifest.json";
  manifest.write(manifest_path);
  return all_pass ? kExitOk : kExitVerifyFail;
}

// ------------------------------------------------------------------- check-h

struct CheckHArgs {
  Common common;
  std::string h_kind = "linear";
  double grid_step = 0.01;
  std::string out;
};

int cmd_check_h(const CheckHArgs& a) {
  Timer timer;
  const HPair h = HPair::from_name(a.h_kind);
  const auto rep = check_h_conditions(h, a.grid_step);
  const auto fdiv = f_from_h(h);
  std::printf("h=%s: conditions %s (%s); f convex=%s f(1)=%g\n",
              a.h_kind.c_str(), rep.pass ? "pass" : "FAIL",
              rep.detail.c_str(), fdiv.convex ? "yes" : "no", fdiv.at_one);

  json jr = {{"h", a.h_kind},
             {"pass", rep.pass},
             {"h0_monotone", rep.h0_monotone},
             {"h1_monotone", rep.h1_monotone},
             {"h0_composite_convex", rep.h0_composite_convex},
             {"h1_composite_concave", rep.h1_composite_concave},
             {"detail", rep.detail},
             {"f_convex", fdiv.convex},
             {"f_at_one", fdiv.at_one}};

  RunManifest manifest;
  manifest.command = "check-h";
  manifest.config = {{"h", a.h_kind}, {"grid_step", a.grid_step},
                     {"out", a.out}};
  manifest.seed = a.common.seed();
  if (!a.out.empty() && !a.common.dry_run) {
    const std::string content = jr.dump(2) + "\n";
    write_file_atomic(a.out, content);
    manifest.add_artifact(a.out, content);
  }
  manifest.duration_sec = timer.seconds();
  manifest.write((a.out.empty() ? "check-h" : a.out) + ".manifest.json");
  return rep.pass && fdiv.convex ? kExitOk : kExitVerifyFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"class-wise adversarial rationalization laboratory"};
  app.require_subcommand(1);

  MakeModelArgs mm;
  auto* c_mm =
      app.add_subcommand("make-model", "construct a class-conditional word model");
  c_mm->add_option("--vocab", mm.vocab, "vocabulary size");
  c_mm->add_option("--class-words", mm.class_words,
                   "comma list: words per class");
  c_mm->add_option("--occ-own", mm.occ_own, "occurrence in the own class");
  c_mm->add_option("--occ-other", mm.occ_other,
                   "occurrence in the other classes");
  c_mm->add_option("--occ-neutral", mm.occ_neutral,
                   "occurrence of neutral words");
  c_mm->add_option("--prior", mm.prior, "comma list of class priors");
  c_mm->add_option("--jitter", mm.jitter,
                   "uniform occurrence noise half-width");
  c_mm->add_option("--out", mm.out, "output model JSON")->required();
  add_common(c_mm, mm.common);

  SampleCorpusArgs sc;
  auto* c_sc =
      app.add_subcommand("sample-corpus", "sample a labeled corpus from a model");
  c_sc->add_option("--model", sc.model_path, "model JSON")->required();
  c_sc->add_option("--kind", sc.kind, "sequence | bag");
  c_sc->add_option("--docs-per-class", sc.docs_per_class,
                   "documents per class");
  c_sc->add_option("--seq-len", sc.seq_len, "tokens per document");
  c_sc->add_option("--phrase-len", sc.phrase_len, "planted phrase length");
  c_sc->add_flag("--mixed", sc.mixed,
                 "allow other classes' words in backgrounds");
  c_sc->add_option("--out", sc.out, "output JSON-lines corpus")->required();
  add_common(c_sc, sc.common);

  SolveArgs so;
  auto* c_so =
      app.add_subcommand("solve", "closed-form equilibrium for one class");
  c_so->add_option("--model", so.model_path, "model JSON")->required();
  c_so->add_option("--t", so.t, "target class");
  c_so->add_option("--alpha", so.alpha,
                   "budget: expected selected word count");
  c_so->add_option("--alpha-sweep", so.alpha_sweep, "comma list of budgets");
  c_so->add_option("--h-kind", so.h_kind, "log | linear");
  c_so->add_option("--out", so.out, "output solution JSON")->required();
  c_so->add_option("--curves", so.curves, "output curves CSV path");
  c_so->add_option("--jobs", so.jobs, "parallel sweep jobs");
  add_common(c_so, so.common);

  TrainArgs tr;
  auto* c_tr = app.add_subcommand("train", "alternating adversarial training");
  c_tr->add_option("--model", tr.model_path, "model JSON (bow variant)");
  c_tr->add_option("--corpus", tr.corpus_path, "corpus JSON-lines");
  c_tr->add_option("--variant", tr.variant, "bow | sequence");
  c_tr->add_option("--h-kind", tr.h_kind, "log | linear");
  c_tr->add_option("--steps", tr.steps, "training steps");
  c_tr->add_option("--batch", tr.batch, "batch size");
  c_tr->add_option("--lr-g", tr.lr_g, "generator learning rate");
  c_tr->add_option("--lr-d", tr.lr_d, "discriminator learning rate");
  c_tr->add_option("--lambda1", tr.lambda1, "sparsity weight");
  c_tr->add_option("--lambda2", tr.lambda2, "continuity weight");
  c_tr->add_option("--alpha", tr.alpha, "target selected fraction");
  c_tr->add_option("--embed-dim", tr.embed_dim, "sequence embedding width");
  c_tr->add_option("--seed-sweep", tr.seed_sweep, "comma list of seeds");
  c_tr->add_option("--jobs", tr.jobs, "parallel sweep jobs");
  c_tr->add_option("--out-dir", tr.out_dir, "output directory")->required();
  add_common(c_tr, tr.common);

  EvalArgs ev;
  auto* c_ev = app.add_subcommand("eval", "score rationales against a corpus");
  c_ev->add_option("--params", ev.params_path, "trained params JSON")
      ->required();
  c_ev->add_option("--corpus", ev.corpus_path, "corpus JSON-lines")
      ->required();
  c_ev->add_option("--model", ev.model_path,
                   "model JSON (enables polarity-based scores)");
  c_ev->add_flag("--with-label", ev.with_label,
                 "use ground-truth labels to pick generator modes");
  c_ev->add_option("--out", ev.out, "output report JSON")->required();
  add_common(c_ev, ev.common);

  VerifyArgs vf;
  auto* c_vf =
      app.add_subcommand("verify", "check policies against the equilibrium");
  c_vf->add_option("--model", vf.model_path, "model JSON")->required();
  c_vf->add_option("--params", vf.params_path,
                   "solution JSON or trained params JSON")
      ->required();
  c_vf->add_option("--tol", vf.tol, "pass tolerance");
  c_vf->add_option("--out", vf.out, "optional report JSON");
  add_common(c_vf, vf.common);

  CheckHArgs ch;
  auto* c_ch = app.add_subcommand("check-h", "certify an h pair");
  c_ch->add_option("--h-kind", ch.h_kind, "log | linear");
  c_ch->add_option("--grid-step", ch.grid_step, "certification grid step");
  c_ch->add_option("--out", ch.out, "optional report JSON");
  add_common(c_ch, ch.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (c_mm->parsed()) return cmd_make_model(mm);
    if (c_sc->parsed()) return cmd_sample_corpus(sc);
    if (c_so->parsed()) return cmd_solve(so);
    if (c_tr->parsed()) return cmd_train(tr);
    if (c_ev->parsed()) return cmd_eval(ev);
    if (c_vf->parsed()) return cmd_verify(vf);
    if (c_ch->parsed()) return cmd_check_h(ch);
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  } catch (const std::runtime_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  }
  return kExitUsage;
}
