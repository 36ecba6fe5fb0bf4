// Python bindings for the core operations: model synthesis, closed-form
// equilibria, adversarial training, and evaluation.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "carlab/metrics.hpp"
#include "carlab/serialize.hpp"
#include "carlab/trainer.hpp"

namespace py = pybind11;
using namespace carlab;

namespace {

GeneratorRole role_from(const std::string& name) {
  if (name == "factual") return GeneratorRole::factual;
  if (name == "counterfactual") return GeneratorRole::counterfactual;
  throw std::invalid_argument("role must be factual or counterfactual");
}

PolicyRole policy_role_from(const std::string& name) {
  return role_from(name) == GeneratorRole::factual
             ? PolicyRole::factual
             : PolicyRole::counterfactual;
}

std::string policy_role_name(PolicyRole role) {
  return role == PolicyRole::factual ? "factual" : "counterfactual";
}

}  // namespace

PYBIND11_MODULE(_carlab, m) {
  m.doc() = "class-wise adversarial rationalization laboratory";

  py::class_<BowModel>(m, "BowModel")
      .def(py::init<>())
      .def_readwrite("vocab_size", &BowModel::vocab_size)
      .def_readwrite("class_count", &BowModel::class_count)
      .def_readwrite("occurrence", &BowModel::occurrence)
      .def_readwrite("prior", &BowModel::prior)
      .def_readwrite("word_names", &BowModel::word_names)
      .def("occ", [](const BowModel& m_, int y, int i) { return m_.occ(y, i); })
      .def("to_json", [](const BowModel& m_) { return model_to_json(m_).dump(); })
      .def_static("from_json", [](const std::string& text) {
        return model_from_json(json::parse(text));
      });

  py::class_<Document>(m, "Document")
      .def(py::init<>())
      .def_readwrite("label", &Document::label)
      .def_readwrite("bag", &Document::bag)
      .def_readwrite("tokens", &Document::tokens)
      .def_readwrite("truth_mask", &Document::truth_mask);

  m.def("validate_model", &validate_model);
  m.def("word_polarity", &word_polarity, py::arg("model"),
        py::arg("tol") = 1e-6,
        "per-word class tag; -1 marks neutral words");
  m.attr("NEUTRAL_WORD") = kNeutralWord;

  m.def(
      "sample_document",
      [](const BowModel& model, int y, std::uint64_t seed) {
        SplitRng rng(seed);
        return sample_document(model, y, rng);
      },
      py::arg("model"), py::arg("y"), py::arg("seed"));
  m.def(
      "sample_bag_corpus",
      [](const BowModel& model, int docs_per_class, std::uint64_t seed) {
        SplitRng rng(seed);
        return sample_bag_corpus(model, docs_per_class, rng);
      },
      py::arg("model"), py::arg("docs_per_class"), py::arg("seed"));
  m.def(
      "sample_sequence_corpus",
      [](const BowModel& model, int docs_per_class, int seq_len,
         int phrase_len, bool mixed_background, double polarity_tol,
         std::uint64_t seed) {
        SequenceCorpusConfig cfg;
        cfg.docs_per_class = docs_per_class;
        cfg.seq_len = seq_len;
        cfg.phrase_len = phrase_len;
        cfg.mixed_background = mixed_background;
        cfg.polarity_tol = polarity_tol;
        SplitRng rng(seed);
        return sample_sequence_corpus(model, cfg, rng);
      },
      py::arg("model"), py::arg("docs_per_class"), py::arg("seq_len"),
      py::arg("phrase_len"), py::arg("mixed_background") = false,
      py::arg("polarity_tol") = 1e-6, py::arg("seed") = 0);

  // --- objectives ----------------------------------------------------------
  m.def(
      "discriminator_loss",
      [](const std::vector<double>& d_factual,
         const std::vector<double>& d_counterfactual,
         const std::vector<double>& prior) {
        return discriminator_loss(d_factual, d_counterfactual, prior);
      },
      py::arg("d_factual"), py::arg("d_counterfactual"), py::arg("prior"));
  m.def(
      "generator_objective",
      [](const std::vector<double>& d_outputs, const std::string& h_kind,
         const std::string& role) {
        return generator_objective(d_outputs, HPair::from_name(h_kind),
                                   role_from(role));
      },
      py::arg("d_outputs"), py::arg("h_kind"), py::arg("role"));
  m.def(
      "sparsity_continuity_penalty",
      [](const std::vector<double>& mask, double lambda1, double lambda2,
         double alpha, bool ordered) {
        return sparsity_continuity_penalty(mask, {lambda1, lambda2, alpha},
                                           ordered);
      },
      py::arg("mask"), py::arg("lambda1"), py::arg("lambda2"),
      py::arg("alpha"), py::arg("ordered") = true);
  m.def(
      "check_h_conditions",
      [](const std::string& h_kind, double grid_step) {
        const auto rep = check_h_conditions(HPair::from_name(h_kind),
                                            grid_step);
        py::dict out;
        out["pass"] = rep.pass;
        out["h0_monotone"] = rep.h0_monotone;
        out["h1_monotone"] = rep.h1_monotone;
        out["h0_composite_convex"] = rep.h0_composite_convex;
        out["h1_composite_concave"] = rep.h1_composite_concave;
        out["detail"] = rep.detail;
        return out;
      },
      py::arg("h_kind"), py::arg("grid_step") = 0.01);
  m.def(
      "f_from_h",
      [](const std::string& h_kind, double x) {
        const auto rep = f_from_h(HPair::from_name(h_kind));
        py::dict out;
        out["convex"] = rep.convex;
        out["at_one"] = rep.at_one;
        out["value"] = rep.f(x);
        return out;
      },
      py::arg("h_kind"), py::arg("x") = 1.0,
      "convexity report plus f evaluated at x");

  // --- equilibria ----------------------------------------------------------
  py::class_<SelectionPolicy>(m, "SelectionPolicy")
      .def(py::init([](int class_t, const std::string& role,
                       std::vector<double> select_prob) {
             SelectionPolicy p;
             p.class_t = class_t;
             p.role = policy_role_from(role);
             p.select_prob = std::move(select_prob);
             return p;
           }),
           py::arg("class_t"), py::arg("role"), py::arg("select_prob"))
      .def_readwrite("class_t", &SelectionPolicy::class_t)
      .def_readwrite("select_prob", &SelectionPolicy::select_prob)
      .def_property(
          "role",
          [](const SelectionPolicy& p) { return policy_role_name(p.role); },
          [](SelectionPolicy& p, const std::string& role) {
            p.role = policy_role_from(role);
          });

  m.def("induced_distribution", &induced_distribution, py::arg("policy"),
        py::arg("model"), py::arg("y"));
  m.def("optimal_discriminator", &optimal_discriminator,
        py::arg("z_mass_factual"), py::arg("z_mass_counterfactual"));
  m.def("best_response_counterfactual", &best_response_counterfactual,
        py::arg("factual"), py::arg("model"), py::arg("t"));
  m.def("unconstrained_factual_best_response",
        &unconstrained_factual_best_response, py::arg("model"), py::arg("t"));

  py::class_<MiEstimate>(m, "MiEstimate")
      .def_readonly("value", &MiEstimate::value)
      .def_readonly("std_error", &MiEstimate::std_error)
      .def_readonly("samples", &MiEstimate::samples)
      .def("__repr__", [](const MiEstimate& e) {
        return "MiEstimate(value=" + std::to_string(e.value) +
               ", std_error=" + std::to_string(e.std_error) + ")";
      });

  m.def(
      "classwise_mi",
      [](const BowModel& model, const std::vector<int>& index_set, int t,
         const std::string& h_kind, const std::string& method, long samples,
         std::uint64_t seed) {
        const MiMethod mm = method == "exact" ? MiMethod::exact
                            : method == "monte_carlo"
                                ? MiMethod::monte_carlo
                                : throw std::invalid_argument(
                                      "method must be exact or monte_carlo");
        return classwise_mi(model, index_set, t, HPair::from_name(h_kind), mm,
                            samples, seed);
      },
      py::arg("model"), py::arg("index_set"), py::arg("t"),
      py::arg("h_kind") = "log", py::arg("method") = "exact",
      py::arg("samples") = 100000, py::arg("seed") = 0);
  m.def(
      "shannon_mi",
      [](const BowModel& model, const std::vector<int>& index_set) {
        return shannon_mi(model, index_set);
      },
      py::arg("model"), py::arg("index_set"));

  py::class_<EquilibriumSolution>(m, "EquilibriumSolution")
      .def_readonly("index_set", &EquilibriumSolution::index_set)
      .def_readonly("objective", &EquilibriumSolution::objective)
      .def_readonly("budget_used", &EquilibriumSolution::budget_used)
      .def_readonly("factual_policy", &EquilibriumSolution::factual_policy)
      .def_readonly("counterfactual_policy",
                    &EquilibriumSolution::counterfactual_policy);

  m.def(
      "optimal_factual_index_set",
      [](const BowModel& model, int t, double alpha,
         const std::string& h_kind) {
        return optimal_factual_index_set(model, t, alpha,
                                         HPair::from_name(h_kind));
      },
      py::arg("model"), py::arg("t"), py::arg("alpha"),
      py::arg("h_kind") = "log");

  py::class_<EquilibriumReport>(m, "EquilibriumReport")
      .def_readonly("counterfactual_linf",
                    &EquilibriumReport::counterfactual_linf)
      .def_readonly("ineligible_mass", &EquilibriumReport::ineligible_mass)
      .def_readonly("budget_used", &EquilibriumReport::budget_used)
      .def_readonly("budget_slack", &EquilibriumReport::budget_slack)
      .def_readonly("tol", &EquilibriumReport::tol)
      .def_readonly("pass_", &EquilibriumReport::pass)
      .def("__bool__", [](const EquilibriumReport& r) { return r.pass; });

  m.def("verify_equilibrium", &verify_equilibrium, py::arg("factual"),
        py::arg("counterfactual"), py::arg("model"), py::arg("t"),
        py::arg("alpha"), py::arg("tol"));

  // --- training ------------------------------------------------------------
  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("h_kind", &TrainConfig::h_kind)
      .def_property(
          "lambda1",
          [](const TrainConfig& c) { return c.reg.lambda1; },
          [](TrainConfig& c, double v) { c.reg.lambda1 = v; })
      .def_property(
          "lambda2",
          [](const TrainConfig& c) { return c.reg.lambda2; },
          [](TrainConfig& c, double v) { c.reg.lambda2 = v; })
      .def_property(
          "alpha", [](const TrainConfig& c) { return c.reg.alpha; },
          [](TrainConfig& c, double v) { c.reg.alpha = v; })
      .def_readwrite("lr_generator", &TrainConfig::lr_generator)
      .def_readwrite("lr_discriminator", &TrainConfig::lr_discriminator)
      .def_readwrite("batch_size", &TrainConfig::batch_size)
      .def_readwrite("steps", &TrainConfig::steps)
      .def_readwrite("seed", &TrainConfig::seed)
      .def_readwrite("embed_dim", &TrainConfig::embed_dim)
      .def_property(
          "variant",
          [](const TrainConfig& c) {
            return c.variant == TrainVariant::bow ? "bow" : "sequence";
          },
          [](TrainConfig& c, const std::string& v) {
            if (v == "bow")
              c.variant = TrainVariant::bow;
            else if (v == "sequence")
              c.variant = TrainVariant::sequence;
            else
              throw std::invalid_argument("variant must be bow or sequence");
          });

  py::class_<HistoryRow>(m, "HistoryRow")
      .def_readonly("step", &HistoryRow::step)
      .def_readonly("t", &HistoryRow::t)
      .def_readonly("disc_loss", &HistoryRow::disc_loss)
      .def_readonly("gen_obj", &HistoryRow::gen_obj)
      .def_readonly("sparsity", &HistoryRow::sparsity)
      .def_readonly("penalty", &HistoryRow::penalty);

  py::class_<RationaleMask>(m, "RationaleMask")
      .def_readonly("hard", &RationaleMask::hard)
      .def_readonly("relaxed", &RationaleMask::relaxed);

  py::class_<TrainedModel>(m, "TrainedModel")
      .def_readonly("vocab_size", &TrainedModel::vocab_size)
      .def_readonly("class_count", &TrainedModel::class_count)
      .def_readonly("prior", &TrainedModel::prior)
      .def_readonly("history", &TrainedModel::history)
      .def_readonly("cfg", &TrainedModel::cfg)
      .def("history_csv",
           [](const TrainedModel& t) { return history_to_csv(t.history); })
      .def("to_json",
           [](const TrainedModel& t) { return trained_to_json(t).dump(); })
      .def_static("from_json", [](const std::string& text) {
        return trained_from_json(json::parse(text));
      });

  m.def(
      "train",
      [](const BowModel& model, const TrainConfig& cfg) {
        return train(model, cfg);
      },
      py::arg("model"), py::arg("config"),
      "alternating training with fresh bag batches from the model");
  m.def(
      "train_corpus",
      [](const std::vector<Document>& corpus, int vocab_size, int class_count,
         const TrainConfig& cfg) {
        return train(corpus, vocab_size, class_count, cfg);
      },
      py::arg("corpus"), py::arg("vocab_size"), py::arg("class_count"),
      py::arg("config"));
  m.def(
      "multiclass_train",
      [](const std::vector<Document>& corpus, int vocab_size, int class_count,
         const TrainConfig& cfg) {
        return multiclass_train(corpus, vocab_size, class_count, cfg);
      },
      py::arg("corpus"), py::arg("vocab_size"), py::arg("class_count"),
      py::arg("config"));
  m.def(
      "infer_rationale",
      [](const TrainedModel& trained, const Document& doc, int t,
         std::optional<int> label) {
        return infer_rationale(trained, doc, t, label);
      },
      py::arg("trained"), py::arg("doc"), py::arg("t"),
      py::arg("label") = std::nullopt);
  m.def(
      "bow_policy",
      [](const TrainedModel& trained, int t, const std::string& role) {
        return bow_policy(trained, t, policy_role_from(role));
      },
      py::arg("trained"), py::arg("t"), py::arg("role") = "factual");
  m.def(
      "straight_through_mask",
      [](const std::vector<double>& probs, std::uint64_t seed) {
        SplitRng rng(seed);
        return straight_through_mask(probs, rng);
      },
      py::arg("probs"), py::arg("seed"));

  // --- evaluation ----------------------------------------------------------
  py::class_<MetricsReport>(m, "MetricsReport")
      .def_readonly("sparsity", &MetricsReport::sparsity)
      .def_readonly("precision", &MetricsReport::precision)
      .def_readonly("recall", &MetricsReport::recall)
      .def_readonly("f1", &MetricsReport::f1)
      .def_readonly("true_positives", &MetricsReport::true_positives)
      .def_readonly("selected", &MetricsReport::selected)
      .def_readonly("truth", &MetricsReport::truth)
      .def_readonly("tokens", &MetricsReport::tokens)
      .def("__repr__", [](const MetricsReport& r) {
        return "MetricsReport(p=" + std::to_string(r.precision) +
               ", r=" + std::to_string(r.recall) +
               ", f1=" + std::to_string(r.f1) +
               ", sparsity=" + std::to_string(r.sparsity) + ")";
      });

  m.def(
      "prf1",
      [](const std::vector<Mask>& predicted, const std::vector<Mask>& truth) {
        return prf1(predicted, truth);
      },
      py::arg("predicted"), py::arg("truth"));
  m.def(
      "degeneration_score",
      [](const std::vector<Mask>& masks, const std::vector<Document>& docs,
         const BowModel& model, double polarity_tol) {
        return degeneration_score(masks, docs, model, polarity_tol);
      },
      py::arg("masks"), py::arg("documents"), py::arg("model"),
      py::arg("polarity_tol") = 1e-6);

  py::class_<CurveRow>(m, "CurveRow")
      .def_readonly("rank", &CurveRow::rank)
      .def_readonly("word", &CurveRow::word)
      .def_readonly("p_x_t", &CurveRow::p_x_t)
      .def_readonly("p_x_other", &CurveRow::p_x_other)
      .def_readonly("p_zf", &CurveRow::p_zf)
      .def_readonly("p_zc", &CurveRow::p_zc);

  m.def("export_curves", &export_curves, py::arg("model"), py::arg("factual"),
        py::arg("counterfactual"), py::arg("t"));
  m.def(
      "curves_csv",
      [](const std::vector<CurveRow>& rows) { return curves_to_csv(rows); },
      py::arg("rows"));

  // --- file I/O ------------------------------------------------------------
  m.def("save_model", &save_model);
  m.def("load_model", &load_model);
  m.def(
      "save_corpus",
      [](const std::vector<Document>& corpus, const std::string& path) {
        save_corpus(corpus, path);
      },
      py::arg("corpus"), py::arg("path"));
  m.def("load_corpus", &load_corpus);
  m.def("save_trained", &save_trained);
  m.def("load_trained", &load_trained);
}
