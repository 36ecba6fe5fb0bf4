#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "carlab/bow_model.hpp"
#include "carlab/equilibrium.hpp"
#include "carlab/metrics.hpp"
#include "carlab/trainer.hpp"

namespace carlab {

using json = nlohmann::json;

json model_to_json(const BowModel& model);
BowModel model_from_json(const json& j);

json document_to_json(const Document& doc);
Document document_from_json(const json& j);

// JSON-lines, one document per line.
std::string corpus_to_jsonl(std::span<const Document> corpus);
std::vector<Document> corpus_from_jsonl(const std::string& text);

json solution_to_json(const EquilibriumSolution& sol, int class_t,
                      double alpha);
// Returns (solution, class_t, alpha).
EquilibriumSolution solution_from_json(const json& j, int* class_t,
                                       double* alpha);

json train_config_to_json(const TrainConfig& cfg);
TrainConfig train_config_from_json(const json& j);

json trained_to_json(const TrainedModel& m);
TrainedModel trained_from_json(const json& j);

json metrics_to_json(const MetricsReport& rep);

json equilibrium_report_to_json(const EquilibriumReport& rep);

// --- file helpers (throw std::runtime_error on I/O failure) ---------------
std::string read_file(const std::string& path);
// Writes to a temp file in the same directory, then renames into place.
void write_file_atomic(const std::string& path, const std::string& content);

void save_model(const BowModel& model, const std::string& path);
BowModel load_model(const std::string& path);
void save_corpus(std::span<const Document> corpus, const std::string& path);
std::vector<Document> load_corpus(const std::string& path);
void save_trained(const TrainedModel& m, const std::string& path);
TrainedModel load_trained(const std::string& path);

}  // namespace carlab
