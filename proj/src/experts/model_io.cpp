// SPDX-License-Identifier: Apache-2.0
#include "moe/experts/model_io.hpp"

#include <fstream>
#include <sstream>

namespace moe::experts {

using nlohmann::json;

namespace {

const json& field(const json& doc, const char* name) {
  const auto it = doc.find(name);
  if (it == doc.end()) throw MissingFieldError(std::string("model file is missing field '") + name + "'");
  return *it;
}

template <class T>
T get_as(const json& doc, const char* name) {
  try {
    return field(doc, name).get<T>();
  } catch (const json::exception& e) {
    throw CorruptFileError(std::string("model field '") + name + "' has the wrong type: " + e.what());
  }
}

}  // namespace

json to_json(const ExpertModel& model) {
  const TrainingMeta& m = model.meta();
  json q = json::object();
  for (const auto& [key, values] : model.q()) q[key] = values;
  return json{
      {"format_version", kModelFormatVersion},
      {"id", model.id()},
      {"domain", to_string(model.domain())},
      {"objective_tag", to_string(model.objective())},
      {"actions", model.actions()},
      {"q", std::move(q)},
      {"training_meta",
       {{"episodes", m.episodes},
        {"learning_rate", m.learning_rate},
        {"learning_rate_schedule", m.learning_rate_schedule},
        {"discount", m.discount},
        {"epsilon_start", m.epsilon_start},
        {"epsilon_end", m.epsilon_end},
        {"epsilon_decay_fraction", m.epsilon_decay_fraction},
        {"seed", m.seed},
        {"final_residual", m.final_residual},
        {"converged", m.converged}}},
  };
}

ExpertModel model_from_json(const json& doc) {
  if (!doc.is_object()) throw CorruptFileError("model document is not a JSON object");
  const int version = get_as<int>(doc, "format_version");
  if (version != kModelFormatVersion) {
    throw VersionMismatchError("model format_version " + std::to_string(version) + " is not supported (expected " +
                               std::to_string(kModelFormatVersion) + ")");
  }
  const json& meta_doc = field(doc, "training_meta");
  if (!meta_doc.is_object()) throw CorruptFileError("training_meta is not an object");
  TrainingMeta meta;
  meta.episodes = get_as<int>(meta_doc, "episodes");
  meta.learning_rate = get_as<double>(meta_doc, "learning_rate");
  meta.learning_rate_schedule = get_as<std::string>(meta_doc, "learning_rate_schedule");
  meta.discount = get_as<double>(meta_doc, "discount");
  meta.epsilon_start = get_as<double>(meta_doc, "epsilon_start");
  meta.epsilon_end = get_as<double>(meta_doc, "epsilon_end");
  meta.epsilon_decay_fraction = get_as<double>(meta_doc, "epsilon_decay_fraction");
  meta.seed = get_as<std::uint64_t>(meta_doc, "seed");
  meta.final_residual = get_as<double>(meta_doc, "final_residual");
  meta.converged = get_as<bool>(meta_doc, "converged");

  const json& q_doc = field(doc, "q");
  if (!q_doc.is_object()) throw CorruptFileError("q is not an object");
  QTable q;
  for (const auto& [key, values] : q_doc.items()) {
    try {
      q.emplace(key, values.get<std::vector<double>>());
    } catch (const json::exception& e) {
      throw CorruptFileError("q row '" + key + "' is malformed: " + e.what());
    }
  }
  try {
    return ExpertModel(get_as<std::string>(doc, "id"), domain_from_string(get_as<std::string>(doc, "domain")),
                       objective_from_string(get_as<std::string>(doc, "objective_tag")),
                       get_as<std::vector<std::string>>(doc, "actions"), std::move(q), std::move(meta));
  } catch (const ModelFileError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw CorruptFileError(std::string("model content is invalid: ") + e.what());
  }
}

void save_model(const ExpertModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << to_json(model).dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

ExpertModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  json doc;
  try {
    doc = json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw CorruptFileError("model file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return model_from_json(doc);
}

}  // namespace moe::experts
