#include "graphspn/model/bundle.hpp"

#include <cstdio>
#include <fstream>

#include "graphspn/common/errors.hpp"
#include "graphspn/common/rng.hpp"
#include "graphspn/graph/category.hpp"
#include "graphspn/spn/serialize.hpp"

namespace graphspn::model {

namespace fs = std::filesystem;

std::string config_hash(const nlohmann::json& doc) {
  const std::string text = doc.dump();
  const std::uint64_t h = fnv1a64(text.data(), text.size());
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void save_model(const GraphSpnModel& model, const fs::path& dir, const nlohmann::json& training_config) {
  fs::create_directories(dir);
  nlohmann::json manifest;
  manifest["categories"] = nlohmann::json::array();
  for (std::size_t i = 0; i < model.num_categories; ++i) {
    manifest["categories"].push_back(graph::to_code(graph::category_at(i)));
  }
  manifest["templates"] = templates::to_json(model.templates);
  manifest["training_config"] = training_config;
  manifest["training_config_hash"] = config_hash(training_config);
  manifest["spns"] = nlohmann::json::object();
  for (const auto& [id, t] : model.spns) {
    const std::string file = "spn_" + id + ".json";
    spn::save_spn(*t.spn, dir / file);
    manifest["spns"][id] = file;
  }
  std::ofstream out(dir / "manifest.json");
  if (!out) throw DataError("cannot write " + (dir / "manifest.json").string());
  out << manifest.dump(1) << '\n';
}

GraphSpnModel load_model(const fs::path& dir) {
  const fs::path path = dir / "manifest.json";
  std::ifstream in(path);
  if (!in) throw DataError("no model manifest at " + path.string());
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  GraphSpnModel model;
  try {
    const auto codes = manifest.at("categories").get<std::vector<std::string>>();
    if (codes.size() != graph::kNumCategories) throw DataError(path.string() + ": unexpected category count");
    for (std::size_t i = 0; i < codes.size(); ++i) {
      if (codes[i] != graph::to_code(graph::category_at(i))) {
        throw DataError(path.string() + ": category encoding differs at index " + std::to_string(i));
      }
    }
    try {
      model.templates = templates::templates_from_json(manifest.at("templates"));
    } catch (const ConfigError& e) {
      throw DataError(path.string() + ": " + e.what());
    }
    for (const auto& t : model.templates) {
      const auto& entry = manifest.at("spns").at(t.id);
      auto spn = std::make_shared<spn::Spn>(spn::load_spn(dir / entry.get<std::string>()));
      if (spn->num_variables() != static_cast<std::size_t>(t.node_count)) {
        throw DataError(path.string() + ": SPN for '" + t.id + "' has the wrong variable count");
      }
      for (const auto& v : spn->variables()) {
        if (v.cardinality != model.num_categories) {
          throw DataError(path.string() + ": SPN for '" + t.id + "' has the wrong cardinality");
        }
      }
      if (!spn->is_valid()) throw DataError(path.string() + ": SPN for '" + t.id + "' is not valid");
      model.spns.emplace(t.id, TemplateSpn{t.id, std::move(spn)});
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  } catch (const SpnError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  return model;
}

}  // namespace graphspn::model
