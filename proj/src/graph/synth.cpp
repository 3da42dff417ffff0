#include "graphspn/graph/synth.hpp"

#include <cmath>
#include <set>

#include "graphspn/common/errors.hpp"
#include "graphspn/common/rng.hpp"

namespace graphspn::graph {

using nlohmann::json;

namespace {

bool is_room_category(std::uint32_t k) {
  return k != index_of(PlaceCategory::kCR) && k != index_of(PlaceCategory::kDW);
}

PlaceCategory draw_room_category(const SynthFloorParams& params, Rng& rng) {
  double mass = 0.0;
  for (std::uint32_t k = 0; k < kNumCategories; ++k) {
    if (is_room_category(k)) mass += params.category_priors[k];
  }
  double u = uniform_real(rng, 0.0, mass);
  std::uint32_t last = 0;
  for (std::uint32_t k = 0; k < kNumCategories; ++k) {
    if (!is_room_category(k) || params.category_priors[k] <= 0.0) continue;
    last = k;
    if (u < params.category_priors[k]) return category_at(k);
    u -= params.category_priors[k];
  }
  return category_at(last);
}

}  // namespace

void check(const SynthFloorParams& params) {
  if (params.corridor_length < 1) throw ConfigError("corridor_length must be >= 1");
  if (params.rooms_per_corridor < 0) throw ConfigError("rooms_per_corridor must be >= 0");
  if (params.room_size_range[0] < 1 || params.room_size_range[1] < params.room_size_range[0]) {
    throw ConfigError("room_size_range must satisfy 1 <= lo <= hi");
  }
  double total = 0.0;
  double room_mass = 0.0;
  for (std::uint32_t k = 0; k < kNumCategories; ++k) {
    const double p = params.category_priors[k];
    if (!std::isfinite(p) || p < 0.0) throw ConfigError("category_priors must be non-negative");
    total += p;
    if (is_room_category(k)) room_mass += p;
  }
  if (std::abs(total - 1.0) > 1e-6) throw ConfigError("category_priors must sum to 1");
  if (params.rooms_per_corridor > 0 && !(room_mass > 0.0)) {
    throw ConfigError("category_priors give no mass to room categories");
  }
}

SynthFloorParams synth_params_from_json(const json& doc) {
  SynthFloorParams p;
  if (!doc.is_object()) throw ConfigError("synthetic floor params must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    try {
      if (key == "corridor_length") {
        p.corridor_length = value.get<int>();
      } else if (key == "rooms_per_corridor") {
        p.rooms_per_corridor = value.get<int>();
      } else if (key == "room_size_range") {
        p.room_size_range = value.get<std::array<int, 2>>();
      } else if (key == "category_priors") {
        if (value.is_object()) {
          p.category_priors.fill(0.0);
          for (const auto& [code, prior] : value.items()) {
            p.category_priors[index_of(category_from_code(code))] = prior.get<double>();
          }
        } else {
          p.category_priors = value.get<std::array<double, kNumCategories>>();
        }
      } else if (key == "rng_seed") {
        p.rng_seed = value.get<std::uint64_t>();
      } else {
        throw ConfigError("unknown key '" + key + "' in synthetic floor params");
      }
    } catch (const json::exception&) {
      throw ConfigError("bad value for '" + key + "'");
    } catch (const DataError& e) {
      throw ConfigError(e.what());
    }
  }
  check(p);
  return p;
}

json to_json(const SynthFloorParams& p) {
  json priors = json::object();
  for (std::uint32_t k = 0; k < kNumCategories; ++k) priors[std::string(kCategoryCodes[k])] = p.category_priors[k];
  return {{"corridor_length", p.corridor_length},
          {"rooms_per_corridor", p.rooms_per_corridor},
          {"room_size_range", p.room_size_range},
          {"category_priors", priors},
          {"rng_seed", p.rng_seed}};
}

TopoGraph generate_synthetic_floor(const SynthFloorParams& params, std::string id, std::string building) {
  check(params);
  Rng rng = make_rng(params.rng_seed);
  TopoGraph g;
  g.id = std::move(id);
  g.building = std::move(building);

  auto add_node = [&](PlaceCategory c) {
    const auto nid = static_cast<NodeId>(g.nodes.size());
    TopoNode node;
    node.id = nid;
    node.groundtruth = c;
    g.nodes.push_back(node);
    return nid;
  };

  for (int i = 0; i < params.corridor_length; ++i) {
    const NodeId n = add_node(PlaceCategory::kCR);
    if (i > 0) g.edges.emplace_back(n - 1, n);
  }

  for (int r = 0; r < params.rooms_per_corridor; ++r) {
    const PlaceCategory category = draw_room_category(params, rng);
    const auto span = static_cast<std::uint64_t>(params.room_size_range[1] - params.room_size_range[0] + 1);
    const int size = params.room_size_range[0] + static_cast<int>(uniform_index(rng, span));
    const auto anchor = static_cast<NodeId>(uniform_index(rng, static_cast<std::uint64_t>(params.corridor_length)));

    const NodeId door = add_node(PlaceCategory::kDW);
    g.edges.emplace_back(anchor, door);

    // Random tree over the room's nodes, the first one touching the door.
    std::vector<NodeId> room;
    std::set<std::pair<NodeId, NodeId>> room_edges;
    for (int i = 0; i < size; ++i) {
      const NodeId n = add_node(category);
      if (room.empty()) {
        g.edges.emplace_back(door, n);
      } else {
        const NodeId parent = room[uniform_index(rng, room.size())];
        g.edges.emplace_back(parent, n);
        room_edges.emplace(parent, n);
      }
      room.push_back(n);
    }
    // Larger rooms occasionally get one extra internal edge.
    if (size >= 3 && uniform_real(rng, 0.0, 1.0) < 0.5) {
      const NodeId a = room[uniform_index(rng, room.size())];
      const NodeId b = room[uniform_index(rng, room.size())];
      const auto key = std::make_pair(std::min(a, b), std::max(a, b));
      if (a != b && !room_edges.count(key)) g.edges.push_back(key);
    }
  }
  return g;
}

}  // namespace graphspn::graph
