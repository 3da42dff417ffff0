#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "graphspn/graph/topo_graph.hpp"

namespace graphspn::experiment {

using PosteriorMap = std::map<graph::NodeId, std::vector<double>>;

// Undirected DOT graph with one filled node per place. The fill color is the
// category of the posterior argmax when a posterior is given for the node,
// else its groundtruth, else its evidence argmax (grey when none). Nodes
// with a posterior carry its top three classes in the label; placeholders
// are dashed.
std::string to_dot(const graph::TopoGraph& graph, const PosteriorMap& posteriors = {});

// Accepts {"<node id>": [p0..p9], ...} or a list of {"node": id,
// "posterior": [...]} objects, the latter optionally nested in
// {"placeholders": [...]}. Throws DataError otherwise.
PosteriorMap posteriors_from_json(const nlohmann::json& doc);

}  // namespace graphspn::experiment
