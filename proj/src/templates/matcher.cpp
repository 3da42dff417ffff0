#include "graphspn/templates/matcher.hpp"

#include <algorithm>

#include "graphspn/common/errors.hpp"

namespace graphspn::templates {

GraphView::GraphView(const graph::TopoGraph& graph)
    : graph_(&graph),
      adjacency_(graph::adjacency(graph)),
      alive_(graph.nodes.size(), true),
      alive_count_(graph.nodes.size()) {
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) index_.emplace(graph.nodes[i].id, i);
}

std::size_t GraphView::index(graph::NodeId id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) throw DataError("graph '" + graph_->id + "': unknown node id " + std::to_string(id));
  return it->second;
}

void GraphView::remove(std::size_t index) {
  if (alive_.at(index)) {
    alive_[index] = false;
    --alive_count_;
  }
}

void GraphView::remove(const Component& component) {
  for (graph::NodeId id : component.node_ids) remove(index(id));
}

namespace {

class Matcher {
 public:
  Matcher(const GraphView& view, const SubGraphTemplate& t, Rng& rng) : view_(view), t_(t), rng_(rng) {
    const int n = t.node_count;
    std::vector<std::vector<int>> tadj(n);
    for (auto [a, b] : t.edges) {
      tadj[a].push_back(b);
      tadj[b].push_back(a);
    }
    // Breadth-first slot order from slot 0; every later slot has an earlier
    // neighbour that anchors its candidate set.
    std::vector<bool> seen(n, false);
    order_.push_back(0);
    anchor_.push_back(-1);
    seen[0] = true;
    for (std::size_t k = 0; k < order_.size(); ++k) {
      for (int nb : tadj[order_[k]]) {
        if (seen[nb]) continue;
        seen[nb] = true;
        order_.push_back(nb);
        anchor_.push_back(order_[k]);
      }
    }
    // Earlier slots that must be adjacent to each position's slot.
    required_.resize(n);
    std::vector<int> position(n);
    for (int k = 0; k < n; ++k) position[order_[k]] = k;
    for (auto [a, b] : t.edges) {
      if (position[a] < position[b]) {
        required_[position[b]].push_back(a);
      } else {
        required_[position[a]].push_back(b);
      }
    }
    mapping_.assign(n, 0);
    used_.assign(view.adjacency().size(), false);
  }

  std::optional<Component> run() {
    std::vector<std::size_t> starts;
    for (std::size_t i = 0; i < view_.adjacency().size(); ++i) {
      if (view_.alive(i)) starts.push_back(i);
    }
    shuffle(starts.begin(), starts.end(), rng_);
    for (std::size_t s : starts) {
      mapping_[order_[0]] = s;
      used_[s] = true;
      const bool found = extend(1);
      used_[s] = false;
      if (found) {
        Component c{t_.id, {}};
        for (std::size_t slot = 0; slot < mapping_.size(); ++slot) {
          c.node_ids.push_back(view_.graph().nodes[mapping_[slot]].id);
        }
        return c;
      }
    }
    return std::nullopt;
  }

 private:
  bool adjacent(std::size_t a, std::size_t b) const {
    const auto& row = view_.adjacency()[a];
    return std::binary_search(row.begin(), row.end(), b);
  }

  bool extend(std::size_t k) {
    if (k == order_.size()) return true;
    const int slot = order_[k];
    std::vector<std::size_t> candidates;
    for (std::size_t c : view_.adjacency()[mapping_[anchor_[k]]]) {
      if (view_.alive(c) && !used_[c]) candidates.push_back(c);
    }
    shuffle(candidates.begin(), candidates.end(), rng_);
    for (std::size_t c : candidates) {
      bool ok = true;
      for (int other : required_[k]) {
        if (!adjacent(c, mapping_[other])) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      mapping_[slot] = c;
      used_[c] = true;
      const bool found = extend(k + 1);
      used_[c] = false;
      if (found) return true;
    }
    return false;
  }

  const GraphView& view_;
  const SubGraphTemplate& t_;
  Rng& rng_;
  std::vector<int> order_;
  std::vector<int> anchor_;
  std::vector<std::vector<int>> required_;
  std::vector<std::size_t> mapping_;
  std::vector<bool> used_;
};

}  // namespace

std::optional<Component> find_random_isomorphic_subgraph(const GraphView& view, const SubGraphTemplate& t,
                                                         Rng& rng) {
  if (view.alive_count() < static_cast<std::size_t>(t.node_count)) return std::nullopt;
  return Matcher(view, t, rng).run();
}

}  // namespace graphspn::templates
