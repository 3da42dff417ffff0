#include "graphspn/mrf/belief_propagation.hpp"

#include <algorithm>
#include <cmath>

#include "graphspn/common/errors.hpp"

namespace graphspn::mrf {

void check(const BpConfig& c) {
  if (c.max_iterations < 1) throw ConfigError("bp max_iterations must be >= 1");
  if (!(c.damping >= 0.0 && c.damping < 1.0)) throw ConfigError("bp damping must be in [0, 1)");
  if (!(c.tolerance > 0.0)) throw ConfigError("bp tolerance must be > 0");
}

BpConfig bp_config_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("bp config must be a JSON object");
  BpConfig c;
  for (const auto& [key, value] : doc.items()) {
    try {
      if (key == "max_iterations") {
        c.max_iterations = value.get<int>();
      } else if (key == "damping") {
        c.damping = value.get<double>();
      } else if (key == "tolerance") {
        c.tolerance = value.get<double>();
      } else if (key == "rng_seed") {
        c.rng_seed = value.get<std::uint64_t>();
      } else {
        throw ConfigError("unknown key '" + key + "' in bp config");
      }
    } catch (const nlohmann::json::exception&) {
      throw ConfigError("bad value for '" + key + "'");
    }
  }
  check(c);
  return c;
}

nlohmann::json to_json(const BpConfig& c) {
  return {{"max_iterations", c.max_iterations}, {"damping", c.damping}, {"tolerance", c.tolerance},
          {"rng_seed", c.rng_seed}};
}

namespace {

void normalize(std::vector<double>& m) {
  double z = 0.0;
  for (double x : m) z += x;
  if (!(z > 0.0) || !std::isfinite(z)) {
    std::fill(m.begin(), m.end(), 1.0 / static_cast<double>(m.size()));
    return;
  }
  for (double& x : m) x /= z;
}

}  // namespace

LoopyBp::LoopyBp(const FactorGraph& fg, const BpConfig& config)
    : fg_(fg), config_(config), rng_(make_rng(config.rng_seed)), incoming_(fg.num_variables()) {
  check(fg);
  check(config);
  messages_.resize(fg.factors.size());
  for (std::size_t f = 0; f < fg.factors.size(); ++f) {
    const auto& vars = fg.factors[f].vars;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      const auto card = fg.cardinalities[vars[i]];
      messages_[f].emplace_back(card, 1.0 / card);
      incoming_[vars[i]].emplace_back(f, i);
    }
    // A unary message never changes; start it at its final value.
    if (vars.size() == 1) {
      messages_[f][0] = fg.factors[f].table;
      normalize(messages_[f][0]);
    }
  }
  order_.resize(fg.factors.size());
  for (std::size_t f = 0; f < order_.size(); ++f) order_[f] = f;
}

std::vector<double> LoopyBp::variable_to_factor(std::size_t f, std::size_t slot) const {
  const std::size_t v = fg_.factors[f].vars[slot];
  std::vector<double> m(fg_.cardinalities[v], 1.0);
  for (const auto& [g, s] : incoming_[v]) {
    if (g == f) continue;
    const auto& in = messages_[g][s];
    for (std::size_t k = 0; k < m.size(); ++k) m[k] *= in[k];
    // Rescale as we go so long products of small numbers do not underflow.
    const double hi = *std::max_element(m.begin(), m.end());
    if (hi > 0.0) {
      for (double& x : m) x /= hi;
    }
  }
  normalize(m);
  return m;
}

double LoopyBp::iterate() {
  shuffle(order_.begin(), order_.end(), rng_);
  double change = 0.0;
  for (std::size_t f : order_) {
    const auto& factor = fg_.factors[f];
    const std::size_t arity = factor.vars.size();
    std::vector<std::vector<double>> in(arity);
    for (std::size_t i = 0; i < arity; ++i) in[i] = variable_to_factor(f, i);

    std::vector<std::size_t> card(arity);
    for (std::size_t i = 0; i < arity; ++i) card[i] = fg_.cardinalities[factor.vars[i]];
    std::vector<std::vector<double>> out(arity);
    for (std::size_t i = 0; i < arity; ++i) out[i].assign(card[i], 0.0);

    std::vector<std::size_t> x(arity, 0);
    for (std::size_t cell = 0; cell < factor.table.size(); ++cell) {
      const double phi = factor.table[cell];
      if (phi != 0.0) {
        for (std::size_t i = 0; i < arity; ++i) {
          double p = phi;
          for (std::size_t j = 0; j < arity; ++j) {
            if (j != i) p *= in[j][x[j]];
          }
          out[i][x[i]] += p;
        }
      }
      // Row-major: the last variable varies fastest.
      for (std::size_t pos = arity; pos-- > 0;) {
        if (++x[pos] < card[pos]) break;
        x[pos] = 0;
      }
    }
    for (std::size_t i = 0; i < arity; ++i) {
      normalize(out[i]);
      auto& old = messages_[f][i];
      for (std::size_t k = 0; k < old.size(); ++k) {
        const double next = (1.0 - config_.damping) * out[i][k] + config_.damping * old[k];
        change = std::max(change, std::abs(next - old[k]));
        old[k] = next;
      }
      normalize(old);
    }
  }
  return change;
}

std::vector<std::vector<double>> LoopyBp::beliefs() const {
  std::vector<std::vector<double>> out(fg_.num_variables());
  for (std::size_t v = 0; v < out.size(); ++v) {
    std::vector<double> b(fg_.cardinalities[v], 1.0);
    for (const auto& [g, s] : incoming_[v]) {
      for (std::size_t k = 0; k < b.size(); ++k) b[k] *= messages_[g][s][k];
      const double hi = *std::max_element(b.begin(), b.end());
      if (hi > 0.0) {
        for (double& x : b) x /= hi;
      }
    }
    normalize(b);
    out[v] = std::move(b);
  }
  return out;
}

BpResult loopy_bp(const FactorGraph& fg, const BpConfig& config) {
  LoopyBp bp(fg, config);
  BpResult result;
  for (int it = 1; it <= config.max_iterations; ++it) {
    result.last_change = bp.iterate();
    result.iterations = it;
    if (result.last_change < config.tolerance) {
      result.converged = true;
      break;
    }
  }
  result.marginals = bp.beliefs();
  return result;
}

std::vector<std::vector<double>> exact_marginals(const FactorGraph& fg) {
  check(fg);
  double states = 1.0;
  for (auto c : fg.cardinalities) states *= c;
  if (states > 1e7) throw DataError("joint state space too large for exact marginals");
  const std::size_t n = fg.num_variables();
  std::vector<std::vector<double>> post(n);
  for (std::size_t v = 0; v < n; ++v) post[v].assign(fg.cardinalities[v], 0.0);
  std::vector<std::uint32_t> x(n, 0);
  double total = 0.0;
  while (true) {
    double p = 1.0;
    for (const auto& f : fg.factors) {
      std::size_t idx = 0;
      for (auto v : f.vars) idx = idx * fg.cardinalities[v] + x[v];
      p *= f.table[idx];
    }
    total += p;
    for (std::size_t v = 0; v < n; ++v) post[v][x[v]] += p;
    std::size_t pos = 0;
    while (pos < n && ++x[pos] == fg.cardinalities[pos]) x[pos++] = 0;
    if (pos == n) break;
  }
  if (!(total > 0.0)) throw DataError("factor product is zero for every assignment");
  for (auto& row : post) {
    for (double& p : row) p /= total;
  }
  return post;
}

}  // namespace graphspn::mrf
