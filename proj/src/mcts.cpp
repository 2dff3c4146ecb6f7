#include "scorewin/mcts.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "scorewin/errors.hpp"
#include "scorewin/parallel.hpp"
#include "scorewin/rng.hpp"

namespace scorewin::mcts {
namespace {

int sample_child(const mdp::AstMdp& m, std::int64_t s, int action,
                 rng::Engine& g) {
  const auto row = m.transition(s, action);
  const double u = rng::uniform_unit(g);
  double acc = 0.0;
  for (int k = 0; k + 1 < m.branch; ++k) {
    acc += row[k];
    if (u < acc) return k;
  }
  return m.branch - 1;
}

void check_config(const SearchConfig& cfg) {
  if (cfg.visits < 1) throw ParamError("visits must be >= 1");
  if (!(cfg.c_puct > 0.0)) throw ParamError("c_puct must be > 0");
  if (cfg.rollouts_per_eval < 1) throw ParamError("rollouts_per_eval must be >= 1");
}

double mean_of_int64(const std::vector<std::int64_t>& v) {
  double s = 0.0;
  for (auto x : v) s += static_cast<double>(x);
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double mean_of_int(const std::vector<int>& v) {
  double s = 0.0;
  for (auto x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

}  // namespace

double default_c_puct(solver::RewardKind kind) {
  return kind == solver::RewardKind::kScore ? 1.5 : 1.0;
}

SearchResult search(const mdp::AstMdp& m, std::int64_t root_flat,
                    solver::RewardKind kind, const SearchConfig& cfg) {
  check_config(cfg);
  if (root_flat < 0 || root_flat >= m.num_states()) {
    throw ParamError("search root out of range");
  }
  if (m.is_leaf(root_flat)) throw ParamError("search root must be a non-leaf state");

  const int num_actions = m.num_actions;
  const double prior = 1.0 / num_actions;
  const double scale = 1.0 / static_cast<double>(m.num_leaves());
  const std::int64_t num_nonleaf = m.num_nonleaf();

  auto g = rng::make_stream(cfg.seed, 0);
  std::vector<std::int64_t> visits(
      static_cast<std::size_t>(num_nonleaf) * num_actions, 0);
  std::vector<double> value_sum(
      static_cast<std::size_t>(num_nonleaf) * num_actions, 0.0);
  std::vector<std::uint8_t> expanded(static_cast<std::size_t>(num_nonleaf), 0);
  expanded[static_cast<std::size_t>(root_flat)] = 1;

  const auto leaf_value = [&](std::int64_t leaf_flat) {
    const std::int64_t score = m.leaf_score_at(leaf_flat);
    return kind == solver::RewardKind::kScore
               ? static_cast<double>(score) * scale
               : (score > 0 ? 1.0 : 0.0);
  };

  const auto rollout_value = [&](std::int64_t s) {
    double acc = 0.0;
    for (int r = 0; r < cfg.rollouts_per_eval; ++r) {
      std::int64_t cur = s;
      while (!m.is_leaf(cur)) {
        const int a = static_cast<int>(rng::uniform_int(g, 0, num_actions - 1));
        cur = m.child_flat(cur, sample_child(m, cur, a, g));
      }
      acc += leaf_value(cur);
    }
    return acc / cfg.rollouts_per_eval;
  };

  std::vector<std::pair<std::int64_t, int>> path;
  path.reserve(static_cast<std::size_t>(m.depth));

  for (std::int64_t sim = 0; sim < cfg.visits; ++sim) {
    std::int64_t s = root_flat;
    path.clear();
    double value = 0.0;
    for (;;) {
      const std::size_t row = static_cast<std::size_t>(s) * num_actions;
      std::int64_t total = 0;
      for (int a = 0; a < num_actions; ++a) total += visits[row + a];
      const double sqrt_total = std::sqrt(static_cast<double>(total));

      int best = 0;
      double best_score = -std::numeric_limits<double>::infinity();
      for (int a = 0; a < num_actions; ++a) {
        const std::int64_t n = visits[row + a];
        const double q = n > 0 ? value_sum[row + a] / static_cast<double>(n) : 0.0;
        const double u = cfg.c_puct * prior * sqrt_total / (1.0 + static_cast<double>(n));
        const double score = q + u;
        if (score > best_score) {  // strict: ties keep the lowest index
          best_score = score;
          best = a;
        }
      }
      path.emplace_back(s, best);

      const std::int64_t next = m.child_flat(s, sample_child(m, s, best, g));
      if (m.is_leaf(next)) {
        value = leaf_value(next);
        break;
      }
      if (!expanded[static_cast<std::size_t>(next)]) {
        expanded[static_cast<std::size_t>(next)] = 1;
        value = rollout_value(next);
        break;
      }
      s = next;
    }
    for (const auto& [ps, pa] : path) {
      const std::size_t idx = static_cast<std::size_t>(ps) * num_actions + pa;
      ++visits[idx];
      value_sum[idx] += value;
    }
  }

  SearchResult result;
  result.visit_counts.resize(static_cast<std::size_t>(num_actions));
  result.q.resize(static_cast<std::size_t>(num_actions));
  const std::size_t root_row = static_cast<std::size_t>(root_flat) * num_actions;
  for (int a = 0; a < num_actions; ++a) {
    result.visit_counts[static_cast<std::size_t>(a)] = visits[root_row + a];
    result.q[static_cast<std::size_t>(a)] =
        visits[root_row + a] > 0
            ? value_sum[root_row + a] / static_cast<double>(visits[root_row + a])
            : 0.0;
  }
  result.action = 0;
  for (int a = 1; a < num_actions; ++a) {
    if (result.visit_counts[static_cast<std::size_t>(a)] >
        result.visit_counts[static_cast<std::size_t>(result.action)]) {
      result.action = a;
    }
  }
  return result;
}

double MatchResult::mean_score_a() const { return mean_of_int64(score_a); }
double MatchResult::mean_score_b() const { return mean_of_int64(score_b); }
double MatchResult::mean_outcome_a() const { return mean_of_int(outcome_a); }
double MatchResult::mean_outcome_b() const { return mean_of_int(outcome_b); }

MatchResult match(const mdp::AstMdp& m, const AgentSpec& agent_a,
                  const AgentSpec& agent_b, std::int64_t episodes,
                  std::uint64_t seed, int threads) {
  if (episodes < 1) throw ParamError("episodes must be >= 1");
  check_config(agent_a.cfg);
  check_config(agent_b.cfg);

  MatchResult result;
  result.score_a.resize(static_cast<std::size_t>(episodes));
  result.score_b.resize(static_cast<std::size_t>(episodes));
  result.outcome_a.resize(static_cast<std::size_t>(episodes));
  result.outcome_b.resize(static_cast<std::size_t>(episodes));

  // Work unit 2e + j is episode e of agent j; every unit owns its own
  // derived streams and result slots.
  parallel_for(episodes * 2, threads, [&](std::int64_t unit) {
    const std::int64_t episode = unit / 2;
    const int agent_idx = static_cast<int>(unit % 2);
    const AgentSpec& agent = agent_idx == 0 ? agent_a : agent_b;
    const std::uint64_t base =
        rng::derive_stream_seed(seed, static_cast<std::uint64_t>(unit));
    auto env = rng::make_stream(base, 0);

    std::int64_t s = 0;
    int move = 0;
    while (!m.is_leaf(s)) {
      SearchConfig cfg = agent.cfg;
      cfg.seed = rng::derive_stream_seed(base, static_cast<std::uint64_t>(move) + 1);
      const SearchResult r = search(m, s, agent.kind, cfg);
      s = m.child_flat(s, sample_child(m, s, r.action, env));
      ++move;
    }
    const std::int64_t score = m.leaf_score_at(s);
    const int outcome = score > 0 ? 1 : 0;
    if (agent_idx == 0) {
      result.score_a[static_cast<std::size_t>(episode)] = score;
      result.outcome_a[static_cast<std::size_t>(episode)] = outcome;
    } else {
      result.score_b[static_cast<std::size_t>(episode)] = score;
      result.outcome_b[static_cast<std::size_t>(episode)] = outcome;
    }
  });
  return result;
}

}  // namespace scorewin::mcts
