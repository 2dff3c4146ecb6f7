#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scorewin/mdp.hpp"
#include "scorewin/solver.hpp"

namespace scorewin::mcts {

struct SearchConfig {
  std::int64_t visits = 1;
  double c_puct = 1.5;        // see default_c_puct
  int rollouts_per_eval = 1;  // rollouts averaged per first visit of a node
  std::uint64_t seed = 0;
};

// 1.5 for the score reward (scaled sibling scores vary more than winrates),
// 1.0 for the outcome reward.
double default_c_puct(solver::RewardKind kind);

struct SearchResult {
  int action = 0;                          // argmax visits, lowest on ties
  std::vector<std::int64_t> visit_counts;  // per root action
  std::vector<double> q;  // mean backed-up value per root action, 0 unvisited
};

// Visit-budgeted PUCT search from a non-leaf state. Selection maximizes
// Q(a) + c_puct * P(a) * sqrt(sum_b N(b)) / (1 + N(a)) with uniform priors
// P(a) = 1/A and Q(a) = 0 while unvisited; environment transitions are
// resampled every simulation; a first visit to a state is evaluated by
// uniform-random rollout; values are leaf scores scaled by 1/b^d for the
// score reward, or the win indicator for the outcome reward; the mean value
// is backed up along the simulated path. Deterministic given cfg.seed.
SearchResult search(const mdp::AstMdp& m, std::int64_t root_flat,
                    solver::RewardKind kind, const SearchConfig& cfg);

struct AgentSpec {
  solver::RewardKind kind = solver::RewardKind::kScore;
  SearchConfig cfg;  // cfg.seed is ignored by match (seeds are derived)
};

struct MatchResult {
  // Per-episode final leaf scores and win indicators, one entry per episode.
  std::vector<std::int64_t> score_a, score_b;
  std::vector<int> outcome_a, outcome_b;

  double mean_score_a() const;
  double mean_score_b() const;
  double mean_outcome_a() const;
  double mean_outcome_b() const;
};

// Plays `episodes` independent episodes per agent from the root: search
// picks each move, the environment samples the transition, the reached
// leaf's score and outcome are recorded. Episode e of agent j draws all
// randomness from rng streams derived from (seed, 2e + j), so results are
// deterministic for any thread count.
MatchResult match(const mdp::AstMdp& m, const AgentSpec& agent_a,
                  const AgentSpec& agent_b, std::int64_t episodes,
                  std::uint64_t seed, int threads = 1);

}  // namespace scorewin::mcts
