#pragma once

#include <cstdint>
#include <vector>

#include "scorewin/mdp.hpp"

namespace scorewin::solver {

// Score: the leaf's integer score. Outcome: 1 when the score is strictly
// positive, else 0 (a zero score counts as a loss).
enum class RewardKind { kScore, kOutcome };

double leaf_reward(RewardKind kind, std::int64_t score);

// Deterministic policy: one action per non-leaf state, indexed by flat id.
using Policy = std::vector<std::int32_t>;

struct SolveResult {
  RewardKind kind = RewardKind::kScore;
  int num_actions = 0;
  std::vector<double> values;    // per state, flat-id order, leaves included
  std::vector<double> q_values;  // non-leaf count x num_actions, row-major
  Policy policy;                 // greedy argmax, or the evaluated policy

  double q(std::int64_t nonleaf_flat, int action) const {
    return q_values[static_cast<std::size_t>(nonleaf_flat) * num_actions + action];
  }
};

// Exact solution in a single backward sweep from the leaves (the tree is
// acyclic, so the sweep is the value-iteration fixed point). Greedy argmax
// breaks ties toward the lowest action index.
SolveResult solve_optimal(const mdp::AstMdp& m, RewardKind kind);

// Backward sweep following pi: v(s) = q(s, pi(s)). The policy is echoed in
// the result. Throws ParamError when pi is not total over non-leaf states.
SolveResult evaluate_policy(const mdp::AstMdp& m, const Policy& pi, RewardKind kind);

// E[final score^2 | s, a] along pi, for every non-leaf state and action.
std::vector<double> second_moment(const mdp::AstMdp& m, const Policy& pi);

struct VarianceTable {
  int num_actions = 0;
  std::vector<double> values;  // Var(final score | s, a) along pi
  std::int64_t negatives_clamped = 0;   // tiny negatives rounded up to 0
  std::int64_t numerical_errors = 0;    // negatives beyond the clamp band

  double at(std::int64_t nonleaf_flat, int action) const {
    return values[static_cast<std::size_t>(nonleaf_flat) * num_actions + action];
  }
};

// Var(s, a) = m2(s, a) - q_score(s, a)^2 along pi. Negative results within
// 1e-9 * (b^d)^2 of zero are clamped to 0 and counted; anything below that
// band is flagged as a numerical error.
VarianceTable score_variance(const mdp::AstMdp& m, const Policy& pi);

}  // namespace scorewin::solver
