#include "scorewin/solver.hpp"

#include <cmath>
#include <string>

#include "scorewin/errors.hpp"

namespace scorewin::solver {
namespace {

void check_policy(const mdp::AstMdp& m, const Policy& pi) {
  if (static_cast<std::int64_t>(pi.size()) != m.num_nonleaf()) {
    throw ParamError("policy must cover every non-leaf state (" +
                     std::to_string(m.num_nonleaf()) + " states, got " +
                     std::to_string(pi.size()) + ")");
  }
  for (std::size_t s = 0; s < pi.size(); ++s) {
    if (pi[s] < 0 || pi[s] >= m.num_actions) {
      throw ParamError("policy action " + std::to_string(pi[s]) +
                       " at state " + std::to_string(s) + " out of range");
    }
  }
}

// Shared backward sweep. `pick` sees the q row of a state and returns the
// action whose q becomes v(s); `leaf_value` maps a leaf score to its value.
template <typename LeafValue, typename Pick>
SolveResult sweep(const mdp::AstMdp& m, RewardKind kind, LeafValue leaf_value,
                  Pick pick) {
  SolveResult r;
  r.kind = kind;
  r.num_actions = m.num_actions;
  r.values.resize(static_cast<std::size_t>(m.num_states()));
  r.q_values.resize(static_cast<std::size_t>(m.num_nonleaf()) * m.num_actions);
  r.policy.resize(static_cast<std::size_t>(m.num_nonleaf()));

  const std::int64_t first_leaf = m.num_nonleaf();
  for (std::int64_t leaf = 0; leaf < m.num_leaves(); ++leaf) {
    r.values[static_cast<std::size_t>(first_leaf + leaf)] =
        leaf_value(m.leaf_scores[static_cast<std::size_t>(leaf)]);
  }

  for (int level = m.depth - 1; level >= 0; --level) {
    const std::int64_t offset = m.level_offset(level);
    const std::int64_t next_offset = m.level_offset(level + 1);
    const std::int64_t states = m.level_offset(level + 1) - offset;
    for (std::int64_t i = 0; i < states; ++i) {
      const std::int64_t s = offset + i;
      const double* child_values =
          r.values.data() + static_cast<std::size_t>(next_offset + i * m.branch);
      double* q_row =
          r.q_values.data() + static_cast<std::size_t>(s) * m.num_actions;
      for (int a = 0; a < m.num_actions; ++a) {
        const auto p = m.transition(s, a);
        double q = 0.0;
        for (int k = 0; k < m.branch; ++k) q += p[k] * child_values[k];
        q_row[a] = q;
      }
      const int a = pick(s, q_row);
      r.policy[static_cast<std::size_t>(s)] = a;
      r.values[static_cast<std::size_t>(s)] = q_row[a];
    }
  }
  return r;
}

}  // namespace

double leaf_reward(RewardKind kind, std::int64_t score) {
  if (kind == RewardKind::kScore) return static_cast<double>(score);
  return score > 0 ? 1.0 : 0.0;
}

SolveResult solve_optimal(const mdp::AstMdp& m, RewardKind kind) {
  return sweep(
      m, kind, [kind](std::int64_t score) { return leaf_reward(kind, score); },
      [&m](std::int64_t, const double* q_row) {
        int best = 0;
        for (int a = 1; a < m.num_actions; ++a) {
          if (q_row[a] > q_row[best]) best = a;  // ties keep the lowest index
        }
        return best;
      });
}

SolveResult evaluate_policy(const mdp::AstMdp& m, const Policy& pi,
                            RewardKind kind) {
  check_policy(m, pi);
  return sweep(
      m, kind, [kind](std::int64_t score) { return leaf_reward(kind, score); },
      [&pi](std::int64_t s, const double*) {
        return static_cast<int>(pi[static_cast<std::size_t>(s)]);
      });
}

std::vector<double> second_moment(const mdp::AstMdp& m, const Policy& pi) {
  check_policy(m, pi);
  auto r = sweep(
      m, RewardKind::kScore,
      [](std::int64_t score) {
        return static_cast<double>(score) * static_cast<double>(score);
      },
      [&pi](std::int64_t s, const double*) {
        return static_cast<int>(pi[static_cast<std::size_t>(s)]);
      });
  return std::move(r.q_values);
}

VarianceTable score_variance(const mdp::AstMdp& m, const Policy& pi) {
  const auto m2 = second_moment(m, pi);
  const auto q_score = evaluate_policy(m, pi, RewardKind::kScore);

  const double leaf_count = static_cast<double>(m.num_leaves());
  const double clamp_band = 1e-9 * leaf_count * leaf_count;

  VarianceTable table;
  table.num_actions = m.num_actions;
  table.values.resize(m2.size());
  for (std::size_t i = 0; i < m2.size(); ++i) {
    double var = m2[i] - q_score.q_values[i] * q_score.q_values[i];
    if (var < 0.0) {
      if (var >= -clamp_band) {
        ++table.negatives_clamped;
        var = 0.0;
      } else {
        ++table.numerical_errors;
      }
    }
    table.values[i] = var;
  }
  return table;
}

}  // namespace scorewin::solver
