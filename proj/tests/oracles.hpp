// Test-side oracles, independent of the library's solver and analysis paths.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "scorewin/mdp.hpp"
#include "scorewin/rng.hpp"
#include "scorewin/solver.hpp"

namespace oracles {

using scorewin::mdp::AstMdp;
using scorewin::solver::Policy;
using scorewin::solver::RewardKind;

// Hand-built 3-leaf fixture: leaves score (10, 1, -1); action 0 mixes the
// best and worst leaves evenly, action 1 reaches the middle leaf surely.
// Exact values: q_score = (4.5, 1), q_outcome = (0.5, 1).
inline AstMdp make_three_leaf_fixture() {
  AstMdp m;
  m.branch = 3;
  m.depth = 1;
  m.num_actions = 2;
  m.leaf_scores = {10, 1, -1};
  m.transitions = {0.5, 0.0, 0.5,   // action 0
                   0.0, 1.0, 0.0};  // action 1
  return m;
}

inline double leaf_value(RewardKind kind, std::int64_t score) {
  if (kind == RewardKind::kScore) return static_cast<double>(score);
  return score > 0 ? 1.0 : 0.0;
}

// Plain recursive policy evaluation over the tree.
inline double eval_policy_recursive(const AstMdp& m, const Policy& pi,
                                    RewardKind kind, std::int64_t s) {
  if (m.is_leaf(s)) return leaf_value(kind, m.leaf_score_at(s));
  const int a = pi[static_cast<std::size_t>(s)];
  const auto p = m.transition(s, a);
  double v = 0.0;
  for (int k = 0; k < m.branch; ++k) {
    v += p[k] * eval_policy_recursive(m, pi, kind, m.child_flat(s, k));
  }
  return v;
}

// Best root value over every deterministic policy, by exhaustive enumeration.
inline double brute_force_best_root(const AstMdp& m, RewardKind kind) {
  const std::int64_t n = m.num_nonleaf();
  Policy pi(static_cast<std::size_t>(n), 0);
  double best = -std::numeric_limits<double>::infinity();
  for (;;) {
    best = std::max(best, eval_policy_recursive(m, pi, kind, 0));
    std::int64_t pos = 0;
    while (pos < n) {
      if (++pi[static_cast<std::size_t>(pos)] < m.num_actions) break;
      pi[static_cast<std::size_t>(pos)] = 0;
      ++pos;
    }
    if (pos == n) break;
  }
  return best;
}

// Max leaf score over root-to-leaf paths that some one-hot action realizes.
inline double max_reachable_score(const AstMdp& m, std::int64_t s) {
  if (m.is_leaf(s)) return static_cast<double>(m.leaf_score_at(s));
  double best = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < m.num_actions; ++a) {
    const auto p = m.transition(s, a);
    for (int k = 0; k < m.branch; ++k) {
      if (p[k] == 1.0) {
        best = std::max(best, max_reachable_score(m, m.child_flat(s, k)));
      }
    }
  }
  return best;
}

struct RolloutStats {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double se_mean = 0.0;
  double se_variance = 0.0;  // sqrt((m4 - var^2) / n)
};

// Monte Carlo final-score statistics over trajectories taking `action` at
// `s` and following pi afterwards.
inline RolloutStats rollout_score_stats(const AstMdp& m, const Policy& pi,
                                        std::int64_t s, int action,
                                        std::int64_t n, std::uint64_t seed) {
  auto g = scorewin::rng::make_stream(seed, 0);
  const auto step = [&](std::int64_t state, int a) {
    const auto p = m.transition(state, a);
    const double u = scorewin::rng::uniform_unit(g);
    double acc = 0.0;
    for (int k = 0; k + 1 < m.branch; ++k) {
      acc += p[k];
      if (u < acc) return m.child_flat(state, k);
    }
    return m.child_flat(state, m.branch - 1);
  };

  std::vector<double> scores(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    std::int64_t cur = step(s, action);
    while (!m.is_leaf(cur)) {
      cur = step(cur, pi[static_cast<std::size_t>(cur)]);
    }
    scores[static_cast<std::size_t>(i)] =
        static_cast<double>(m.leaf_score_at(cur));
  }

  RolloutStats st;
  for (double x : scores) st.mean += x;
  st.mean /= static_cast<double>(n);
  double m2 = 0.0, m4 = 0.0;
  for (double x : scores) {
    const double d = x - st.mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  m2 /= static_cast<double>(n);
  m4 /= static_cast<double>(n);
  st.variance = m2 * static_cast<double>(n) / static_cast<double>(n - 1);
  st.se_mean = std::sqrt(m2 / static_cast<double>(n));
  st.se_variance = std::sqrt(std::max(0.0, m4 - m2 * m2) / static_cast<double>(n));
  return st;
}

struct CsvRow {
  double x_low = 0.0;
  double x_high = 0.0;
  std::int64_t count = 0;
  std::optional<double> aggregate;
};

inline std::vector<CsvRow> parse_curve_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<CsvRow> rows;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    CsvRow row;
    std::size_t start = 0;
    std::vector<std::string> cells;
    for (int c = 0; c < 4; ++c) {
      const std::size_t comma = line.find(',', start);
      cells.push_back(line.substr(start, comma == std::string::npos
                                             ? std::string::npos
                                             : comma - start));
      start = comma == std::string::npos ? line.size() : comma + 1;
    }
    row.x_low = std::stod(cells[0]);
    row.x_high = std::stod(cells[1]);
    row.count = std::stoll(cells[2]);
    if (!cells[3].empty()) row.aggregate = std::stod(cells[3]);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace oracles
