#include "scorewin/elo.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "scorewin/errors.hpp"

namespace scorewin::elo {
namespace {

constexpr double kEloScale = 2.30258509299404568402 / 400.0;  // ln(10)/400

struct MergedPair {
  int i, j;
  double wins_ij, wins_ji;
};

std::vector<MergedPair> merge_pairs(const MatchGrid& grid, double epsilon) {
  std::map<std::pair<int, int>, std::pair<double, double>> acc;
  for (const PairResult& p : grid.pairs) {
    if (p.i == p.j) throw ParamError("self-play pair for player index " +
                                     std::to_string(p.i));
    if (p.i < 0 || p.j < 0 ||
        p.i >= static_cast<int>(grid.players.size()) ||
        p.j >= static_cast<int>(grid.players.size())) {
      throw ParamError("pair references an unknown player index");
    }
    if (!(p.wins_ij >= 0.0) || !(p.wins_ji >= 0.0)) {
      throw ParamError("win counts must be finite and >= 0");
    }
    auto key = std::minmax(p.i, p.j);
    auto& slot = acc[{key.first, key.second}];
    if (p.i < p.j) {
      slot.first += p.wins_ij;
      slot.second += p.wins_ji;
    } else {
      slot.first += p.wins_ji;
      slot.second += p.wins_ij;
    }
  }
  std::vector<MergedPair> merged;
  merged.reserve(acc.size());
  for (const auto& [key, wins] : acc) {
    merged.push_back(
        {key.first, key.second, wins.first + epsilon, wins.second + epsilon});
  }
  return merged;
}

}  // namespace

int MatchGrid::add_player(const std::string& name) {
  for (std::size_t i = 0; i < players.size(); ++i) {
    if (players[i] == name) return static_cast<int>(i);
  }
  players.push_back(name);
  return static_cast<int>(players.size() - 1);
}

void MatchGrid::add_result(const std::string& a, const std::string& b,
                           double wins_ab, double wins_ba) {
  const int i = add_player(a);
  const int j = add_player(b);
  pairs.push_back({i, j, wins_ab, wins_ba});
}

void MatchGrid::set_anchor(const std::string& name, double rating) {
  anchors[name] = rating;
}

double Ratings::of(const std::string& name) const {
  for (std::size_t i = 0; i < players.size(); ++i) {
    if (players[i] == name) return elo[i];
  }
  throw ParamError("unknown player: " + name);
}

double win_probability(double elo_i, double elo_j) {
  if (!std::isfinite(elo_i) || !std::isfinite(elo_j)) {
    throw ParamError("ratings must be finite");
  }
  return 1.0 / (1.0 + std::pow(10.0, (elo_j - elo_i) / 400.0));
}

Ratings fit(const MatchGrid& grid, const FitOptions& opts) {
  const int n = static_cast<int>(grid.players.size());
  if (n == 0) throw ParamError("no players");
  if (grid.anchors.empty()) throw ParamError("at least one anchor is required");
  if (!(opts.tol > 0.0)) throw ParamError("tol must be > 0");
  if (opts.max_iter < 1) throw ParamError("max_iter must be >= 1");
  if (!(opts.epsilon >= 0.0)) throw ParamError("epsilon must be >= 0");

  std::vector<bool> anchored(static_cast<std::size_t>(n), false);
  std::vector<double> rating(static_cast<std::size_t>(n), 0.0);
  double anchor_sum = 0.0;
  for (const auto& [name, value] : grid.anchors) {
    bool found = false;
    for (int i = 0; i < n; ++i) {
      if (grid.players[static_cast<std::size_t>(i)] == name) {
        anchored[static_cast<std::size_t>(i)] = true;
        rating[static_cast<std::size_t>(i)] = value;
        found = true;
        break;
      }
    }
    if (!found) throw ParamError("anchor " + name + " is not a player");
    anchor_sum += value;
  }
  const double anchor_mean = anchor_sum / static_cast<double>(grid.anchors.size());
  for (int i = 0; i < n; ++i) {
    if (!anchored[static_cast<std::size_t>(i)]) {
      rating[static_cast<std::size_t>(i)] = anchor_mean;
    }
  }

  const auto merged = merge_pairs(grid, opts.epsilon);

  // Every non-anchored player must reach an anchor through played games.
  std::vector<std::vector<int>> adjacent(static_cast<std::size_t>(n));
  for (const MergedPair& p : merged) {
    if (p.wins_ij + p.wins_ji > 0.0) {
      adjacent[static_cast<std::size_t>(p.i)].push_back(p.j);
      adjacent[static_cast<std::size_t>(p.j)].push_back(p.i);
    }
  }
  std::vector<bool> reached(static_cast<std::size_t>(n), false);
  std::deque<int> queue;
  for (int i = 0; i < n; ++i) {
    if (anchored[static_cast<std::size_t>(i)]) {
      reached[static_cast<std::size_t>(i)] = true;
      queue.push_back(i);
    }
  }
  while (!queue.empty()) {
    const int i = queue.front();
    queue.pop_front();
    for (int j : adjacent[static_cast<std::size_t>(i)]) {
      if (!reached[static_cast<std::size_t>(j)]) {
        reached[static_cast<std::size_t>(j)] = true;
        queue.push_back(j);
      }
    }
  }
  std::string unreachable;
  for (int i = 0; i < n; ++i) {
    if (!reached[static_cast<std::size_t>(i)]) {
      if (!unreachable.empty()) unreachable += ", ";
      unreachable += grid.players[static_cast<std::size_t>(i)];
    }
  }
  if (!unreachable.empty()) {
    throw EstimationError("players unreachable from any anchor: " + unreachable);
  }

  // A perfect or empty record sends the MLE to infinity; epsilon > 0 bounds it.
  std::vector<double> total_wins(static_cast<std::size_t>(n), 0.0);
  std::vector<double> total_losses(static_cast<std::size_t>(n), 0.0);
  for (const MergedPair& p : merged) {
    total_wins[static_cast<std::size_t>(p.i)] += p.wins_ij;
    total_losses[static_cast<std::size_t>(p.i)] += p.wins_ji;
    total_wins[static_cast<std::size_t>(p.j)] += p.wins_ji;
    total_losses[static_cast<std::size_t>(p.j)] += p.wins_ij;
  }
  for (int i = 0; i < n; ++i) {
    if (anchored[static_cast<std::size_t>(i)]) continue;
    if (total_wins[static_cast<std::size_t>(i)] == 0.0 ||
        total_losses[static_cast<std::size_t>(i)] == 0.0) {
      throw EstimationError(
          "rating of " + grid.players[static_cast<std::size_t>(i)] +
          " is unbounded (all wins or all losses); set epsilon > 0 to regularize");
    }
  }

  // Minorize-maximize in gamma space: gamma_i <- W_i / sum_j n_ij/(g_i+g_j).
  std::vector<double> gamma(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    gamma[static_cast<std::size_t>(i)] =
        std::exp(kEloScale * rating[static_cast<std::size_t>(i)]);
  }

  Ratings out;
  out.players = grid.players;
  const double threshold = opts.tol * 400.0;
  std::vector<double> denom(static_cast<std::size_t>(n));
  for (std::int64_t iter = 0; iter < opts.max_iter; ++iter) {
    std::fill(denom.begin(), denom.end(), 0.0);
    for (const MergedPair& p : merged) {
      const double games = p.wins_ij + p.wins_ji;
      if (games <= 0.0) continue;
      const double inv = games / (gamma[static_cast<std::size_t>(p.i)] +
                                  gamma[static_cast<std::size_t>(p.j)]);
      denom[static_cast<std::size_t>(p.i)] += inv;
      denom[static_cast<std::size_t>(p.j)] += inv;
    }
    double max_delta = 0.0;
    for (int i = 0; i < n; ++i) {
      if (anchored[static_cast<std::size_t>(i)]) continue;
      const double g_new =
          total_wins[static_cast<std::size_t>(i)] / denom[static_cast<std::size_t>(i)];
      const double e_new = std::log(g_new) / kEloScale;
      max_delta = std::max(max_delta,
                           std::abs(e_new - rating[static_cast<std::size_t>(i)]));
      rating[static_cast<std::size_t>(i)] = e_new;
    }
    for (int i = 0; i < n; ++i) {
      if (!anchored[static_cast<std::size_t>(i)]) {
        gamma[static_cast<std::size_t>(i)] =
            std::exp(kEloScale * rating[static_cast<std::size_t>(i)]);
      }
    }
    out.iterations = iter + 1;
    if (max_delta < threshold) {
      out.converged = true;
      break;
    }
  }

  out.elo = rating;
  out.log_likelihood = 0.0;
  for (const MergedPair& p : merged) {
    const double prob = win_probability(rating[static_cast<std::size_t>(p.i)],
                                        rating[static_cast<std::size_t>(p.j)]);
    if (p.wins_ij > 0.0) out.log_likelihood += p.wins_ij * std::log(prob);
    if (p.wins_ji > 0.0) out.log_likelihood += p.wins_ji * std::log(1.0 - prob);
  }
  return out;
}

}  // namespace scorewin::elo
