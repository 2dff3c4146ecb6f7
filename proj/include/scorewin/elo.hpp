#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace scorewin::elo {

// Head-to-head totals for one unordered pair of players.
struct PairResult {
  int i = 0;
  int j = 0;
  double wins_ij = 0.0;  // games won by i against j
  double wins_ji = 0.0;
};

struct MatchGrid {
  std::vector<std::string> players;
  std::vector<PairResult> pairs;
  std::map<std::string, double> anchors;  // player -> fixed rating

  // Index of the named player, adding them when new.
  int add_player(const std::string& name);
  // Accumulates a head-to-head record; accepts repeated pairs.
  void add_result(const std::string& a, const std::string& b, double wins_ab,
                  double wins_ba);
  void set_anchor(const std::string& name, double rating);
};

struct FitOptions {
  double tol = 1e-9;            // converged when max |delta| < tol * 400
  std::int64_t max_iter = 10000;
  // Virtual wins added in both directions of every recorded pair. Zero by
  // default; a positive value (say 0.5) bounds ratings when some player has
  // a 100% or 0% record.
  double epsilon = 0.0;
};

struct Ratings {
  std::vector<std::string> players;
  std::vector<double> elo;
  double log_likelihood = 0.0;
  bool converged = false;
  std::int64_t iterations = 0;

  double of(const std::string& name) const;
};

// P(i beats j) = 1 / (1 + 10^{(elo_j - elo_i) / 400}).
double win_probability(double elo_i, double elo_j);

// Maximum-likelihood ratings under the logistic model, anchored players held
// fixed, via minorize-maximize updates on the non-anchored ratings. Throws
// EstimationError when the game graph leaves a player unreachable from the
// anchors, or when a player's record is all wins or all losses (unbounded
// likelihood) and opts.epsilon == 0.
Ratings fit(const MatchGrid& grid, const FitOptions& opts = {});

}  // namespace scorewin::elo
