#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace scorewin::mdp {

// Position of a state on the level/index grid. Flat ids enumerate states
// level by level: flat = (b^level - 1) / (b - 1) + index.
struct StateId {
  int level = 0;
  std::int64_t index = 0;
};

// Tree-shaped MDP where all actions out of a state share the same child set
// and differ only in their transition probabilities over it. States live on
// levels 0..depth; the b^depth states at level `depth` are leaves and carry
// the only rewards (an integer score). Instances are immutable once built
// and safe to share across threads.
struct AstMdp {
  int branch = 0;       // children per non-leaf state, >= 2
  int depth = 0;        // leaf level, >= 1
  int num_actions = 0;  // actions per non-leaf state, >= 2

  // One score per leaf, in leaf-index order.
  std::vector<std::int64_t> leaf_scores;

  // Row (state, action) is the probability vector over the state's children;
  // rows are laid out (non-leaf flat id, action)-major, `branch` wide.
  std::vector<double> transitions;

  std::int64_t num_leaves() const { return ipow(branch, depth); }
  std::int64_t num_states() const { return level_offset(depth + 1); }
  std::int64_t num_nonleaf() const { return level_offset(depth); }

  // Flat id of state (level, 0): (b^level - 1) / (b - 1).
  std::int64_t level_offset(int level) const {
    return (ipow(branch, level) - 1) / (branch - 1);
  }

  int level_of(std::int64_t flat) const {
    int level = 0;
    while (level_offset(level + 1) <= flat) ++level;
    return level;
  }

  bool is_leaf(std::int64_t flat) const { return flat >= num_nonleaf(); }

  std::int64_t flat_index(StateId s) const { return level_offset(s.level) + s.index; }

  StateId state_of(std::int64_t flat) const {
    const int level = level_of(flat);
    return {level, flat - level_offset(level)};
  }

  std::int64_t child_flat(std::int64_t flat, int k) const {
    const int level = level_of(flat);
    return level_offset(level + 1) + (flat - level_offset(level)) * branch + k;
  }

  std::int64_t parent_flat(std::int64_t flat) const {
    const int level = level_of(flat);
    return level_offset(level - 1) + (flat - level_offset(level)) / branch;
  }

  std::int64_t leaf_score_at(std::int64_t flat) const {
    return leaf_scores[static_cast<std::size_t>(flat - num_nonleaf())];
  }

  std::span<const double> transition(std::int64_t nonleaf_flat, int action) const {
    const std::size_t base =
        static_cast<std::size_t>((nonleaf_flat * num_actions + action)) *
        static_cast<std::size_t>(branch);
    return {transitions.data() + base, static_cast<std::size_t>(branch)};
  }

  double* transition_row(std::int64_t nonleaf_flat, int action) {
    return transitions.data() +
           static_cast<std::size_t>((nonleaf_flat * num_actions + action)) *
               static_cast<std::size_t>(branch);
  }

  static std::int64_t ipow(std::int64_t base, int exp) {
    std::int64_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
  }
};

// b^d with an overflow guard; throws ParamError when b^d exceeds 2^31.
std::int64_t checked_leaf_count(int branch, int depth);

// Random instance: leaf scores i.i.d. uniform integers on the closed
// interval [-b^d, b^d], transition rows i.i.d. Dirichlet(1,...,1) sampled as
// `branch` standard exponentials normalized by their sum. Draw order is the
// leaves in index order, then rows in (state, action) order, all from rng
// stream (seed, 0), so equal seeds give bit-identical instances.
AstMdp generate(int branch, int depth, int num_actions, std::uint64_t seed);

// Same tree and scores with every transition row replaced by a one-hot
// vector whose live child is chosen uniformly at random.
AstMdp make_deterministic(const AstMdp& m, std::uint64_t seed);

// JSON document with fields branch, depth, num_actions, leaf_scores and
// transitions. Probabilities carry 17 significant digits, which makes the
// serialize/deserialize round trip bit-exact.
std::string serialize(const AstMdp& m);

// Parses and validates a serialized document; throws FormatError naming the
// offending field.
AstMdp deserialize(std::string_view text);

// Structural validation shared by deserialize and the generators. Scores
// are checked against [-b^d, b^d] only when enforce_score_range is set;
// hand-built fixtures may carry scores outside the generated range.
void validate(const AstMdp& m, bool enforce_score_range);

AstMdp load_file(const std::string& path);
void save_file(const AstMdp& m, const std::string& path);

}  // namespace scorewin::mdp
