#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "scorewin/mdp.hpp"
#include "scorewin/solver.hpp"

namespace scorewin::analysis {

struct ExperimentConfig {
  int branch = 2;
  int depth = 6;
  int num_actions = 2;
  std::int64_t runs = 2000;
  int bins = 100;
  std::uint64_t base_seed = 0;
  // Aggregate within each MDP first and then across MDPs, instead of
  // pooling every state with weight one. Off by default.
  bool per_mdp_average = false;
};

enum class Aggregation { kMean, kMedian };

struct Bin {
  double x_low = 0.0;
  double x_high = 0.0;
  std::int64_t count = 0;
  double aggregate = 0.0;  // NaN when count == 0
};

struct BinnedCurve {
  Aggregation aggregation = Aggregation::kMean;
  std::vector<Bin> bins;
};

struct LevelGapResult {
  BinnedCurve curve;  // one bin per level, spanning [level, level + 1)
  // Non-leaf states whose greedy argmax was tied (exactly equal top q),
  // reported so tie-breaking effects stay visible.
  std::int64_t score_ties = 0;
  std::int64_t outcome_ties = 0;
  std::int64_t states_total = 0;
};

// Mean winrate lost by playing the score-optimal policy instead of the
// outcome-optimal one, per level, over `runs` MDPs generated from streams
// (base_seed, replicate). Deterministic for any thread count.
LevelGapResult winrate_gap_by_level(const ExperimentConfig& cfg, int threads = 1);

// Which optimal policy plays the preferred role pi+ (the other plays pi-).
enum class PlusPolicy { kOutcome, kScore };

struct VarPrefSample {
  double x = 0.0;  // best winrate of the state, v_outcome under pi_outcome
  double y = 0.0;  // log Var(score | s, pi+(s)) - log Var(score | s, pi-(s))
};

struct VariancePreferenceResult {
  BinnedCurve curve;                  // median y per x-bin over [0, 1]
  std::vector<VarPrefSample> samples; // emitted samples, replicate order
  std::int64_t emitted = 0;
  std::int64_t equal_action = 0;   // states where pi+ and pi- agree
  std::int64_t zero_variance = 0;  // states skipped for unusable variances
};

// Median log-variance difference between the pi+ and pi- actions, binned by
// the state's best winrate. Variances follow pi+'s own trajectories. States
// where the policies agree are skipped and counted, as are states where
// either variance is zero (or the two are exactly equal). Deterministic for
// any thread count.
VariancePreferenceResult variance_preference_curve(const ExperimentConfig& cfg,
                                                   PlusPolicy plus,
                                                   int threads = 1);

// CSV with header x_low,x_high,count,aggregate; 17 significant digits, LF
// line endings, empty aggregate cell for empty bins.
void emit_csv(const BinnedCurve& curve, std::ostream& out);
void emit_csv(const BinnedCurve& curve, const std::string& path);

// Spearman rank correlation with average ranks on ties. NaN for fewer than
// two points or a constant input.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

// Median of an unsorted copy; NaN when empty.
double median(std::vector<double> values);

}  // namespace scorewin::analysis
