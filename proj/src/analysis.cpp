#include "scorewin/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "scorewin/errors.hpp"
#include "scorewin/parallel.hpp"
#include "scorewin/rng.hpp"

namespace scorewin::analysis {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_config(const ExperimentConfig& cfg) {
  if (cfg.runs < 1) throw ParamError("runs must be >= 1");
  if (cfg.bins < 1) throw ParamError("bins must be >= 1");
  mdp::checked_leaf_count(cfg.branch, cfg.depth);
  if (cfg.num_actions < 2) throw ParamError("num_actions must be >= 2");
}

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Runs fn(i) across replicates and rethrows failures with the replicate
// index attached.
void for_each_replicate(std::int64_t runs, int threads,
                        const std::function<void(std::int64_t)>& fn) {
  parallel_for(runs, threads, [&](std::int64_t i) {
    try {
      fn(i);
    } catch (const std::exception& e) {
      throw std::runtime_error("replicate " + std::to_string(i) + ": " +
                               e.what());
    }
  });
}

std::int64_t count_argmax_ties(const solver::SolveResult& r,
                               std::int64_t num_nonleaf, int num_actions) {
  std::int64_t ties = 0;
  for (std::int64_t s = 0; s < num_nonleaf; ++s) {
    const double top = r.q(s, r.policy[static_cast<std::size_t>(s)]);
    int hits = 0;
    for (int a = 0; a < num_actions; ++a) {
      if (r.q(s, a) == top) ++hits;
    }
    if (hits > 1) ++ties;
  }
  return ties;
}

int bin_of(double x, int bins) {
  const int raw = static_cast<int>(x * bins);
  return std::clamp(raw, 0, bins - 1);
}

}  // namespace

double median(std::vector<double> values) {
  if (values.empty()) return kNaN;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

LevelGapResult winrate_gap_by_level(const ExperimentConfig& cfg, int threads) {
  check_config(cfg);
  const int levels = cfg.depth + 1;

  struct Partial {
    std::vector<double> gap_sum;  // one entry per level
    std::int64_t score_ties = 0;
    std::int64_t outcome_ties = 0;
  };
  std::vector<Partial> partials(static_cast<std::size_t>(cfg.runs));

  for_each_replicate(cfg.runs, threads, [&](std::int64_t i) {
    const auto m = mdp::generate(cfg.branch, cfg.depth, cfg.num_actions,
                                 rng::derive_stream_seed(cfg.base_seed,
                                                         static_cast<std::uint64_t>(i)));
    const auto score = solver::solve_optimal(m, solver::RewardKind::kScore);
    const auto outcome = solver::solve_optimal(m, solver::RewardKind::kOutcome);
    const auto under_score =
        solver::evaluate_policy(m, score.policy, solver::RewardKind::kOutcome);

    Partial p;
    p.gap_sum.assign(static_cast<std::size_t>(levels), 0.0);
    for (int level = 0; level < levels; ++level) {
      const std::int64_t lo = m.level_offset(level);
      const std::int64_t hi = m.level_offset(level + 1);
      double sum = 0.0;
      for (std::int64_t s = lo; s < hi; ++s) {
        sum += outcome.values[static_cast<std::size_t>(s)] -
               under_score.values[static_cast<std::size_t>(s)];
      }
      p.gap_sum[static_cast<std::size_t>(level)] = sum;
    }
    p.score_ties = count_argmax_ties(score, m.num_nonleaf(), m.num_actions);
    p.outcome_ties = count_argmax_ties(outcome, m.num_nonleaf(), m.num_actions);
    partials[static_cast<std::size_t>(i)] = std::move(p);
  });

  LevelGapResult result;
  result.curve.aggregation = Aggregation::kMean;
  result.curve.bins.resize(static_cast<std::size_t>(levels));

  for (int level = 0; level < levels; ++level) {
    const std::int64_t states_per_mdp = mdp::AstMdp::ipow(cfg.branch, level);
    Bin& bin = result.curve.bins[static_cast<std::size_t>(level)];
    bin.x_low = static_cast<double>(level);
    bin.x_high = static_cast<double>(level + 1);
    bin.count = states_per_mdp * cfg.runs;
    double acc = 0.0;
    if (cfg.per_mdp_average) {
      for (const Partial& p : partials) {
        acc += p.gap_sum[static_cast<std::size_t>(level)] /
               static_cast<double>(states_per_mdp);
      }
      bin.aggregate = acc / static_cast<double>(cfg.runs);
    } else {
      for (const Partial& p : partials) {
        acc += p.gap_sum[static_cast<std::size_t>(level)];
      }
      bin.aggregate = acc / static_cast<double>(bin.count);
    }
  }
  for (const Partial& p : partials) {
    result.score_ties += p.score_ties;
    result.outcome_ties += p.outcome_ties;
  }
  result.states_total =
      cfg.runs * (mdp::AstMdp::ipow(cfg.branch, cfg.depth + 1) - 1) /
      (cfg.branch - 1);
  return result;
}

VariancePreferenceResult variance_preference_curve(const ExperimentConfig& cfg,
                                                   PlusPolicy plus,
                                                   int threads) {
  check_config(cfg);

  struct Partial {
    std::vector<VarPrefSample> samples;
    std::int64_t equal_action = 0;
    std::int64_t zero_variance = 0;
  };
  std::vector<Partial> partials(static_cast<std::size_t>(cfg.runs));

  for_each_replicate(cfg.runs, threads, [&](std::int64_t i) {
    const auto m = mdp::generate(cfg.branch, cfg.depth, cfg.num_actions,
                                 rng::derive_stream_seed(cfg.base_seed,
                                                         static_cast<std::uint64_t>(i)));
    const auto score = solver::solve_optimal(m, solver::RewardKind::kScore);
    const auto outcome = solver::solve_optimal(m, solver::RewardKind::kOutcome);
    const solver::Policy& plus_pi =
        plus == PlusPolicy::kOutcome ? outcome.policy : score.policy;
    const solver::Policy& minus_pi =
        plus == PlusPolicy::kOutcome ? score.policy : outcome.policy;
    const auto variance = solver::score_variance(m, plus_pi);

    Partial p;
    for (std::int64_t s = 0; s < m.num_nonleaf(); ++s) {
      const int a_plus = plus_pi[static_cast<std::size_t>(s)];
      const int a_minus = minus_pi[static_cast<std::size_t>(s)];
      if (a_plus == a_minus) {
        ++p.equal_action;
        continue;
      }
      const double var_plus = variance.at(s, a_plus);
      const double var_minus = variance.at(s, a_minus);
      if (!(var_plus > 0.0) || !(var_minus > 0.0)) {
        ++p.zero_variance;
        continue;
      }
      const double y = std::log(var_plus) - std::log(var_minus);
      if (y == 0.0) {  // exactly equal variances carry no preference signal
        ++p.zero_variance;
        continue;
      }
      p.samples.push_back({outcome.values[static_cast<std::size_t>(s)], y});
    }
    partials[static_cast<std::size_t>(i)] = std::move(p);
  });

  VariancePreferenceResult result;
  result.curve.aggregation = Aggregation::kMedian;
  result.curve.bins.resize(static_cast<std::size_t>(cfg.bins));
  for (int b = 0; b < cfg.bins; ++b) {
    Bin& bin = result.curve.bins[static_cast<std::size_t>(b)];
    bin.x_low = static_cast<double>(b) / cfg.bins;
    bin.x_high = static_cast<double>(b + 1) / cfg.bins;
    bin.aggregate = kNaN;
  }

  // Pool in replicate order; medians are order-independent after sorting.
  std::vector<std::vector<double>> pooled(static_cast<std::size_t>(cfg.bins));
  std::vector<std::vector<double>> per_mdp_medians;
  if (cfg.per_mdp_average) {
    per_mdp_medians.resize(static_cast<std::size_t>(cfg.bins));
  }
  for (Partial& p : partials) {
    std::vector<std::vector<double>> local;
    if (cfg.per_mdp_average) local.resize(static_cast<std::size_t>(cfg.bins));
    for (const VarPrefSample& s : p.samples) {
      const int b = bin_of(s.x, cfg.bins);
      pooled[static_cast<std::size_t>(b)].push_back(s.y);
      if (cfg.per_mdp_average) local[static_cast<std::size_t>(b)].push_back(s.y);
      result.samples.push_back(s);
    }
    if (cfg.per_mdp_average) {
      for (int b = 0; b < cfg.bins; ++b) {
        if (!local[static_cast<std::size_t>(b)].empty()) {
          per_mdp_medians[static_cast<std::size_t>(b)].push_back(
              median(std::move(local[static_cast<std::size_t>(b)])));
        }
      }
    }
    result.equal_action += p.equal_action;
    result.zero_variance += p.zero_variance;
  }

  for (int b = 0; b < cfg.bins; ++b) {
    Bin& bin = result.curve.bins[static_cast<std::size_t>(b)];
    bin.count = static_cast<std::int64_t>(pooled[static_cast<std::size_t>(b)].size());
    if (bin.count == 0) continue;
    bin.aggregate = cfg.per_mdp_average
                        ? median(per_mdp_medians[static_cast<std::size_t>(b)])
                        : median(std::move(pooled[static_cast<std::size_t>(b)]));
  }
  result.emitted = static_cast<std::int64_t>(result.samples.size());
  return result;
}

void emit_csv(const BinnedCurve& curve, std::ostream& out) {
  out << "x_low,x_high,count,aggregate\n";
  for (const Bin& bin : curve.bins) {
    out << format17(bin.x_low) << ',' << format17(bin.x_high) << ','
        << bin.count << ',';
    if (bin.count > 0 && !std::isnan(bin.aggregate)) {
      out << format17(bin.aggregate);
    }
    out << '\n';
  }
}

void emit_csv(const BinnedCurve& curve, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  emit_csv(curve, out);
  if (!out) throw IoError("failed writing " + path);
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ParamError("spearman: length mismatch");
  const std::size_t n = x.size();
  if (n < 2) return kNaN;

  auto ranks = [](const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(n);
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
      const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
      for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
      i = j + 1;
    }
    return r;
  };

  const auto rx = ranks(x);
  const auto ry = ranks(y);
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_x += rx[i];
    mean_y += ry[i];
  }
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = rx[i] - mean_x;
    const double dy = ry[i] - mean_y;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return kNaN;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace scorewin::analysis
