#pragma once

#include <cstdint>

namespace scorewin::bandit {

// Two Gaussian arms. Arm i yields a score drawn from N(mu_i, sigma_i^2) and
// an outcome of 1 exactly when the score is strictly positive.
struct BanditParams {
  double mu1 = 0.0;
  double sigma1 = 1.0;
  double mu2 = 0.0;
  double sigma2 = 1.0;
};

struct ArmStats {
  double score_mean = 0.0;  // E[score]
  double win_prob = 0.0;    // P(score > 0)
};

// Closed form: score_mean = mu, win_prob = Phi(mu / sigma) with Phi the
// standard normal CDF evaluated through erfc.
ArmStats arm_stats(double mu, double sigma);

// True iff the score-mean ranking and the win-probability ranking of the two
// arms are strictly opposite:
//   mu1 > mu2 > 0  and  sigma1 > sigma2 * mu1 / mu2,   or
//   mu2 < mu1 < 0  and  sigma1 < sigma2 * mu1 / mu2.
// Every boundary tie returns false.
bool in_disagreement_region(const BanditParams& p);

// Empirical mean and positive-sample frequency over n Gaussian draws from
// the given arm (1 or 2). Deterministic given seed.
ArmStats monte_carlo_arm_stats(const BanditParams& p, int arm, std::int64_t n,
                               std::uint64_t seed);

}  // namespace scorewin::bandit
