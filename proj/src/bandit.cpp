#include "scorewin/bandit.hpp"

#include <cmath>

#include "scorewin/errors.hpp"
#include "scorewin/rng.hpp"

namespace scorewin::bandit {
namespace {

void check_arm(double mu, double sigma) {
  if (!std::isfinite(mu) || !std::isfinite(sigma) || sigma <= 0.0) {
    throw ParamError("bandit arm requires finite mu and sigma > 0");
  }
}

}  // namespace

ArmStats arm_stats(double mu, double sigma) {
  check_arm(mu, sigma);
  // Phi(x) = erfc(-x / sqrt(2)) / 2; erfc keeps relative accuracy in the
  // deep tails where 1 - erf would cancel.
  const double win = 0.5 * std::erfc(-(mu / sigma) / std::sqrt(2.0));
  return {mu, win};
}

bool in_disagreement_region(const BanditParams& p) {
  check_arm(p.mu1, p.sigma1);
  check_arm(p.mu2, p.sigma2);
  const bool both_positive = p.mu1 > p.mu2 && p.mu2 > 0.0;
  const bool both_negative = p.mu2 < p.mu1 && p.mu1 < 0.0;
  if (!both_positive && !both_negative) return false;
  // sigma1 > sigma2 * mu1 / mu2 multiplied through by mu2: the direction
  // flips with the sign of mu2, so both branches land on one comparison.
  return p.sigma1 * p.mu2 > p.sigma2 * p.mu1;
}

ArmStats monte_carlo_arm_stats(const BanditParams& p, int arm, std::int64_t n,
                               std::uint64_t seed) {
  check_arm(p.mu1, p.sigma1);
  check_arm(p.mu2, p.sigma2);
  if (arm != 1 && arm != 2) throw ParamError("arm must be 1 or 2");
  if (n < 1) throw ParamError("sample count must be >= 1");
  const double mu = arm == 1 ? p.mu1 : p.mu2;
  const double sigma = arm == 1 ? p.sigma1 : p.sigma2;
  auto g = rng::make_stream(seed, 0);
  double sum = 0.0;
  std::int64_t wins = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    const double x = rng::normal(g, mu, sigma);
    sum += x;
    if (x > 0.0) ++wins;
  }
  return {sum / static_cast<double>(n),
          static_cast<double>(wins) / static_cast<double>(n)};
}

}  // namespace scorewin::bandit
