#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "scorewin/analysis.hpp"
#include "scorewin/bandit.hpp"
#include "scorewin/elo.hpp"
#include "scorewin/errors.hpp"
#include "scorewin/manifest.hpp"
#include "scorewin/mcts.hpp"
#include "scorewin/mdp.hpp"
#include "scorewin/solver.hpp"
#include "scorewin/svg.hpp"

namespace {

using scorewin::FormatError;
using scorewin::IoError;
using scorewin::ParamError;

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw IoError("failed writing " + path);
}

scorewin::solver::RewardKind parse_reward(const std::string& name) {
  if (name == "score") return scorewin::solver::RewardKind::kScore;
  if (name == "outcome") return scorewin::solver::RewardKind::kOutcome;
  throw ParamError("reward must be 'score' or 'outcome', got '" + name + "'");
}

std::vector<double> grid_values(double lo, double hi, double step) {
  if (!(step > 0.0)) throw ParamError("grid step must be > 0");
  std::vector<double> values;
  for (int k = 0;; ++k) {
    const double v = lo + step * k;
    if (v > hi + 1e-9) break;
    values.push_back(v);
  }
  if (values.empty()) throw ParamError("empty grid");
  return values;
}

// ---- bandit-scan ----------------------------------------------------------

struct BanditScanArgs {
  double mu_min = -3.0, mu_max = 3.0, mu_step = 0.5;
  double sigma_min = 0.25, sigma_max = 4.0, sigma_step = 0.25;
  std::string out;
};

void run_bandit_scan(const BanditScanArgs& args) {
  const auto mus = grid_values(args.mu_min, args.mu_max, args.mu_step);
  const auto sigmas = grid_values(args.sigma_min, args.sigma_max, args.sigma_step);

  std::string csv = "mu1,sigma1,mu2,sigma2,score_pref,outcome_pref,disagree\n";
  for (double mu1 : mus) {
    for (double sigma1 : sigmas) {
      for (double mu2 : mus) {
        for (double sigma2 : sigmas) {
          if (mu1 == mu2) continue;                    // score ranking tied
          if (mu1 * sigma2 == mu2 * sigma1) continue;  // win prob ranking tied
          const scorewin::bandit::BanditParams p{mu1, sigma1, mu2, sigma2};
          const int score_pref = mu1 > mu2 ? 1 : 2;
          const auto s1 = scorewin::bandit::arm_stats(mu1, sigma1);
          const auto s2 = scorewin::bandit::arm_stats(mu2, sigma2);
          const int outcome_pref = s1.win_prob > s2.win_prob ? 1 : 2;
          const bool disagree = scorewin::bandit::in_disagreement_region(p);
          csv += g17(mu1) + "," + g17(sigma1) + "," + g17(mu2) + "," +
                 g17(sigma2) + "," + std::to_string(score_pref) + "," +
                 std::to_string(outcome_pref) + "," + (disagree ? "1" : "0") +
                 "\n";
        }
      }
    }
  }
  write_text_file(args.out, csv);

  scorewin::cli::RunManifest man;
  man.subcommand = "bandit-scan";
  man.parameters = {{"mu_min", g17(args.mu_min)},       {"mu_max", g17(args.mu_max)},
                    {"mu_step", g17(args.mu_step)},     {"sigma_min", g17(args.sigma_min)},
                    {"sigma_max", g17(args.sigma_max)}, {"sigma_step", g17(args.sigma_step)},
                    {"out", args.out}};
  man.outputs = {args.out};
  scorewin::cli::write_manifest(man, args.out);
}

// ---- gen-mdp ---------------------------------------------------------------

struct GenMdpArgs {
  int branch = 2, depth = 6, actions = 2;
  std::uint64_t seed = 0;
  std::string out;
};

void run_gen_mdp(const GenMdpArgs& args) {
  const auto m = scorewin::mdp::generate(args.branch, args.depth, args.actions,
                                         args.seed);
  scorewin::mdp::save_file(m, args.out);

  scorewin::cli::RunManifest man;
  man.subcommand = "gen-mdp";
  man.base_seed = args.seed;
  man.parameters = {{"branch", std::to_string(args.branch)},
                    {"depth", std::to_string(args.depth)},
                    {"actions", std::to_string(args.actions)},
                    {"seed", std::to_string(args.seed)},
                    {"out", args.out}};
  man.outputs = {args.out};
  scorewin::cli::write_manifest(man, args.out);
}

// ---- solve -----------------------------------------------------------------

struct SolveArgs {
  std::string mdp_path;
  std::string reward = "score";
  std::string out;
  std::string policy_out;
};

void run_solve(const SolveArgs& args) {
  const auto kind = parse_reward(args.reward);
  const auto m = scorewin::mdp::load_file(args.mdp_path);
  const auto result = scorewin::solver::solve_optimal(m, kind);

  nlohmann::ordered_json doc;
  doc["reward"] = args.reward;
  doc["values"] = result.values;
  nlohmann::ordered_json q = nlohmann::ordered_json::array();
  for (std::int64_t s = 0; s < m.num_nonleaf(); ++s) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (int a = 0; a < m.num_actions; ++a) row.push_back(result.q(s, a));
    q.push_back(row);
  }
  doc["q_values"] = q;
  doc["policy"] = result.policy;
  write_text_file(args.out, doc.dump(2) + "\n");

  scorewin::cli::RunManifest man;
  man.subcommand = "solve";
  man.parameters = {{"mdp", args.mdp_path},
                    {"reward", args.reward},
                    {"out", args.out}};
  man.outputs = {args.out};
  if (!args.policy_out.empty()) {
    nlohmann::ordered_json pol;
    pol["policy"] = result.policy;
    write_text_file(args.policy_out, pol.dump(2) + "\n");
    man.parameters["policy_out"] = args.policy_out;
    man.outputs.push_back(args.policy_out);
  }
  scorewin::cli::write_manifest(man, args.out);
}

// ---- fig3 / fig4 -----------------------------------------------------------

struct CurveArgs {
  int branch = 2, depth = 6, actions = 2;
  std::int64_t runs = 2000;
  int bins = 100;
  std::uint64_t seed = 0;
  int threads = 1;
  bool per_mdp_average = false;
  std::string plus = "outcome";
  std::string out;
  std::string svg_path;
};

scorewin::analysis::ExperimentConfig to_config(const CurveArgs& args) {
  scorewin::analysis::ExperimentConfig cfg;
  cfg.branch = args.branch;
  cfg.depth = args.depth;
  cfg.num_actions = args.actions;
  cfg.runs = args.runs;
  cfg.bins = args.bins;
  cfg.base_seed = args.seed;
  cfg.per_mdp_average = args.per_mdp_average;
  return cfg;
}

void add_common_manifest(scorewin::cli::RunManifest& man, const CurveArgs& args) {
  man.base_seed = args.seed;
  man.parameters["branch"] = std::to_string(args.branch);
  man.parameters["depth"] = std::to_string(args.depth);
  man.parameters["actions"] = std::to_string(args.actions);
  man.parameters["runs"] = std::to_string(args.runs);
  man.parameters["seed"] = std::to_string(args.seed);
  man.parameters["per_mdp_average"] = args.per_mdp_average ? "true" : "false";
  man.parameters["out"] = args.out;
  man.outputs.push_back(args.out);
  if (!args.svg_path.empty()) {
    man.parameters["svg"] = args.svg_path;
    man.outputs.push_back(args.svg_path);
  }
}

void run_fig3(const CurveArgs& args) {
  const auto result =
      scorewin::analysis::winrate_gap_by_level(to_config(args), args.threads);
  scorewin::analysis::emit_csv(result.curve, args.out);
  if (!args.svg_path.empty()) {
    scorewin::svg::save_curve(result.curve, "Mean winrate lost by score-optimal play",
                              "state level", "mean winrate gap", args.svg_path);
  }
  std::cerr << "argmax ties: score " << result.score_ties << ", outcome "
            << result.outcome_ties << " of " << result.states_total
            << " states\n";

  scorewin::cli::RunManifest man;
  man.subcommand = "fig3";
  add_common_manifest(man, args);
  scorewin::cli::write_manifest(man, args.out);
}

void run_fig4(const CurveArgs& args) {
  const auto plus = args.plus == "outcome"
                        ? scorewin::analysis::PlusPolicy::kOutcome
                        : (args.plus == "score"
                               ? scorewin::analysis::PlusPolicy::kScore
                               : throw ParamError("--plus must be 'outcome' or 'score'"));
  const auto result = scorewin::analysis::variance_preference_curve(
      to_config(args), plus, args.threads);
  scorewin::analysis::emit_csv(result.curve, args.out);
  if (!args.svg_path.empty()) {
    scorewin::svg::save_curve(result.curve,
                              "Variance preference of the pi+ action (pi+ = " +
                                  args.plus + "-optimal)",
                              "best winrate", "median log-variance difference",
                              args.svg_path);
  }
  std::cerr << "samples: " << result.emitted << " emitted, "
            << result.equal_action << " equal-action, " << result.zero_variance
            << " zero-variance\n";

  scorewin::cli::RunManifest man;
  man.subcommand = "fig4";
  add_common_manifest(man, args);
  man.parameters["plus"] = args.plus;
  man.parameters["bins"] = std::to_string(args.bins);
  scorewin::cli::write_manifest(man, args.out);
}

// ---- mcts-match ------------------------------------------------------------

struct MatchArgs {
  std::string mdp_path;
  std::int64_t visits_a = 100, visits_b = 100;
  std::string reward_a = "score", reward_b = "outcome";
  double cpuct_a = -1.0, cpuct_b = -1.0;  // negative: per-reward default
  int rollouts = 1;
  std::int64_t episodes = 100;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string out;
};

void run_mcts_match(const MatchArgs& args) {
  const auto m = scorewin::mdp::load_file(args.mdp_path);

  scorewin::mcts::AgentSpec a, b;
  a.kind = parse_reward(args.reward_a);
  b.kind = parse_reward(args.reward_b);
  a.cfg.visits = args.visits_a;
  b.cfg.visits = args.visits_b;
  a.cfg.c_puct = args.cpuct_a > 0.0 ? args.cpuct_a
                                    : scorewin::mcts::default_c_puct(a.kind);
  b.cfg.c_puct = args.cpuct_b > 0.0 ? args.cpuct_b
                                    : scorewin::mcts::default_c_puct(b.kind);
  a.cfg.rollouts_per_eval = args.rollouts;
  b.cfg.rollouts_per_eval = args.rollouts;

  const auto result = scorewin::mcts::match(m, a, b, args.episodes, args.seed,
                                            args.threads);

  std::string csv = "episode,agent,score,outcome\n";
  for (std::int64_t e = 0; e < args.episodes; ++e) {
    const auto i = static_cast<std::size_t>(e);
    csv += std::to_string(e) + ",A," + std::to_string(result.score_a[i]) + "," +
           std::to_string(result.outcome_a[i]) + "\n";
    csv += std::to_string(e) + ",B," + std::to_string(result.score_b[i]) + "," +
           std::to_string(result.outcome_b[i]) + "\n";
  }
  write_text_file(args.out, csv);
  std::cerr << "agent A: mean score " << result.mean_score_a()
            << ", mean outcome " << result.mean_outcome_a() << "\n"
            << "agent B: mean score " << result.mean_score_b()
            << ", mean outcome " << result.mean_outcome_b() << "\n";

  scorewin::cli::RunManifest man;
  man.subcommand = "mcts-match";
  man.base_seed = args.seed;
  man.parameters = {{"mdp", args.mdp_path},
                    {"visits_a", std::to_string(args.visits_a)},
                    {"reward_a", args.reward_a},
                    {"cpuct_a", g17(a.cfg.c_puct)},
                    {"visits_b", std::to_string(args.visits_b)},
                    {"reward_b", args.reward_b},
                    {"cpuct_b", g17(b.cfg.c_puct)},
                    {"rollouts", std::to_string(args.rollouts)},
                    {"episodes", std::to_string(args.episodes)},
                    {"seed", std::to_string(args.seed)},
                    {"out", args.out}};
  man.outputs = {args.out};
  scorewin::cli::write_manifest(man, args.out);
}

// ---- elo -------------------------------------------------------------------

struct EloArgs {
  std::string games_path;
  std::string anchors_path;
  std::string out;
  double tol = 1e-9;
  std::int64_t max_iter = 10000;
  double epsilon = 0.0;
};

std::vector<std::vector<std::string>> read_csv(const std::string& path,
                                               std::size_t columns,
                                               const std::string& expected_header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path + " for reading");
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != expected_header) {
        throw FormatError(path + ": expected header '" + expected_header +
                          "', got '" + line + "'");
      }
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != columns) {
      throw FormatError(path + ":" + std::to_string(line_no) + ": expected " +
                        std::to_string(columns) + " fields");
    }
    rows.push_back(std::move(cells));
  }
  return rows;
}

std::int64_t parse_count(const std::string& text, const std::string& where) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size() || v < 0) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw FormatError(where + ": '" + text + "' is not a non-negative integer");
  }
}

double parse_real(const std::string& text, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw FormatError(where + ": '" + text + "' is not a number");
  }
}

void run_elo(const EloArgs& args) {
  scorewin::elo::MatchGrid grid;
  for (const auto& row :
       read_csv(args.games_path, 4, "player_i,player_j,wins_ij,wins_ji")) {
    grid.add_result(row[0], row[1],
                    static_cast<double>(parse_count(row[2], args.games_path)),
                    static_cast<double>(parse_count(row[3], args.games_path)));
  }
  for (const auto& row : read_csv(args.anchors_path, 2, "player,elo")) {
    grid.set_anchor(row[0], parse_real(row[1], args.anchors_path));
  }

  scorewin::elo::FitOptions opts;
  opts.tol = args.tol;
  opts.max_iter = args.max_iter;
  opts.epsilon = args.epsilon;
  const auto ratings = scorewin::elo::fit(grid, opts);

  std::string csv = "player,elo\n";
  for (std::size_t i = 0; i < ratings.players.size(); ++i) {
    csv += ratings.players[i] + "," + g17(ratings.elo[i]) + "\n";
  }
  write_text_file(args.out, csv);
  std::cerr << "log-likelihood " << ratings.log_likelihood << ", "
            << ratings.iterations << " iterations"
            << (ratings.converged ? "" : " (not converged)") << "\n";

  scorewin::cli::RunManifest man;
  man.subcommand = "elo";
  man.parameters = {{"games", args.games_path},
                    {"anchors", args.anchors_path},
                    {"tol", g17(args.tol)},
                    {"max_iter", std::to_string(args.max_iter)},
                    {"epsilon", g17(args.epsilon)},
                    {"out", args.out}};
  man.outputs = {args.out};
  scorewin::cli::write_manifest(man, args.out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"score-vs-winrate experiment toolkit"};
  app.require_subcommand(1);

  BanditScanArgs bandit_args;
  auto* scan = app.add_subcommand(
      "bandit-scan", "Closed-form two-arm Gaussian disagreement grid");
  scan->add_option("--mu-min", bandit_args.mu_min);
  scan->add_option("--mu-max", bandit_args.mu_max);
  scan->add_option("--mu-step", bandit_args.mu_step);
  scan->add_option("--sigma-min", bandit_args.sigma_min);
  scan->add_option("--sigma-max", bandit_args.sigma_max);
  scan->add_option("--sigma-step", bandit_args.sigma_step);
  scan->add_option("--out", bandit_args.out, "output CSV")->required();
  scan->callback([&] { run_bandit_scan(bandit_args); });

  GenMdpArgs gen_args;
  auto* gen = app.add_subcommand("gen-mdp", "Generate a random tree MDP");
  gen->add_option("--branch", gen_args.branch);
  gen->add_option("--depth", gen_args.depth);
  gen->add_option("--actions", gen_args.actions);
  gen->add_option("--seed", gen_args.seed);
  gen->add_option("--out", gen_args.out, "output JSON")->required();
  gen->callback([&] { run_gen_mdp(gen_args); });

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "Exact backward-induction solve");
  solve->add_option("--mdp", solve_args.mdp_path, "MDP JSON file")->required();
  solve->add_option("--reward", solve_args.reward, "score|outcome");
  solve->add_option("--out", solve_args.out, "output JSON")->required();
  solve->add_option("--policy-out", solve_args.policy_out, "policy JSON");
  solve->callback([&] { run_solve(solve_args); });

  CurveArgs fig3_args;
  auto* fig3 = app.add_subcommand(
      "fig3", "Mean winrate gap of score-optimal play, by state level");
  fig3->add_option("--branch", fig3_args.branch);
  fig3->add_option("--depth", fig3_args.depth);
  fig3->add_option("--actions", fig3_args.actions);
  fig3->add_option("--runs", fig3_args.runs);
  fig3->add_option("--seed", fig3_args.seed);
  fig3->add_option("--threads", fig3_args.threads);
  fig3->add_flag("--per-mdp-average", fig3_args.per_mdp_average,
                 "average within each MDP before averaging across MDPs");
  fig3->add_option("--out", fig3_args.out, "output CSV")->required();
  fig3->add_option("--svg", fig3_args.svg_path, "optional SVG plot");
  fig3->callback([&] { run_fig3(fig3_args); });

  CurveArgs fig4_args;
  auto* fig4 = app.add_subcommand(
      "fig4", "Median variance preference against best winrate");
  fig4->add_option("--plus", fig4_args.plus, "outcome|score: policy playing pi+");
  fig4->add_option("--bins", fig4_args.bins);
  fig4->add_option("--branch", fig4_args.branch);
  fig4->add_option("--depth", fig4_args.depth);
  fig4->add_option("--actions", fig4_args.actions);
  fig4->add_option("--runs", fig4_args.runs);
  fig4->add_option("--seed", fig4_args.seed);
  fig4->add_option("--threads", fig4_args.threads);
  fig4->add_flag("--per-mdp-average", fig4_args.per_mdp_average,
                 "median within each MDP before the cross-MDP median");
  fig4->add_option("--out", fig4_args.out, "output CSV")->required();
  fig4->add_option("--svg", fig4_args.svg_path, "optional SVG plot");
  fig4->callback([&] { run_fig4(fig4_args); });

  MatchArgs match_args;
  auto* match = app.add_subcommand(
      "mcts-match", "Budgeted PUCT agents playing episodes on one MDP");
  match->add_option("--mdp", match_args.mdp_path, "MDP JSON file")->required();
  match->add_option("--visits-a", match_args.visits_a);
  match->add_option("--reward-a", match_args.reward_a, "score|outcome");
  match->add_option("--cpuct-a", match_args.cpuct_a, "c_puct for agent A");
  match->add_option("--visits-b", match_args.visits_b);
  match->add_option("--reward-b", match_args.reward_b, "score|outcome");
  match->add_option("--cpuct-b", match_args.cpuct_b, "c_puct for agent B");
  match->add_option("--rollouts", match_args.rollouts, "rollouts per evaluation");
  match->add_option("--episodes", match_args.episodes);
  match->add_option("--seed", match_args.seed);
  match->add_option("--threads", match_args.threads);
  match->add_option("--out", match_args.out, "output CSV")->required();
  match->callback([&] { run_mcts_match(match_args); });

  EloArgs elo_args;
  auto* elo = app.add_subcommand("elo", "Maximum-likelihood Elo ratings");
  elo->add_option("--games", elo_args.games_path, "games CSV")->required();
  elo->add_option("--anchors", elo_args.anchors_path, "anchors CSV")->required();
  elo->add_option("--tol", elo_args.tol);
  elo->add_option("--max-iter", elo_args.max_iter);
  elo->add_option("--epsilon", elo_args.epsilon, "virtual wins per pair");
  elo->add_option("--out", elo_args.out, "output CSV")->required();
  elo->callback([&] { run_elo(elo_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParamError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
