#include "scorewin/mdp.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "scorewin/errors.hpp"
#include "scorewin/rng.hpp"

namespace scorewin::mdp {
namespace {

constexpr std::int64_t kMaxLeaves = std::int64_t{1} << 31;
constexpr double kRowSumTolerance = 1e-12;

void check_shape_params(int branch, int depth, int num_actions) {
  if (branch < 2) throw ParamError("branch must be >= 2");
  if (depth < 1) throw ParamError("depth must be >= 1");
  if (num_actions < 2) throw ParamError("num_actions must be >= 2");
}

std::string field(const char* name, std::int64_t a, std::int64_t b) {
  std::ostringstream os;
  os << name << "[" << a << "][" << b << "]";
  return os.str();
}

void append_double17(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

}  // namespace

std::int64_t checked_leaf_count(int branch, int depth) {
  check_shape_params(branch, depth, 2);
  std::int64_t leaves = 1;
  for (int i = 0; i < depth; ++i) {
    leaves *= branch;
    if (leaves > kMaxLeaves) throw ParamError("b^d exceeds 2^31");
  }
  return leaves;
}

AstMdp generate(int branch, int depth, int num_actions, std::uint64_t seed) {
  check_shape_params(branch, depth, num_actions);
  const std::int64_t leaves = checked_leaf_count(branch, depth);

  AstMdp m;
  m.branch = branch;
  m.depth = depth;
  m.num_actions = num_actions;

  auto g = rng::make_stream(seed, 0);
  m.leaf_scores.resize(static_cast<std::size_t>(leaves));
  for (auto& score : m.leaf_scores) {
    score = rng::uniform_int(g, -leaves, leaves);
  }

  const std::int64_t rows = m.num_nonleaf() * num_actions;
  m.transitions.resize(static_cast<std::size_t>(rows) *
                       static_cast<std::size_t>(branch));
  for (std::int64_t row = 0; row < rows; ++row) {
    rng::dirichlet_uniform(
        g, m.transitions.data() + static_cast<std::size_t>(row) * branch, branch);
  }
  return m;
}

AstMdp make_deterministic(const AstMdp& m, std::uint64_t seed) {
  validate(m, false);
  AstMdp out = m;
  auto g = rng::make_stream(seed, 0);
  const std::int64_t rows = m.num_nonleaf() * m.num_actions;
  for (std::int64_t row = 0; row < rows; ++row) {
    double* p = out.transitions.data() + static_cast<std::size_t>(row) * m.branch;
    const std::int64_t live = rng::uniform_int(g, 0, m.branch - 1);
    for (int k = 0; k < m.branch; ++k) p[k] = 0.0;
    p[live] = 1.0;
  }
  return out;
}

void validate(const AstMdp& m, bool enforce_score_range) {
  check_shape_params(m.branch, m.depth, m.num_actions);
  const std::int64_t leaves = checked_leaf_count(m.branch, m.depth);
  if (static_cast<std::int64_t>(m.leaf_scores.size()) != leaves) {
    std::ostringstream os;
    os << "leaf_scores: expected " << leaves << " entries, got "
       << m.leaf_scores.size();
    throw FormatError(os.str());
  }
  if (enforce_score_range) {
    for (std::size_t i = 0; i < m.leaf_scores.size(); ++i) {
      if (m.leaf_scores[i] < -leaves || m.leaf_scores[i] > leaves) {
        std::ostringstream os;
        os << "leaf_scores[" << i << "]: " << m.leaf_scores[i] << " outside ["
           << -leaves << ", " << leaves << "]";
        throw FormatError(os.str());
      }
    }
  }
  const std::int64_t rows = m.num_nonleaf() * m.num_actions;
  if (static_cast<std::int64_t>(m.transitions.size()) !=
      rows * static_cast<std::int64_t>(m.branch)) {
    std::ostringstream os;
    os << "transitions: expected " << rows * m.branch << " probabilities, got "
       << m.transitions.size();
    throw FormatError(os.str());
  }
  for (std::int64_t s = 0; s < m.num_nonleaf(); ++s) {
    for (int a = 0; a < m.num_actions; ++a) {
      const auto row = m.transition(s, a);
      double sum = 0.0;
      for (double p : row) {
        if (!std::isfinite(p) || p < 0.0) {
          throw FormatError(field("transitions", s, a) +
                            ": probabilities must be finite and >= 0");
        }
        sum += p;
      }
      if (std::abs(sum - 1.0) > kRowSumTolerance) {
        std::ostringstream os;
        os << field("transitions", s, a) << ": probabilities sum to " << sum;
        throw FormatError(os.str());
      }
    }
  }
}

std::string serialize(const AstMdp& m) {
  validate(m, false);
  std::string out;
  out.reserve(64 + m.leaf_scores.size() * 8 + m.transitions.size() * 24);
  out += "{\n";
  out += "  \"branch\": " + std::to_string(m.branch) + ",\n";
  out += "  \"depth\": " + std::to_string(m.depth) + ",\n";
  out += "  \"num_actions\": " + std::to_string(m.num_actions) + ",\n";
  out += "  \"leaf_scores\": [";
  for (std::size_t i = 0; i < m.leaf_scores.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(m.leaf_scores[i]);
  }
  out += "],\n";
  out += "  \"transitions\": [\n";
  for (std::int64_t s = 0; s < m.num_nonleaf(); ++s) {
    out += "    [";
    for (int a = 0; a < m.num_actions; ++a) {
      if (a) out += ", ";
      out += "[";
      const auto row = m.transition(s, a);
      for (int k = 0; k < m.branch; ++k) {
        if (k) out += ", ";
        append_double17(out, row[k]);
      }
      out += "]";
    }
    out += s + 1 < m.num_nonleaf() ? "],\n" : "]\n";
  }
  out += "  ]\n}\n";
  return out;
}

AstMdp deserialize(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw FormatError("document: expected a JSON object");

  auto require_int = [&](const char* name) -> std::int64_t {
    if (!doc.contains(name) || !doc[name].is_number_integer()) {
      throw FormatError(std::string(name) + ": missing or not an integer");
    }
    return doc[name].get<std::int64_t>();
  };

  AstMdp m;
  m.branch = static_cast<int>(require_int("branch"));
  m.depth = static_cast<int>(require_int("depth"));
  m.num_actions = static_cast<int>(require_int("num_actions"));
  check_shape_params(m.branch, m.depth, m.num_actions);
  checked_leaf_count(m.branch, m.depth);

  if (!doc.contains("leaf_scores") || !doc["leaf_scores"].is_array()) {
    throw FormatError("leaf_scores: missing or not an array");
  }
  for (std::size_t i = 0; i < doc["leaf_scores"].size(); ++i) {
    const auto& v = doc["leaf_scores"][i];
    if (!v.is_number_integer()) {
      throw FormatError("leaf_scores[" + std::to_string(i) +
                        "]: expected an integer");
    }
    m.leaf_scores.push_back(v.get<std::int64_t>());
  }

  if (!doc.contains("transitions") || !doc["transitions"].is_array()) {
    throw FormatError("transitions: missing or not an array");
  }
  const auto& trans = doc["transitions"];
  m.transitions.reserve(trans.size() * m.num_actions * m.branch);
  for (std::size_t s = 0; s < trans.size(); ++s) {
    if (!trans[s].is_array() ||
        trans[s].size() != static_cast<std::size_t>(m.num_actions)) {
      throw FormatError("transitions[" + std::to_string(s) + "]: expected " +
                        std::to_string(m.num_actions) + " action rows");
    }
    for (std::size_t a = 0; a < trans[s].size(); ++a) {
      const auto& row = trans[s][a];
      if (!row.is_array() || row.size() != static_cast<std::size_t>(m.branch)) {
        throw FormatError(field("transitions", s, a) + ": expected " +
                          std::to_string(m.branch) + " probabilities");
      }
      for (const auto& p : row) {
        if (!p.is_number()) {
          throw FormatError(field("transitions", s, a) +
                            ": probabilities must be numbers");
        }
        m.transitions.push_back(p.get<double>());
      }
    }
  }

  validate(m, true);
  return m;
}

AstMdp load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path + " for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize(buf.str());
}

void save_file(const AstMdp& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << serialize(m);
  if (!out) throw IoError("failed writing " + path);
}

}  // namespace scorewin::mdp
