#include "gaussbound/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace gaussbound {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

bool parse_u64(const std::string& s, std::uint64_t& out) {
  if (s.empty() || s[0] == '-') return false;
  char* end = nullptr;
  out = std::strtoull(s.c_str(), &end, 10);
  return end == s.c_str() + s.size();
}

bool is_identifier(const std::string& s) {
  if (s.empty() || (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

// Strip surrounding [ ] if present and split into trimmed elements.
bool parse_bracket_list(const std::string& raw, char sep, std::vector<std::string>& out) {
  std::string body = trim(raw);
  if (body.size() < 2 || body.front() != '[' || body.back() != ']') return false;
  body = trim(body.substr(1, body.size() - 2));
  if (body.empty()) {
    out.clear();
    return true;
  }
  out = split(body, sep);
  return std::none_of(out.begin(), out.end(), [](const std::string& e) { return e.empty(); });
}

using KeyValues = std::map<std::string, std::string>;

// Flat "key = value" lines; '#' starts a comment; later keys win.
bool parse_key_values(const std::string& text, KeyValues& kv, std::vector<std::string>& diags) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool ok = true;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      diags.push_back("line " + std::to_string(lineno) + ": expected key = value");
      ok = false;
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!is_identifier(key)) {
      diags.push_back("line " + std::to_string(lineno) + ": invalid key '" + key + "'");
      ok = false;
      continue;
    }
    kv[key] = value;
  }
  return ok;
}

const std::vector<std::string> kScalarKeys = {
    "kind",   "families", "sweep",          "values", "n",      "mean",  "variance",
    "noise_variance", "weights",  "proxy",  "mc_samples", "seed", "format", "output",
    "timestamp"};
const std::vector<std::string> kVectorKeys = {
    "kind",   "families", "sweep",          "values",     "n",    "dim",    "mean",
    "noise_variance", "weights",  "sigma_diag", "sigma_rows", "metric", "metric_diag",
    "mc_samples", "seed", "format", "output", "timestamp"};

bool scalar_family(BoundFamily f) {
  return f != BoundFamily::DirectVec && f != BoundFamily::DecomposedVec;
}

bool vector_family(BoundFamily f) {
  return f == BoundFamily::DirectVec || f == BoundFamily::DecomposedVec ||
         f == BoundFamily::TrueGen;
}

struct Builder {
  const KeyValues& kv;
  std::vector<std::string>& diags;
  SweepConfig cfg;

  bool has(const std::string& key) const { return kv.count(key) > 0; }

  void fail(const std::string& field, const std::string& constraint) {
    diags.push_back(field + ": " + constraint);
  }

  std::optional<double> get_double(const std::string& key) {
    const auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    double v = 0.0;
    if (!parse_double(it->second, v) || !std::isfinite(v)) {
      fail(key, "must be a finite number");
      return std::nullopt;
    }
    return v;
  }

  std::optional<std::vector<double>> get_double_list(const std::string& key) {
    const auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    std::vector<std::string> parts;
    if (!parse_bracket_list(it->second, ',', parts)) {
      fail(key, "must be a [a, b, ...] list");
      return std::nullopt;
    }
    std::vector<double> out;
    out.reserve(parts.size());
    for (const auto& part : parts) {
      double v = 0.0;
      if (!parse_double(part, v) || !std::isfinite(v)) {
        fail(key, "element '" + part + "' is not a finite number");
        return std::nullopt;
      }
      out.push_back(v);
    }
    return out;
  }

  void check_unknown_keys(const std::vector<std::string>& allowed) {
    for (const auto& [key, value] : kv) {
      (void)value;
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
        fail(key, "unknown key");
    }
  }

  void build_common_kind() {
    const auto it = kv.find("kind");
    if (it == kv.end()) {
      fail("kind", "required (scalar or vector)");
      return;
    }
    if (it->second == "scalar") {
      cfg.kind = ProblemKind::Scalar;
    } else if (it->second == "vector") {
      cfg.kind = ProblemKind::Vector;
    } else {
      fail("kind", "must be scalar or vector");
    }
  }

  void build_families() {
    const auto it = kv.find("families");
    if (it == kv.end()) {
      fail("families", "required");
      return;
    }
    std::vector<std::string> names;
    if (!parse_bracket_list(it->second, ',', names) || names.empty()) {
      fail("families", "must be a non-empty [a, b, ...] list");
      return;
    }
    for (const auto& name : names) {
      BoundFamily f;
      try {
        f = bound_family_from_string(name);
      } catch (const std::invalid_argument&) {
        fail("families", "unknown family '" + name + "'");
        continue;
      }
      const bool valid = cfg.kind == ProblemKind::Scalar ? scalar_family(f) : vector_family(f);
      if (!valid) {
        fail("families", "'" + name + "' is not valid for kind " +
                             (cfg.kind == ProblemKind::Scalar ? "scalar" : "vector"));
        continue;
      }
      cfg.families.push_back(f);
    }
  }

  bool requested(BoundFamily f) const {
    return std::find(cfg.families.begin(), cfg.families.end(), f) != cfg.families.end();
  }

  void build_sweep() {
    const auto it = kv.find("sweep");
    if (it == kv.end()) {
      fail("sweep", "required (name of the swept field)");
      return;
    }
    if (!is_identifier(it->second)) {
      fail("sweep", "must be an identifier");
      return;
    }
    cfg.sweep_name = it->second;
    const auto values = get_double_list("values");
    if (!has("values")) {
      fail("values", "required (swept values)");
      return;
    }
    if (!values) return;
    if (values->empty()) {
      fail("values", "must be non-empty");
      return;
    }
    cfg.sweep_values = *values;
  }

  void build_weights(bool n_swept) {
    const auto it = kv.find("weights");
    if (it == kv.end() || it->second == "uniform") {
      cfg.weights = WeightScheme::Uniform;
      return;
    }
    if (it->second == "one_hot") {
      cfg.weights = WeightScheme::OneHot;
      return;
    }
    std::vector<std::string> parts;
    if (!parse_bracket_list(it->second, ',', parts)) {
      fail("weights", "must be uniform, one_hot, or an explicit [w1, w2, ...] list");
      return;
    }
    if (n_swept) {
      fail("weights", "explicit weights are incompatible with sweeping n");
      return;
    }
    cfg.weights = WeightScheme::Explicit;
    double sum = 0.0;
    for (const auto& part : parts) {
      double v = 0.0;
      if (!parse_double(part, v) || !std::isfinite(v) || v < 0.0) {
        fail("weights", "entries must be non-negative finite numbers");
        return;
      }
      cfg.explicit_weights.push_back(v);
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      std::ostringstream msg;
      msg << "must lie on the probability simplex: entries sum to " << sum << ", not 1";
      fail("weights", msg.str());
      return;
    }
    for (double& w : cfg.explicit_weights) w /= sum;  // exact renormalization
  }

  void check_uniform_only_families() {
    const bool uniform = cfg.weights == WeightScheme::Uniform;
    for (const BoundFamily f :
         {BoundFamily::Cor3First, BoundFamily::Cor3Second, BoundFamily::EqMibFirst,
          BoundFamily::EqMibSecond}) {
      if (requested(f) && !uniform)
        fail("families", "'" + to_string(f) + "' requires uniform weights");
    }
    for (const BoundFamily f : {BoundFamily::Cor3Second, BoundFamily::EqMibSecond}) {
      if (!requested(f)) continue;
      if (cfg.sweep_name == "noise_variance")
        fail("families", "'" + to_string(f) + "' requires noise_variance fixed at 0, not swept");
      else if (cfg.noise_variance != 0.0)
        fail("families", "'" + to_string(f) + "' requires noise_variance = 0");
    }
  }

  void build_mc_and_io() {
    if (has("mc_samples")) {
      std::uint64_t v = 0;
      if (!parse_u64(kv.at("mc_samples"), v))
        fail("mc_samples", "must be a non-negative integer");
      else if (v != 0 && v < 100)
        fail("mc_samples", "must be 0 (disabled) or at least 100");
      else
        cfg.mc_samples = v;
    }
    if (has("seed")) {
      std::uint64_t v = 0;
      if (!parse_u64(kv.at("seed"), v))
        fail("seed", "must be a non-negative integer");
      else
        cfg.seed = v;
    } else if (const char* env = std::getenv(kSeedEnvVar)) {
      std::uint64_t v = 0;
      if (!parse_u64(env, v))
        fail("seed", std::string("environment variable ") + kSeedEnvVar +
                         " must be a non-negative integer");
      else
        cfg.seed = v;
    }
    if (has("format")) {
      const std::string& f = kv.at("format");
      if (f == "csv")
        cfg.format = ReportFormat::Csv;
      else if (f == "json")
        cfg.format = ReportFormat::Json;
      else
        fail("format", "must be csv or json");
    }
    if (has("output")) cfg.output = kv.at("output");
    if (has("timestamp")) {
      const std::string& t = kv.at("timestamp");
      if (t == "true")
        cfg.timestamp = true;
      else if (t == "false")
        cfg.timestamp = false;
      else
        fail("timestamp", "must be true or false");
    }
  }

  void build_n() {
    const bool swept = cfg.sweep_name == "n";
    if (swept) {
      for (double v : cfg.sweep_values) {
        if (!(v >= 1.0) || v != std::floor(v)) {
          fail("values", "swept n values must be integers >= 1");
          break;
        }
      }
      if (has("n")) fail("n", "must be omitted when n is swept");
      return;
    }
    if (!has("n")) {
      fail("n", "required (number of samples)");
      return;
    }
    double v = 0.0;
    if (!parse_double(kv.at("n"), v) || v < 1.0 || v != std::floor(v) || v > 1e9) {
      fail("n", "must be an integer >= 1");
      return;
    }
    cfg.n = static_cast<int>(v);
    if (cfg.weights == WeightScheme::Explicit &&
        cfg.explicit_weights.size() != static_cast<std::size_t>(cfg.n))
      fail("weights", "explicit list length must equal n");
  }

  void build_scalar() {
    check_unknown_keys(kScalarKeys);
    if (cfg.sweep_name != "n" && cfg.sweep_name != "variance" &&
        cfg.sweep_name != "noise_variance" && !cfg.sweep_name.empty())
      fail("sweep", "scalar sweeps support n, variance, or noise_variance");
    if (const auto v = get_double("mean")) cfg.mean = *v;
    if (cfg.sweep_name == "variance") {
      if (has("variance")) fail("variance", "must be omitted when variance is swept");
      for (double v : cfg.sweep_values)
        if (!(v > 0.0)) {
          fail("values", "swept variance values must be positive");
          break;
        }
    } else if (const auto v = get_double("variance")) {
      if (*v > 0.0)
        cfg.variance = *v;
      else
        fail("variance", "must be positive");
    }
    if (cfg.sweep_name == "noise_variance") {
      if (has("noise_variance"))
        fail("noise_variance", "must be omitted when noise_variance is swept");
      for (double v : cfg.sweep_values)
        if (!(v >= 0.0)) {
          fail("values", "swept noise_variance values must be non-negative");
          break;
        }
    } else if (const auto v = get_double("noise_variance")) {
      if (*v >= 0.0)
        cfg.noise_variance = *v;
      else
        fail("noise_variance", "must be non-negative");
    }
    build_weights(cfg.sweep_name == "n");
    build_n();
    check_uniform_only_families();
    const bool needs_proxy =
        requested(BoundFamily::XuRaginsky) || requested(BoundFamily::BuEtAl);
    if (has("proxy")) {
      if (const auto v = get_double("proxy")) {
        if (*v >= 0.0)
          cfg.proxy = *v;
        else
          fail("proxy", "must be non-negative");
      }
    } else if (needs_proxy) {
      fail("proxy", "required by xu_raginsky and bu");
    }
  }

  // Diagonal entries are numbers or the sweep token; numbers must be positive.
  void build_diag(const std::string& key, std::vector<std::string>& out) {
    std::vector<std::string> parts;
    if (!parse_bracket_list(kv.at(key), ',', parts) || parts.empty()) {
      fail(key, "must be a non-empty [a, b, ...] list");
      return;
    }
    bool uses_token = false;
    for (const auto& part : parts) {
      double v = 0.0;
      if (parse_double(part, v)) {
        if (!(v > 0.0) || !std::isfinite(v)) {
          fail(key, "entries must be positive (got '" + part + "')");
          return;
        }
      } else if (part == cfg.sweep_name) {
        uses_token = true;
      } else {
        fail(key, "entry '" + part + "' is neither a number nor the sweep name");
        return;
      }
    }
    if (uses_token) {
      for (double v : cfg.sweep_values)
        if (!(v > 0.0)) {
          fail("values", "swept " + key + " entries must be positive");
          break;
        }
    }
    out = parts;
  }

  void build_vector() {
    check_unknown_keys(kVectorKeys);
    if (const auto v = get_double("noise_variance")) {
      if (*v >= 0.0)
        cfg.noise_variance = *v;
      else
        fail("noise_variance", "must be non-negative");
    }
    if (cfg.sweep_name == "noise_variance") {
      if (has("noise_variance"))
        fail("noise_variance", "must be omitted when noise_variance is swept");
      for (double v : cfg.sweep_values)
        if (!(v >= 0.0)) {
          fail("values", "swept noise_variance values must be non-negative");
          break;
        }
    }
    build_weights(cfg.sweep_name == "n");
    build_n();

    if (has("sigma_diag") && has("sigma_rows")) {
      fail("sigma_diag", "sigma_diag and sigma_rows are mutually exclusive");
      return;
    }
    if (has("sigma_diag")) {
      build_diag("sigma_diag", cfg.sigma_diag);
    } else if (has("sigma_rows")) {
      std::vector<std::string> rows;
      if (!parse_bracket_list(kv.at("sigma_rows"), ';', rows) || rows.empty()) {
        fail("sigma_rows", "must be [r00, r01; r10, r11; ...]");
        return;
      }
      for (const auto& row : rows) {
        std::vector<double> vals;
        for (const auto& cell : split(row, ',')) {
          double v = 0.0;
          if (!parse_double(cell, v) || !std::isfinite(v)) {
            fail("sigma_rows", "entry '" + cell + "' is not a finite number");
            return;
          }
          vals.push_back(v);
        }
        cfg.sigma_rows.push_back(vals);
      }
      const std::size_t d = cfg.sigma_rows.size();
      Eigen::MatrixXd m(d, d);
      for (std::size_t r = 0; r < d; ++r) {
        if (cfg.sigma_rows[r].size() != d) {
          fail("sigma_rows", "must be square");
          return;
        }
        for (std::size_t c = 0; c < d; ++c) m(static_cast<int>(r), static_cast<int>(c)) = cfg.sigma_rows[r][c];
      }
      if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-9 * std::max(m.cwiseAbs().maxCoeff(), 1e-300)) {
        fail("sigma_rows", "must be symmetric");
        return;
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()),
                                                        Eigen::EigenvaluesOnly);
      if (!(es.eigenvalues().minCoeff() > 1e-12 * es.eigenvalues().maxCoeff())) {
        fail("sigma_rows", "must be positive definite");
        return;
      }
    } else {
      fail("sigma_diag", "required (or sigma_rows)");
      return;
    }

    // Dimension: from the covariance entries, cross-checked against dim/mean.
    const int d = cfg.sigma_diag.empty() ? static_cast<int>(cfg.sigma_rows.size())
                                         : static_cast<int>(cfg.sigma_diag.size());
    cfg.dim = d;
    if (has("dim")) {
      double v = 0.0;
      if (!parse_double(kv.at("dim"), v) || v < 1.0 || v != std::floor(v))
        fail("dim", "must be an integer >= 1");
      else if (static_cast<int>(v) != d)
        fail("dim", "does not match the covariance dimension");
    }
    if (has("mean")) {
      if (const auto m = get_double_list("mean")) {
        if (static_cast<int>(m->size()) != d)
          fail("mean", "length must equal the dimension");
        else
          cfg.mean_vec = *m;
      }
    }

    const std::string metric = has("metric") ? kv.at("metric") : "identity";
    if (has("metric_diag")) {
      if (has("metric") && metric != "diag")
        fail("metric", "metric_diag requires metric = diag (or omit metric)");
      cfg.metric = MetricKind::Diagonal;
      build_diag("metric_diag", cfg.metric_diag);
      if (static_cast<int>(cfg.metric_diag.size()) != d && !cfg.metric_diag.empty())
        fail("metric_diag", "length must equal the dimension");
    } else if (metric == "identity") {
      cfg.metric = MetricKind::Identity;
    } else if (metric == "inv_sigma") {
      cfg.metric = MetricKind::InverseCovariance;
    } else if (metric == "diag") {
      fail("metric_diag", "required when metric = diag");
    } else {
      fail("metric", "must be identity, inv_sigma, or diag");
    }

    // The sweep must drive something: n, noise_variance, or a token used in a
    // diagonal entry.
    const bool token_used =
        std::find(cfg.sigma_diag.begin(), cfg.sigma_diag.end(), cfg.sweep_name) !=
            cfg.sigma_diag.end() ||
        std::find(cfg.metric_diag.begin(), cfg.metric_diag.end(), cfg.sweep_name) !=
            cfg.metric_diag.end();
    if (!cfg.sweep_name.empty() && cfg.sweep_name != "n" &&
        cfg.sweep_name != "noise_variance" && !token_used)
      fail("sweep", "'" + cfg.sweep_name + "' is not referenced by any field");
  }
};

}  // namespace

ConfigResult parse_sweep_config(const std::string& text,
                                std::span<const std::string> overrides) {
  ConfigResult result;
  KeyValues kv;
  parse_key_values(text, kv, result.diagnostics);
  for (const auto& override_str : overrides) {
    const auto eq = override_str.find('=');
    std::string key = eq == std::string::npos ? override_str : trim(override_str.substr(0, eq));
    if (eq == std::string::npos || !is_identifier(key)) {
      result.diagnostics.push_back("override '" + override_str + "': expected key=value");
      continue;
    }
    kv[key] = trim(override_str.substr(eq + 1));
  }
  if (!result.diagnostics.empty()) return result;

  Builder b{kv, result.diagnostics, {}};
  b.build_common_kind();
  if (!result.diagnostics.empty()) return result;
  b.build_families();
  b.build_sweep();
  b.build_mc_and_io();
  if (!result.diagnostics.empty()) return result;
  if (b.cfg.kind == ProblemKind::Scalar)
    b.build_scalar();
  else
    b.build_vector();
  if (result.diagnostics.empty()) result.config = std::move(b.cfg);
  return result;
}

ConfigResult load_sweep_config(const std::string& path,
                               std::span<const std::string> overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    ConfigResult result;
    result.diagnostics.push_back("config: cannot read '" + path + "'");
    return result;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_sweep_config(buf.str(), overrides);
}

}  // namespace gaussbound
