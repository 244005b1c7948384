#include "diffusion/config.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <limits>
#include <set>

namespace diffusion {

using nlohmann::json;

namespace {

std::size_t line_at(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

class Reader {
 public:
  Reader(std::string_view text, std::string_view source) : text_(text), source_(source) {}

  json parse() const {
    if (text_.find_first_not_of(" \t\r\n") == std::string_view::npos) {
      throw ConfigError(std::string(source_) + ":1: configuration is empty");
    }
    try {
      return json::parse(text_);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string(source_) + ":" + std::to_string(line_at(text_, e.byte == 0 ? 0 : e.byte - 1)) +
                        ": invalid JSON: " + e.what());
    }
  }

  [[noreturn]] void fail(std::string_view key, const std::string& message) const {
    std::string where(source_);
    const std::string quoted = "\"" + std::string(key) + "\"";
    const auto pos = text_.find(quoted);
    if (pos != std::string_view::npos) where += ":" + std::to_string(line_at(text_, pos));
    throw ConfigError(where + ": " + std::string(key) + ": " + message);
  }

  void check_keys(const json& obj, const std::set<std::string>& allowed) const {
    if (!obj.is_object()) throw ConfigError(std::string(source_) + ":1: configuration must be a JSON object");
    for (const auto& [key, value] : obj.items()) {
      if (!allowed.contains(key)) fail(key, "unknown key");
    }
  }

  double number(const json& obj, const char* key, double fallback) const {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number() || !std::isfinite(v.get<double>())) fail(key, "expected a finite number");
    return v.get<double>();
  }

  int integer(const json& obj, const char* key, int fallback) const {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) fail(key, "expected an integer");
    const auto value = v.get<std::int64_t>();
    if (value < std::numeric_limits<int>::min() || value > std::numeric_limits<int>::max()) fail(key, "out of range");
    return static_cast<int>(value);
  }

  std::string text(const json& obj, const char* key, std::string fallback) const {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_string()) fail(key, "expected a string");
    return v.get<std::string>();
  }

  std::optional<std::uint64_t> seed(const json& obj) const {
    if (!obj.contains("seed")) return std::nullopt;
    const json& v = obj.at("seed");
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
    if (v.is_string()) {
      const auto s = v.get<std::string>();
      if (!s.empty() && s.find_first_not_of("0123456789") == std::string::npos) {
        try {
          return std::stoull(s);
        } catch (const std::out_of_range&) {
        }
      }
    }
    fail("seed", "expected an unsigned 64-bit integer");
  }

  template <class T, class Convert>
  std::vector<T> list(const json& obj, const char* key, std::vector<T> fallback, Convert convert) const {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_array()) fail(key, "expected an array");
    if (v.empty()) fail(key, "must not be empty");
    std::vector<T> out;
    for (const json& item : v) {
      try {
        out.push_back(convert(item));
      } catch (const std::exception& e) {
        fail(key, std::string("bad element: ") + e.what());
      }
    }
    return out;
  }

  template <class Fn>
  void guard(const char* key, Fn&& fn) const {
    try {
      fn();
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      fail(key, e.what());
    }
  }

 private:
  std::string_view text_;
  std::string_view source_;
};

// Run configs hold scalars, grid files hold lists, under the same key names.
const std::set<std::string> kKeys{"rows", "cols", "k", "delta_u", "sigma", "p_r", "gamma", "alpha",
                                  "innovator_fraction", "max_ticks", "update", "seed"};

std::set<std::string> grid_keys() {
  auto keys = kKeys;
  keys.insert("replications");
  return keys;
}

void check_range(const Reader& rd, const char* key, bool ok, const char* message) {
  if (!ok) rd.fail(key, message);
}

}  // namespace

SimConfig parse_sim_config(std::string_view text, std::string_view source) {
  const Reader rd(text, source);
  json root = rd.parse();
  if (root.is_object() && root.contains("manifest_version") && root.contains("config")) root = root.at("config");
  rd.check_keys(root, kKeys);

  SimConfig c;
  c.lattice.rows = rd.integer(root, "rows", c.lattice.rows);
  c.lattice.cols = rd.integer(root, "cols", c.lattice.cols);
  c.k = rd.integer(root, "k", c.k);
  c.delta_u = rd.number(root, "delta_u", c.delta_u);
  c.p_r = rd.number(root, "p_r", c.p_r);
  c.gamma = rd.integer(root, "gamma", c.gamma);
  c.alpha = rd.number(root, "alpha", c.alpha);
  c.innovator_fraction = rd.number(root, "innovator_fraction", c.innovator_fraction);
  c.max_ticks = rd.integer(root, "max_ticks", c.max_ticks);
  rd.guard("sigma", [&] { c.sigma = parse_seed_pattern(rd.text(root, "sigma", "compact")); });
  rd.guard("update", [&] { c.update = parse_update_mode(rd.text(root, "update", std::string(to_string(c.update)))); });
  c.seed = rd.seed(root).value_or(0);

  check_range(rd, "rows", c.lattice.rows >= 2, "must be at least 2");
  check_range(rd, "cols", c.lattice.cols >= 2, "must be at least 2");
  check_range(rd, "k", c.k == 4 || c.k == 8, "must be 4 or 8");
  check_range(rd, "p_r", c.p_r >= 0.0 && c.p_r <= 1.0, "must lie in [0, 1]");
  check_range(rd, "gamma", c.gamma >= 1, "must be at least 1");
  check_range(rd, "alpha", c.alpha >= 0.0 && c.alpha <= 1.0, "must lie in [0, 1]");
  check_range(rd, "innovator_fraction", c.innovator_fraction > 0.0 && c.innovator_fraction <= 1.0,
              "must lie in (0, 1]");
  check_range(rd, "max_ticks", c.max_ticks >= 1, "must be at least 1");
  c.lattice.neighborhood = neighborhood_for_degree(c.k);
  return c;
}

GridFile parse_sweep_grid(std::string_view text, std::string_view source) {
  const Reader rd(text, source);
  json root = rd.parse();
  if (root.is_object() && root.contains("manifest_version") && root.contains("config")) root = root.at("config");
  rd.check_keys(root, grid_keys());

  GridFile out;
  SweepGrid& g = out.grid;
  const auto as_int = [](const json& v) {
    if (!v.is_number_integer()) throw std::invalid_argument("expected an integer");
    return v.get<int>();
  };
  const auto as_double = [](const json& v) {
    if (!v.is_number()) throw std::invalid_argument("expected a number");
    return v.get<double>();
  };
  const auto as_pattern = [](const json& v) {
    if (!v.is_string()) throw std::invalid_argument("expected a string");
    return parse_seed_pattern(v.get<std::string>());
  };
  g.rows = rd.integer(root, "rows", g.rows);
  g.cols = rd.integer(root, "cols", g.cols);
  g.k = rd.list<int>(root, "k", g.k, as_int);
  g.delta_u = rd.list<double>(root, "delta_u", g.delta_u, as_double);
  g.sigma = rd.list<SeedPattern>(root, "sigma", g.sigma, as_pattern);
  g.p_r = rd.list<double>(root, "p_r", g.p_r, as_double);
  g.gamma = rd.list<int>(root, "gamma", g.gamma, as_int);
  g.alpha = rd.number(root, "alpha", g.alpha);
  g.innovator_fraction = rd.number(root, "innovator_fraction", g.innovator_fraction);
  g.max_ticks = rd.integer(root, "max_ticks", g.max_ticks);
  rd.guard("update", [&] { g.update = parse_update_mode(rd.text(root, "update", std::string(to_string(g.update)))); });
  out.seed = rd.seed(root);
  if (root.contains("replications")) {
    out.replications = rd.integer(root, "replications", 1);
    check_range(rd, "replications", *out.replications >= 1, "must be at least 1");
  }

  check_range(rd, "rows", g.rows >= 2, "must be at least 2");
  check_range(rd, "cols", g.cols >= 2, "must be at least 2");
  for (int k : g.k) check_range(rd, "k", k == 4 || k == 8, "entries must be 4 or 8");
  for (double pr : g.p_r) check_range(rd, "p_r", pr >= 0.0 && pr <= 1.0, "entries must lie in [0, 1]");
  for (int gamma : g.gamma) check_range(rd, "gamma", gamma >= 1, "entries must be at least 1");
  check_range(rd, "alpha", g.alpha >= 0.0 && g.alpha <= 1.0, "must lie in [0, 1]");
  check_range(rd, "innovator_fraction", g.innovator_fraction > 0.0 && g.innovator_fraction <= 1.0,
              "must lie in (0, 1]");
  check_range(rd, "max_ticks", g.max_ticks >= 1, "must be at least 1");
  return out;
}

json to_json(const SimConfig& c) {
  return {{"rows", c.lattice.rows},
          {"cols", c.lattice.cols},
          {"k", c.k},
          {"delta_u", c.delta_u},
          {"sigma", std::string(to_string(c.sigma))},
          {"p_r", c.p_r},
          {"gamma", c.gamma},
          {"alpha", c.alpha},
          {"innovator_fraction", c.innovator_fraction},
          {"max_ticks", c.max_ticks},
          {"update", std::string(to_string(c.update))},
          {"seed", c.seed}};
}

json to_json(const SweepGrid& g) {
  json sigma = json::array();
  for (SeedPattern s : g.sigma) sigma.push_back(std::string(to_string(s)));
  return {{"rows", g.rows},
          {"cols", g.cols},
          {"k", g.k},
          {"delta_u", g.delta_u},
          {"sigma", sigma},
          {"p_r", g.p_r},
          {"gamma", g.gamma},
          {"alpha", g.alpha},
          {"innovator_fraction", g.innovator_fraction},
          {"max_ticks", g.max_ticks},
          {"update", std::string(to_string(g.update))}};
}

json to_json(const FitResult& f) {
  return {{"p", f.params.p},
          {"q", f.params.q},
          {"r_squared", f.r_squared},
          {"residual_sum", f.residual_sum},
          {"iterations", f.iterations},
          {"converged", f.converged},
          {"p_at_bound", f.p_at_bound},
          {"q_at_bound", f.q_at_bound},
          {"points", f.points}};
}

json to_json(const NetworkStats& s) {
  return {{"mean_degree", s.mean_degree},
          {"mean_path_length", s.mean_path_length},
          {"clustering_coefficient", s.clustering_coefficient},
          {"sources", s.sources},
          {"reached_pairs", s.reached_pairs},
          {"unreachable_pairs", s.unreachable_pairs}};
}

json to_json(const RoiReport& r) {
  return {{"share_base", r.share_base},
          {"share_boosted", r.share_boosted},
          {"profit_base", r.profit_base},
          {"profit_boosted", r.profit_boosted},
          {"difference", r.difference},
          {"profitable", r.profitable}};
}

json make_manifest(std::string_view command, const json& config, std::uint64_t seed, const json& parameters) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return {{"manifest_version", 1},
          {"tool", "diffsim"},
          {"tool_version", kToolVersion},
          {"command", std::string(command)},
          {"seed", seed},
          {"created_utc", stamp},
          {"config", config},
          {"parameters", parameters}};
}

}  // namespace diffusion
