#include "cocycle_lab/config.hpp"

#include "cocycle_lab/error.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace cocycle_lab {

namespace {

using json = nlohmann::json;

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::InvalidConfig, path + ": " + what);
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) bad(path, "expected a number");
  return j.get<double>();
}

int get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) bad(path, "expected an integer");
  return j.get<int>();
}

int get_positive(const json& j, const std::string& path) {
  const int v = get_int(j, path);
  if (v <= 0) bad(path, "must be positive");
  return v;
}

Word get_word(const json& j, const std::string& path, bool allow_empty) {
  if (!j.is_string()) bad(path, "expected a word string");
  Word w;
  try {
    w = parse_word(j.get<std::string>());
  } catch (const Error& e) {
    bad(path, e.message());
  }
  if (!allow_empty && w.empty()) bad(path, "must be nonempty");
  return w;
}

Matrix get_matrix(const json& j, const std::string& path, int rows, int cols) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows) bad(path, "expected " + std::to_string(rows) + " rows");
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const std::string rp = path + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != cols) bad(rp, "expected " + std::to_string(cols) + " columns");
    for (int k = 0; k < cols; ++k) m(i, k) = get_number(j[i][k], rp + "[" + std::to_string(k) + "]");
  }
  return m;
}

Sft parse_sft(const json& j) {
  if (!j.is_object()) bad("sft", "expected an object");
  if (!j.contains("alphabet")) bad("sft.alphabet", "missing");
  const int n = get_positive(j["alphabet"], "sft.alphabet");
  const double lambda = j.contains("lambda") ? get_number(j["lambda"], "sft.lambda") : 1.0;
  if (!(lambda > 0)) bad("sft.lambda", "must be > 0");
  std::vector<std::vector<int>> t(n, std::vector<int>(n, 1));
  if (j.contains("transitions")) {
    const auto& tj = j["transitions"];
    if (!tj.is_array() || static_cast<int>(tj.size()) != n) bad("sft.transitions", "expected N rows");
    for (int a = 0; a < n; ++a) {
      const std::string rp = "sft.transitions[" + std::to_string(a) + "]";
      if (!tj[a].is_array() || static_cast<int>(tj[a].size()) != n) bad(rp, "expected N columns");
      for (int b = 0; b < n; ++b) t[a][b] = get_int(tj[a][b], rp + "[" + std::to_string(b) + "]");
    }
  }
  try {
    return Sft(n, t, lambda);
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidConfig, "sft." + e.message());
  }
}

Cocycle parse_cocycle(const json& j, std::optional<Sft>& sft) {
  if (!j.is_object()) bad("cocycle", "expected an object");
  if (!j.contains("d")) bad("cocycle.d", "missing");
  const int d = get_positive(j["d"], "cocycle.d");
  const int r = j.contains("r") ? get_int(j["r"], "cocycle.r") : 0;
  if (r < 0) bad("cocycle.r", "must be >= 0");
  if (!j.contains("entries") || !j["entries"].is_object()) bad("cocycle.entries", "expected an object of windows");
  std::map<Word, Matrix> table;
  int max_symbol = 0;
  for (const auto& [key, value] : j["entries"].items()) {
    const std::string path = "cocycle.entries." + key;
    const Word w = get_word(json(key), path, false);
    if (static_cast<int>(w.size()) != 2 * r + 1) bad(path, "window must have length 2r + 1");
    for (int s : w) max_symbol = std::max(max_symbol, s);
    table.emplace(w, get_matrix(value, path, d, d));
  }
  if (!sft) sft = Sft::full_shift(max_symbol + 1);
  try {
    return Cocycle(*sft, r, table);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidConfig) {
      throw Error(ErrorCode::InvalidConfig, "cocycle." + e.message());
    }
    throw;
  }
}

Point parse_point(const json& j, const std::string& path) {
  if (!j.is_object()) bad(path, "expected a point object");
  if (j.contains("periodic")) return Point::periodic(get_word(j["periodic"], path + ".periodic", false));
  if (!j.contains("left")) bad(path + ".left", "missing");
  if (!j.contains("right")) bad(path + ".right", "missing");
  const Word left = get_word(j["left"], path + ".left", false);
  const Word right = get_word(j["right"], path + ".right", false);
  const Word core = j.contains("core") ? get_word(j["core"], path + ".core", true) : Word{};
  const long origin = j.contains("origin") ? get_int(j["origin"], path + ".origin") : 0;
  return Point(left, core, right, origin);
}

NormField parse_norm(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) bad("norm.kind", "expected a string");
  const std::string kind = j["kind"];
  try {
    if (kind == "euclidean") return NormField::euclidean();
    if (kind == "max") return NormField::max();
    if (kind == "polytope") {
      if (!j.contains("vertices") || !j["vertices"].is_array()) bad("norm.vertices", "expected a list of 2-vectors");
      const auto& v = j["vertices"];
      Matrix m(2, static_cast<Eigen::Index>(v.size()));
      for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string p = "norm.vertices[" + std::to_string(i) + "]";
        if (!v[i].is_array() || v[i].size() != 2) bad(p, "expected a 2-vector");
        m(0, i) = get_number(v[i][0], p + "[0]");
        m(1, i) = get_number(v[i][1], p + "[1]");
      }
      return NormField::polytope(m);
    }
    if (kind == "ellipse") {
      if (!j.contains("matrix")) bad("norm.matrix", "missing");
      const auto& mj = j["matrix"];
      const int d = mj.is_array() ? static_cast<int>(mj.size()) : 0;
      return NormField::ellipse(get_matrix(mj, "norm.matrix", d, d));
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidConfig) throw;
    throw Error(ErrorCode::InvalidConfig, "norm: " + e.message());
  }
  bad("norm.kind", "unknown norm '" + kind + "'");
}

}  // namespace

double RunConfig::tolerance(const std::string& key, double fallback) const {
  const auto it = tolerances.find(key);
  return it == tolerances.end() ? fallback : it->second;
}

const Cocycle& RunConfig::require_cocycle() const {
  if (!cocycle) throw Error(ErrorCode::InvalidConfig, "cocycle: missing");
  return *cocycle;
}

const Point& RunConfig::require_point(const std::string& name) const {
  const auto it = points.find(name);
  if (it == points.end()) throw Error(ErrorCode::InvalidConfig, "points." + name + ": missing");
  return it->second;
}

RunConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("config: ") + e.what());
  }
  if (!j.is_object()) bad("config", "expected an object");
  RunConfig cfg;
  if (j.contains("sft")) cfg.sft = parse_sft(j["sft"]);
  if (j.contains("cocycle")) cfg.cocycle = parse_cocycle(j["cocycle"], cfg.sft);
  if (j.contains("theta")) {
    cfg.theta = get_number(j["theta"], "theta");
    if (!(cfg.theta > 0)) bad("theta", "must be > 0");
  }
  if (j.contains("beta")) cfg.beta = get_number(j["beta"], "beta");
  if (j.contains("budgets")) {
    const auto& b = j["budgets"];
    if (!b.is_object()) bad("budgets", "expected an object");
    if (b.contains("max_period")) cfg.budgets.max_period = get_positive(b["max_period"], "budgets.max_period");
    if (b.contains("n_max")) cfg.budgets.n_max = get_positive(b["n_max"], "budgets.n_max");
    if (b.contains("grid")) cfg.budgets.grid = get_positive(b["grid"], "budgets.grid");
    if (b.contains("iters")) cfg.budgets.iters = get_positive(b["iters"], "budgets.iters");
  }
  if (j.contains("tolerances")) {
    if (!j["tolerances"].is_object()) bad("tolerances", "expected an object");
    for (const auto& [k, v] : j["tolerances"].items()) {
      const double t = get_number(v, "tolerances." + k);
      if (!(t > 0)) bad("tolerances." + k, "must be > 0");
      cfg.tolerances[k] = t;
    }
  }
  if (j.contains("norm")) cfg.norm = parse_norm(j["norm"]);
  const Sft* sft = cfg.cocycle ? &cfg.cocycle->base() : (cfg.sft ? &*cfg.sft : nullptr);
  auto checked = [&](const Point& x, const std::string& path) {
    if (sft) {
      try {
        sft->validate(x);
      } catch (const Error& e) {
        bad(path, e.message());
      }
    }
    return x;
  };
  if (j.contains("points")) {
    if (!j["points"].is_object()) bad("points", "expected an object");
    for (const auto& [k, v] : j["points"].items()) cfg.points.emplace(k, checked(parse_point(v, "points." + k), "points." + k));
  }
  if (j.contains("samples")) {
    if (!j["samples"].is_array()) bad("samples", "expected a list of points");
    for (std::size_t i = 0; i < j["samples"].size(); ++i) {
      const std::string path = "samples[" + std::to_string(i) + "]";
      cfg.samples.push_back(checked(parse_point(j["samples"][i], path), path));
    }
  }
  if (j.contains("p")) cfg.p = get_positive(j["p"], "p");
  if (j.contains("closing")) {
    const auto& c = j["closing"];
    if (!c.is_object()) bad("closing", "expected an object");
    if (c.contains("n")) cfg.closing_n = get_positive(c["n"], "closing.n");
    if (c.contains("tau")) {
      cfg.closing_tau = get_number(c["tau"], "closing.tau");
      if (!(cfg.closing_tau > 0)) bad("closing.tau", "must be > 0");
    }
  }
  if (j.contains("holonomy")) {
    const auto& h = j["holonomy"];
    if (!h.is_object() || !h.contains("kind") || !h["kind"].is_string()) bad("holonomy.kind", "expected \"stable\" or \"unstable\"");
    cfg.holonomy_kind = h["kind"];
    if (cfg.holonomy_kind != "stable" && cfg.holonomy_kind != "unstable") bad("holonomy.kind", "expected \"stable\" or \"unstable\"");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidConfig, "config: cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace cocycle_lab
