// cocycle-lab: command-line front end.
//
//   cocycle-lab [--config FILE] [--seed N] [--out DIR] [--format csv|json] <subcommand>
//
// Exit status: 0 success, 2 invalid input, 3 numerical failure.

#include "cocycle_lab/config.hpp"
#include "cocycle_lab/error.hpp"
#include "cocycle_lab/extremal.hpp"
#include "cocycle_lab/holonomy.hpp"
#include "cocycle_lab/kernels.hpp"
#include "cocycle_lab/mather.hpp"
#include "cocycle_lab/scenarios.hpp"
#include "cocycle_lab/spectral.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

using namespace cocycle_lab;
using json = nlohmann::json;

namespace {

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
};

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_cell(const json& v) {
  if (v.is_number_float()) return format_number(v.get<double>());
  if (v.is_number()) return v.dump();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  }
  return s;
}

// Floats are printed with 17 significant digits in both formats.
std::string json_text(const json& v) {
  if (v.is_number_float()) return format_number(v.get<double>());
  if (v.is_array()) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + json_text(v[i]);
    return s + "]";
  }
  if (v.is_object()) {
    std::string s = "{";
    bool first = true;
    for (const auto& [k, x] : v.items()) {
      s += (first ? "" : ", ") + json(k).dump() + ": " + json_text(x);
      first = false;
    }
    return s + "}";
  }
  return v.dump();
}

struct Output {
  std::string format = "csv";
  std::string dir;

  void write(const Table& t) const {
    std::ostringstream os;
    if (format == "csv") {
      for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
      os << "\n";
      for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_cell(r[i]);
        os << "\n";
      }
    } else {
      os << "[\n";
      for (std::size_t i = 0; i < t.rows.size(); ++i) {
        json obj = json::object();
        os << "  {";
        for (std::size_t k = 0; k < t.columns.size(); ++k) {
          os << (k ? ", " : "") << json(t.columns[k]).dump() << ": " << json_text(t.rows[i][k]);
        }
        os << "}" << (i + 1 < t.rows.size() ? "," : "") << "\n";
      }
      os << "]\n";
    }
    if (dir.empty()) {
      std::cout << "# " << t.name << "\n" << os.str();
      return;
    }
    std::filesystem::create_directories(dir);
    const auto path = std::filesystem::path(dir) / (t.name + (format == "csv" ? ".csv" : ".json"));
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::InvalidConfig, "out: cannot write '" + path.string() + "'");
    out << os.str();
  }
};

// Key/value report as a two-column table.
Table summary(const std::string& name, const std::vector<std::pair<std::string, json>>& kv) {
  Table t{name, {"key", "value"}, {}};
  for (const auto& [k, v] : kv) t.rows.push_back({k, v});
  return t;
}

void print_summary(const Table& t) {
  for (const auto& r : t.rows) std::cout << r[0].get<std::string>() << " = " << csv_cell(r[1]) << "\n";
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

double beta_for(const RunConfig& cfg, const Cocycle& c) {
  return cfg.beta ? *cfg.beta : estimate_beta(c, cfg.budgets.max_period).midpoint();
}

std::vector<Table> cmd_beta(const RunConfig& cfg) {
  const Cocycle& c = cfg.require_cocycle();
  const int budget = cfg.budgets.max_period;
  Table t{"beta", {"n", "beta_n", "lower_witness", "upper_euclidean", "upper_max", "upper_best", "upper_witness"}, {}};
  const auto bw = berger_wang_table(c, budget, 0.0);
  std::vector<NormField> norms{NormField::euclidean(), NormField::max()};
  const bool extra = cfg.norm && cfg.norm->kind() != NormField::Kind::Euclidean && cfg.norm->kind() != NormField::Kind::Max;
  if (extra) {
    norms.push_back(*cfg.norm);
    t.columns.insert(t.columns.begin() + 5, "upper_" + cfg.norm->name());
  }
  double best_upper = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= budget; ++n) {
    std::vector<json> row{n, bw[n - 1].beta_n, bw[n - 1].witness.to_string()};
    Word witness;
    double row_best = std::numeric_limits<double>::infinity();
    for (const auto& norm : norms) {
      const auto m = max_word_norm_parallel(c, n, norm);
      const double u = std::log(m.value) / n;
      row.push_back(u);
      if (u < row_best) {
        row_best = u;
        witness = m.word;
      }
    }
    best_upper = std::min(best_upper, row_best);
    row.push_back(best_upper);
    row.push_back(format_word(witness));
    t.rows.push_back(std::move(row));
  }
  const double lower = bw.back().beta_n;
  const Table s = summary("beta_bracket", {{"lower", lower},
                                           {"upper", best_upper},
                                           {"midpoint", 0.5 * (lower + best_upper)},
                                           {"width", best_upper - lower},
                                           {"lower_witness", bw.back().witness.to_string()}});
  print_summary(s);
  return {t, s};
}

std::vector<Table> cmd_berger_wang(const RunConfig& cfg) {
  const Cocycle& c = cfg.require_cocycle();
  Table t{"berger_wang", {"n", "beta_n", "gap", "witness"}, {}};
  for (const auto& r : berger_wang_table(c, cfg.budgets.max_period)) t.rows.push_back({r.n, r.beta_n, r.gap, r.witness.to_string()});
  return {t};
}

std::vector<Table> cmd_barabanov(const RunConfig& cfg) {
  const Cocycle& c = cfg.require_cocycle();
  if (c.radius() != 0 || c.dimension() != 2) throw Error(ErrorCode::Unsupported, "barabanov: needs a one-step cocycle with d = 2");
  const double beta = beta_for(cfg, c);
  const auto mats = c.one_step_matrices();
  const auto it = constant_barabanov_iterate(mats, beta, cfg.budgets.grid, cfg.budgets.iters);
  Table ball{"barabanov_ball", {"curve", "angle", "radius"}, {}};
  const int resolution = cfg.budgets.grid / 2;
  std::vector<Matrix> scaled;
  for (const auto& m : mats) scaled.push_back(std::exp(-beta) * m);
  for (const auto& [norm, label] : std::vector<std::pair<NormField, std::string>>{
           {it.norm, "barabanov"}, {NormField::max(), "max"}, {NormField::euclidean(), "euclidean"}}) {
    for (const auto& r : emit_ball(norm, resolution, label == "barabanov" ? scaled : std::vector<Matrix>{}, label)) {
      ball.rows.push_back({r.curve, r.angle, r.radius});
    }
  }
  const Table s = summary("barabanov", {{"beta", beta},
                                        {"grid", cfg.budgets.grid},
                                        {"iterations", it.iterations},
                                        {"residual", it.residual},
                                        {"equation_residual", barabanov_equation_residual(mats, it.norm, beta)}});
  print_summary(s);
  return {ball, s};
}

std::vector<Table> cmd_check_extremal(const RunConfig& cfg) {
  const Cocycle& c = cfg.require_cocycle();
  const NormField norm = cfg.norm ? *cfg.norm : NormField::max();
  const double beta = beta_for(cfg, c);
  const auto rep = extremality_check(c, norm, beta);
  json dir = json::array();
  for (Eigen::Index i = 0; i < rep.worst_direction.size(); ++i) dir.push_back(rep.worst_direction(i));
  const Table s = summary("extremality", {{"norm", norm.name()},
                                          {"beta_used", rep.beta_used},
                                          {"sup_log_operator_norm", rep.sup_log_operator_norm},
                                          {"slack", rep.slack},
                                          {"tolerance", rep.tolerance},
                                          {"extremal", rep.extremal},
                                          {"worst_window", format_word(rep.worst_window)},
                                          {"worst_direction", json_text(dir)}});
  print_summary(s);
  return {s};
}

std::vector<Table> cmd_holonomy(const RunConfig& cfg) {
  const Cocycle& c = cfg.require_cocycle();
  const Point& x = cfg.require_point("x");
  const Point& y = cfg.require_point("y");
  const double tol = cfg.tolerance("holonomy", kHolonomyTol);
  const int n_max = std::max(cfg.budgets.n_max, kHolonomyMaxSteps);
  const auto res = cfg.holonomy_kind == "stable" ? stable_holonomy(c, x, y, tol, n_max, cfg.theta)
                                                 : unstable_holonomy(c, x, y, tol, n_max, cfg.theta);
  Table trace{"holonomy_trace", {"n", "increment_norm"}, {}};
  for (std::size_t i = 0; i < res.increments.size(); ++i) trace.rows.push_back({static_cast<int>(i + 1), res.increments[i]});
  Table mat{"holonomy_matrix", {"row"}, {}};
  for (int j = 0; j < c.dimension(); ++j) mat.columns.push_back("c" + std::to_string(j));
  for (int i = 0; i < c.dimension(); ++i) {
    std::vector<json> row{i};
    for (int j = 0; j < c.dimension(); ++j) row.push_back(res.matrix(i, j));
    mat.rows.push_back(std::move(row));
  }
  const Table s = summary("holonomy", {{"kind", cfg.holonomy_kind},
                                       {"iterations_used", res.iterations_used},
                                       {"last_increment_norm", res.last_increment_norm},
                                       {"certified", res.certified}});
  print_summary(s);
  return {trace, mat, s};
}

std::vector<Table> cmd_mather(const RunConfig& cfg) {
  const Cocycle& c = cfg.require_cocycle();
  const auto m = mather_set_approx(c, cfg.p, cfg.budgets.max_period, cfg.tolerance("mather", 1e-9));
  Table t{"mather", {"word", "period"}, {}};
  for (int i = 0; i < c.dimension(); ++i) t.columns.push_back("chi_" + std::to_string(i + 1));
  for (std::size_t i = 0; i < m.orbits.size(); ++i) {
    std::vector<json> row{m.orbits[i].to_string(), m.orbits[i].period()};
    for (double v : m.spectra[i]) row.push_back(v);
    t.rows.push_back(std::move(row));
  }
  const Table s = summary("mather_summary", {{"p", m.index_p}, {"beta_used", m.beta_used}, {"tol", m.tol},
                                             {"orbits", static_cast<int>(m.orbits.size())}});
  print_summary(s);
  return {t, s};
}

std::vector<Point> samples_or_default(const RunConfig& cfg, const Cocycle& c) {
  if (!cfg.samples.empty()) return cfg.samples;
  std::vector<Point> out;
  for (const auto& w : enumerate_periodic_words(c.base(), 3))
    for (int i = 0; i < w.period(); ++i) out.push_back(w.point().shifted(i));
  return out;
}

std::vector<Table> cmd_splitting(const RunConfig& cfg) {
  const Cocycle& c = cfg.require_cocycle();
  const auto samples = samples_or_default(cfg, c);
  const auto fit = splitting_fit(c, samples, cfg.p, cfg.budgets.n_max);
  const auto rep = dominated_splitting_test(c, samples, cfg.p, cfg.budgets.n_max);
  Table t{"splitting", {"n", "log_ratio"}, {}};
  for (std::size_t i = 0; i < fit.max_log_ratio.size(); ++i) t.rows.push_back({static_cast<int>(i + 1), fit.max_log_ratio[i]});
  std::vector<std::pair<std::string, json>> kv{{"p", cfg.p}, {"tau", fit.tau}, {"c", fit.c}, {"r_squared", fit.r_squared},
                                               {"splitting", rep.has_value()}};
  if (rep) {
    for (std::size_t i = 0; i < rep->subspaces.size(); ++i) {
      kv.emplace_back("subspace_" + std::to_string(i), json_text(matrix_json(rep->subspaces[i])));
    }
  }
  const Table s = summary("splitting_fit", kv);
  print_summary(s);
  return {t, s};
}

std::vector<Table> cmd_closing(const RunConfig& cfg) {
  if (cfg.samples.empty()) throw Error(ErrorCode::InvalidConfig, "samples: closing needs at least one sample point");
  const Sft sft = cfg.cocycle ? cfg.cocycle->base() : (cfg.sft ? *cfg.sft : Sft::full_shift(2));
  const auto w = closing_periodic_orbit(cfg.samples, cfg.closing_n, cfg.closing_tau, sft);
  const double bound = std::pow(static_cast<double>(cfg.closing_n), -cfg.closing_tau);
  const double dist = orbit_distance_to_samples(sft, w, cfg.samples);
  const Table s = summary("closing", {{"word", w.to_string()}, {"period", w.period()}, {"distance", dist}, {"bound", bound},
                                      {"within_bound", dist <= bound}});
  print_summary(s);
  return {s};
}

std::vector<Table> cmd_example(const std::string& name, int m) {
  if (name == "no-riemannian") {
    const auto r = no_riemannian_example();
    const Table s = summary("example_no_riemannian", {{"beta_lower", r.bracket.lower},
                                                      {"beta_upper", r.bracket.upper},
                                                      {"upper_norm", r.bracket.upper_norm},
                                                      {"max_norm_slack", r.max_norm.slack},
                                                      {"max_norm_extremal", r.max_norm.extremal},
                                                      {"euclidean_slack", r.euclidean.slack},
                                                      {"loop_k1", json_text(matrix_json(r.loop_k1))},
                                                      {"loop_norm", r.obstruction.loop_norm},
                                                      {"obstructed", r.obstruction.obstructed}});
    print_summary(s);
    return {s};
  }
  if (name == "unlocked") {
    const auto r = perturbed_example(m);
    const Table s = summary("example_unlocked", {{"m", r.m},
                                                 {"product", json_text(matrix_json(r.product_check))},
                                                 {"word", r.word.to_string()},
                                                 {"periodic_exponent", r.periodic_exponent},
                                                 {"expected", std::log(0.8 * std::sqrt(2.0)) / (m + 1)}});
    print_summary(s);
    return {s};
  }
  if (name == "non-space") {
    const auto r = non_space_example();
    std::string m2;
    for (const auto& w : r.m2.orbits) m2 += (m2.empty() ? "" : " ") + w.to_string();
    const Table s = summary("example_non_space", {{"m1_orbits", static_cast<int>(r.m1.orbits.size())},
                                                  {"m2_orbits", m2},
                                                  {"cone_slope", r.slope.slope},
                                                  {"expected_slope", std::exp(1.0 / (std::exp(1.0) - 1.0))},
                                                  {"splitting", r.splitting.has_value()},
                                                  {"splitting_tau", r.splitting ? r.splitting->tau : 0.0}});
    print_summary(s);
    return {s};
  }
  throw Error(ErrorCode::InvalidConfig, "example: unknown scenario '" + name + "' (no-riemannian, unlocked, non-space)");
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidConfig:
    case ErrorCode::PreconditionViolated:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::NotOnStableSet:
    case ErrorCode::NotOnUnstableSet:
    case ErrorCode::NotHomoclinic:
      return 2;
    default:
      return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear cocycles over subshifts of finite type"};
  app.require_subcommand(1);
  std::string config_path, out_dir, format = "csv";
  std::uint64_t seed = 0;
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--seed", seed, "seed for randomized steps")->capture_default_str();
  app.add_option("--out", out_dir, "output directory (stdout when omitted)");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

  const std::pair<const char*, const char*> commands[] = {
      {"beta", "bracket the maximal Lyapunov exponent"},
      {"berger-wang", "periodic lower bounds against the upper bound"},
      {"barabanov", "Barabanov norm by value iteration"},
      {"check-extremal", "extremality slack of the configured norm"},
      {"holonomy", "stable or unstable holonomy between two points"},
      {"mather", "periodic Lyapunov spectra"},
      {"splitting", "dominated splitting test"},
      {"closing", "closing lemma for a sample point"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);
  auto* example = app.add_subcommand("example", "run a named scenario");
  std::string scenario;
  int m = 6;
  example->add_option("name", scenario, "no-riemannian | unlocked | non-space")->required();
  example->add_option("--m", m, "perturbation parameter (2 mod 4)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (const char* env = std::getenv("COCYCLE_LAB_THREADS")) {
    char* end = nullptr;
    const long threads = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || threads < 1) {
      std::cerr << "error: InvalidConfig: COCYCLE_LAB_THREADS: must be a positive integer\n";
      return 2;
    }
    omp_set_num_threads(static_cast<int>(threads));
  }

  try {
    const Output out{format, out_dir};
    std::vector<Table> tables;
    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "example") {
      tables = cmd_example(scenario, m);
    } else {
      if (config_path.empty()) throw Error(ErrorCode::InvalidConfig, "config: --config is required for " + cmd);
      const RunConfig cfg = load_config(config_path);
      if (cmd == "beta") tables = cmd_beta(cfg);
      else if (cmd == "berger-wang") tables = cmd_berger_wang(cfg);
      else if (cmd == "barabanov") tables = cmd_barabanov(cfg);
      else if (cmd == "check-extremal") tables = cmd_check_extremal(cfg);
      else if (cmd == "holonomy") tables = cmd_holonomy(cfg);
      else if (cmd == "mather") tables = cmd_mather(cfg);
      else if (cmd == "splitting") tables = cmd_splitting(cfg);
      else if (cmd == "closing") tables = cmd_closing(cfg);
    }
    if (!out_dir.empty() || cmd != "example") {
      for (const auto& t : tables)
        if (!out_dir.empty() || t.columns.front() != "key") out.write(t);
    }
    (void)seed;
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
