#include "cocycle_lab/config.hpp"
#include "cocycle_lab/error.hpp"

#include <doctest.h>

#include <string>

using namespace cocycle_lab;

namespace {

std::string config_error(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidConfig);
    return e.what();
  }
  return "";
}

const char* kPair = R"({"cocycle": {"d": 2, "r": 0, "entries": {"0": [[0, -1], [1, 0]], "1": [[0.8, -0.1], [0.8, 0.1]]}}})";

}  // namespace

TEST_CASE("valid configuration") {
  const RunConfig cfg = parse_config_text(R"({
    "sft": {"alphabet": 2, "transitions": [[1, 1], [1, 0]], "lambda": 0.5},
    "cocycle": {"d": 1, "r": 0, "entries": {"0": [[2]], "1": [[3]]}},
    "theta": 0.7, "beta": 0.25,
    "budgets": {"max_period": 5, "n_max": 6, "grid": 64, "iters": 9},
    "tolerances": {"holonomy": 1e-8},
    "norm": {"kind": "polytope", "vertices": [[1, 0], [0, 1]]},
    "points": {"x": {"periodic": "01"}, "y": {"left": "0", "core": "10", "right": "0", "origin": 1}},
    "samples": [{"periodic": "0"}],
    "p": 1, "closing": {"n": 5, "tau": 2.0}, "holonomy": {"kind": "unstable"}})");
  CHECK(cfg.sft->lambda() == 0.5);
  CHECK_FALSE(cfg.sft->allowed(1, 1));
  CHECK(cfg.cocycle->dimension() == 1);
  CHECK(cfg.theta == 0.7);
  CHECK(*cfg.beta == 0.25);
  CHECK(cfg.budgets.grid == 64);
  CHECK(cfg.tolerance("holonomy", 1.0) == 1e-8);
  CHECK(cfg.tolerance("mather", 0.5) == 0.5);
  CHECK(cfg.norm->kind() == NormField::Kind::Polytope);
  CHECK(cfg.require_point("x") == Point::periodic(Word{0, 1}));
  CHECK(cfg.require_point("y")[-1] == 1);
  CHECK(cfg.samples.size() == 1);
  CHECK(cfg.closing_n == 5);
  CHECK(cfg.holonomy_kind == "unstable");
}

TEST_CASE("defaults") {
  const RunConfig cfg = parse_config_text(kPair);
  CHECK(cfg.cocycle->base().is_full_shift());
  CHECK(cfg.cocycle->base().alphabet_size() == 2);
  CHECK(cfg.budgets.max_period == 12);
  CHECK_FALSE(cfg.beta.has_value());
  try {
    cfg.require_point("x");
    FAIL("expected InvalidConfig");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("points.x") != std::string::npos);
  }
}

TEST_CASE("field paths in diagnostics") {
  CHECK(config_error(R"({"sft": {"alphabet": 2, "transitions": [[1,1],[1,1]], "lambda": -1}})").find("sft.lambda") != std::string::npos);
  CHECK(config_error(R"({"sft": {"alphabet": 2, "transitions": [[1,1]], "lambda": 1}})").find("sft.transitions") != std::string::npos);
  CHECK(config_error(R"({"theta": 0})").find("theta") != std::string::npos);
  CHECK(config_error(R"({"budgets": {"grid": -4}})").find("budgets.grid") != std::string::npos);
  CHECK(config_error(R"({"cocycle": {"d": 2, "r": 0, "entries": {"0": [[1, 0], [0, 1]], "1": [[1, 0]]}}})").find("cocycle.entries.1") != std::string::npos);
  CHECK(config_error(R"({"norm": {"kind": "taxicab"}})").find("norm.kind") != std::string::npos);
  CHECK(config_error(R"({"points": {"x": {"periodic": "0-"}}})").find("points.x") != std::string::npos);
  const std::string pair_with_point = std::string(kPair).substr(0, std::string(kPair).size() - 1) + R"(, "points": {"x": {"periodic": "02"}}})";
  CHECK(config_error(pair_with_point).find("points.x") != std::string::npos);
  CHECK(config_error(R"({"holonomy": {"kind": "sideways"}})").find("holonomy.kind") != std::string::npos);
  CHECK(config_error("{\"cocycle\": ") != "");
  CHECK(config_error("[1, 2]") != "");
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), Error);
}
