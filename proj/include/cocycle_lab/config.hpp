#pragma once

// Run configuration for the command-line tool, read from JSON:
//
//   {
//     "sft": {"alphabet": 2, "transitions": [[1,1],[1,1]], "lambda": 1.0},
//     "cocycle": {"d": 2, "r": 0, "entries": {"0": [[0,-1],[1,0]], "1": [[0.8,-0.1],[0.8,0.1]]}},
//     "theta": 1.0,
//     "beta": 0.0,
//     "budgets": {"max_period": 12, "n_max": 12, "grid": 720, "iters": 500},
//     "tolerances": {"holonomy": 1e-10, "mather": 1e-9},
//     "norm": {"kind": "max"},
//     "points": {"x": {"left": "0", "core": "1", "right": "0", "origin": 0}},
//     "samples": [{"periodic": "01"}],
//     "p": 1,
//     "closing": {"n": 8, "tau": 1.0},
//     "holonomy": {"kind": "stable"}
//   }
//
// Every validation failure throws InvalidConfig naming the offending field.

#include "cocycle_lab/cocycle.hpp"
#include "cocycle_lab/norms.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cocycle_lab {

struct Budgets {
  int max_period = 12;
  int n_max = 12;
  int grid = 720;
  int iters = 500;
};

struct RunConfig {
  std::optional<Sft> sft;
  std::optional<Cocycle> cocycle;
  double theta = 1.0;
  std::optional<double> beta;
  Budgets budgets;
  std::map<std::string, double> tolerances;
  std::optional<NormField> norm;
  std::map<std::string, Point> points;
  std::vector<Point> samples;
  int p = 1;
  int closing_n = 8;
  double closing_tau = 1.0;
  std::string holonomy_kind = "stable";

  double tolerance(const std::string& key, double fallback) const;
  const Cocycle& require_cocycle() const;
  const Point& require_point(const std::string& name) const;
};

RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

}  // namespace cocycle_lab
