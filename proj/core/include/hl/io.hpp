#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "hl/bc.hpp"
#include "hl/grid.hpp"
#include "hl/potential.hpp"
#include "hl/types.hpp"

namespace hl {

using Json = nlohmann::json;

/// Shortest round-trip decimal form of a double (reproducible CSV floats).
std::string format_double(double v);

Json mat_to_json(const Mat& m);        // row-major [[ [re, im], ... ], ...]
Mat mat_from_json(const Json& j);

Json bc_to_json(const BoundaryPair& bp);
/// Accepts {"builtin": "dirichlet"|"neumann"|"kirchhoff", "n": n} or
/// explicit {"A": ..., "B": ...} or {"thetas": [..]}.
BoundaryPair bc_from_json(const Json& j, const Tolerances& tol = {});

Json potential_to_json(const PotentialSpec& p);
/// Models: {"model":"zero","n":n}, {"model":"square_well","n":n,"depth":d,
/// "width":w}, {"model":"square_well","coupling":M,"width":w},
/// {"model":"exp_decay","coupling":M,"rate":r[,"tail_mass":m]},
/// {"model":"coupled_well","d1":..,"d2":..,"c":..,"width":..},
/// {"model":"piecewise","breakpoints":[..],"values":[M..]},
/// {"model":"sampled","grid":[..],"values":[M..]}.
PotentialSpec potential_from_json(const Json& j);

RangeSpec range_from_json(const Json& j);
Tolerances tolerances_from_json(const Json& j, Tolerances base = {});

/// One scenario as consumed by the command-line front end.
struct ScenarioConfig {
  BoundaryPair bc;
  PotentialSpec potential = PotentialSpec::zero(1);
  RangeSpec k_grid{0.1, 10.0, 100, false};
  RangeSpec e_grid{0.1, 100.0, 100, false};
  RangeSpec kappa_range{1e-3, 5.0, 400, true};
  Tolerances tol;
  Json raw;  // parsed document after overrides, for echoing
};

/// Parses a config document, applying dotted-path overrides ("key.sub=value")
/// first. Throws ConfigError with a field diagnostic.
ScenarioConfig parse_scenario(const std::string& text,
                              const std::vector<std::string>& overrides = {});

/// CSV with a header row; each cell already formatted.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

void write_text(const std::string& path, const std::string& text);

std::string read_file(const std::string& path);

}  // namespace hl
