#include "hl/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "hl/errors.hpp"

namespace hl {

std::string format_double(double v) {
  if (v == 0.0) v = 0.0;  // canonicalize -0
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

Json mat_to_json(const Mat& m) {
  Json rows = Json::array();
  for (long i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (long j = 0; j < m.cols(); ++j)
      row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat mat_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("matrix must be a nonempty array of rows");
  const long rows = static_cast<long>(j.size());
  const long cols = static_cast<long>(j[0].size());
  Mat m(rows, cols);
  for (long i = 0; i < rows; ++i) {
    if (static_cast<long>(j[static_cast<size_t>(i)].size()) != cols)
      throw ConfigError("matrix rows have inconsistent lengths");
    for (long c = 0; c < cols; ++c) {
      const Json& e = j[static_cast<size_t>(i)][static_cast<size_t>(c)];
      if (e.is_number()) {
        m(i, c) = Complex(e.get<double>(), 0.0);
      } else if (e.is_array() && e.size() == 2) {
        m(i, c) = Complex(e[0].get<double>(), e[1].get<double>());
      } else {
        throw ConfigError("matrix entry must be a number or [re, im]");
      }
    }
  }
  return m;
}

Json bc_to_json(const BoundaryPair& bp) {
  return Json{{"n", bp.n}, {"A", mat_to_json(bp.A)}, {"B", mat_to_json(bp.B)}};
}

BoundaryPair bc_from_json(const Json& j, const Tolerances& tol) {
  if (j.is_string()) {
    // shorthand: builtin name with n = 1
    return bc_from_json(Json{{"builtin", j.get<std::string>()}, {"n", 1}}, tol);
  }
  if (j.contains("builtin")) {
    const std::string name = j["builtin"].get<std::string>();
    const int n = j.value("n", 1);
    if (name == "dirichlet") return dirichlet_bc(n);
    if (name == "neumann") return neumann_bc(n);
    if (name == "kirchhoff") return kirchhoff_bc(n);
    throw ConfigError("unknown builtin boundary condition: " + name);
  }
  if (j.contains("thetas")) {
    return bc_from_thetas(j["thetas"].get<std::vector<double>>());
  }
  if (j.contains("A") && j.contains("B")) return make_bc(mat_from_json(j["A"]),
                                                         mat_from_json(j["B"]), tol);
  throw ConfigError("bc must give builtin, thetas, or explicit A and B");
}

Json potential_to_json(const PotentialSpec& p) {
  Json j;
  j["n"] = p.channels();
  if (p.is_zero()) {
    j["model"] = "zero";
    return j;
  }
  j["support_end"] = p.support_end();
  switch (p.model()) {
    case PotentialSpec::Model::Builtin:
      j["model"] = p.family() == PotentialSpec::Family::ExpDecay ? "exp_decay" : "square_well";
      break;
    case PotentialSpec::Model::Piecewise:
      j["model"] = "piecewise";
      break;
    case PotentialSpec::Model::Sampled:
      j["model"] = "sampled";
      break;
  }
  return j;
}

PotentialSpec potential_from_json(const Json& j) {
  const std::string model = j.value("model", "zero");
  if (model == "zero") return PotentialSpec::zero(j.value("n", 1));
  if (model == "square_well") {
    const double width = j.value("width", 1.0);
    if (j.contains("coupling")) return PotentialSpec::square_well_matrix(
        mat_from_json(j["coupling"]), width);
    return PotentialSpec::square_well(j.value("n", 1), j.value("depth", 1.0), width);
  }
  if (model == "exp_decay")
    return PotentialSpec::exp_decay(mat_from_json(j.at("coupling")), j.value("rate", 1.0),
                                    j.value("tail_mass", 1e-12));
  if (model == "coupled_well")
    return PotentialSpec::coupled_well(j.value("d1", 1.0), j.value("d2", 1.0), j.value("c", 0.2),
                                       j.value("width", 1.0));
  if (model == "piecewise") {
    std::vector<Mat> vals;
    for (const auto& v : j.at("values")) vals.push_back(mat_from_json(v));
    return PotentialSpec::piecewise(j.at("breakpoints").get<std::vector<double>>(),
                                    std::move(vals));
  }
  if (model == "sampled") {
    std::vector<Mat> vals;
    for (const auto& v : j.at("values")) vals.push_back(mat_from_json(v));
    return PotentialSpec::sampled(j.at("grid").get<std::vector<double>>(), std::move(vals));
  }
  throw ConfigError("unknown potential model: " + model);
}

RangeSpec range_from_json(const Json& j) {
  RangeSpec r;
  r.min = j.at("min").get<double>();
  r.max = j.at("max").get<double>();
  r.count = j.at("count").get<int>();
  const std::string spacing = j.value("spacing", "linear");
  if (spacing == "log")
    r.log = true;
  else if (spacing != "linear")
    throw ConfigError("spacing must be linear or log");
  if (!(r.min < r.max) || r.count < 1) throw ConfigError("range must have min < max, count >= 1");
  return r;
}

Tolerances tolerances_from_json(const Json& j, Tolerances base) {
  auto pick = [&](const char* key, double& slot) {
    if (j.contains(key)) slot = j[key].get<double>();
  };
  pick("herm_rel", base.herm_rel);
  pick("posdef_rel", base.posdef_rel);
  pick("unitarity", base.unitarity);
  pick("cluster", base.cluster);
  pick("theta_class", base.theta_class);
  pick("cond_max", base.cond_max);
  pick("ode_rel", base.ode_rel);
  pick("ode_abs", base.ode_abs);
  pick("s_unitarity", base.s_unitarity);
  pick("null_space", base.null_space);
  pick("root", base.root);
  pick("eig_plus_one", base.eig_plus_one);
  pick("extrap", base.extrap);
  pick("k_min", base.k_min);
  return base;
}

namespace {

Json parse_override_value(const std::string& s) {
  // try JSON first (numbers, booleans, arrays); fall back to string
  auto parsed = Json::parse(s, nullptr, false);
  if (!parsed.is_discarded()) return parsed;
  return Json(s);
}

void apply_override(Json& doc, const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos) throw ConfigError("override must look like key.path=value");
  std::string path = kv.substr(0, eq);
  const Json value = parse_override_value(kv.substr(eq + 1));
  Json* node = &doc;
  size_t pos = 0;
  while (true) {
    const size_t dot = path.find('.', pos);
    const std::string key = path.substr(pos, dot == std::string::npos ? dot : dot - pos);
    if (key.empty()) throw ConfigError("empty key in override path");
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    pos = dot + 1;
  }
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& text, const std::vector<std::string>& overrides) {
  Json doc = Json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw ConfigError("config is not valid JSON");
  for (const auto& ov : overrides) apply_override(doc, ov);

  ScenarioConfig sc;
  try {
    sc.tol = tolerances_from_json(doc.value("tolerances", Json::object()));
    if (!doc.contains("bc")) throw ConfigError("config needs a bc section");
    sc.bc = bc_from_json(doc["bc"], sc.tol);
    if (doc.contains("potential"))
      sc.potential = potential_from_json(doc["potential"]);
    else
      sc.potential = PotentialSpec::zero(sc.bc.n);
    if (sc.potential.channels() != sc.bc.n)
      throw ConfigError("potential and bc have different channel counts");
    if (doc.contains("k_grid")) sc.k_grid = range_from_json(doc["k_grid"]);
    if (doc.contains("E_grid")) sc.e_grid = range_from_json(doc["E_grid"]);
    if (doc.contains("kappa_range")) sc.kappa_range = range_from_json(doc["kappa_range"]);
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }
  sc.raw = std::move(doc);
  return sc;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  for (size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  out << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace hl
