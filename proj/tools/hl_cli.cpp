// Command-line front end: scenario configs in, CSV/JSON artifacts out.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hl/bc.hpp"
#include "hl/errors.hpp"
#include "hl/grid.hpp"
#include "hl/io.hpp"
#include "hl/potential.hpp"
#include "hl/scattering.hpp"
#include "hl/spectral.hpp"
#include "hl/transforms.hpp"

namespace {

namespace fs = std::filesystem;
using hl::format_double;
using hl::Json;

struct RunContext {
  hl::ScenarioConfig cfg;
  fs::path out;
  bool quiet = false;

  void emit(const std::string& command, const Json& report,
            const std::vector<std::string>& header,
            const std::vector<std::vector<std::string>>& rows,
            const std::string& summary) const {
    fs::create_directories(out);
    hl::write_csv((out / (command + ".csv")).string(), header, rows);
    hl::write_text((out / (command + ".json")).string(), report.dump(2) + "\n");
    hl::write_text((out / "summary.txt").string(), summary);
    if (!quiet) std::cout << summary;
  }
};

std::string fmt_complex(hl::Complex z) {
  return format_double(z.real()) + (z.imag() < 0 ? "-" : "+") +
         format_double(std::abs(z.imag())) + "i";
}

/// Column labels re_S_i_j, im_S_i_j in row-major block order.
void mat_columns(const std::string& tag, int n, std::vector<std::string>& header) {
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      header.push_back("re_" + tag + "_" + std::to_string(i) + "_" + std::to_string(j));
      header.push_back("im_" + tag + "_" + std::to_string(i) + "_" + std::to_string(j));
    }
}

void mat_cells(const hl::Mat& m, std::vector<std::string>& row) {
  for (long i = 0; i < m.rows(); ++i)
    for (long j = 0; j < m.cols(); ++j) {
      row.push_back(format_double(m(i, j).real()));
      row.push_back(format_double(m(i, j).imag()));
    }
}

void run_validate_bc(const RunContext& ctx) {
  const auto& bp = ctx.cfg.bc;
  const hl::ValidationReport rep = hl::validate_bc(bp.A, bp.B, ctx.cfg.tol);
  Json j{{"ok", rep.ok},
         {"n", bp.n},
         {"hermiticity_defect", rep.hermiticity_defect},
         {"min_eig", rep.min_eig}};
  std::vector<std::vector<std::string>> rows{
      {"hermiticity_defect", format_double(rep.hermiticity_defect)},
      {"min_eig", format_double(rep.min_eig)}};
  std::string summary = "validate-bc: n=" + std::to_string(bp.n) +
                        (rep.ok ? " valid" : " INVALID") +
                        " (hermiticity defect " + format_double(rep.hermiticity_defect) +
                        ", min eigenvalue " + format_double(rep.min_eig) + ")\n";
  ctx.emit("validate-bc", j, {"metric", "value"}, rows, summary);
}

void run_normal_form(const RunContext& ctx) {
  const hl::NormalForm nf = hl::normal_form(ctx.cfg.bc, ctx.cfg.tol);
  Json j{{"thetas", nf.thetas},
         {"n_M", nf.n_M},
         {"n_D", nf.n_D},
         {"n_N", nf.n_N},
         {"near_degenerate", nf.near_degenerate},
         {"min_gap", nf.min_gap},
         {"M", hl::mat_to_json(nf.M)}};
  std::vector<std::vector<std::string>> rows;
  for (size_t c = 0; c < nf.thetas.size(); ++c) {
    const int i = static_cast<int>(c);
    const char* type = i < nf.n_M ? "mixed" : (i < nf.n_M + nf.n_D ? "dirichlet" : "neumann");
    rows.push_back({std::to_string(i + 1), format_double(nf.thetas[c]), type});
  }
  std::string summary = "normal-form: n_M=" + std::to_string(nf.n_M) +
                        " n_D=" + std::to_string(nf.n_D) + " n_N=" + std::to_string(nf.n_N) +
                        (nf.near_degenerate ? " (near-degenerate clusters)" : "") + "\n";
  ctx.emit("normal-form", j, {"channel", "theta", "type"}, rows, summary);
}

hl::SMatrixSample smatrix_at(const RunContext& ctx, double k) {
  return ctx.cfg.potential.is_zero() ? hl::free_smatrix(ctx.cfg.bc, k, ctx.cfg.tol)
                                     : hl::scattering_matrix(ctx.cfg.potential, ctx.cfg.bc, k,
                                                             ctx.cfg.tol);
}

void run_smatrix(const RunContext& ctx) {
  const std::vector<double> ks = ctx.cfg.k_grid.materialize();
  std::vector<std::string> header{"k", "unitarity_defect"};
  mat_columns("S", ctx.cfg.bc.n, header);
  std::vector<std::vector<std::string>> rows;
  double worst = 0;
  for (double k : ks) {
    const hl::SMatrixSample s = smatrix_at(ctx, k);
    worst = std::max(worst, s.unitarity_defect);
    std::vector<std::string> row{format_double(k), format_double(s.unitarity_defect)};
    mat_cells(s.S, row);
    rows.push_back(std::move(row));
  }
  Json j{{"k_count", ks.size()}, {"max_unitarity_defect", worst}};
  std::string summary = "smatrix: " + std::to_string(ks.size()) +
                        " k-points, max unitarity defect " + format_double(worst) + "\n";
  ctx.emit("smatrix", j, header, rows, summary);
}

void run_bound_states(const RunContext& ctx) {
  const auto& kr = ctx.cfg.kappa_range;
  const auto states = hl::bound_states(ctx.cfg.potential, ctx.cfg.bc, kr.min, kr.max,
                                       ctx.cfg.tol, kr.count);
  Json list = Json::array();
  std::vector<std::vector<std::string>> rows;
  for (const auto& b : states) {
    list.push_back(Json{{"E", b.E}, {"kappa", b.kappa}, {"multiplicity", b.m}});
    rows.push_back({format_double(b.kappa), format_double(b.E), std::to_string(b.m)});
  }
  Json j{{"count", states.size()}, {"states", list}};
  std::string summary = "bound-states: " + std::to_string(states.size()) +
                        " state(s) in kappa range [" + format_double(kr.min) + ", " +
                        format_double(kr.max) + "]\n";
  for (const auto& b : states)
    summary += "  E = " + format_double(b.E) + " (multiplicity " + std::to_string(b.m) + ")\n";
  ctx.emit("bound-states", j, {"kappa", "E", "multiplicity"}, rows, summary);
}

void run_ssf(const RunContext& ctx) {
  const hl::SsfResult res = hl::ssf(ctx.cfg.potential, ctx.cfg.bc,
                                    ctx.cfg.e_grid.materialize(), ctx.cfg.tol);
  std::vector<std::vector<std::string>> rows;
  for (const auto& s : res.samples) rows.push_back({format_double(s.E), format_double(s.xi)});
  Json bound = Json::array();
  for (const auto& b : res.bound)
    bound.push_back(Json{{"E", b.E}, {"multiplicity", b.m}});
  Json j{{"n_D", res.n_D}, {"sample_count", res.samples.size()}, {"bound_states", bound}};
  std::string summary = "ssf: " + std::to_string(res.samples.size()) + " samples, " +
                        std::to_string(res.bound.size()) + " bound state(s), n_D=" +
                        std::to_string(res.n_D) + "\n";
  ctx.emit("ssf", j, {"E", "xi"}, rows, summary);
}

void run_levinson(const RunContext& ctx) {
  const hl::LevinsonReport rep = hl::levinson_check(ctx.cfg.potential, ctx.cfg.bc, ctx.cfg.tol);
  Json j{{"n", rep.n},      {"mu", rep.mu},        {"N", rep.N},
         {"xi0_plus", rep.xi0_plus}, {"defect", rep.defect}, {"S0", hl::mat_to_json(rep.S0)}};
  std::vector<std::vector<std::string>> rows{
      {"xi0_plus", format_double(rep.xi0_plus)},
      {"mu", std::to_string(rep.mu)},
      {"N", std::to_string(rep.N)},
      {"defect", format_double(rep.defect)}};
  std::string summary = "levinson: xi(0+) = " + format_double(rep.xi0_plus) + ", mu = " +
                        std::to_string(rep.mu) + ", N = " + std::to_string(rep.N) +
                        ", defect " + format_double(rep.defect) + "\n";
  ctx.emit("levinson", j, {"metric", "value"}, rows, summary);
}

hl::Complex z_from_config(const Json& raw) {
  if (!raw.contains("z")) return hl::Complex(-1.0, 0.0);
  const Json& z = raw["z"];
  if (z.is_number()) return hl::Complex(z.get<double>(), 0.0);
  if (z.is_array() && z.size() == 2)
    return hl::Complex(z[0].get<double>(), z[1].get<double>());
  throw hl::ConfigError("z must be a number or [re, im]");
}

void run_resolvent(const RunContext& ctx) {
  const hl::Complex z = z_from_config(ctx.cfg.raw);
  const int side = ctx.cfg.raw.value("side", 1);
  hl::RangeSpec xr{0.05, std::max(ctx.cfg.potential.support_end(), 5.0), 30, false};
  if (ctx.cfg.raw.contains("x_grid")) xr = hl::range_from_json(ctx.cfg.raw["x_grid"]);
  const std::vector<double> xs = xr.materialize();
  const hl::ResolventKernel ker =
      hl::resolvent_kernel(ctx.cfg.potential, ctx.cfg.bc, z, xs, side, ctx.cfg.tol);

  std::vector<std::string> header{"x", "y"};
  mat_columns("K", ctx.cfg.bc.n, header);
  std::vector<std::vector<std::string>> rows;
  for (size_t i = 0; i < xs.size(); ++i)
    for (size_t jcol = 0; jcol < xs.size(); ++jcol) {
      std::vector<std::string> row{format_double(xs[i]), format_double(xs[jcol])};
      mat_cells(ker.block(i, jcol), row);
      rows.push_back(std::move(row));
    }
  Json j{{"z", Json::array({z.real(), z.imag()})},
         {"side", side},
         {"grid_points", xs.size()},
         {"max_abs", ker.K.cwiseAbs().maxCoeff()}};
  std::string summary = "resolvent: kernel at z = " + fmt_complex(z) + " on " +
                        std::to_string(xs.size()) + " grid points\n";
  ctx.emit("resolvent", j, header, rows, summary);
}

void run_transforms_check(const RunContext& ctx) {
  std::vector<double> ks = ctx.cfg.k_grid.materialize();
  hl::RangeSpec xr{0.0, std::max(2.0 * ctx.cfg.potential.support_end(), 40.0), 801, false};
  if (ctx.cfg.raw.contains("x_grid")) xr = hl::range_from_json(ctx.cfg.raw["x_grid"]);
  const hl::TransformEngine engine(ctx.cfg.potential, ctx.cfg.bc, ks, xr.materialize(),
                                   ctx.cfg.tol);

  // Smooth k-side test function: one bump per channel, supported inside the grid.
  const double k0 = ks.front(), k1 = ks.back();
  hl::GridFunction phi;
  phi.grid = ks;
  phi.values = hl::Mat::Zero(ctx.cfg.bc.n, static_cast<long>(ks.size()));
  for (size_t jcol = 0; jcol < ks.size(); ++jcol) {
    const double t = (ks[jcol] - k0) / (k1 - k0);
    const double bump = t > 0 && t < 1 ? std::exp(-1.0 / (t * (1.0 - t))) : 0.0;
    for (int c = 0; c < ctx.cfg.bc.n; ++c) phi.values(c, static_cast<long>(jcol)) = bump;
  }
  const double defect = engine.scattering_operator_check(phi);

  std::vector<std::vector<std::string>> rows;
  double worst_unitarity = 0;
  for (size_t jcol = 0; jcol < ks.size(); ++jcol) {
    const auto& s = engine.smatrix()[jcol];
    worst_unitarity = std::max(worst_unitarity, s.unitarity_defect);
    rows.push_back({format_double(s.k), format_double(s.unitarity_defect)});
  }
  Json j{{"scattering_operator_defect", defect},
         {"max_unitarity_defect", worst_unitarity},
         {"k_count", ks.size()},
         {"x_count", engine.x_grid().size()}};
  std::string summary = "transforms-check: scattering operator defect " + format_double(defect) +
                        ", max unitarity defect " + format_double(worst_unitarity) + "\n";
  ctx.emit("transforms-check", j, {"k", "unitarity_defect"}, rows, summary);
}

void run_trace_check(const RunContext& ctx) {
  const double c = ctx.cfg.raw.value("c", 1.0);
  const double h = ctx.cfg.raw.value("h", 1e-3);
  const double x_max = ctx.cfg.raw.value("x_max", 200.0);
  const hl::TraceReport rep =
      hl::trace_formula_check(ctx.cfg.potential, ctx.cfg.bc, c, h, x_max, ctx.cfg.tol);
  Json j{{"lhs", rep.lhs}, {"rhs", rep.rhs}, {"defect", rep.defect},
         {"c", c},         {"h", h},         {"x_max", x_max}};
  std::vector<std::vector<std::string>> rows{{"lhs", format_double(rep.lhs)},
                                             {"rhs", format_double(rep.rhs)},
                                             {"defect", format_double(rep.defect)}};
  std::string summary = "trace-check: lhs " + format_double(rep.lhs) + ", rhs " +
                        format_double(rep.rhs) + ", relative defect " +
                        format_double(rep.defect) + "\n";
  ctx.emit("trace-check", j, {"metric", "value"}, rows, summary);
}

void run_asymptotics(const RunContext& ctx) {
  const hl::HighEnergyModel model =
      hl::high_energy_model(ctx.cfg.potential, ctx.cfg.bc, ctx.cfg.tol);
  // The scenario k_grid is the sweep window for smatrix and friends; the
  // slope fit needs the asymptotic regime, so it has its own key.
  hl::RangeSpec kr{20.0, 200.0, 25, true};
  if (ctx.cfg.raw.contains("asymptotics_k_grid"))
    kr = hl::range_from_json(ctx.cfg.raw.at("asymptotics_k_grid"));
  const std::vector<double> ks = kr.materialize();

  std::vector<std::vector<std::string>> rows;
  std::vector<double> lx, ly;
  for (double k : ks) {
    const hl::Mat S = smatrix_at(ctx, k).S;
    const double r_model = (S - model.eval(k)).norm();
    const double r_inf = (S - model.S_inf).norm();
    rows.push_back({format_double(k), format_double(r_model), format_double(r_inf)});
    if (r_model > 0) {
      lx.push_back(std::log(k));
      ly.push_back(std::log(r_model));
    }
  }
  // Least-squares slope of log ||S - model|| against log k.
  double slope = 0;
  if (lx.size() >= 2) {
    double mx = 0, my = 0;
    for (size_t i = 0; i < lx.size(); ++i) {
      mx += lx[i];
      my += ly[i];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(lx.size());
    double num = 0, den = 0;
    for (size_t i = 0; i < lx.size(); ++i) {
      num += (lx[i] - mx) * (ly[i] - my);
      den += (lx[i] - mx) * (lx[i] - mx);
    }
    slope = num / den;
  }
  Json j{{"slope", slope}, {"k_count", ks.size()}, {"S_inf", hl::mat_to_json(model.S_inf)}};
  std::string summary =
      "asymptotics: residual decay slope " + format_double(slope) + " over k in [" +
      format_double(ks.front()) + ", " + format_double(ks.back()) + "]\n";
  ctx.emit("asymptotics", j, {"k", "model_residual", "s_inf_residual"}, rows, summary);
}

void write_error_report(const fs::path& out, const std::string& command,
                        const std::string& name, const std::string& what) {
  Json j{{"error", name}, {"message", what}, {"command", command}};
  std::error_code ec;
  fs::create_directories(out, ec);
  if (!ec) hl::write_text((out / (command + ".json")).string(), j.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Half-line matrix Schrödinger scattering toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand name

  std::string config_path, out_dir = ".";
  std::vector<std::string> overrides;
  int threads = 0;
  bool quiet = false;
  app.add_option("--config", config_path, "Scenario config (JSON)")->required();
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--set", overrides, "Dotted-path config override key.path=value");
  app.add_option("--threads", threads, "Dense linear algebra threads (0 = library default)");
  app.add_flag("--quiet", quiet, "Suppress the summary on stdout");

  const std::vector<std::pair<std::string, std::function<void(const RunContext&)>>> commands{
      {"validate-bc", run_validate_bc},   {"normal-form", run_normal_form},
      {"smatrix", run_smatrix},           {"bound-states", run_bound_states},
      {"ssf", run_ssf},                   {"levinson", run_levinson},
      {"resolvent", run_resolvent},       {"transforms-check", run_transforms_check},
      {"trace-check", run_trace_check},   {"asymptotics", run_asymptotics}};
  for (const auto& [name, fn] : commands) app.add_subcommand(name);

  CLI11_PARSE(app, argc, argv);
  if (threads > 0) Eigen::setNbThreads(threads);

  const std::string command = app.get_subcommands().front()->get_name();
  const auto it = std::find_if(commands.begin(), commands.end(),
                               [&](const auto& c) { return c.first == command; });

  RunContext ctx;
  ctx.out = out_dir;
  ctx.quiet = quiet;
  try {
    ctx.cfg = hl::parse_scenario(hl::read_file(config_path), overrides);
  } catch (const hl::Error& e) {
    write_error_report(ctx.out, command, e.name(), e.what());
    std::cerr << e.what() << "\n";
    return 2;
  }
  try {
    it->second(ctx);
  } catch (const hl::ConfigError& e) {
    write_error_report(ctx.out, command, e.name(), e.what());
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const hl::Error& e) {
    write_error_report(ctx.out, command, e.name(), e.what());
    std::cerr << e.what() << "\n";
    return 3;
  }
  return 0;
}
