#include "spinhall/cli.hpp"

#include "spinhall/checks.hpp"
#include "spinhall/io.hpp"
#include "spinhall/parallel.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace spinhall::cli {

using nlohmann::json;

namespace {

Model parse_model(const std::string& s) {
  if (s == "km-so") return Model::KM_SO;
  if (s == "km-rashba") return Model::KM_Rashba;
  throw MalformedConfig("unknown model '" + s + "' (expected km-so | km-rashba)");
}

Basis parse_basis(const std::string& s) {
  if (s == "fw") return Basis::FW;
  if (s == "phi") return Basis::Phi;
  if (s == "psi") return Basis::Psi;
  throw MalformedConfig("unknown basis '" + s + "' (expected fw | phi | psi)");
}

json config_json(const RunConfig& cfg) {
  json j;
  j["model"] = to_string(cfg.model);
  j["basis"] = to_string(cfg.basis);
  j["v_f"] = cfg.params.v_f;
  j["delta_so"] = cfg.params.delta_so;
  j["lambda_r"] = cfg.params.lambda_r;
  j["hbar"] = cfg.params.hbar;
  j["charge"] = cfg.params.charge;
  j["e_field"] = {cfg.params.e_field.x(), cfg.params.e_field.y()};
  j["b_field"] = cfg.params.b_field;
  if (cfg.params.fermi_energy) j["fermi_energy"] = *cfg.params.fermi_energy;
  j["grid"] = {{"p_max", cfg.grid.p_max}, {"points_per_axis", cfg.grid.points_per_axis}};
  j["quad"] = {{"p_min", cfg.quad.p_min},
               {"p_max", cfg.quad.p_max},
               {"tolerance", cfg.quad.tolerance}};
  j["allow_out_of_regime"] = cfg.allow_out_of_regime;
  j["regime"] = {{"delta_gt_2lambda", cfg.params.spin_hall_regime()},
                 {"delta_gt_lambda", cfg.params.weak_regime()}};
  return j;
}

json convention_json() {
  const ConventionRecord c;
  return json{{"orientation", c.orientation}, {"epsilon", c.epsilon}, {"note", c.note}};
}

struct Sink {
  std::ostream* out;
  std::ofstream file;
  explicit Sink(const std::string& path) {
    if (path == "-" || path.empty()) {
      out = &std::cout;
    } else {
      file.open(path);
      if (!file) throw MalformedConfig("cannot open output path '" + path + "'");
      out = &file;
    }
  }
};

void write_csv_header(std::ostream& os, const RunConfig& cfg,
                      const std::string& columns) {
  os << "# config = " << config_json(cfg).dump() << "\n";
  os << "# convention = " << convention_json().dump() << "\n";
  os << columns << "\n";
}

std::vector<double> grid_axis(const GridConfig& g) {
  std::vector<double> xs(static_cast<std::size_t>(g.points_per_axis));
  const int n = g.points_per_axis;
  for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] = -g.p_max + 2.0 * g.p_max * i / (n - 1);
  return xs;
}

int cmd_spectrum(const RunConfig& cfg) {
  Sink sink(cfg.output.path);
  write_csv_header(*sink.out, cfg, "px,py,E1,E2,E3,E4");
  const auto xs = grid_axis(cfg.grid);
  const std::size_t n = xs.size();
  std::vector<std::string> rows(n * n);
  parallel_for(n, [&](std::size_t ix) {
    for (std::size_t iy = 0; iy < n; ++iy) {
      const Vec2 p(xs[ix], xs[iy]);
      const auto e = analytic_spectrum(cfg.params, p).energies;
      std::string row = format_double(p.x()) + "," + format_double(p.y());
      for (int k = 0; k < 4; ++k) row += "," + format_double(e(k));
      rows[ix * n + iy] = std::move(row);
    }
  });
  for (const auto& r : rows) *sink.out << r << "\n";
  return 0;
}

int cmd_curvature(const RunConfig& cfg) {
  Sink sink(cfg.output.path);
  write_csv_header(*sink.out, cfg, "px,py,G_up_K,G_down_K,G_up_Kp,G_down_Kp");
  const auto xs = grid_axis(cfg.grid);
  const std::size_t n = xs.size();
  std::vector<std::string> rows(n * n);
  parallel_for(n, [&](std::size_t ix) {
    for (std::size_t iy = 0; iy < n; ++iy) {
      const Vec2 p(xs[ix], xs[iy]);
      std::string row = format_double(p.x()) + "," + format_double(p.y());
      if (p.norm() <= kMomentumOriginGuard) {
        row += ",nan,nan,nan,nan";
      } else {
        for (const auto& sector : kAllSectors) {
          const auto curv = sector_curvature(cfg.params, cfg.model, cfg.basis, sector);
          row += "," + format_double(curv(p));
        }
      }
      rows[ix * n + iy] = std::move(row);
    }
  });
  for (const auto& r : rows) *sink.out << r << "\n";
  return 0;
}

json report_json(const RunConfig& cfg, const TopologyReport& rep) {
  json sectors, raw;
  for (const auto& [sector, value] : rep.sector_chern) sectors[sector.name()] = value;
  for (const auto& [sector, value] : rep.raw_sector_chern) raw[sector.name()] = value;
  json j;
  j["sector_chern"] = sectors;
  j["raw_sector_chern"] = raw;
  j["chern_up"] = rep.chern_up;
  j["chern_down"] = rep.chern_down;
  j["spin_chern"] = rep.spin_chern;
  j["spin_chern_per_valley"] = {{"K", rep.spin_chern_K}, {"Kp", rep.spin_chern_Kp}};
  j["sigma_sh_units_e_over_2pi"] = rep.sigma_sh;
  if (rep.sigma_ah) j["sigma_ah_units_e2_over_2pi_hbar"] = *rep.sigma_ah;
  j["quadrature_error"] = rep.quadrature_error;
  j["convention"] = convention_json();
  j["convention"]["raw_spin_chern"] = rep.convention.raw_spin_chern;
  j["config"] = config_json(cfg);
  return j;
}

int cmd_report(const RunConfig& cfg) {
  Distribution dist;
  if (cfg.params.fermi_energy) {
    dist.kind = Distribution::Kind::FermiZeroT;
    dist.fermi_energy = *cfg.params.fermi_energy;
  }
  const auto rep = spin_hall_conductivity(cfg.params, cfg.model, cfg.basis, dist, cfg.quad);
  Sink sink(cfg.output.path);
  *sink.out << report_json(cfg, rep).dump(2) << "\n";
  return 0;
}

int cmd_trajectory(const RunConfig& cfg, const BandSpec& band, const Vec2& x0,
                   const Vec2& p0, double t_end, double tol) {
  const auto traj = integrate_trajectory(cfg.params, band, x0, p0, t_end, tol);
  Sink sink(cfg.output.path);
  write_csv_header(*sink.out, cfg, "t,x1,x2,p1,p2");
  for (const auto& s : traj.samples)
    *sink.out << format_double(s.t) << "," << format_double(s.x.x()) << ","
              << format_double(s.x.y()) << "," << format_double(s.p.x()) << ","
              << format_double(s.p.y()) << "\n";
  return 0;
}

int cmd_check() {
  const auto results = checks::run_all();
  bool all = true;
  for (const auto& r : results) {
    std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail
              << "\n";
    all = all && r.passed;
  }
  std::cout << (all ? "all invariants hold" : "invariant failures detected") << "\n";
  return all ? 0 : 3;
}

}  // namespace

void RunConfig::validate() const {
  try {
    params.validate();
  } catch (const std::exception& ex) {
    throw MalformedConfig(ex.what());
  }
  if (grid.points_per_axis < 3 || grid.points_per_axis % 2 == 0)
    throw MalformedConfig("grid.points_per_axis must be odd and >= 3");
  if (!(grid.p_max > 0.0)) throw MalformedConfig("grid.p_max must be > 0");
  if (!(quad.p_min > 0.0)) throw MalformedConfig("quad.p_min must be > 0");
  if (quad.p_max != 0.0 && quad.p_max <= quad.p_min)
    throw MalformedConfig("quad.p_max must exceed quad.p_min (or 0 for auto)");
  if (output.format != "csv" && output.format != "json")
    throw MalformedConfig("output.format must be csv or json");
  if (!allow_out_of_regime && !params.spin_hall_regime())
    throw RegimeViolation(
        "delta_so <= 2 lambda_r: outside the gapped spin Hall regime (pass "
        "--allow-out-of-regime to proceed)");
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedConfig("cannot read config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& ex) {
    throw MalformedConfig("config parse error in '" + path + "': " + ex.what());
  }

  RunConfig cfg;
  try {
    if (j.contains("model")) cfg.model = parse_model(j.at("model").get<std::string>());
    if (j.contains("basis")) {
      cfg.basis = parse_basis(j.at("basis").get<std::string>());
      cfg.basis_set = true;
    }
    auto num = [&](const char* key, double& slot) {
      if (j.contains(key)) slot = j.at(key).get<double>();
    };
    num("v_f", cfg.params.v_f);
    num("delta_so", cfg.params.delta_so);
    num("lambda_r", cfg.params.lambda_r);
    num("hbar", cfg.params.hbar);
    num("charge", cfg.params.charge);
    num("b_field", cfg.params.b_field);
    if (j.contains("fermi_energy") && !j.at("fermi_energy").is_null())
      cfg.params.fermi_energy = j.at("fermi_energy").get<double>();
    if (j.contains("e_field")) {
      const auto& e = j.at("e_field");
      if (!e.is_array() || e.size() != 2)
        throw MalformedConfig("e_field must be a 2-element array");
      cfg.params.e_field = Vec2(e[0].get<double>(), e[1].get<double>());
    }
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      if (g.contains("p_max")) cfg.grid.p_max = g.at("p_max").get<double>();
      if (g.contains("points_per_axis"))
        cfg.grid.points_per_axis = g.at("points_per_axis").get<int>();
    }
    if (j.contains("quad")) {
      const auto& q = j.at("quad");
      if (q.contains("p_min")) cfg.quad.p_min = q.at("p_min").get<double>();
      if (q.contains("p_max")) cfg.quad.p_max = q.at("p_max").get<double>();
      if (q.contains("tolerance")) cfg.quad.tolerance = q.at("tolerance").get<double>();
    }
    if (j.contains("output")) {
      const auto& o = j.at("output");
      if (o.contains("path")) cfg.output.path = o.at("path").get<std::string>();
      if (o.contains("format")) cfg.output.format = o.at("format").get<std::string>();
    }
  } catch (const json::exception& ex) {
    throw MalformedConfig("config field error in '" + path + "': " + ex.what());
  }
  return cfg;
}

int run_command(const std::vector<std::string>& argv) {
  CLI::App app{"spinhall: semiclassical spin Hall toolkit for Kane-Mele-type "
               "Dirac systems"};
  app.require_subcommand(1);

  std::string config_path, model_str, basis_str, output_path, format_str;
  double delta_so = -1, lambda_r = -1, v_f = -1, hbar = -1, charge = -1, b_field = 0;
  bool b_field_set = false;
  std::vector<double> e_field;
  double grid_pmax = -1, quad_pmin = -1, quad_pmax = -1, quad_tol = -1, fermi = 0;
  bool fermi_set = false;
  int grid_points = -1;
  bool allow_oor = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--model", model_str, "km-so | km-rashba");
    sub->add_option("--basis", basis_str, "fw | phi | psi");
    sub->add_option("--delta-so", delta_so, "intrinsic spin-orbit gap");
    sub->add_option("--lambda-r", lambda_r, "Rashba coupling");
    sub->add_option("--v-f", v_f, "Fermi velocity");
    sub->add_option("--hbar", hbar, "hbar");
    sub->add_option("--charge", charge, "electron charge e");
    sub->add_option("--b-field", b_field, "out-of-plane magnetic field")
        ->each([&](const std::string&) { b_field_set = true; });
    sub->add_option("--e-field", e_field, "in-plane electric field (two values)")
        ->expected(2);
    sub->add_option("--fermi-energy", fermi, "Fermi energy for theta(E_F - E) cuts")
        ->each([&](const std::string&) { fermi_set = true; });
    sub->add_option("--grid-pmax", grid_pmax, "grid half-width");
    sub->add_option("--grid-points", grid_points, "grid points per axis (odd)");
    sub->add_option("--quad-pmin", quad_pmin, "radial quadrature inner cutoff");
    sub->add_option("--quad-pmax", quad_pmax, "radial quadrature outer cutoff (0 = auto)");
    sub->add_option("--quad-tol", quad_tol, "quadrature tolerance budget");
    sub->add_option("--output,-o", output_path, "output path ('-' = stdout)");
    sub->add_option("--format", format_str, "csv | json");
    sub->add_flag("--allow-out-of-regime", allow_oor,
                  "proceed outside delta_so > 2 lambda_r");
  };

  auto* sc_spectrum = app.add_subcommand("spectrum", "band energies over a grid (CSV)");
  auto* sc_curv = app.add_subcommand("curvature", "per-sector curvature grid (CSV)");
  auto* sc_chern = app.add_subcommand("chern", "sector Chern numbers (JSON report)");
  auto* sc_cond = app.add_subcommand("conductivity", "spin Hall conductivity (JSON report)");
  auto* sc_traj = app.add_subcommand("trajectory", "band-diagonal trajectory (CSV)");
  auto* sc_check = app.add_subcommand("check", "run the built-in invariant suite");
  for (auto* sub : {sc_spectrum, sc_curv, sc_chern, sc_cond, sc_traj}) add_common(sub);

  std::string traj_band = "up", traj_valley = "K";
  std::vector<double> traj_x0{0.0, 0.0}, traj_p0{0.5, 0.0};
  double traj_t = 10.0, traj_tol = 1e-8;
  sc_traj->add_option("--band", traj_band, "up | down");
  sc_traj->add_option("--valley", traj_valley, "K | Kp");
  sc_traj->add_option("--x0", traj_x0, "initial position")->expected(2);
  sc_traj->add_option("--p0", traj_p0, "initial momentum")->expected(2);
  sc_traj->add_option("--t-end", traj_t, "integration time");
  sc_traj->add_option("--tol", traj_tol, "local error tolerance");

  std::vector<const char*> cargs;
  cargs.reserve(argv.size() + 1);
  cargs.push_back("spinhall");
  for (const auto& a : argv) cargs.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints usage, exit 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sc_check->parsed()) return cmd_check();

    RunConfig cfg;
    if (!config_path.empty()) cfg = load_config(config_path);
    // flags override file values
    if (!model_str.empty()) cfg.model = parse_model(model_str);
    if (!basis_str.empty()) {
      cfg.basis = parse_basis(basis_str);
      cfg.basis_set = true;
    }
    if (delta_so >= 0) cfg.params.delta_so = delta_so;
    if (lambda_r >= 0) cfg.params.lambda_r = lambda_r;
    if (v_f > 0) cfg.params.v_f = v_f;
    if (hbar > 0) cfg.params.hbar = hbar;
    if (charge > 0) cfg.params.charge = charge;
    if (b_field_set) cfg.params.b_field = b_field;
    if (e_field.size() == 2) cfg.params.e_field = Vec2(e_field[0], e_field[1]);
    if (fermi_set) cfg.params.fermi_energy = fermi;
    if (grid_pmax > 0) cfg.grid.p_max = grid_pmax;
    if (grid_points > 0) cfg.grid.points_per_axis = grid_points;
    if (quad_pmin > 0) cfg.quad.p_min = quad_pmin;
    if (quad_pmax >= 0) cfg.quad.p_max = quad_pmax;
    if (quad_tol > 0) cfg.quad.tolerance = quad_tol;
    if (!output_path.empty()) cfg.output.path = output_path;
    if (!format_str.empty()) cfg.output.format = format_str;
    cfg.allow_out_of_regime = cfg.allow_out_of_regime || allow_oor;
    if (!cfg.basis_set)
      cfg.basis = cfg.model == Model::KM_SO ? Basis::FW : Basis::Psi;
    cfg.validate();

    if (sc_spectrum->parsed()) return cmd_spectrum(cfg);
    if (sc_curv->parsed()) return cmd_curvature(cfg);
    if (sc_chern->parsed() || sc_cond->parsed()) return cmd_report(cfg);
    if (sc_traj->parsed()) {
      BandSpec band;
      band.model = cfg.model;
      band.basis = cfg.model == Model::KM_SO ? Basis::FW : Basis::Psi;
      band.valley = traj_valley == "Kp" ? Valley::Kp : Valley::K;
      band.spin = traj_band == "down" ? Spin::Down : Spin::Up;
      return cmd_trajectory(cfg, band, Vec2(traj_x0[0], traj_x0[1]),
                            Vec2(traj_p0[0], traj_p0[1]), traj_t, traj_tol);
    }
    std::cerr << "no subcommand executed\n";
    return 2;
  } catch (const MalformedConfig& ex) {
    std::cerr << "config error: " << ex.what() << "\n";
    return 2;
  } catch (const RegimeViolation& ex) {
    std::cerr << "config error: " << ex.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& ex) {
    std::cerr << "config error: " << ex.what() << "\n";
    return 2;
  } catch (const std::exception& ex) {
    std::cerr << "numerical failure: " << ex.what() << "\n";
    return 3;
  }
}

}  // namespace spinhall::cli
