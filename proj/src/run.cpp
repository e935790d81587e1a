#include <cdl/run.hpp>

#include <cdl/config.hpp>
#include <cdl/dae.hpp>
#include <cdl/energies.hpp>
#include <cdl/registry.hpp>
#include <cdl/report.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>

namespace cdl {

namespace {

struct RunArgs {
  std::string scenario;
  bool custom = false;
  std::string config;
  std::optional<std::size_t> n_cells;
  std::optional<std::uint64_t> seed;
  std::vector<double> eps;
  std::optional<double> gamma;
  std::string out = ".";
  bool json = false;
  std::optional<double> tol_dual;
  std::optional<double> tol_crit;
  std::optional<std::size_t> n_random;

  std::string evaluate = "report";
  std::optional<double> v_const;
  std::optional<double> zeta_const;
  std::string zeta_branch;
  std::optional<double> mu, nu, alpha;
  std::optional<double> beta_const;
  std::optional<double> sigma1;
};

void write_outputs(const Json& report, const std::optional<Grid>& grid,
                   const std::vector<Column>& columns, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const auto base = std::filesystem::path(dir);
  std::ofstream js(base / "report.json", std::ios::binary);
  if (!js) throw ConfigError("cannot write to output directory '" + dir + "'");
  js << report.dump(2) << '\n';
  if (grid && !columns.empty()) {
    std::ofstream csv(base / "fields.csv", std::ios::binary);
    write_csv(csv, *grid, columns);
  }
}

Tolerances tolerances(const RunArgs& a) {
  Tolerances t;
  if (a.tol_dual) t.tol_dual = *a.tol_dual;
  if (a.tol_crit) t.tol_crit = *a.tol_crit;
  return t;
}

int do_list(bool as_json, std::ostream& out) {
  const auto& reg = scenario_registry();
  if (as_json) {
    Json arr = Json::array();
    for (const auto& s : reg)
      arr.push_back(Json{{"name", s.name}, {"description", s.description}, {"anchor", s.anchor}});
    out << Json{{"schema", kSchema}, {"scenarios", arr}}.dump(2) << '\n';
    return 0;
  }
  std::size_t w = 0;
  for (const auto& s : reg) w = std::max(w, s.name.size());
  for (const auto& s : reg)
    out << std::left << std::setw(static_cast<int>(w) + 2) << s.name << s.description << "  ["
        << s.anchor << "]\n";
  return 0;
}

int do_scenario(const RunArgs& a, std::ostream& out) {
  ScenarioOptions o;
  if (!a.config.empty()) {
    const auto cfg = load_config(a.config);
    if (cfg.mu || cfg.nu || cfg.alpha) {
      if (!(cfg.mu && cfg.nu && cfg.alpha))
        throw ConfigError("config must give all of mu, nu and alpha or none of them");
      o.params = MaterialParams(*cfg.mu, *cfg.nu, *cfg.alpha);
    }
    o.load = cfg.load;
    o.n_cells = cfg.n_cells;
    if (cfg.seed) o.seed = *cfg.seed;
  }
  if (a.n_cells) o.n_cells = a.n_cells;
  if (a.seed) o.seed = *a.seed;
  o.eps = a.eps;
  o.gamma = a.gamma;
  o.tol = tolerances(a);
  o.n_random = a.n_random;

  const auto report = run_scenario(a.scenario, o);
  const Json j = to_json(report);
  write_outputs(j, report.grid, report.columns, a.out);
  if (a.json) {
    out << j.dump(2) << '\n';
  } else {
    std::size_t matched = 0;
    for (const auto& c : report.claims) matched += c.matched() ? 1 : 0;
    out << report.name << ": " << matched << '/' << report.claims.size() << " claims matched\n";
    for (const auto& c : report.claims)
      out << "  [" << (c.matched() ? "ok" : "MISMATCH") << "] " << c.id << ": observed "
          << to_string(c.observed) << ", expected " << to_string(c.expected) << '\n';
  }
  return report.all_matched() ? 0 : 2;
}

int do_custom(const RunArgs& a, std::ostream& out) {
  ConfigFile cfg;
  if (!a.config.empty()) cfg = load_config(a.config);
  const auto mu = a.mu ? a.mu : cfg.mu;
  const auto nu = a.nu ? a.nu : cfg.nu;
  const auto alpha = a.alpha ? a.alpha : cfg.alpha;
  if (!(mu && nu && alpha)) throw ConfigError("custom runs need --mu, --nu and --alpha (or a config)");
  const MaterialParams params(*mu, *nu, *alpha);

  LoadSpec load = LoadSpec::uniform(params.mu() * params.alpha());
  if (a.beta_const && a.sigma1) throw ConfigError("give at most one of --beta-const and --sigma1");
  if (a.beta_const)
    load = LoadSpec::uniform(params.mu() * params.alpha() + *a.beta_const);
  else if (a.sigma1)
    load = LoadSpec::uniform(*a.sigma1);
  else if (cfg.load)
    load = *cfg.load;

  const std::size_t n = a.n_cells.value_or(cfg.n_cells.value_or(1000));
  const Grid grid(n);
  const Tolerances tol = tolerances(a);
  const Field sigma = compute_sigma(load, grid);
  const Field beta = compute_beta(sigma, params);

  if (a.zeta_const && !a.zeta_branch.empty())
    throw ConfigError("give at most one of --zeta-const and --zeta-branch");
  std::optional<Field> zeta;
  if (a.zeta_const) zeta = Field::constant(grid, FieldRole::dual_stress, *a.zeta_const);
  if (!a.zeta_branch.empty()) {
    try {
      zeta = branch_field(beta, branch_from_string(a.zeta_branch), params);
    } catch (const NoRealRoot& e) {
      throw ConfigError(e.what());
    }
  }
  std::optional<Field> v;
  if (a.v_const)
    v = Field::constant(grid, FieldRole::strain, *a.v_const);
  else if (zeta && a.evaluate != "dual")
    v = v_from_zeta(*zeta, sigma, beta, params, 0.0, tol);
  else if (!zeta)
    v = Field::constant(grid, FieldRole::strain, 0.0);
  if (!zeta) zeta = zeta_from_v(*v, params);

  Json j;
  j["schema"] = kSchema;
  j["kind"] = "evaluation";
  j["parameters"] = to_json(params);
  j["parameters"]["n_cells"] = n;
  j["evaluate"] = a.evaluate;
  if (a.evaluate == "primal")
    j["value"] = primal_energy(*v, sigma, params);
  else if (a.evaluate == "xi")
    j["value"] = xi_energy(*v, *zeta, sigma, params);
  else if (a.evaluate == "dual")
    j["value"] = to_json(dual_energy(*zeta, sigma, beta, params, tol));
  else
    j["value"] = to_json(energy_report(*v, *zeta, sigma, beta, params, tol));

  // the dual needs no strain, and none exists where zeta = -mu meets beta != 0
  std::vector<Column> cols{{"sigma", {sigma.values().begin(), sigma.values().end()}},
                           {"beta", {beta.values().begin(), beta.values().end()}},
                           {"zeta", {zeta->values().begin(), zeta->values().end()}}};
  if (v) cols.push_back({"v", {v->values().begin(), v->values().end()}});
  write_outputs(j, grid, cols, a.out);
  if (a.json) {
    out << j.dump(2) << '\n';
  } else {
    out << a.evaluate << ": " << j["value"].dump() << '\n';
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Energy functionals and duality checks for the 1-D phase-transition bar", "cdl"};
  app.require_subcommand(1);

  bool list_json = false;
  auto* list = app.add_subcommand("list", "List the compiled-in scenarios");
  list->add_flag("--json", list_json, "Machine-readable output");

  RunArgs a;
  auto* run = app.add_subcommand("run", "Run a named scenario or a custom evaluation");
  auto* scen = run->add_option("--scenario", a.scenario, "Scenario name (see 'cdl list')");
  auto* custom = run->add_flag("--custom", a.custom, "Evaluate energies for constant fields");
  scen->excludes(custom);
  run->add_option("--config", a.config, "JSON config with parameters and load");
  run->add_option("--n-cells", a.n_cells, "Number of grid cells")->check(CLI::PositiveNumber);
  run->add_option("--seed", a.seed, "Random seed");
  run->add_option("--eps", a.eps, "Perturbation or approach parameters");
  run->add_option("--gamma", a.gamma, "Slope of the zeta_n family");
  run->add_option("--n-random", a.n_random, "Random draws for global-min-3.9");
  run->add_option("--out", a.out, "Output directory for report.json and fields.csv");
  run->add_flag("--json", a.json, "Print the report as JSON");
  run->add_option("--tol-dual", a.tol_dual, "Relative duality tolerance");
  run->add_option("--tol-crit", a.tol_crit, "Critical-pair residual tolerance");
  run->add_option("--evaluate", a.evaluate, "Custom mode quantity")
      ->check(CLI::IsMember({"primal", "xi", "dual", "report"}));
  run->add_option("--v-const", a.v_const, "Constant strain field");
  run->add_option("--zeta-const", a.zeta_const, "Constant dual stress field");
  run->add_option("--zeta-branch", a.zeta_branch, "Dual stress from a DAE branch")
      ->check(CLI::IsMember({"B1", "B2", "B3"}));
  run->add_option("--mu", a.mu, "Material constant mu");
  run->add_option("--nu", a.nu, "Material constant nu");
  run->add_option("--alpha", a.alpha, "Material constant alpha");
  run->add_option("--beta-const", a.beta_const, "Constant beta (sets sigma = mu alpha + beta)");
  run->add_option("--sigma1", a.sigma1, "Constant sigma");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (list->parsed()) return do_list(list_json, out);
    if (a.custom) return do_custom(a, out);
    if (a.scenario.empty()) {
      err << "error: run needs --scenario NAME or --custom\n";
      return 1;
    }
    return do_scenario(a, out);
  } catch (const UnknownScenario& e) {
    err << "error: " << e.what() << '\n';
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
  }
  return 1;
}

}  // namespace cdl
