#include <cdl/report.hpp>

#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace cdl {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::confirmed: return "confirmed";
    case Verdict::refuted: return "refuted";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

bool ScenarioReport::all_matched() const {
  for (const auto& c : claims)
    if (!c.matched()) return false;
  return !claims.empty();
}

const Claim* ScenarioReport::find(const std::string& id) const {
  for (const auto& c : claims)
    if (c.id == id) return &c;
  return nullptr;
}

Json to_json(const MaterialParams& p) {
  return Json{{"mu", p.mu()}, {"nu", p.nu()}, {"alpha", p.alpha()}, {"rho", p.rho()},
              {"eta", p.eta()}};
}

Json to_json(const DualValue& d) {
  if (d.divergent) return "divergent";
  return d.value;
}

Json to_json(const EnergyReport& r) {
  Json j;
  j["primal"] = r.primal;
  j["xi"] = r.xi;
  j["dual"] = to_json(r.dual);
  if (r.dual.divergent) {
    j["gap"] = nullptr;
    j["first_ill_posed_cell"] = *r.dual.first_ill_posed;
  } else {
    j["gap"] = r.gap;
  }
  j["grad_norm"] = r.grad_norm;
  j["second_variation_coeff_min"] = r.second_variation_coeff_min;
  j["critical_pair"] = r.critical;
  return j;
}

Json to_json(const Claim& c) {
  return Json{{"id", c.id},
              {"anchor", c.anchor},
              {"statement", c.statement},
              {"expected", to_string(c.expected)},
              {"observed", to_string(c.observed)},
              {"matched", c.matched()},
              {"evidence", c.evidence}};
}

Json to_json(const ScenarioReport& r) {
  Json j;
  j["schema"] = kSchema;
  j["kind"] = "scenario";
  j["scenario"] = r.name;
  j["parameters"] = r.parameters;
  j["all_matched"] = r.all_matched();
  Json claims = Json::array();
  for (const auto& c : r.claims) claims.push_back(to_json(c));
  j["claims"] = std::move(claims);
  Json energies = Json::object();
  for (const auto& [name, e] : r.energies) energies[name] = to_json(e);
  j["energies"] = std::move(energies);
  j["tables"] = r.tables;
  j["notes"] = r.notes;
  return j;
}

void write_csv(std::ostream& os, const Grid& grid, const std::vector<Column>& columns) {
  for (const auto& c : columns) {
    if (c.values.size() != grid.n_cells())
      throw std::invalid_argument("CSV column '" + c.name + "' does not match the grid");
  }
  os << "x";
  for (const auto& c : columns) os << ',' << c.name;
  os << "\r\n";
  std::ostringstream cell;
  cell << std::setprecision(17);
  for (std::size_t i = 0; i < grid.n_cells(); ++i) {
    cell.str("");
    cell << grid.midpoint(i);
    for (const auto& c : columns) cell << ',' << c.values[i];
    os << cell.str() << "\r\n";
  }
}

LogFit fit_log_growth(const std::vector<double>& n, const std::vector<double>& y) {
  if (n.size() != y.size() || n.size() < 2)
    throw std::invalid_argument("log fit needs at least two paired samples");
  const auto m = static_cast<double>(n.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    sx += std::log(n[i]);
    sy += y[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double dx = std::log(n[i]) - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  LogFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 0.0;
  return f;
}

}  // namespace cdl
