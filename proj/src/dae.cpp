#include <cdl/dae.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace cdl {

std::string to_string(Branch b) {
  switch (b) {
    case Branch::B1: return "B1";
    case Branch::B2: return "B2";
    case Branch::B3: return "B3";
  }
  return "?";
}

Branch branch_from_string(const std::string& name) {
  if (name == "B1" || name == "1") return Branch::B1;
  if (name == "B2" || name == "2") return Branch::B2;
  if (name == "B3" || name == "3") return Branch::B3;
  throw std::invalid_argument("unknown branch '" + name + "' (expected B1, B2 or B3)");
}

double g_eval(double s, const MaterialParams& params) {
  const double t = params.mu() + s;
  // factored through the floor so both double roots evaluate to exact zeros
  return 2.0 / params.nu() * (s - params.zeta_floor()) * t * t;
}

double g_prime(double s, const MaterialParams& params) {
  return 6.0 / params.nu() * (s + params.mu()) * (s - params.rho());
}

double h_tau_eval(double s, double tau, const MaterialParams& params) {
  const double t = s + params.mu();
  const double a = params.alpha();
  if (t == 0.0) {
    if (tau == 0.0) return -0.5 * params.mu() * params.mu() / params.nu();
    std::ostringstream os;
    os << "pole: h_tau(s) undefined at s = -mu for tau = " << tau;
    throw PoleError(os.str());
  }
  return -0.5 * (tau * tau / t + 2.0 * a * tau + a * a * t + s * s / params.nu());
}

namespace {

// Safeguarded Newton on a bracket [lo, hi] where g - tau_sq changes sign.
double bracketed_root(double lo, double hi, double tau_sq, const MaterialParams& params) {
  auto f = [&](double s) { return g_eval(s, params) - tau_sq; };
  double f_lo = f(lo);
  if (f_lo == 0.0) return lo;
  if (f(hi) == 0.0) return hi;

  double x = 0.5 * (lo + hi);
  double best = x;
  double best_abs = std::numeric_limits<double>::infinity();
  int newton_steps = 0;
  for (int iter = 0; iter < 400; ++iter) {
    const double fx = f(x);
    if (std::fabs(fx) < best_abs) {
      best_abs = std::fabs(fx);
      best = x;
    }
    if (fx == 0.0) return x;
    if ((fx < 0.0) == (f_lo < 0.0)) {
      lo = x;
      f_lo = fx;
    } else {
      hi = x;
    }
    const double width = std::fabs(hi - lo);
    const double scale = std::max(std::fabs(lo), std::fabs(hi));
    if (width <= 4.0 * std::numeric_limits<double>::epsilon() * scale) break;

    const double d = g_prime(x, params);
    double next = 0.5 * (lo + hi);
    if (newton_steps < 50 && d != 0.0) {
      const double cand = x - fx / d;
      if (cand > std::min(lo, hi) && cand < std::max(lo, hi)) {
        next = cand;
        ++newton_steps;
      }
    }
    if (next == x) break;
    x = next;
  }
  return best;
}

}  // namespace

std::optional<double> solve_dae(double tau_sq, Branch branch, const MaterialParams& params) {
  if (!(tau_sq >= 0.0) || !std::isfinite(tau_sq)) {
    std::ostringstream os;
    os << "solve_dae needs a finite tau^2 >= 0, got " << tau_sq;
    throw std::invalid_argument(os.str());
  }
  const double mu = params.mu();
  const double rho = params.rho();
  const double eta = params.eta();
  const double floor = params.zeta_floor();

  if (branch == Branch::B1) {
    if (tau_sq == 0.0) return -mu;
    double step = 1.0;
    while (g_eval(-mu + step, params) < tau_sq) step *= 2.0;
    return std::clamp(bracketed_root(-mu, -mu + step, tau_sq, params), -mu,
                      std::numeric_limits<double>::max());
  }

  if (tau_sq > eta * (1.0 + kEtaClampRel)) return std::nullopt;
  if (tau_sq >= eta) return rho;

  if (branch == Branch::B2) {
    if (tau_sq == 0.0) return -mu;
    return std::clamp(bracketed_root(rho, -mu, tau_sq, params), rho, -mu);
  }
  if (tau_sq == 0.0) return floor;
  return std::clamp(bracketed_root(floor, rho, tau_sq, params), floor, rho);
}

NoRealRoot::NoRealRoot(std::size_t cell_index, Branch branch, double tau_sq)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "no real root on branch " << to_string(branch) << " at cell " << cell_index
           << " (beta^2 = " << tau_sq << " exceeds eta)";
        return os.str();
      }()),
      cell(cell_index) {}

Field branch_field(const Field& beta, Branch branch, const MaterialParams& params) {
  std::vector<double> out(beta.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double tau_sq = beta[i] * beta[i];
    const auto root = solve_dae(tau_sq, branch, params);
    if (!root) throw NoRealRoot(i, branch, tau_sq);
    out[i] = *root;
  }
  return Field(beta.grid(), FieldRole::dual_stress, std::move(out));
}

BranchAssignment::BranchAssignment(Grid grid, std::vector<Branch> branches)
    : grid_(grid), branches_(std::move(branches)) {
  if (branches_.size() != grid_.n_cells())
    throw std::invalid_argument("branch assignment length does not match the grid");
}

BranchAssignment BranchAssignment::uniform(Grid grid, Branch b) {
  return BranchAssignment(grid, std::vector<Branch>(grid.n_cells(), b));
}

BranchAssignment BranchAssignment::from_runs(Grid grid, const std::vector<Run>& runs, Branch fill) {
  std::vector<Branch> b(grid.n_cells(), fill);
  for (const auto& r : runs) {
    if (r.from > r.to || r.to > grid.n_cells()) {
      std::ostringstream os;
      os << "assignment run [" << r.from << ", " << r.to << ") outside grid of " << grid.n_cells()
         << " cells";
      throw std::invalid_argument(os.str());
    }
    std::fill(b.begin() + static_cast<std::ptrdiff_t>(r.from),
              b.begin() + static_cast<std::ptrdiff_t>(r.to), r.branch);
  }
  return BranchAssignment(grid, std::move(b));
}

std::vector<BranchAssignment::Run> BranchAssignment::runs() const {
  std::vector<Run> out;
  for (std::size_t i = 0; i < branches_.size(); ++i) {
    if (!out.empty() && out.back().branch == branches_[i] && out.back().to == i)
      ++out.back().to;
    else
      out.push_back(Run{i, i + 1, branches_[i]});
  }
  return out;
}

InvalidAssignment::InvalidAssignment(std::vector<std::size_t> bad, const std::string& what)
    : std::invalid_argument(what), cells(std::move(bad)) {}

Field assemble_assignment_solution(const Field& beta, const BranchAssignment& assignment,
                                   const MaterialParams& params) {
  if (!(beta.grid() == assignment.grid()))
    throw std::invalid_argument("assignment and beta live on different grids");
  std::vector<std::size_t> bad;
  std::vector<double> out(beta.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto root = solve_dae(beta[i] * beta[i], assignment[i], params);
    if (!root) {
      bad.push_back(i);
      continue;
    }
    out[i] = *root;
  }
  if (!bad.empty()) {
    std::ostringstream os;
    os << bad.size() << " cell(s) with beta^2 > eta assigned to B2/B3; first at cell " << bad.front();
    throw InvalidAssignment(std::move(bad), os.str());
  }
  return Field(beta.grid(), FieldRole::dual_stress, std::move(out));
}

BranchOptimalityReport verify_branch_optimality(const Field& beta, const MaterialParams& params,
                                                std::size_t n_samples, std::size_t max_cells) {
  BranchOptimalityReport rep;
  const double mu = params.mu();
  const double floor = params.zeta_floor();
  const std::size_t n = beta.size();
  const std::size_t stride = std::max<std::size_t>(1, (n + max_cells - 1) / std::max<std::size_t>(max_cells, 1));
  const auto ns = static_cast<double>(std::max<std::size_t>(n_samples, 1));

  for (std::size_t i = 0; i < n; i += stride) {
    ++rep.cells_checked;
    const double tau = beta[i];
    const double tau_sq = tau * tau;
    // a branch root that rounds onto the pole only happens for tiny tau, where
    // h along the branch tends to its tau = 0 value
    auto h = [&](double s) { return h_tau_eval(s, s + mu == 0.0 ? 0.0 : tau, params); };
    auto flag = [&](Branch ref, double s, double hs, double href) {
      rep.violations.push_back(OptimalityViolation{i, ref, s, hs, href});
    };

    const double s1 = *solve_dae(tau_sq, Branch::B1, params);
    const double h1 = h(s1);
    const double spread = std::max(s1 + mu, 1e-3);
    for (std::size_t k = 0; k < n_samples; ++k) {
      const double u = -6.0 + 9.0 * (static_cast<double>(k) + 0.5) / ns;
      const double s = -mu + spread * std::pow(10.0, u);
      if (s + mu == 0.0) continue;
      const double hs = h(s);
      ++rep.samples_checked;
      if (hs > h1 + 1e-9 * (1.0 + std::fabs(h1))) flag(Branch::B1, s, hs, h1);
    }

    const auto s2 = solve_dae(tau_sq, Branch::B2, params);
    const auto s3 = solve_dae(tau_sq, Branch::B3, params);
    if (!s2 || !s3) continue;
    const double h2 = h(*s2);
    const double h3 = h(*s3);
    for (std::size_t k = 0; k < n_samples; ++k) {
      const double frac = (static_cast<double>(k) + 0.5) / ns;
      const double a = *s3 + (-mu - *s3) * frac;
      if (a + mu != 0.0) {
        const double ha = h(a);
        ++rep.samples_checked;
        if (ha < h2 - 1e-9 * (1.0 + std::fabs(h2))) flag(Branch::B2, a, ha, h2);
      }
      const double b = floor + (*s2 - floor) * frac;
      if (b + mu != 0.0) {
        const double hb = h(b);
        ++rep.samples_checked;
        if (hb > h3 + 1e-9 * (1.0 + std::fabs(h3))) flag(Branch::B3, b, hb, h3);
      }
    }
  }
  return rep;
}

}  // namespace cdl
