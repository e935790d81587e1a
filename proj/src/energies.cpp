#include <cdl/energies.hpp>

#include <cdl/dae.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace cdl {

double Tolerances::sing(const MaterialParams& p) const {
  return std::isnan(eps_sing) ? 1e-9 * (1.0 + p.mu()) : eps_sing;
}

double Tolerances::beta(const Field& b) const {
  return std::isnan(eps_beta) ? 1e-9 * (1.0 + b.max_abs()) : eps_beta;
}

SingularSet singular_set(const Field& zeta, const Field& beta, const MaterialParams& params,
                         double eps_sing, double eps_beta) {
  require_same_grid(zeta, beta);
  SingularSet s;
  s.mask.assign(zeta.size(), false);
  std::size_t count = 0;
  for (std::size_t i = 0; i < zeta.size(); ++i) {
    if (std::fabs(zeta[i] + params.mu()) > eps_sing) continue;
    s.mask[i] = true;
    ++count;
    if (std::fabs(beta[i]) > eps_beta) s.ill_posed.push_back(i);
  }
  s.measure = static_cast<double>(count) / static_cast<double>(zeta.size());
  return s;
}

SingularSet singular_set(const Field& zeta, const Field& beta, const MaterialParams& params,
                         const Tolerances& tol) {
  return singular_set(zeta, beta, params, tol.sing(params), tol.beta(beta));
}

double primal_energy(const Field& v, const Field& sigma, const MaterialParams& params) {
  require_same_grid(v, sigma);
  const double mu = params.mu(), nu = params.nu(), a = params.alpha();
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double y = v[i];
    const double w = 0.5 * y * y - a * y;
    sum += 0.5 * mu * y * y + 0.5 * nu * w * w - sigma[i] * y;
  }
  return sum / static_cast<double>(v.size());
}

double xi_energy(const Field& v, const Field& zeta, const Field& sigma,
                 const MaterialParams& params) {
  require_same_grid(v, zeta);
  require_same_grid(v, sigma);
  const double mu = params.mu(), nu = params.nu(), a = params.alpha();
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double y = v[i], z = zeta[i];
    sum += 0.5 * y * y * (z + mu) - a * y * z - 0.5 * z * z / nu - sigma[i] * y;
  }
  return sum / static_cast<double>(v.size());
}

DualValue dual_energy(const Field& zeta, const Field& sigma, const Field& beta,
                      const MaterialParams& params, const Tolerances& tol) {
  require_same_grid(zeta, sigma);
  require_same_grid(zeta, beta);
  const double mu = params.mu(), nu = params.nu(), a = params.alpha();
  const double eps_sing = tol.sing(params);
  const double eps_beta = tol.beta(beta);
  const double removable = -0.5 * mu * mu / nu;
  double sum = 0.0;
  for (std::size_t i = 0; i < zeta.size(); ++i) {
    const double z = zeta[i];
    const double t = z + mu;
    if (std::fabs(t) <= eps_sing) {
      if (std::fabs(beta[i]) > eps_beta) return DualValue::diverges(i);
      sum += removable;
      continue;
    }
    const double num = sigma[i] + a * z;
    sum += -0.5 * (num * num / t + z * z / nu);
  }
  return DualValue::finite(sum / static_cast<double>(zeta.size()));
}

Field primal_gradient(const Field& v, const Field& sigma, const MaterialParams& params) {
  require_same_grid(v, sigma);
  const double mu = params.mu(), nu = params.nu(), a = params.alpha();
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double y = v[i];
    r[i] = mu * y + nu * (0.5 * y * y - a * y) * (y - a) - sigma[i];
  }
  return Field(v.grid(), FieldRole::integrand, std::move(r));
}

XiResiduals xi_residuals(const Field& v, const Field& zeta, const Field& sigma,
                         const MaterialParams& params) {
  require_same_grid(v, zeta);
  require_same_grid(v, sigma);
  const double mu = params.mu(), nu = params.nu(), a = params.alpha();
  std::vector<double> r1(v.size()), r2(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double y = v[i], z = zeta[i];
    r1[i] = y * (z + mu) - a * z - sigma[i];
    r2[i] = 0.5 * y * y - a * y - z / nu;
  }
  return XiResiduals{Field(v.grid(), FieldRole::integrand, std::move(r1)),
                     Field(v.grid(), FieldRole::integrand, std::move(r2))};
}

bool is_critical_pair(const Field& v, const Field& zeta, const Field& sigma,
                      const MaterialParams& params, double tol_crit) {
  const auto r = xi_residuals(v, zeta, sigma, params);
  return lp_norm(r.stress, 2.0) <= tol_crit && lp_norm(r.constitutive, 2.0) <= tol_crit;
}

double second_variation_quadratic(const Field& v, const Field& h, const MaterialParams& params) {
  require_same_grid(v, h);
  const double mu = params.mu(), nu = params.nu(), a = params.alpha();
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double y = v[i];
    sum += (mu + nu * (1.5 * y * y - 3.0 * a * y + a * a)) * h[i] * h[i];
  }
  return sum / static_cast<double>(v.size());
}

double second_variation_at_dual(const Field& zeta, const Field& h, const MaterialParams& params) {
  require_same_grid(zeta, h);
  double sum = 0.0;
  for (std::size_t i = 0; i < zeta.size(); ++i) sum += 3.0 * (zeta[i] - params.rho()) * h[i] * h[i];
  return sum / static_cast<double>(zeta.size());
}

Field zeta_from_v(const Field& v, const MaterialParams& params) {
  std::vector<double> z(v.size());
  for (std::size_t i = 0; i < z.size(); ++i)
    z[i] = params.nu() * (0.5 * v[i] * v[i] - params.alpha() * v[i]);
  return Field(v.grid(), FieldRole::dual_stress, std::move(z));
}

DomainError::DomainError(std::size_t c, const std::string& what)
    : std::invalid_argument(what), cell(c) {}

Field v_from_zeta(const Field& zeta, const Field& sigma, const Field& beta,
                  const MaterialParams& params, const Field& fill, const Tolerances& tol) {
  require_same_grid(zeta, sigma);
  require_same_grid(zeta, beta);
  require_same_grid(zeta, fill);
  const auto sing = singular_set(zeta, beta, params, tol);
  if (!sing.well_posed()) {
    std::ostringstream os;
    os << "zeta outside A0/A2 at cell " << sing.ill_posed.front()
       << ": zeta = -mu where beta = " << beta[sing.ill_posed.front()] << " != 0";
    throw DomainError(sing.ill_posed.front(), os.str());
  }
  const double a = params.alpha(), mu = params.mu();
  std::vector<double> out(zeta.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = sing.mask[i] ? a + fill[i] : a + beta[i] / (zeta[i] + mu);
  return Field(zeta.grid(), FieldRole::strain, std::move(out));
}

Field v_from_zeta(const Field& zeta, const Field& sigma, const Field& beta,
                  const MaterialParams& params, double fill, const Tolerances& tol) {
  return v_from_zeta(zeta, sigma, beta, params, Field::constant(zeta.grid(), FieldRole::strain, fill),
                     tol);
}

double dae_residual_max(const Field& zeta, const Field& beta, const MaterialParams& params) {
  require_same_grid(zeta, beta);
  double worst = 0.0;
  for (std::size_t i = 0; i < zeta.size(); ++i) {
    const double b2 = beta[i] * beta[i];
    worst = std::max(worst, std::fabs(g_eval(zeta[i], params) - b2) / (1.0 + b2));
  }
  return worst;
}

GapIdentity duality_gap_identity(const Field& zeta, const Field& fill, const Field& sigma,
                                 const Field& beta, const MaterialParams& params,
                                 const Tolerances& tol, double tol_dae) {
  const double res = dae_residual_max(zeta, beta, params);
  if (res > tol_dae) {
    std::ostringstream os;
    os << "zeta does not solve the dual algebraic equation (max relative residual " << res << ")";
    throw std::invalid_argument(os.str());
  }
  const Field v = v_from_zeta(zeta, sigma, beta, params, fill, tol);
  const auto sing = singular_set(zeta, beta, params, tol);
  const auto dual = dual_energy(zeta, sigma, beta, params, tol);

  const double nu = params.nu(), a = params.alpha(), mu = params.mu();
  double gap_sum = 0.0;
  for (std::size_t i = 0; i < zeta.size(); ++i) {
    if (!sing.mask[i]) continue;
    const double c = fill[i] * fill[i] - a * a + 2.0 * mu / nu;
    gap_sum += c * c;
  }
  const double gap = nu / 8.0 * gap_sum / static_cast<double>(zeta.size());
  return GapIdentity{primal_energy(v, sigma, params), dual.value + gap, gap, sing.measure};
}

EnergyReport energy_report(const Field& v, const Field& zeta, const Field& sigma, const Field& beta,
                           const MaterialParams& params, const Tolerances& tol) {
  EnergyReport r;
  r.primal = primal_energy(v, sigma, params);
  r.xi = xi_energy(v, zeta, sigma, params);
  r.dual = dual_energy(zeta, sigma, beta, params, tol);
  r.gap = r.dual.divergent ? std::numeric_limits<double>::quiet_NaN() : r.primal - r.dual.value;
  r.grad_norm = lp_norm(primal_gradient(v, sigma, params), 2.0);
  double m = std::numeric_limits<double>::infinity();
  for (double z : zeta.values()) m = std::min(m, 3.0 * (z - params.rho()));
  r.second_variation_coeff_min = m;
  r.critical = is_critical_pair(v, zeta, sigma, params, tol.tol_crit);
  return r;
}

}  // namespace cdl
