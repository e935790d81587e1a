#pragma once

#include <cdl/model.hpp>

#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cdl {

/// Thresholds used to classify cells and accept identities. Defaults follow
/// the scale-aware rules below; every scenario may override them.
struct Tolerances {
  /// |zeta + mu| <= eps_sing marks a cell as singular; NaN means 1e-9 (1 + mu).
  double eps_sing = std::numeric_limits<double>::quiet_NaN();
  /// |beta| <= eps_beta marks a cell as removable; NaN means 1e-9 (1 + |beta|_inf).
  double eps_beta = std::numeric_limits<double>::quiet_NaN();
  /// L2 bound on both critical-pair residuals.
  double tol_crit = 1e-8;
  /// Relative duality tolerance: |a - b| <= tol_dual (1 + |a|).
  double tol_dual = 1e-8;

  double sing(const MaterialParams& p) const;
  double beta(const Field& beta) const;
};

/// Cells where zeta = -mu at grid scale. Singular cells with beta != 0 make
/// the dual integral divergent and are listed as ill-posed.
struct SingularSet {
  std::vector<bool> mask;
  double measure = 0.0;
  std::vector<std::size_t> ill_posed;

  bool empty() const { return measure == 0.0; }
  bool well_posed() const { return ill_posed.empty(); }
};

SingularSet singular_set(const Field& zeta, const Field& beta, const MaterialParams& params,
                         double eps_sing, double eps_beta);
SingularSet singular_set(const Field& zeta, const Field& beta, const MaterialParams& params,
                         const Tolerances& tol = {});

/// Value of the pure complementary energy, or "divergent" when zeta leaves
/// the domain where the integral is finite.
struct DualValue {
  bool divergent = false;
  double value = 0.0;
  std::optional<std::size_t> first_ill_posed;

  static DualValue finite(double v) { return DualValue{false, v, std::nullopt}; }
  static DualValue diverges(std::size_t cell) { return DualValue{true, 0.0, cell}; }
};

/// integral [mu v^2/2 + nu (v^2/2 - alpha v)^2 / 2 - sigma v].
double primal_energy(const Field& v, const Field& sigma, const MaterialParams& params);

/// integral [v^2 (zeta + mu)/2 - alpha v zeta - zeta^2/(2 nu) - sigma v].
double xi_energy(const Field& v, const Field& zeta, const Field& sigma, const MaterialParams& params);

/// -1/2 integral [(sigma + alpha zeta)^2/(mu + zeta) + zeta^2/nu] over regular
/// cells; singular removable cells contribute -mu^2/(2 nu) per unit length.
DualValue dual_energy(const Field& zeta, const Field& sigma, const Field& beta,
                      const MaterialParams& params, const Tolerances& tol = {});

/// mu v + nu (v^2/2 - alpha v)(v - alpha) - sigma, pointwise.
Field primal_gradient(const Field& v, const Field& sigma, const MaterialParams& params);

struct XiResiduals {
  Field stress;       // v (zeta + mu) - alpha zeta - sigma
  Field constitutive; // v^2/2 - alpha v - zeta/nu
};

XiResiduals xi_residuals(const Field& v, const Field& zeta, const Field& sigma,
                         const MaterialParams& params);

bool is_critical_pair(const Field& v, const Field& zeta, const Field& sigma,
                      const MaterialParams& params, double tol_crit = 1e-8);

/// integral [mu + nu (3/2 v^2 - 3 alpha v + alpha^2)] h^2.
double second_variation_quadratic(const Field& v, const Field& h, const MaterialParams& params);

/// 3 integral (zeta - rho) h^2; coincides with the quadratic form above when
/// zeta = zeta_from_v(v).
double second_variation_at_dual(const Field& zeta, const Field& h, const MaterialParams& params);

/// nu (v^2/2 - alpha v): the maximizer of xi_energy(v, .).
Field zeta_from_v(const Field& v, const MaterialParams& params);

struct DomainError : std::invalid_argument {
  DomainError(std::size_t cell, const std::string& what);
  std::size_t cell;
};

/// alpha + beta/(zeta + mu) off the singular set, alpha + fill on it.
/// Throws DomainError at the first ill-posed singular cell.
Field v_from_zeta(const Field& zeta, const Field& sigma, const Field& beta,
                  const MaterialParams& params, const Field& fill, const Tolerances& tol = {});
Field v_from_zeta(const Field& zeta, const Field& sigma, const Field& beta,
                  const MaterialParams& params, double fill = 0.0, const Tolerances& tol = {});

struct GapIdentity {
  double lhs;   // primal energy of v_from_zeta(zeta, fill)
  double rhs;   // dual energy + nu/8 integral over E of (fill^2 - alpha^2 + 2 mu/nu)^2
  double gap;   // the E-integral term alone
  double singular_measure;
};

/// Both sides of the duality-gap identity for a DAE solution zeta. Throws
/// std::invalid_argument when some cell has |g(zeta) - beta^2| > tol_dae.
GapIdentity duality_gap_identity(const Field& zeta, const Field& fill, const Field& sigma,
                                 const Field& beta, const MaterialParams& params,
                                 const Tolerances& tol = {}, double tol_dae = 1e-9);

/// Largest cellwise |g(zeta) - beta^2| / (1 + beta^2).
double dae_residual_max(const Field& zeta, const Field& beta, const MaterialParams& params);

struct EnergyReport {
  double primal = 0.0;
  double xi = 0.0;
  DualValue dual;
  /// primal - dual; meaningless when dual diverges.
  double gap = 0.0;
  double grad_norm = 0.0;
  double second_variation_coeff_min = 0.0;
  bool critical = false;
};

EnergyReport energy_report(const Field& v, const Field& zeta, const Field& sigma, const Field& beta,
                           const MaterialParams& params, const Tolerances& tol = {});

}  // namespace cdl
