#pragma once

#include <cdl/model.hpp>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cdl {

/// Dual algebraic equation g(s) = tau^2 with g(s) = (2 s / nu + alpha^2)(mu + s)^2.
///
/// g increases on (-inf, rho], decreases on [rho, -mu] and increases on
/// [-mu, inf), with g(-nu alpha^2 / 2) = g(-mu) = 0 and g(rho) = eta. Each
/// monotone piece carries one root branch:
///   B1 in [-mu, inf)               exists for every tau^2 >= 0
///   B2 in [rho, -mu]               exists iff tau^2 <= eta
///   B3 in [-nu alpha^2 / 2, rho]   exists iff tau^2 <= eta
enum class Branch { B1, B2, B3 };

std::string to_string(Branch b);
Branch branch_from_string(const std::string& name);

double g_eval(double s, const MaterialParams& params);
/// 6/nu (s + mu)(s - rho).
double g_prime(double s, const MaterialParams& params);

/// Pointwise dual integrand
///   h_tau(s) = -1/2 [tau^2/(s+mu) + 2 alpha tau + alpha^2 (s+mu) + s^2/nu].
/// At s = -mu it is only defined for tau = 0, where the continuous extension
/// -mu^2/(2 nu) is returned. Throws PoleError otherwise.
double h_tau_eval(double s, double tau, const MaterialParams& params);

struct PoleError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Width of the band above eta that is still treated as eta for B2/B3.
inline constexpr double kEtaClampRel = 1e-12;

/// Root of g(s) = tau^2 on the branch's monotone interval, or nullopt when the
/// branch has no real root (B2/B3 with tau^2 > eta).
std::optional<double> solve_dae(double tau_sq, Branch branch, const MaterialParams& params);

struct NoRealRoot : std::runtime_error {
  NoRealRoot(std::size_t cell, Branch branch, double tau_sq);
  std::size_t cell;
};

/// Cellwise root of the chosen branch for tau^2 = beta^2.
Field branch_field(const Field& beta, Branch branch, const MaterialParams& params);

/// Per-cell branch choice; any such choice gives a measurable DAE solution.
class BranchAssignment {
public:
  BranchAssignment(Grid grid, std::vector<Branch> branches);
  static BranchAssignment uniform(Grid grid, Branch b);

  struct Run {
    std::size_t from;  // first cell
    std::size_t to;    // one past the last cell
    Branch branch;
  };
  /// Cells not covered by any run default to `fill`.
  static BranchAssignment from_runs(Grid grid, const std::vector<Run>& runs, Branch fill = Branch::B1);
  std::vector<Run> runs() const;

  const Grid& grid() const { return grid_; }
  Branch operator[](std::size_t i) const { return branches_[i]; }
  std::size_t size() const { return branches_.size(); }

private:
  Grid grid_;
  std::vector<Branch> branches_;
};

struct InvalidAssignment : std::invalid_argument {
  InvalidAssignment(std::vector<std::size_t> cells, const std::string& what);
  std::vector<std::size_t> cells;
};

/// Throws InvalidAssignment listing every cell with beta^2 > eta not on B1.
Field assemble_assignment_solution(const Field& beta, const BranchAssignment& assignment,
                                   const MaterialParams& params);

struct OptimalityViolation {
  std::size_t cell;
  Branch reference;
  double s;
  double h_s;
  double h_ref;
};

struct BranchOptimalityReport {
  std::size_t cells_checked = 0;
  std::size_t samples_checked = 0;
  std::vector<OptimalityViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// Dense sampling of h_beta around each branch root:
///   h(s) <= h(s1) for s > -mu,
///   h(s) >= h(s2) for s in (s3, -mu),
///   h(s) <= h(s3) for s in (-nu alpha^2/2, s2),
/// the last two only where B2/B3 exist. At most `max_cells` cells are
/// visited, evenly spaced.
BranchOptimalityReport verify_branch_optimality(const Field& beta, const MaterialParams& params,
                                                std::size_t n_samples, std::size_t max_cells = 64);

}  // namespace cdl
