#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace cdl {

/// Material constants of the bar: mu, nu, alpha > 0 with nu*alpha^2 > 2*mu.
/// rho and eta are derived once at construction and stored.
class MaterialParams {
public:
  MaterialParams(double mu, double nu, double alpha);

  double mu() const { return mu_; }
  double nu() const { return nu_; }
  double alpha() const { return alpha_; }

  /// Stationary point of g between the two zeros: -(mu + nu*alpha^2)/3.
  double rho() const { return rho_; }
  /// Local maximum g(rho) = (nu*alpha^2 - 2*mu)^3 / (27*nu).
  double eta() const { return eta_; }
  /// Left zero of g, -nu*alpha^2/2 (lower end of the admissible dual range).
  double zeta_floor() const { return -0.5 * nu_ * alpha_ * alpha_; }
  /// alpha^2 - 2*mu/nu > 0; squared value of the corrected fill.
  double kappa() const { return alpha_ * alpha_ - 2.0 * mu_ / nu_; }

private:
  double mu_;
  double nu_;
  double alpha_;
  double rho_;
  double eta_;
};

/// Uniform partition of [0,1] into n_cells cells; fields live at midpoints.
class Grid {
public:
  explicit Grid(std::size_t n_cells);

  std::size_t n_cells() const { return n_; }
  double width() const { return 1.0 / static_cast<double>(n_); }
  double midpoint(std::size_t i) const {
    return (static_cast<double>(i) + 0.5) / static_cast<double>(n_);
  }
  double left_edge(std::size_t i) const {
    return static_cast<double>(i) / static_cast<double>(n_);
  }
  double right_edge(std::size_t i) const {
    return static_cast<double>(i + 1) / static_cast<double>(n_);
  }

  /// Number of cells covered by [0, x] after rounding x to the nearest
  /// cell boundary.
  std::size_t snap_cells(double x) const;

  bool operator==(const Grid&) const = default;

private:
  std::size_t n_;
};

enum class FieldRole { strain, dual_stress, load, data, direction, displacement, integrand };

std::string to_string(FieldRole role);

/// Piecewise-constant samples at cell midpoints. Values are always finite.
class Field {
public:
  Field(Grid grid, FieldRole role, std::vector<double> values);

  static Field constant(Grid grid, FieldRole role, double c);
  static Field sample(Grid grid, FieldRole role, const std::function<double(double)>& fn);

  const Grid& grid() const { return grid_; }
  FieldRole role() const { return role_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  double max_abs() const;

private:
  Grid grid_;
  FieldRole role_;
  std::vector<double> values_;
};

/// Throws std::invalid_argument unless both fields share a grid.
void require_same_grid(const Field& a, const Field& b);

/// Polynomial piece of the body force on [lo, hi]; coeffs ascending in x.
struct PolyPiece {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<double> coeffs;
};

/// Body force f (piecewise polynomial of degree <= 3) plus dead load sigma1.
class LoadSpec {
public:
  static LoadSpec polynomial(std::vector<double> coeffs, double sigma1);
  static LoadSpec piecewise(std::vector<double> breaks, std::vector<std::vector<double>> coeffs,
                            double sigma1);
  /// Tabulated f, linearly interpolated between samples; xs must run from 0 to 1.
  static LoadSpec sampled(std::vector<double> xs, std::vector<double> fs, double sigma1);
  /// f = 0 and sigma1 = sigma, i.e. a constant stress.
  static LoadSpec uniform(double sigma) { return polynomial({}, sigma); }

  double f(double x) const;
  /// sigma(x) = integral_x^1 f + sigma1 from exact antiderivatives.
  double sigma_at(double x) const;
  double sigma1() const { return sigma1_; }
  const std::vector<PolyPiece>& pieces() const { return pieces_; }

private:
  LoadSpec(std::vector<PolyPiece> pieces, double sigma1);

  std::vector<PolyPiece> pieces_;
  double sigma1_;
};

Field compute_sigma(const LoadSpec& load, const Grid& grid);
Field compute_beta(const Field& sigma, const MaterialParams& params);

/// Composite midpoint rule; left-to-right summation over cells.
double integrate(const Field& field);
double integrate(const Grid& grid, std::span<const double> values);

/// (integral |field|^p)^(1/p) for p in {1, 2, 4}.
double lp_norm(const Field& field, double p);

/// u at right cell edges, u(x) = integral_0^x v.
Field reconstruct_displacement(const Field& v);

}  // namespace cdl
