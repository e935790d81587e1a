#include <cdl/model.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cdl {

MaterialParams::MaterialParams(double mu, double nu, double alpha)
    : mu_(mu), nu_(nu), alpha_(alpha) {
  if (!(mu > 0.0) || !(nu > 0.0) || !(alpha > 0.0) || !std::isfinite(mu) || !std::isfinite(nu) ||
      !std::isfinite(alpha)) {
    std::ostringstream os;
    os << "material constants must be positive and finite (mu=" << mu << ", nu=" << nu
       << ", alpha=" << alpha << ")";
    throw std::invalid_argument(os.str());
  }
  const double stiff = nu * alpha * alpha;
  if (!(stiff > 2.0 * mu)) {
    std::ostringstream os;
    os << "constraint nu*alpha^2 > 2*mu violated: nu*alpha^2 = " << stiff << ", 2*mu = " << 2.0 * mu;
    throw std::invalid_argument(os.str());
  }
  rho_ = -(mu + stiff) / 3.0;
  const double d = stiff - 2.0 * mu;
  eta_ = d * d * d / (27.0 * nu);
}

Grid::Grid(std::size_t n_cells) : n_(n_cells) {
  if (n_cells == 0) throw std::invalid_argument("grid needs at least one cell");
}

std::size_t Grid::snap_cells(double x) const {
  const double k = std::round(std::clamp(x, 0.0, 1.0) * static_cast<double>(n_));
  return static_cast<std::size_t>(k);
}

std::string to_string(FieldRole role) {
  switch (role) {
    case FieldRole::strain: return "v";
    case FieldRole::dual_stress: return "zeta";
    case FieldRole::load: return "sigma";
    case FieldRole::data: return "beta";
    case FieldRole::direction: return "h";
    case FieldRole::displacement: return "u";
    case FieldRole::integrand: return "integrand";
  }
  return "unknown";
}

Field::Field(Grid grid, FieldRole role, std::vector<double> values)
    : grid_(grid), role_(role), values_(std::move(values)) {
  if (values_.size() != grid_.n_cells()) {
    std::ostringstream os;
    os << "field '" << to_string(role) << "' has " << values_.size() << " values for "
       << grid_.n_cells() << " cells";
    throw std::invalid_argument(os.str());
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      std::ostringstream os;
      os << "field '" << to_string(role) << "' has non-finite value at cell " << i;
      throw std::invalid_argument(os.str());
    }
  }
}

Field Field::constant(Grid grid, FieldRole role, double c) {
  return Field(grid, role, std::vector<double>(grid.n_cells(), c));
}

Field Field::sample(Grid grid, FieldRole role, const std::function<double(double)>& fn) {
  std::vector<double> v(grid.n_cells());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(grid.midpoint(i));
  return Field(grid, role, std::move(v));
}

double Field::max_abs() const {
  double m = 0.0;
  for (double x : values_) m = std::max(m, std::fabs(x));
  return m;
}

void require_same_grid(const Field& a, const Field& b) {
  if (!(a.grid() == b.grid())) {
    std::ostringstream os;
    os << "fields '" << to_string(a.role()) << "' and '" << to_string(b.role())
       << "' live on different grids (" << a.grid().n_cells() << " vs " << b.grid().n_cells()
       << " cells)";
    throw std::invalid_argument(os.str());
  }
}

namespace {

double horner(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

// Antiderivative of sum c_k x^k vanishing at 0.
double antiderivative(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * x + c[k] / static_cast<double>(k + 1);
  return acc * x;
}

void check_degree(const std::vector<double>& c) {
  if (c.size() > 4) throw std::invalid_argument("body force pieces are limited to degree <= 3");
  for (double x : c)
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite body force coefficient");
}

}  // namespace

LoadSpec::LoadSpec(std::vector<PolyPiece> pieces, double sigma1)
    : pieces_(std::move(pieces)), sigma1_(sigma1) {
  if (!std::isfinite(sigma1)) throw std::invalid_argument("dead load sigma1 must be finite");
}

LoadSpec LoadSpec::polynomial(std::vector<double> coeffs, double sigma1) {
  check_degree(coeffs);
  return LoadSpec({PolyPiece{0.0, 1.0, std::move(coeffs)}}, sigma1);
}

LoadSpec LoadSpec::piecewise(std::vector<double> breaks, std::vector<std::vector<double>> coeffs,
                             double sigma1) {
  if (breaks.size() < 2 || breaks.front() != 0.0 || breaks.back() != 1.0)
    throw std::invalid_argument("piecewise load breaks must start at 0 and end at 1");
  if (coeffs.size() + 1 != breaks.size())
    throw std::invalid_argument("piecewise load needs one coefficient list per interval");
  std::vector<PolyPiece> pieces;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (!(breaks[k + 1] > breaks[k]))
      throw std::invalid_argument("piecewise load breaks must be strictly increasing");
    check_degree(coeffs[k]);
    pieces.push_back(PolyPiece{breaks[k], breaks[k + 1], std::move(coeffs[k])});
  }
  return LoadSpec(std::move(pieces), sigma1);
}

LoadSpec LoadSpec::sampled(std::vector<double> xs, std::vector<double> fs, double sigma1) {
  if (xs.size() < 2 || xs.size() != fs.size())
    throw std::invalid_argument("sampled load needs at least two (x, f) pairs of equal length");
  std::vector<double> breaks{xs.front()};
  std::vector<std::vector<double>> coeffs;
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    if (!(xs[k + 1] > xs[k]))
      throw std::invalid_argument("sampled load abscissae must be strictly increasing");
    const double slope = (fs[k + 1] - fs[k]) / (xs[k + 1] - xs[k]);
    coeffs.push_back({fs[k] - slope * xs[k], slope});
    breaks.push_back(xs[k + 1]);
  }
  return piecewise(std::move(breaks), std::move(coeffs), sigma1);
}

double LoadSpec::f(double x) const {
  for (const auto& p : pieces_)
    if (x <= p.hi) return horner(p.coeffs, x);
  return horner(pieces_.back().coeffs, x);
}

double LoadSpec::sigma_at(double x) const {
  double acc = sigma1_;
  for (auto it = pieces_.rbegin(); it != pieces_.rend(); ++it) {
    if (it->hi <= x) break;
    const double lo = std::max(x, it->lo);
    acc += antiderivative(it->coeffs, it->hi) - antiderivative(it->coeffs, lo);
  }
  return acc;
}

Field compute_sigma(const LoadSpec& load, const Grid& grid) {
  return Field::sample(grid, FieldRole::load, [&](double x) { return load.sigma_at(x); });
}

Field compute_beta(const Field& sigma, const MaterialParams& params) {
  const double shift = params.mu() * params.alpha();
  std::vector<double> b(sigma.size());
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = sigma[i] - shift;
  return Field(sigma.grid(), FieldRole::data, std::move(b));
}

double integrate(const Grid& grid, std::span<const double> values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(grid.n_cells());
}

double integrate(const Field& field) { return integrate(field.grid(), field.values()); }

double lp_norm(const Field& field, double p) {
  double sum = 0.0;
  if (p == 1.0) {
    for (double v : field.values()) sum += std::fabs(v);
    return sum / static_cast<double>(field.size());
  }
  if (p == 2.0) {
    for (double v : field.values()) sum += v * v;
    return std::sqrt(sum / static_cast<double>(field.size()));
  }
  if (p == 4.0) {
    for (double v : field.values()) sum += (v * v) * (v * v);
    return std::sqrt(std::sqrt(sum / static_cast<double>(field.size())));
  }
  std::ostringstream os;
  os << "unsupported L^p exponent p=" << p << " (supported: 1, 2, 4)";
  throw std::invalid_argument(os.str());
}

Field reconstruct_displacement(const Field& v) {
  const double h = v.grid().width();
  std::vector<double> u(v.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    acc += v[i] * h;
    u[i] = acc;
  }
  return Field(v.grid(), FieldRole::displacement, std::move(u));
}

}  // namespace cdl
