#include <cdl/falsify.hpp>

#include <algorithm>
#include <array>
#include <functional>
#include <limits>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace cdl {

double p_value(double y, double sigma, const MaterialParams& params) {
  const double w = 0.5 * y * y - params.alpha() * y;
  return 0.5 * params.mu() * y * y + 0.5 * params.nu() * w * w - sigma * y;
}

double p_first(double y, double sigma, const MaterialParams& params) {
  const double a = params.alpha();
  return params.mu() * y + params.nu() * (0.5 * y * y - a * y) * (y - a) - sigma;
}

double p_second(double y, const MaterialParams& params) {
  const double a = params.alpha();
  return params.mu() + params.nu() * (1.5 * y * y - 3.0 * a * y + a * a);
}

double p_third(double y, const MaterialParams& params) {
  return 3.0 * params.nu() * (y - params.alpha());
}

std::string to_string(CriticalKind k) {
  switch (k) {
    case CriticalKind::local_min: return "local-min";
    case CriticalKind::local_max: return "local-max";
    case CriticalKind::not_extremum: return "not-extremum";
    case CriticalKind::degenerate: return "degenerate";
  }
  return "degenerate";
}

std::vector<PolyClassification> classify_p_critical(const MaterialParams& params, double beta) {
  const double a = params.alpha(), mu = params.mu();
  const double sigma = a * mu + beta;
  std::vector<std::pair<double, double>> cand;  // (y, zeta)
  for (Branch br : {Branch::B1, Branch::B2, Branch::B3}) {
    const auto z = solve_dae(beta * beta, br, params);
    if (!z) continue;
    const double t = *z + mu;
    if (std::fabs(t) <= 1e-12 * (1.0 + mu)) {
      // removable root: any y with y^2/2 - alpha y = -mu/nu
      const double r = std::sqrt(params.kappa());
      cand.emplace_back(a - r, *z);
      cand.emplace_back(a + r, *z);
    } else {
      cand.emplace_back(a + beta / t, *z);
    }
  }
  std::sort(cand.begin(), cand.end());

  const double tol2 = 1e-8 * (mu + params.nu() * a * a);
  const double tol3 = 1e-8 * params.nu() * (1.0 + a);
  std::vector<PolyClassification> out;
  for (const auto& [y, z] : cand) {
    if (!out.empty() && std::fabs(out.back().y - y) <= 1e-7 * (1.0 + std::fabs(y))) continue;
    PolyClassification c;
    c.y = y;
    c.zeta = z;
    c.dp = p_first(y, sigma, params);
    c.d2p = p_second(y, params);
    c.d3p = p_third(y, params);
    if (c.d2p > tol2)
      c.kind = CriticalKind::local_min;
    else if (c.d2p < -tol2)
      c.kind = CriticalKind::local_max;
    else if (std::fabs(c.d3p) > tol3)
      c.kind = CriticalKind::not_extremum;
    else
      c.kind = CriticalKind::degenerate;
    out.push_back(c);
  }
  return out;
}

PointwiseMin minimize_pointwise(double sigma, const MaterialParams& params) {
  const double mu = params.mu(), nu = params.nu(), a = params.alpha();
  const double bound =
      1.0 + std::max({3.0 * a, 2.0 * (mu + nu * a * a) / nu, 2.0 * std::fabs(sigma) / nu});
  // p'' = 3/2 nu y^2 - 3 nu alpha y + (mu + nu alpha^2) has two real roots
  const double half = std::sqrt((nu * a * a - 2.0 * mu) / (3.0 * nu));
  const std::array<double, 4> knots{-bound, a - half, a + half, bound};

  auto dp = [&](double y) { return p_first(y, sigma, params); };
  PointwiseMin best{0.0, std::numeric_limits<double>::infinity()};
  auto consider = [&](double y) {
    const double v = p_value(y, sigma, params);
    if (v < best.value) best = PointwiseMin{y, v};
  };
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    double lo = knots[k], hi = knots[k + 1];
    double flo = dp(lo), fhi = dp(hi);
    if (flo == 0.0) consider(lo);
    if (fhi == 0.0) consider(hi);
    if ((flo < 0.0) == (fhi < 0.0)) continue;
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      const double fm = dp(mid);
      if ((fm < 0.0) == (flo < 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    consider(0.5 * (lo + hi));
  }
  return best;
}

// ---------------------------------------------------------------------------

namespace {

bool spans_doublings(double first, double last, double doublings) {
  return last / first >= std::pow(2.0, doublings) * (1.0 - 1e-12);
}

bool strictly_increasing(const std::vector<double>& y) {
  for (std::size_t i = 1; i < y.size(); ++i)
    if (!(y[i] > y[i - 1])) return false;
  return true;
}

}  // namespace

DivergenceResult prop1_divergence_demo(const MaterialParams& params, const LoadSpec& load, double a,
                                       double b, const std::vector<std::size_t>& levels) {
  if (!(a >= 0.0 && a < b && b <= 1.0))
    throw std::invalid_argument("prop1 demo needs 0 <= a < b <= 1");
  if (levels.size() < 2) throw std::invalid_argument("prop1 demo needs at least two mesh levels");

  DivergenceResult res;
  const double mu = params.mu();
  std::vector<double> ns, ys;
  double max_beta_sq = 0.0;
  for (std::size_t n : levels) {
    const Grid grid(n);
    const std::size_t ia = grid.snap_cells(a);
    const std::size_t ib = std::min(n, std::max(grid.snap_cells(b), ia + 1));
    res.a_snapped = grid.left_edge(ia);
    res.b_snapped = static_cast<double>(ib) / static_cast<double>(n);
    const Field sigma = compute_sigma(load, grid);
    const Field beta = compute_beta(sigma, params);
    std::vector<double> z(n), integrand(n);
    res.gamma_min = std::numeric_limits<double>::infinity();
    max_beta_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool inside = i >= ia && i < ib;
      z[i] = inside ? grid.midpoint(i) - res.a_snapped - mu : 1.0 - mu;
      integrand[i] = beta[i] * beta[i] / (z[i] + mu);
      if (z[i] < params.zeta_floor() || z[i] + mu == 0.0) res.in_admissible_set = false;
      if (inside) {
        res.gamma_min = std::min(res.gamma_min, beta[i] * beta[i]);
        max_beta_sq = std::max(max_beta_sq, beta[i] * beta[i]);
      }
    }
    const Field zeta(grid, FieldRole::dual_stress, std::move(z));
    DivergenceLevel lvl{n, integrate(grid, integrand), dual_energy(zeta, sigma, beta, params)};
    ns.push_back(static_cast<double>(n));
    ys.push_back(lvl.singular_integral);
    res.levels.push_back(lvl);
  }
  res.fit = fit_log_growth(ns, ys);
  res.monotone = strictly_increasing(ys);
  if (max_beta_sq <= 1e-24) {
    res.verdict = Verdict::inconclusive;
  } else if (res.in_admissible_set && res.monotone && res.fit.slope > 0.0 && res.fit.r2 >= 0.99 &&
             spans_doublings(ns.front(), ns.back(), 5.0)) {
    res.verdict = Verdict::confirmed;
  } else {
    res.verdict = Verdict::refuted;
  }
  return res;
}

SupInfiniteResult sup_infinite_demo(const MaterialParams& params, const LoadSpec& load, double gamma,
                                    const std::vector<std::size_t>& n_list,
                                    std::size_t n_cells_min) {
  const double mu = params.mu();
  const double upper = -params.zeta_floor() - mu;
  if (!(gamma > 0.0 && gamma < upper)) {
    std::ostringstream os;
    os << "gamma must satisfy 0 < gamma < nu*alpha^2/2 - mu = " << upper << ", got " << gamma;
    throw std::invalid_argument(os.str());
  }
  if (n_list.empty()) throw std::invalid_argument("sup-infinite demo needs at least one n");

  std::size_t l = 1, nmax = 1;
  for (std::size_t n : n_list) {
    if (n == 0) throw std::invalid_argument("sequence index n must be >= 1");
    l = std::lcm(l, n);
    nmax = std::max(nmax, n);
  }
  const std::size_t target = std::max(n_cells_min, 64 * nmax);
  const std::size_t n_cells = l * ((target + l - 1) / l);

  SupInfiniteResult res;
  res.n_cells = n_cells;
  const Grid grid(n_cells);
  const Field sigma = compute_sigma(load, grid);
  const Field beta = compute_beta(sigma, params);
  res.beta_sq_min = std::numeric_limits<double>::infinity();
  res.hypothesis_holds = true;
  for (double b : beta.values()) {
    res.beta_sq_min = std::min(res.beta_sq_min, b * b);
    if (!(b * b > params.eta())) res.hypothesis_holds = false;
  }

  res.all_in_a10 = true;
  res.rate_bound_holds = true;
  std::vector<double> ns, ys;
  for (std::size_t n : n_list) {
    const std::size_t cut = n_cells / n;  // cells in [0, 1/n)
    std::vector<double> z(n_cells), term(n_cells);
    for (std::size_t i = 0; i < n_cells; ++i) {
      z[i] = i < cut ? -mu - gamma / static_cast<double>(n) : -mu - gamma * grid.midpoint(i);
      term[i] = -beta[i] * beta[i] / (z[i] + mu);
    }
    const Field zeta(grid, FieldRole::dual_stress, z);
    SupInfiniteRow row;
    row.n = n;
    row.dual = dual_energy(zeta, sigma, beta, params);
    row.divergent_term = integrate(grid, term);
    row.rate_bound = res.beta_sq_min / gamma * std::log(static_cast<double>(n));
    row.zeta_min = *std::min_element(z.begin(), z.end());
    row.zeta_max = *std::max_element(z.begin(), z.end());
    if (row.dual.divergent || !(row.zeta_min > params.zeta_floor()) || !(row.zeta_max < -mu))
      res.all_in_a10 = false;
    if (!(row.divergent_term >= row.rate_bound)) res.rate_bound_holds = false;
    ns.push_back(static_cast<double>(n));
    ys.push_back(row.dual.divergent ? 0.0 : row.dual.value);
    res.rows.push_back(row);
  }
  res.monotone = strictly_increasing(ys);
  if (ns.size() >= 2) res.fit = fit_log_growth(ns, ys);

  if (!res.hypothesis_holds || !res.all_in_a10) {
    res.verdict = Verdict::inconclusive;
  } else if (res.monotone && res.rate_bound_holds && res.fit.slope > 0.0 && res.fit.r2 >= 0.99 &&
             spans_doublings(ns.front(), ns.back(), 5.0)) {
    res.verdict = Verdict::confirmed;
  } else {
    res.verdict = Verdict::refuted;
  }
  return res;
}

ApproachResult approach_sequence_demo(const MaterialParams& params, const LoadSpec& load,
                                      const std::vector<double>& eps_list, Branch side,
                                      std::size_t n_cells, std::uint64_t seed,
                                      std::size_t n_probes, const Tolerances& tol) {
  if (side == Branch::B3) throw std::invalid_argument("approach sequences exist for B1 and B2 only");
  const double mu = params.mu(), nu = params.nu();
  const double gap_rate = params.nu() * params.kappa();  // nu alpha^2 - 2 mu
  for (double e : eps_list) {
    if (!(e > 0.0)) throw std::invalid_argument("approach eps values must be positive");
    if (side == Branch::B2 && !(e < -mu - params.rho())) {
      std::ostringstream os;
      os << "B2-side eps must lie in (0, -mu - rho) = (0, " << -mu - params.rho() << "), got " << e;
      throw std::invalid_argument(os.str());
    }
  }

  ApproachResult res;
  res.side = side;
  const Grid grid(n_cells);
  const Field sigma = compute_sigma(load, grid);
  const Field beta = compute_beta(sigma, params);
  const double eps_beta = tol.beta(beta);
  std::vector<bool> b0(n_cells, false);
  std::size_t count = 0;
  res.hypothesis_holds = true;
  for (std::size_t i = 0; i < n_cells; ++i) {
    if (std::fabs(beta[i]) <= eps_beta) {
      b0[i] = true;
      ++count;
    } else if (beta[i] * beta[i] > params.eta() * (1.0 + kEtaClampRel)) {
      res.hypothesis_holds = false;
    }
  }
  res.lambda_b0 = static_cast<double>(count) / static_cast<double>(n_cells);
  if (count == 0 || (side == Branch::B2 && !res.hypothesis_holds)) return res;

  const Field base = branch_field(beta, side, params);
  const auto base_dual = dual_energy(base, sigma, beta, params, tol);
  if (base_dual.divergent) return res;
  res.base_dual = base_dual.value;

  std::vector<double> sorted = eps_list;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  res.formula_ok = true;
  for (double e : sorted) {
    std::vector<double> z(base.values().begin(), base.values().end());
    for (std::size_t i = 0; i < n_cells; ++i)
      if (b0[i]) z[i] = side == Branch::B1 ? -mu + e : -mu - e;
    const auto d = dual_energy(Field(grid, FieldRole::dual_stress, std::move(z)), sigma, beta,
                               params, tol);
    ApproachRow row;
    row.eps = e;
    row.dual = d.value;
    row.predicted = side == Branch::B1
                        ? res.base_dual - 0.5 * (e * e + gap_rate * e) / nu * res.lambda_b0
                        : res.base_dual + 0.5 * (gap_rate * e - e * e) / nu * res.lambda_b0;
    row.error = d.divergent ? std::numeric_limits<double>::infinity()
                            : std::fabs(row.dual - row.predicted);
    res.max_error = std::max(res.max_error, row.error);
    if (!(row.error <= tol.tol_dual * (1.0 + std::fabs(row.dual)))) res.formula_ok = false;
    res.rows.push_back(row);
  }
  res.approaches_base = true;
  for (std::size_t k = 0; k < res.rows.size(); ++k) {
    const double dist = std::fabs(res.rows[k].dual - res.base_dual);
    const bool right_side =
        side == Branch::B1 ? res.rows[k].dual < res.base_dual : res.rows[k].dual > res.base_dual;
    if (!right_side) res.approaches_base = false;
    if (k > 0 && !(dist < std::fabs(res.rows[k - 1].dual - res.base_dual)))
      res.approaches_base = false;
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Field lower = side == Branch::B2 ? branch_field(beta, Branch::B3, params) : base;
  res.probe_extreme = res.base_dual;
  const double slack = tol.tol_dual * (1.0 + std::fabs(res.base_dual));
  for (std::size_t p = 0; p < n_probes; ++p) {
    std::vector<double> z(n_cells);
    for (std::size_t i = 0; i < n_cells; ++i) {
      if (side == Branch::B1) {
        z[i] = -mu + std::pow(10.0, -4.0 + 5.0 * unit(rng));
      } else {
        const double u = 1e-6 + (1.0 - 2e-6) * unit(rng);
        z[i] = lower[i] + u * (-mu - lower[i]);
      }
    }
    const auto d = dual_energy(Field(grid, FieldRole::dual_stress, std::move(z)), sigma, beta,
                               params, tol);
    ++res.probes;
    if (d.divergent) continue;
    if (side == Branch::B1) {
      res.probe_extreme = std::max(res.probe_extreme, d.value);
      if (d.value > res.base_dual + slack) ++res.probe_violations;
    } else {
      res.probe_extreme = std::min(res.probe_extreme, d.value);
      if (d.value < res.base_dual - slack) ++res.probe_violations;
    }
  }

  res.verdict = (res.formula_ok && res.approaches_base && res.probe_violations == 0)
                    ? Verdict::confirmed
                    : Verdict::refuted;
  return res;
}

namespace {

std::vector<SpikeRow> spike_rows(const Field& base, double height, const Field& sigma,
                                 const MaterialParams& params, const std::vector<double>& eps_list,
                                 double pointwise_jump) {
  const Grid& grid = base.grid();
  const double p0 = primal_energy(base, sigma, params);
  std::vector<SpikeRow> rows;
  for (double e : eps_list) {
    const std::size_t k = std::max<std::size_t>(1, grid.snap_cells(e));
    std::vector<double> v(base.values().begin(), base.values().end());
    std::vector<double> diff(grid.n_cells(), 0.0);
    for (std::size_t i = 0; i < k; ++i) {
      v[i] += height;
      diff[i] = v[i] - base[i];
    }
    const double es = grid.right_edge(k - 1);
    SpikeRow r;
    r.eps_requested = e;
    r.eps_snapped = es;
    r.cells = k;
    r.delta_primal = primal_energy(Field(grid, FieldRole::strain, std::move(v)), sigma, params) - p0;
    r.delta_expected = pointwise_jump * es;
    r.norm4 = lp_norm(Field(grid, FieldRole::direction, std::move(diff)), 4.0);
    r.norm4_expected = std::fabs(height) * std::pow(es, 0.25);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace

Example1Result example1_full(const std::vector<double>& eps_list, std::size_t n_cells,
                             std::uint64_t seed) {
  Example1Result res;
  const MaterialParams& params = res.params;
  const double s5 = std::sqrt(5.0);
  res.beta = s5;
  res.eta = params.eta();
  res.n_cells = n_cells;

  const std::array<Branch, 3> branches{Branch::B1, Branch::B2, Branch::B3};
  const double s65 = std::sqrt(65.0);
  res.closed_forms = {(s65 - 9.0) / 4.0, -2.0, -(s65 + 9.0) / 4.0};
  for (std::size_t k = 0; k < 3; ++k) {
    res.roots[k] = solve_dae(5.0, branches[k], params).value();
    res.root_error = std::max(res.root_error, std::fabs(res.roots[k] - res.closed_forms[k]));
  }

  const Grid grid(n_cells);
  const Field sigma = compute_sigma(LoadSpec::uniform(params.mu() * params.alpha() + s5), grid);
  const Field beta = compute_beta(sigma, params);
  const Field zeta2 = branch_field(beta, Branch::B2, params);
  const Field v2 = v_from_zeta(zeta2, sigma, beta, params);
  res.v2 = v2[0];
  res.v2_critical = is_critical_pair(v2, zeta2, sigma, params);
  res.primal_v2 = primal_energy(v2, sigma, params);
  res.dual_zeta2 = dual_energy(zeta2, sigma, beta, params).value;
  res.second_variation_v2 =
      second_variation_quadratic(v2, Field::constant(grid, FieldRole::direction, 1.0), params);

  const double y0 = 3.0 - s5;
  const double sig = sigma[0];
  for (int k = 0; k < 100; ++k) {
    const double h = -6.0 + 12.0 * k / 99.0;
    const double lhs = p_value(y0 + h, sig, params) - p_value(y0, sig, params);
    const double rhs = 0.125 * h * h * (h - 2.0 * s5 + 2.0) * (h - 2.0 * s5 - 2.0);
    res.factorization_error = std::max(res.factorization_error, std::fabs(lhs - rhs) / (1.0 + std::fabs(rhs)));
  }

  const double jump2 = p_value(res.v2 + 2.0 * s5, sig, params) - p_value(res.v2, sig, params);
  res.spikes = spike_rows(v2, 2.0 * s5, sigma, params, eps_list, jump2);

  const Field zeta3 = branch_field(beta, Branch::B3, params);
  const Field v3 = v_from_zeta(zeta3, sigma, beta, params);
  res.v3 = v3[0];
  res.primal_v3 = primal_energy(v3, sigma, params);
  res.dual_zeta3 = dual_energy(zeta3, sigma, beta, params).value;
  double height = 1.0;
  while (p_value(res.v3 + height, sig, params) <= p_value(res.v3, sig, params) + 1.0) height *= 2.0;
  res.spike_height_v3 = height;
  const double jump3 = p_value(res.v3 + height, sig, params) - p_value(res.v3, sig, params);
  res.spikes_v3 = spike_rows(v3, height, sigma, params, eps_list, jump3);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(1e-9, 1.0 - 1e-9);
  res.sup_probe_max = -std::numeric_limits<double>::infinity();
  for (int p = 0; p < 200; ++p) {
    std::vector<double> z(n_cells);
    for (std::size_t i = 0; i < n_cells; ++i)
      z[i] = params.zeta_floor() + unit(rng) * (zeta2[i] - params.zeta_floor());
    const auto d = dual_energy(Field(grid, FieldRole::dual_stress, std::move(z)), sigma, beta, params);
    ++res.sup_probes;
    if (!d.divergent) res.sup_probe_max = std::max(res.sup_probe_max, d.value);
  }
  return res;
}

GlobalMinResult global_min_check(const MaterialParams& params, const LoadSpec& load,
                                 std::size_t n_random, std::uint64_t seed, std::size_t n_cells,
                                 const Tolerances& tol) {
  GlobalMinResult res;
  const Grid grid(n_cells);
  const Field sigma = compute_sigma(load, grid);
  const Field beta = compute_beta(sigma, params);
  const Field zeta1 = branch_field(beta, Branch::B1, params);
  const Field v1 = v_from_zeta(zeta1, sigma, beta, params, 0.0, tol);
  res.primal_v1 = primal_energy(v1, sigma, params);
  const auto d = dual_energy(zeta1, sigma, beta, params, tol);
  res.dual_zeta1 = d.value;
  res.duality_error = d.divergent ? std::numeric_limits<double>::infinity()
                                  : std::fabs(res.primal_v1 - res.dual_zeta1);
  const double slack = tol.tol_dual * (1.0 + std::fabs(res.primal_v1));
  res.duality_ok = res.duality_error <= slack;
  res.zero_perturbation_diff = primal_energy(v1, sigma, params) - res.primal_v1;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  res.min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t draw = 0; draw < n_random; ++draw) {
    const double amp = std::pow(10.0, -3.0 + 4.0 * unit(rng));
    const double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
    std::vector<double> v(v1.values().begin(), v1.values().end());
    const std::size_t family = draw % 3;
    ++res.family_counts[family];
    if (family == 0) {
      for (double& x : v) x += amp * (2.0 * unit(rng) - 1.0);
    } else if (family == 1) {
      const std::size_t max_w = std::max<std::size_t>(1, n_cells / 10);
      const auto w = 1 + static_cast<std::size_t>(unit(rng) * static_cast<double>(max_w));
      const auto start = static_cast<std::size_t>(unit(rng) * static_cast<double>(n_cells));
      for (std::size_t i = start; i < std::min(n_cells, start + w); ++i) v[i] += sign * amp;
    } else {
      const double c = unit(rng);
      const double w = 0.01 + 0.29 * unit(rng);
      for (std::size_t i = 0; i < n_cells; ++i) {
        const double s = (grid.midpoint(i) - c) / w;
        v[i] += sign * amp * std::exp(-s * s);
      }
    }
    const double margin = primal_energy(Field(grid, FieldRole::strain, std::move(v)), sigma, params) -
                          res.primal_v1;
    res.min_margin = std::min(res.min_margin, margin);
    if (margin < -slack) ++res.improvements;
    ++res.draws;
  }

  for (std::size_t i = 0; i < n_cells; ++i) {
    const auto best = minimize_pointwise(sigma[i], params);
    const double here = p_value(v1[i], sigma[i], params);
    res.max_value_excess =
        std::max(res.max_value_excess, (here - best.value) / (1.0 + std::fabs(best.value)));
    if (beta[i] * beta[i] > params.eta()) {
      ++res.cells_above_eta;
      res.max_minimizer_deviation = std::max(
          res.max_minimizer_deviation, std::fabs(v1[i] - best.y) / (1.0 + std::fabs(best.y)));
    }
  }
  res.oracle_ok = res.max_minimizer_deviation <= 1e-7 && res.max_value_excess <= 1e-10;

  const std::size_t probes = std::min<std::size_t>(n_random, 200);
  for (std::size_t p = 0; p < probes; ++p) {
    std::vector<double> z(n_cells);
    for (double& x : z) x = -params.mu() + std::pow(10.0, -4.0 + 5.0 * unit(rng));
    const auto dz = dual_energy(Field(grid, FieldRole::dual_stress, std::move(z)), sigma, beta,
                                params, tol);
    ++res.dual_probes;
    if (!dz.divergent && dz.value > res.dual_zeta1 + slack) ++res.dual_probe_violations;
  }
  return res;
}

GapObstructionResult gap_obstruction_demo(const MaterialParams& params, const LoadSpec& load,
                                          std::size_t n_cells, const Tolerances& tol) {
  GapObstructionResult res;
  const Grid grid(n_cells);
  const Field sigma = compute_sigma(load, grid);
  const Field beta = compute_beta(sigma, params);
  const double eps_beta = tol.beta(beta);
  std::size_t count = 0;
  res.hypothesis_holds = true;
  std::vector<double> corrected(n_cells, 0.0);
  res.corrected_fill = std::sqrt(params.kappa());
  for (std::size_t i = 0; i < n_cells; ++i) {
    if (std::fabs(beta[i]) <= eps_beta) {
      ++count;
      corrected[i] = res.corrected_fill;
    } else if (beta[i] * beta[i] > params.eta() * (1.0 + kEtaClampRel)) {
      res.hypothesis_holds = false;
    }
  }
  res.lambda_b0 = static_cast<double>(count) / static_cast<double>(n_cells);

  const Field zeta1 = branch_field(beta, Branch::B1, params);
  res.dual_zeta1 = dual_energy(zeta1, sigma, beta, params, tol).value;

  const Field zero = Field::constant(grid, FieldRole::strain, 0.0);
  const auto natural = duality_gap_identity(zeta1, zero, sigma, beta, params, tol);
  res.natural_primal = natural.lhs;
  res.natural_gap = natural.lhs - res.dual_zeta1;
  const double c = 2.0 * params.mu() / params.nu() - params.alpha() * params.alpha();
  res.natural_gap_predicted = params.nu() / 8.0 * c * c * res.lambda_b0;
  const Field v_nat = v_from_zeta(zeta1, sigma, beta, params, zero, tol);
  res.natural_grad_norm = lp_norm(primal_gradient(v_nat, sigma, params), 2.0);
  res.natural_constitutive_residual =
      lp_norm(xi_residuals(v_nat, zeta1, sigma, params).constitutive, 2.0);
  res.natural_critical_pair = is_critical_pair(v_nat, zeta1, sigma, params, tol.tol_crit);

  const Field fill(grid, FieldRole::strain, std::move(corrected));
  const auto fixed = duality_gap_identity(zeta1, fill, sigma, beta, params, tol);
  res.corrected_primal = fixed.lhs;
  res.corrected_gap = fixed.lhs - res.dual_zeta1;
  const Field v_fix = v_from_zeta(zeta1, sigma, beta, params, fill, tol);
  res.corrected_critical_pair = is_critical_pair(v_fix, zeta1, sigma, params, tol.tol_crit);

  double total = 0.0;
  for (std::size_t i = 0; i < n_cells; ++i) total += minimize_pointwise(sigma[i], params).value;
  res.pointwise_min_total = total / static_cast<double>(n_cells);
  return res;
}

}  // namespace cdl
