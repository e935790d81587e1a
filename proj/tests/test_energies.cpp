#include <cdl/dae.hpp>
#include <cdl/energies.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace cdl;

namespace {

const MaterialParams kEx(1.0, 1.0, 3.0);
const double kS5 = std::sqrt(5.0);

Field constant(const Grid& g, double c, FieldRole role = FieldRole::data) {
  return Field::constant(g, role, c);
}

Field random_field(const Grid& g, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(g.n_cells());
  for (double& x : v) x = u(rng);
  return Field(g, FieldRole::data, std::move(v));
}

}  // namespace

TEST(PrimalEnergy, Examples) {
  const Grid g(1000);
  const Field sigma = constant(g, 3.0 + kS5);
  EXPECT_EQ(primal_energy(constant(g, 0.0), sigma, kEx), 0.0);
  const double y0 = 3.0 - kS5;
  const auto want = oracle::p(3.0L - std::sqrt(5.0L), 3.0L + std::sqrt(5.0L), 1, 1, 3);
  EXPECT_NEAR(primal_energy(constant(g, y0), sigma, kEx), static_cast<double>(want), 1e-13);
  EXPECT_NEAR(primal_energy(constant(g, y0), sigma, kEx), oracle::kH2, 1e-13);

  for (double eps : {0.1, 0.01, 0.001}) {
    std::vector<double> v(g.n_cells(), y0);
    for (std::size_t i = 0; i < g.snap_cells(eps); ++i) v[i] = y0 + 2.0 * kS5;
    const double d = primal_energy(Field(g, FieldRole::strain, v), sigma, kEx) -
                     primal_energy(constant(g, y0), sigma, kEx);
    EXPECT_NEAR(d, -10.0 * eps, 1e-9);
  }
}

TEST(XiEnergy, Examples) {
  const Grid g(20);
  EXPECT_EQ(xi_energy(constant(g, 0.0), constant(g, 0.0), constant(g, 0.0), kEx), 0.0);
  EXPECT_NEAR(xi_energy(constant(g, 3.0), constant(g, -1.0), constant(g, 3.0), kEx), -0.5, 1e-15);
}

TEST(XiEnergy, EqualsPrimalAtZetaFromV) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const Grid g(1 + trial % 50);
    const Field v = random_field(g, rng, -5.0, 8.0);
    const Field s = random_field(g, rng, -10.0, 10.0);
    const double pe = primal_energy(v, s, kEx);
    EXPECT_NEAR(xi_energy(v, zeta_from_v(v, kEx), s, kEx), pe, 1e-12 * (1.0 + std::fabs(pe)));
  }
}

TEST(XiEnergy, ConcaveInZeta) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 200; ++trial) {
    const Grid g(17);
    const Field v = random_field(g, rng, -5.0, 8.0);
    const Field s = random_field(g, rng, -10.0, 10.0);
    const Field z = random_field(g, rng, -20.0, 20.0);
    const double top = xi_energy(v, zeta_from_v(v, kEx), s, kEx);
    EXPECT_LE(xi_energy(v, z, s, kEx), top + 1e-12 * (1.0 + std::fabs(top)));
  }
}

TEST(SingularSet, Examples) {
  const Grid g(10);
  EXPECT_TRUE(singular_set(constant(g, 0.0), constant(g, 0.0), kEx).empty());
  const auto full = singular_set(constant(g, -1.0), constant(g, 0.0), kEx);
  EXPECT_EQ(full.measure, 1.0);
  EXPECT_TRUE(full.well_posed());
  const auto bad = singular_set(constant(g, -1.0), constant(g, kS5), kEx);
  EXPECT_EQ(bad.measure, 1.0);
  EXPECT_EQ(bad.ill_posed.size(), 10u);
}

TEST(DualEnergy, Examples) {
  const Grid g(10);
  const auto d0 = dual_energy(constant(g, -1.0), constant(g, 3.0), constant(g, 0.0), kEx);
  ASSERT_FALSE(d0.divergent);
  EXPECT_EQ(d0.value, -0.5);

  const Grid k(1000);
  const auto d2 = dual_energy(constant(k, -2.0), constant(k, 3.0 + kS5), constant(k, kS5), kEx);
  ASSERT_FALSE(d2.divergent);
  EXPECT_NEAR(d2.value, oracle::kH2, 1e-13);

  const auto dd = dual_energy(constant(g, -1.0), constant(g, 3.0 + kS5), constant(g, kS5), kEx);
  EXPECT_TRUE(dd.divergent);
  EXPECT_EQ(*dd.first_ill_posed, 0u);
}

TEST(DualEnergy, MatchesScalarOracleCellwise) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Grid g(9);
    std::vector<double> z(9), b(9), s(9);
    oracle::LD want = 0;
    for (std::size_t i = 0; i < 9; ++i) {
      b[i] = -4.0 + 8.0 * u(rng);
      s[i] = 3.0 + b[i];
      z[i] = -4.5 + 8.0 * u(rng);
      if (std::fabs(z[i] + 1.0) < 1e-3) z[i] += 0.01;
      want += oracle::h(z[i], b[i], 1, 1, 3);
    }
    const auto d = dual_energy(Field(g, FieldRole::dual_stress, z), Field(g, FieldRole::load, s),
                               Field(g, FieldRole::data, b), kEx);
    want /= 9;
    EXPECT_NEAR(d.value, static_cast<double>(want), 1e-9 * (1.0 + std::fabs(static_cast<double>(want))));
  }
}

TEST(PrimalGradient, Examples) {
  const Grid g(5);
  const Field at_zero = primal_gradient(constant(g, 0.0), constant(g, 0.0), kEx);
  for (double r : at_zero.values()) EXPECT_EQ(r, 0.0);
  const Field at_v2 = primal_gradient(constant(g, 3.0 - kS5), constant(g, 3.0 + kS5), kEx);
  for (double r : at_v2.values()) EXPECT_NEAR(r, 0.0, 1e-12);
}

TEST(PrimalGradient, CentralDifferences) {
  std::mt19937_64 rng(24);
  const Grid g(200);
  const Field v = Field::sample(g, FieldRole::strain, [](double x) { return 1.0 + 2.0 * std::sin(5.0 * x); });
  const Field s = Field::sample(g, FieldRole::load, [](double x) { return 4.0 - x; });
  const Field grad = primal_gradient(v, s, kEx);
  const double delta = 1e-5;
  for (int d = 0; d < 20; ++d) {
    const Field h = random_field(g, rng, -1.0, 1.0);
    std::vector<double> vp(g.n_cells()), vm(g.n_cells()), gh(g.n_cells());
    for (std::size_t i = 0; i < g.n_cells(); ++i) {
      vp[i] = v[i] + delta * h[i];
      vm[i] = v[i] - delta * h[i];
      gh[i] = grad[i] * h[i];
    }
    const double fd = (primal_energy(Field(g, FieldRole::strain, vp), s, kEx) -
                       primal_energy(Field(g, FieldRole::strain, vm), s, kEx)) /
                      (2.0 * delta);
    const double an = integrate(g, gh);
    EXPECT_LE(std::fabs(fd - an), 1e-6 * std::max(1.0, std::fabs(an)));
  }
}

TEST(XiResiduals, Examples) {
  const Grid g(4);
  const auto r = xi_residuals(constant(g, 3.0), constant(g, -1.0), constant(g, 3.0), kEx);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(r.stress[i], 0.0);
    // 9/2 - 9 + 1: nonzero, so the pair is not critical
    EXPECT_EQ(r.constitutive[i], -3.5);
  }
  const auto r0 = xi_residuals(constant(g, 0.0), constant(g, 0.0), constant(g, 1.0), kEx);
  for (double x : r0.stress.values()) EXPECT_EQ(x, -1.0);

  const Grid k(100);
  const Field beta = constant(k, 4.0);
  const Field sigma = constant(k, 7.0);
  const Field z1 = branch_field(beta, Branch::B1, kEx);
  const Field v1 = v_from_zeta(z1, sigma, beta, kEx);
  const auto rr = xi_residuals(v1, z1, sigma, kEx);
  EXPECT_LE(rr.stress.max_abs(), 1e-10);
  EXPECT_LE(rr.constitutive.max_abs(), 1e-10);
  EXPECT_TRUE(is_critical_pair(v1, z1, sigma, kEx));
}

TEST(SecondVariation, Examples) {
  const Grid g(10);
  const Field y0 = constant(g, 3.0 - kS5);
  EXPECT_EQ(second_variation_quadratic(y0, constant(g, 0.0), kEx), 0.0);
  EXPECT_NEAR(second_variation_quadratic(y0, constant(g, 1.0), kEx), 4.0, 1e-12);
  EXPECT_NEAR(second_variation_at_dual(zeta_from_v(y0, kEx), constant(g, 1.0), kEx), 4.0, 1e-12);

  // beta^2 = eta: v0 = alpha + beta/(rho + mu) has zero weight
  const double b = std::sqrt(kEx.eta());
  const double v0 = 3.0 + b / (kEx.rho() + 1.0);
  std::mt19937_64 rng(25);
  const Field h = random_field(g, rng, -3.0, 3.0);
  EXPECT_NEAR(second_variation_quadratic(constant(g, v0), h, kEx), 0.0, 1e-12);
}

TEST(SecondVariation, TwoFormsAgree) {
  std::mt19937_64 rng(26);
  for (int trial = 0; trial < 100; ++trial) {
    const Grid g(31);
    const Field v = random_field(g, rng, -4.0, 9.0);
    const Field h = random_field(g, rng, -2.0, 2.0);
    const double a = second_variation_quadratic(v, h, kEx);
    const double b = second_variation_at_dual(zeta_from_v(v, kEx), h, kEx);
    EXPECT_NEAR(a, b, 1e-12 * std::max(1.0, std::fabs(a)));
  }
}

TEST(ZetaFromV, Examples) {
  const Grid g(3);
  EXPECT_EQ(zeta_from_v(constant(g, 0.0), kEx)[0], 0.0);
  EXPECT_EQ(zeta_from_v(constant(g, 3.0), kEx)[1], -4.5);
  EXPECT_NEAR(zeta_from_v(constant(g, 3.0 - kS5), kEx)[2], -2.0, 1e-15);
}

TEST(VFromZeta, Examples) {
  const Grid g(6);
  const Field v = v_from_zeta(constant(g, 0.7), constant(g, 3.0), constant(g, 0.0), kEx);
  for (double x : v.values()) EXPECT_EQ(x, 3.0);
  const Field v2 = v_from_zeta(constant(g, -2.0), constant(g, 3.0 + kS5), constant(g, kS5), kEx);
  for (double x : v2.values()) EXPECT_NEAR(x, 3.0 - kS5, 1e-15);
  const Field vf = v_from_zeta(constant(g, -1.0), constant(g, 3.0), constant(g, 0.0), kEx, 1.25);
  for (double x : vf.values()) EXPECT_EQ(x, 4.25);
  try {
    v_from_zeta(constant(g, -1.0), constant(g, 3.0 + kS5), constant(g, kS5), kEx);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_EQ(e.cell, 0u);
    EXPECT_NE(std::string(e.what()).find("zeta outside A0/A2 at cell 0"), std::string::npos);
  }
}

TEST(GapIdentity, Examples) {
  const Grid g(1000);
  // quarter of the bar with beta = 0, beta = 2 (x - 1/4) elsewhere
  const Field beta = Field::sample(g, FieldRole::data, [](double x) { return x < 0.25 ? 0.0 : 2.0 * (x - 0.25); });
  std::vector<double> sv(g.n_cells());
  for (std::size_t i = 0; i < g.n_cells(); ++i) sv[i] = 3.0 + beta[i];
  const Field sigma(g, FieldRole::load, sv);
  const Field z1 = branch_field(beta, Branch::B1, kEx);

  const auto nat = duality_gap_identity(z1, constant(g, 0.0), sigma, beta, kEx);
  EXPECT_NEAR(nat.gap, 49.0 / 32.0, 1e-9);
  EXPECT_NEAR(nat.singular_measure, 0.25, 1e-15);
  EXPECT_NEAR(nat.lhs, nat.rhs, 1e-10 * (1.0 + std::fabs(nat.lhs)));

  const auto fixed = duality_gap_identity(z1, constant(g, std::sqrt(7.0)), sigma, beta, kEx);
  EXPECT_LE(std::fabs(fixed.gap), 1e-10);
  EXPECT_NEAR(fixed.lhs, fixed.rhs, 1e-10 * (1.0 + std::fabs(fixed.lhs)));

  // no singular cells: lhs = rhs = dual
  const Field b4 = constant(g, 4.0);
  const Field s4 = constant(g, 7.0);
  const Field z4 = branch_field(b4, Branch::B1, kEx);
  const auto none = duality_gap_identity(z4, constant(g, 5.0), s4, b4, kEx);
  EXPECT_EQ(none.gap, 0.0);
  EXPECT_NEAR(none.lhs, dual_energy(z4, s4, b4, kEx).value, 1e-12);

  EXPECT_THROW(duality_gap_identity(constant(g, 0.3), constant(g, 0.0), sigma, beta, kEx),
               std::invalid_argument);
}

TEST(GapIdentity, RandomBranchSolutions) {
  std::mt19937_64 rng(27);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Grid g(50);
    std::vector<double> b(50), s(50), f(50);
    std::vector<Branch> br(50);
    const double eta = kEx.eta();
    for (std::size_t i = 0; i < 50; ++i) {
      const double r = u(rng);
      b[i] = r < 0.2 ? 0.0 : (u(rng) < 0.5 ? -1.0 : 1.0) * std::sqrt(eta * 1.5 * u(rng));
      s[i] = 3.0 + b[i];
      f[i] = -4.0 + 8.0 * u(rng);
      const auto k = static_cast<int>(3.0 * u(rng));
      br[i] = b[i] * b[i] > eta ? Branch::B1 : static_cast<Branch>(k);
    }
    const Field beta(g, FieldRole::data, b);
    const Field zeta = assemble_assignment_solution(beta, BranchAssignment(g, br), kEx);
    const auto gi = duality_gap_identity(zeta, Field(g, FieldRole::strain, f),
                                         Field(g, FieldRole::load, s), beta, kEx);
    EXPECT_LE(std::fabs(gi.lhs - gi.rhs), 1e-10 * (1.0 + std::fabs(gi.lhs))) << "trial " << trial;
  }
}

TEST(EnergyReport, CriticalPairEqualities) {
  const Grid g(1000);
  const Field beta = Field::sample(g, FieldRole::data, [](double x) { return 4.0 + x; });
  std::vector<double> sv(g.n_cells());
  for (std::size_t i = 0; i < sv.size(); ++i) sv[i] = 3.0 + beta[i];
  const Field sigma(g, FieldRole::load, sv);
  const Field z1 = branch_field(beta, Branch::B1, kEx);
  const Field v1 = v_from_zeta(z1, sigma, beta, kEx);
  const auto r = energy_report(v1, z1, sigma, beta, kEx);
  EXPECT_TRUE(r.critical);
  EXPECT_NEAR(r.primal, r.xi, 1e-8 * (1.0 + std::fabs(r.primal)));
  EXPECT_NEAR(r.xi, r.dual.value, 1e-8 * (1.0 + std::fabs(r.primal)));
  EXPECT_LE(r.grad_norm, 1e-10);
  EXPECT_GT(r.second_variation_coeff_min, 0.0);
}
