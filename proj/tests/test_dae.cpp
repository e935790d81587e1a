#include <cdl/dae.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace cdl;

namespace {

struct Draw {
  MaterialParams params;
  double tau_sq;
};

// Admissible parameters with tau^2 in [0, eta].
Draw random_draw(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double mu = std::pow(10.0, -1.0 + 2.0 * u(rng));
  const double nu = std::pow(10.0, -1.0 + 2.0 * u(rng));
  const double amin = std::sqrt(2.0 * mu / nu);
  const double alpha = amin * (1.05 + 3.0 * u(rng));
  MaterialParams p(mu, nu, alpha);
  return {p, p.eta() * u(rng)};
}

}  // namespace

TEST(G, MatchesExpandedPolynomial) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-6.0, 3.0);
  for (int k = 0; k < 200; ++k) {
    const auto d = random_draw(rng);
    const auto& p = d.params;
    const double s = u(rng);
    const auto want = oracle::g(s, p.mu(), p.nu(), p.alpha());
    EXPECT_NEAR(g_eval(s, p), static_cast<double>(want), 1e-12 * (1.0 + std::fabs(want)));
    const auto dwant = oracle::g_prime(s, p.mu(), p.nu(), p.alpha());
    EXPECT_NEAR(g_prime(s, p), static_cast<double>(dwant), 1e-11 * (1.0 + std::fabs(dwant)));
  }
}

TEST(G, TableIdentities) {
  std::mt19937_64 rng(2);
  for (int k = 0; k < 1000; ++k) {
    const auto p = random_draw(rng).params;
    EXPECT_EQ(g_eval(-p.mu(), p), 0.0);
    EXPECT_EQ(g_eval(p.zeta_floor(), p), 0.0);
    EXPECT_NEAR(g_eval(p.rho(), p), p.eta(), 1e-12 * p.eta());
    EXPECT_NEAR(g_prime(p.rho(), p), 0.0, 1e-12 * (1.0 + p.eta()));
  }
}

TEST(SolveDae, ExampleRoots) {
  const MaterialParams p(1.0, 1.0, 3.0);
  const double s65 = std::sqrt(65.0);
  EXPECT_NEAR(*solve_dae(5.0, Branch::B1, p), (s65 - 9.0) / 4.0, 1e-12);
  EXPECT_NEAR(*solve_dae(5.0, Branch::B2, p), -2.0, 1e-12);
  EXPECT_NEAR(*solve_dae(5.0, Branch::B3, p), -(s65 + 9.0) / 4.0, 1e-12);
  EXPECT_NEAR(*solve_dae(5.0, Branch::B3, p), oracle::kZeta3, 1e-15);
}

TEST(SolveDae, LimitsAndRegimes) {
  const MaterialParams p(1.0, 1.0, 3.0);
  EXPECT_EQ(*solve_dae(0.0, Branch::B1, p), -1.0);
  EXPECT_EQ(*solve_dae(0.0, Branch::B2, p), -1.0);
  EXPECT_EQ(*solve_dae(0.0, Branch::B3, p), -4.5);
  EXPECT_EQ(*solve_dae(p.eta(), Branch::B2, p), p.rho());
  EXPECT_EQ(*solve_dae(p.eta(), Branch::B3, p), p.rho());
  EXPECT_EQ(*solve_dae(p.eta() * (1.0 + 5e-13), Branch::B2, p), p.rho());
  EXPECT_FALSE(solve_dae(p.eta() * 1.001, Branch::B2, p).has_value());
  EXPECT_FALSE(solve_dae(16.0, Branch::B3, p).has_value());
  ASSERT_TRUE(solve_dae(16.0, Branch::B1, p).has_value());
  EXPECT_NEAR(g_eval(*solve_dae(16.0, Branch::B1, p), p), 16.0, 1e-12 * 16.0);
  EXPECT_GT(*solve_dae(1e6, Branch::B1, p), 0.0);
  EXPECT_THROW(solve_dae(-1.0, Branch::B1, p), std::invalid_argument);
  EXPECT_THROW(solve_dae(NAN, Branch::B1, p), std::invalid_argument);
}

TEST(SolveDae, OrderingProperty) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 1000; ++k) {
    const auto [p, t2] = random_draw(rng);
    const double s1 = *solve_dae(t2, Branch::B1, p);
    const double s2 = *solve_dae(t2, Branch::B2, p);
    const double s3 = *solve_dae(t2, Branch::B3, p);
    const double slack = 1e-10;
    EXPECT_LE(p.zeta_floor(), s3 + slack);
    EXPECT_LE(s3, p.rho() + slack);
    EXPECT_LE(p.rho(), s2 + slack);
    EXPECT_LE(s2, -p.mu() + slack);
    EXPECT_LE(-p.mu(), s1 + slack);
    for (double s : {s1, s2, s3})
      EXPECT_NEAR(g_eval(s, p), t2, 1e-11 * std::max(t2, p.eta()));
  }
}

TEST(SolveDae, AgreesWithTrigonometricRoots) {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 300; ++k) {
    auto [p, t2] = random_draw(rng);
    t2 = std::max(t2, 1e-3 * p.eta());
    t2 = std::min(t2, 0.999 * p.eta());
    const auto r = oracle::cubic_roots(t2, p.mu(), p.nu(), p.alpha());
    const double scale = 1.0 + p.nu() * p.alpha() * p.alpha();
    EXPECT_NEAR(*solve_dae(t2, Branch::B1, p), static_cast<double>(r[0]), 1e-10 * scale);
    EXPECT_NEAR(*solve_dae(t2, Branch::B2, p), static_cast<double>(r[1]), 1e-10 * scale);
    EXPECT_NEAR(*solve_dae(t2, Branch::B3, p), static_cast<double>(r[2]), 1e-10 * scale);
  }
}

TEST(HTau, ValuesAndPole) {
  const MaterialParams p(1.0, 1.0, 3.0);
  const double s5 = std::sqrt(5.0);
  EXPECT_NEAR(h_tau_eval(-2.0, s5, p), oracle::kH2, 1e-14);
  EXPECT_NEAR(h_tau_eval(-2.0, s5, p),
              static_cast<double>(oracle::h(-2.0L, std::sqrt(5.0L), 1, 1, 3)), 1e-15);
  EXPECT_EQ(h_tau_eval(-1.0, 0.0, p), -0.5);
  EXPECT_THROW(h_tau_eval(-1.0, 0.5, p), PoleError);
}

TEST(BranchField, ReportsFirstFailingCell) {
  const MaterialParams p(1.0, 1.0, 3.0);
  const Grid g(10);
  const Field beta = Field::sample(g, FieldRole::data, [](double x) { return 6.0 * x; });
  try {
    branch_field(beta, Branch::B2, p);
    FAIL();
  } catch (const NoRealRoot& e) {
    // beta^2 > 343/27 first at x = 0.65
    EXPECT_EQ(e.cell, 6u);
  }
  EXPECT_NO_THROW(branch_field(beta, Branch::B1, p));
}

TEST(BranchAssignment, RunsRoundTrip) {
  const Grid g(10);
  const auto a = BranchAssignment::from_runs(g, {{2, 5, Branch::B2}, {7, 8, Branch::B3}});
  EXPECT_EQ(a[0], Branch::B1);
  EXPECT_EQ(a[3], Branch::B2);
  EXPECT_EQ(a[7], Branch::B3);
  const auto runs = a.runs();
  ASSERT_EQ(runs.size(), 5u);
  EXPECT_EQ(runs[1].from, 2u);
  EXPECT_EQ(runs[1].to, 5u);
  EXPECT_EQ(runs[1].branch, Branch::B2);
  EXPECT_THROW(BranchAssignment::from_runs(g, {{8, 12, Branch::B2}}), std::invalid_argument);
}

TEST(BranchAssignment, MixedSolutionsSolveTheDae) {
  const MaterialParams p(1.0, 1.0, 3.0);
  const Grid g(12);
  const Field beta = Field::sample(g, FieldRole::data, [](double x) { return 3.0 * x; });
  std::vector<Branch> b(12);
  for (std::size_t i = 0; i < 12; ++i) b[i] = static_cast<Branch>(i % 3);
  const Field z = assemble_assignment_solution(beta, BranchAssignment(g, b), p);
  for (std::size_t i = 0; i < 12; ++i) EXPECT_NEAR(g_eval(z[i], p), beta[i] * beta[i], 1e-11);

  const Field big = Field::constant(g, FieldRole::data, 4.0);
  try {
    assemble_assignment_solution(big, BranchAssignment::from_runs(g, {{3, 5, Branch::B3}}), p);
    FAIL();
  } catch (const InvalidAssignment& e) {
    EXPECT_EQ(e.cells, (std::vector<std::size_t>{3, 4}));
  }
}

TEST(BranchOptimality, HoldsOnRandomLoads) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto d = random_draw(rng);
    const double amp = 1.3 * std::sqrt(d.params.eta());
    const double c0 = u(rng), c1 = u(rng);
    const Grid g(40);
    const Field beta = Field::sample(g, FieldRole::data,
                                     [&](double x) { return amp * (c0 + c1 * x) / 2.0; });
    const auto rep = verify_branch_optimality(beta, d.params, 64);
    EXPECT_TRUE(rep.ok()) << "trial " << trial << " violations " << rep.violations.size();
    EXPECT_GT(rep.samples_checked, 0u);
  }
}

TEST(BranchOptimality, TinyBetaNearThePole) {
  const MaterialParams p(1.0, 1.0, 3.0);
  const Grid g(3);
  const Field beta(g, FieldRole::data, {0.0, 1e-200, 1e-20});
  EXPECT_NO_THROW({
    const auto rep = verify_branch_optimality(beta, p, 32);
    EXPECT_TRUE(rep.ok());
  });
}
