#pragma once

#include <cdl/dae.hpp>
#include <cdl/energies.hpp>
#include <cdl/model.hpp>
#include <cdl/report.hpp>

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace cdl {

// ---------------------------------------------------------------------------
// The pointwise primal integrand
//   p(y) = mu y^2/2 + nu (y^2/2 - alpha y)^2 / 2 - sigma y,  sigma = alpha mu + beta.

double p_value(double y, double sigma, const MaterialParams& params);
double p_first(double y, double sigma, const MaterialParams& params);
double p_second(double y, const MaterialParams& params);
double p_third(double y, const MaterialParams& params);

enum class CriticalKind { local_min, local_max, not_extremum, degenerate };
std::string to_string(CriticalKind k);

struct PolyClassification {
  double y = 0.0;
  double zeta = 0.0;  // the dual root this critical point came from
  double dp = 0.0;
  double d2p = 0.0;
  double d3p = 0.0;
  CriticalKind kind = CriticalKind::degenerate;
};

/// All real critical points of p for a constant beta, obtained from the DAE
/// roots through y = alpha + beta/(zeta + mu) (or alpha +- sqrt(kappa) on the
/// removable root when beta = 0), classified by the derivative test. Sorted by y.
std::vector<PolyClassification> classify_p_critical(const MaterialParams& params, double beta);

/// Global minimizer of p on the real line, found without the dual route: p'
/// is split at the roots of p'' into monotone pieces and each sign change is
/// bisected.
struct PointwiseMin {
  double y;
  double value;
};
PointwiseMin minimize_pointwise(double sigma, const MaterialParams& params);

// ---------------------------------------------------------------------------

struct DivergenceLevel {
  std::size_t n_cells;
  double singular_integral;  // integral beta^2/(zeta + mu)
  DualValue dual;
};

struct DivergenceResult {
  double a_snapped = 0.0;
  double b_snapped = 0.0;
  double gamma_min = 0.0;  // min beta^2 on [a, b] at the finest level
  bool in_admissible_set = true;
  std::vector<DivergenceLevel> levels;
  LogFit fit;
  bool monotone = false;
  Verdict verdict = Verdict::inconclusive;
};

/// zeta = x - a - mu on (a, b), 1 - mu elsewhere, on each mesh in `levels`.
/// Confirmed when the beta^2/(zeta+mu) integral grows monotonically and
/// logarithmically (R^2 >= 0.99, >= 5 doublings); inconclusive when beta
/// vanishes on [a, b].
DivergenceResult prop1_divergence_demo(const MaterialParams& params, const LoadSpec& load, double a,
                                       double b, const std::vector<std::size_t>& levels);

struct SupInfiniteRow {
  std::size_t n;
  DualValue dual;
  double divergent_term;  // -integral beta^2/(zeta_n + mu)
  double rate_bound;      // (min beta^2 / gamma) ln n
  double zeta_min;
  double zeta_max;
};

struct SupInfiniteResult {
  std::size_t n_cells = 0;
  double beta_sq_min = 0.0;
  bool hypothesis_holds = false;  // beta^2 > eta on every cell
  bool all_in_a10 = false;        // -nu alpha^2/2 < zeta_n < -mu, dual finite
  bool rate_bound_holds = false;
  bool monotone = false;
  LogFit fit;
  std::vector<SupInfiniteRow> rows;
  Verdict verdict = Verdict::inconclusive;
};

/// zeta_n = -mu - gamma x on [1/n, 1], -mu - gamma/n on [0, 1/n). The grid is
/// the smallest multiple of lcm(n_list) that has at least max(n_cells_min,
/// 64 max n) cells. Throws std::invalid_argument unless
/// 0 < gamma < nu alpha^2/2 - mu.
SupInfiniteResult sup_infinite_demo(const MaterialParams& params, const LoadSpec& load, double gamma,
                                    const std::vector<std::size_t>& n_list,
                                    std::size_t n_cells_min = 1000);

struct ApproachRow {
  double eps;
  double dual;
  double predicted;
  double error;
};

struct ApproachResult {
  Branch side = Branch::B1;
  double lambda_b0 = 0.0;
  double base_dual = 0.0;
  bool hypothesis_holds = false;  // beta^2 <= eta off B0
  std::vector<ApproachRow> rows;
  double max_error = 0.0;
  bool formula_ok = false;
  bool approaches_base = false;
  std::size_t probes = 0;
  std::size_t probe_violations = 0;
  double probe_extreme = 0.0;  // max (B1) or min (B2) probe dual value
  Verdict verdict = Verdict::inconclusive;
};

/// zeta_eps equals the branch field off B0 and -mu + eps (side B1) or
/// -mu - eps (side B2) on B0. Compares the dual energy with the closed-form
/// shift and probes random fields on the same side of -mu.
ApproachResult approach_sequence_demo(const MaterialParams& params, const LoadSpec& load,
                                      const std::vector<double>& eps_list, Branch side,
                                      std::size_t n_cells, std::uint64_t seed = 42,
                                      std::size_t n_probes = 200, const Tolerances& tol = {});

struct SpikeRow {
  double eps_requested;
  double eps_snapped;
  std::size_t cells;
  double delta_primal;
  double delta_expected;
  double norm4;
  double norm4_expected;
};

struct Example1Result {
  MaterialParams params{1.0, 1.0, 3.0};
  double beta = 0.0;
  double eta = 0.0;
  std::array<double, 3> roots{};
  std::array<double, 3> closed_forms{};
  double root_error = 0.0;
  double v2 = 0.0;
  bool v2_critical = false;
  double primal_v2 = 0.0;
  double dual_zeta2 = 0.0;
  double second_variation_v2 = 0.0;
  double factorization_error = 0.0;
  std::vector<SpikeRow> spikes;
  // v3 side: an upward spike shows v3 is not a local maximizer
  double v3 = 0.0;
  double dual_zeta3 = 0.0;
  double primal_v3 = 0.0;
  double spike_height_v3 = 0.0;
  std::vector<SpikeRow> spikes_v3;
  std::size_t sup_probes = 0;
  double sup_probe_max = 0.0;
  std::size_t n_cells = 0;
};

/// mu = nu = 1, alpha = 3, beta = sqrt(5): roots, critical pair at v2,
/// factorization of p(y0 + h) - p(y0), and the spike perturbations.
Example1Result example1_full(const std::vector<double>& eps_list, std::size_t n_cells = 1000,
                             std::uint64_t seed = 42);

struct GlobalMinResult {
  double primal_v1 = 0.0;
  double dual_zeta1 = 0.0;
  double duality_error = 0.0;
  bool duality_ok = false;
  std::size_t draws = 0;
  std::size_t improvements = 0;  // draws with P(v) < P(v1) - tol
  double min_margin = 0.0;       // min over draws of P(v) - P(v1)
  double zero_perturbation_diff = 0.0;
  std::size_t cells_above_eta = 0;
  double max_minimizer_deviation = 0.0;  // where beta^2 > eta
  double max_value_excess = 0.0;         // p(v1) - min p, all cells
  bool oracle_ok = false;
  std::size_t dual_probes = 0;
  std::size_t dual_probe_violations = 0;
  std::array<std::size_t, 3> family_counts{};  // uniform, spike, bump
};

GlobalMinResult global_min_check(const MaterialParams& params, const LoadSpec& load,
                                 std::size_t n_random, std::uint64_t seed, std::size_t n_cells,
                                 const Tolerances& tol = {});

struct GapObstructionResult {
  double lambda_b0 = 0.0;
  bool hypothesis_holds = false;
  double dual_zeta1 = 0.0;
  double natural_primal = 0.0;
  double natural_gap = 0.0;
  double natural_gap_predicted = 0.0;
  double natural_grad_norm = 0.0;
  double natural_constitutive_residual = 0.0;
  bool natural_critical_pair = false;
  double corrected_fill = 0.0;
  double corrected_primal = 0.0;
  double corrected_gap = 0.0;
  bool corrected_critical_pair = false;
  double pointwise_min_total = 0.0;  // integral of the cellwise minimum of p
};

GapObstructionResult gap_obstruction_demo(const MaterialParams& params, const LoadSpec& load,
                                          std::size_t n_cells, const Tolerances& tol = {});

struct WeightsResult {
  std::vector<double> weights;            // beta_n, n = 1..N
  std::vector<std::size_t> thresholds;    // n_k, k = 1..K (1-based indices)
  double alpha_sum = 0.0;
  double bound = 0.0;                     // alpha_sum + sum_k k 2^-k
  double weighted_sum = 0.0;
  double max_partial = 0.0;
  bool nondecreasing = false;
  bool bounded = false;
  bool inconclusive = false;
};

/// Non-decreasing unbounded weights with a summable weighted series:
/// n_k = first n with R_n < 2^-k, beta_n = 1 for n <= n_1 and k for
/// n_k < n <= n_{k+1}. Tails R_n are the prefix suffix sums plus
/// `tail_beyond`, the mass after the prefix.
WeightsResult construct_diverging_weights(std::span<const double> alphas, double tail_beyond = 0.0);

}  // namespace cdl
