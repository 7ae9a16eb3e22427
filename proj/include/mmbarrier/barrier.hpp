#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "mmbarrier/entropy.hpp"
#include "mmbarrier/functionals.hpp"

namespace mmbarrier {

/// The reduction preorder a barrier is quoted for. The support functionals
/// are monotone under all four, so it only labels the output.
enum class MethodLabel { kRestriction, kDegeneration, kMonomialDegeneration, kMonomialRestriction };

/// Where the asymptotic rank of a query came from.
enum class RankMode { kRegistry, kUser, kHeuristic };

std::string to_string(MethodLabel label);
std::string to_string(RankMode mode);

struct BarrierQuery {
  std::string tensor_id;
  /// Equivalent presentations of the intermediate tensor; the functional is
  /// minimized over them at every theta. At least one.
  std::vector<Presentation> presentations;
  double p = 0.0;
  double kappa = 0.0;
  double asymptotic_rank = 0.0;
  RankMode rank_mode = RankMode::kUser;
  MethodLabel method = MethodLabel::kDegeneration;
};

/// Query on a single presentation.
BarrierQuery make_query(std::string tensor_id, TensorSupport support, double asymptotic_rank,
                        std::optional<OrbitPartition> orbits = std::nullopt, double p = 0.0, double kappa = 0.0);

enum class ThetaDomain {
  /// Restrict to theta_2 = theta_3 whenever the support is symmetric under
  /// swapping axes 2 and 3 (and there is a single presentation).
  kAuto,
  kFullSimplex,
};

struct SearchConfig {
  double theta_step = 0.005;
  double theta_resolution = 1e-4;
  SolverOptions solver;
  ThetaDomain domain = ThetaDomain::kAuto;
  /// 0 reads MMBARRIER_THREADS, defaulting to 1.
  std::size_t threads = 0;
};

struct SearchDiagnostics {
  std::size_t grid_points = 0;
  std::size_t refinement_evaluations = 0;
  double theta_step = 0.0;
  double theta_resolution = 0.0;
  bool symmetric_restriction = false;
  /// Thetas where log F(T) = 0, excluded from the optimum.
  std::size_t unconstrained_thetas = 0;
  /// Thetas where the presentation bound exceeded log R and the ratio was clamped to 1.
  std::size_t clamp_events = 0;
};

/// Outcome of one barrier search.
///
/// For omega barriers numerator_bits is log2 F(<2,2,2^p>); for alpha barriers
/// it is log2 F(<1,1,2>) = theta_2 + theta_3. denominator_bits is the
/// functional bound log2 F(T) at theta_star (a weighted sum for mixed
/// sequences).
struct BarrierResult {
  double value = 0.0;
  Theta theta_star{1.0, 0.0, 0.0};
  double numerator_bits = 0.0;
  double denominator_bits = 0.0;
  double log2_rank = 0.0;
  /// Optimizer of the inner program at theta_star (first factor for mixed sequences).
  SupportDistribution inner_distribution;
  std::string presentation_id;
  /// The optimum used the clamped ratio.
  bool clamped = false;
  RankMode rank_mode = RankMode::kUser;
  SearchDiagnostics diagnostics;
};

/// N R / D + kappa (R / D - 1) at one theta, with R / D clamped to at least 1.
/// Returns +infinity when D = 0 (no constraint from this theta).
double barrier_omega_at_theta(const BarrierQuery& query, const Theta& theta, const SolverOptions& options = {});

/// Maximum of barrier_omega_at_theta over theta.
BarrierResult barrier_omega(const BarrierQuery& query, const SearchConfig& config = {});

/// barrier_omega for every p in p_min, p_min + step, ..., p_max (query.p ignored).
std::vector<std::pair<double, BarrierResult>> barrier_curve(const BarrierQuery& query, double p_min, double p_max,
                                                            double step, const SearchConfig& config = {});

/// Upper bound on lower bounds for alpha: the minimum over theta with
/// theta_2 + theta_3 >= 1e-6 of 2D/(R(1-t1)) - (1+t1)/(1-t1), clamped to [0, 1].
/// query.p and query.kappa are ignored.
BarrierResult barrier_alpha(const BarrierQuery& query, const SearchConfig& config = {});

struct MixedFactor {
  std::string tensor_id;
  Presentation presentation;
  double weight = 1.0;
  /// Needed only in heuristic rank mode.
  double asymptotic_rank = 0.0;
};

/// S_1^{w_1 n} (x) S_2^{w_2 n} (x) ... as n grows.
///
/// In heuristic mode log R is taken as sum_j w_j log R(S_j), an upper bound on
/// the true limit, so the resulting barrier may be inflated and is labeled.
struct MixedSequence {
  std::vector<MixedFactor> factors;
  RankMode rank_mode = RankMode::kHeuristic;
  /// Limit of R(T_n)^{1/n}, required in user mode.
  std::optional<double> asymptotic_rank;
};

BarrierResult barrier_mixed(const MixedSequence& mixed, double p, double kappa, const SearchConfig& config = {});

/// 6 / (2 + alpha), from omega + (omega/2) alpha <= 3.
double omega_from_alpha(double alpha);

/// barrier_omega at p = barrier_alpha(query); equals 2 when both routes agree.
double alpha_consistency_check(const BarrierQuery& query, const SearchConfig& config = {});

/// Whether the search for this query runs on the theta_2 = theta_3 line.
bool restricts_to_symmetric_theta(const BarrierQuery& query, const SearchConfig& config);

}  // namespace mmbarrier
