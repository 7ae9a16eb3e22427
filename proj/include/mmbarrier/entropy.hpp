#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "mmbarrier/symmetry.hpp"
#include "mmbarrier/tensor.hpp"

namespace mmbarrier {

/// Probability vector (theta_1, theta_2, theta_3) on the three tensor axes.
class Theta {
 public:
  /// Throws InvalidArgument unless all entries are nonnegative and sum to 1
  /// within 1e-12.
  Theta(double t1, double t2, double t3);

  /// (t1, (1 - t1)/2, (1 - t1)/2).
  static Theta symmetric(double t1);

  double operator[](std::size_t axis) const { return values_[axis]; }
  const std::array<double, 3>& values() const { return values_; }

  friend bool operator==(const Theta&, const Theta&) = default;

 private:
  std::array<double, 3> values_;
};

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Marginals = std::array<Vector<Scalar>, 3>;

/// Shannon entropy in bits, with 0 log 0 = 0.
template <typename Derived>
typename Derived::Scalar entropy_bits(const Eigen::MatrixBase<Derived>& p) {
  using Scalar = typename Derived::Scalar;
  using std::log;
  Scalar h(0);
  for (Eigen::Index n = 0; n < p.size(); ++n) {
    if (p(n) > Scalar(0)) h -= p(n) * log(p(n));
  }
  return h / log(Scalar(2));
}

/// Marginals of a point-mass vector (ordered like support.points()).
template <typename Derived>
Marginals<typename Derived::Scalar> point_marginals(const TensorSupport& support,
                                                    const Eigen::MatrixBase<Derived>& mass) {
  using Scalar = typename Derived::Scalar;
  Marginals<Scalar> m;
  for (std::size_t a = 0; a < 3; ++a) m[a] = Vector<Scalar>::Zero(static_cast<Eigen::Index>(support.dim(a)));
  const auto& pts = support.points();
  for (std::size_t x = 0; x < pts.size(); ++x) {
    const auto idx = static_cast<Eigen::Index>(x);
    m[0](static_cast<Eigen::Index>(pts[x].i)) += mass(idx);
    m[1](static_cast<Eigen::Index>(pts[x].j)) += mass(idx);
    m[2](static_cast<Eigen::Index>(pts[x].k)) += mass(idx);
  }
  return m;
}

/// sum_i theta_i H(P_i) in bits.
template <typename Derived>
typename Derived::Scalar objective_bits(const TensorSupport& support, const Eigen::MatrixBase<Derived>& mass,
                                        const Theta& theta) {
  using Scalar = typename Derived::Scalar;
  const auto m = point_marginals(support, mass);
  Scalar value(0);
  for (std::size_t a = 0; a < 3; ++a) {
    if (theta[a] > 0.0) value += Scalar(theta[a]) * entropy_bits(m[a]);
  }
  return value;
}

/// A probability distribution on a support, one mass per point.
///
/// When `orbits` is set the distribution is constant on each orbit.
struct SupportDistribution {
  Eigen::VectorXd mass;
  std::optional<OrbitPartition> orbits;
};

SupportDistribution uniform_distribution(const TensorSupport& support);

/// Spreads each orbit's total mass evenly over its points.
SupportDistribution from_orbit_weights(const OrbitPartition& orbits, const Eigen::VectorXd& orbit_mass);

/// Throws InvalidArgument unless sizes match, masses are nonnegative, the
/// total is 1 within 1e-12 and any orbit partition is respected.
void validate(const SupportDistribution& dist, const TensorSupport& support);

Marginals<double> marginals(const SupportDistribution& dist, const TensorSupport& support);

double objective(const SupportDistribution& dist, const TensorSupport& support, const Theta& theta);

/// Gradient of sum_i theta_i H(P_i) in nats with respect to each point mass,
/// i.e. sum_i theta_i (-ln P_i(x_i) - 1). Empty when some point has zero
/// mass (boundary).
std::optional<Eigen::VectorXd> objective_gradient(const SupportDistribution& dist, const TensorSupport& support,
                                                  const Theta& theta);

struct SolverOptions {
  double tol_bits = 1e-9;
  std::size_t max_iterations = 1'000'000;
  /// Stop when the value moved by at most tol_bits/100 over this many iterations.
  std::size_t stall_window = 50;
};

enum class StopReason { kGap, kStall };

struct EntropyReport {
  double value_bits = 0.0;
  Marginals<double> marginals;
  SupportDistribution distribution;
  std::size_t iterations = 0;
  /// First-order optimality gap at the returned point; an upper bound on the
  /// distance to the true maximum.
  double gap_bits = 0.0;
  StopReason stop = StopReason::kGap;
};

/// The concave program max_P sum_i theta_i H(P_i) over distributions on a
/// fixed support, optionally restricted to orbit-constant distributions.
///
/// Solved by exponentiated-gradient ascent on the orbit masses with unit step
/// (in nats). Each marginal entropy is 1-smooth relative to the negative
/// entropy of P, so every step is an ascent step. Instances are immutable and
/// may be shared between threads.
class EntropyProgram {
 public:
  explicit EntropyProgram(TensorSupport support, std::optional<OrbitPartition> orbits = std::nullopt);

  const TensorSupport& support() const { return support_; }
  const std::optional<OrbitPartition>& orbits() const { return orbits_; }
  std::size_t num_variables() const { return orbit_size_.size(); }

  /// Throws SolverError (with the best value and its gap) when the
  /// iteration cap is reached.
  EntropyReport solve(const Theta& theta, const SolverOptions& options = {}) const;

 private:
  double evaluate(const Theta& theta, const Eigen::VectorXd& weights, Eigen::VectorXd* orbit_grad) const;

  TensorSupport support_;
  std::optional<OrbitPartition> orbits_;
  std::vector<std::size_t> point_orbit_;
  Eigen::VectorXd orbit_size_;
  std::array<std::vector<std::size_t>, 3> labels_;
};

EntropyReport maximize_entropy(const TensorSupport& support, const Theta& theta,
                               const std::optional<OrbitPartition>& orbits = std::nullopt,
                               const SolverOptions& options = {});

/// Exhaustive maximum over the grid {multiples of grid_step} of the simplex
/// over support points (or over orbit masses when `orbits` is given).
///
/// grid_step must be 1/K for an integer K. Throws CapacityError when the grid
/// has more than `max_nodes` nodes.
double brute_force_max(const TensorSupport& support, const Theta& theta, double grid_step,
                       const std::optional<OrbitPartition>& orbits = std::nullopt,
                       double max_nodes = 2.5e8);

/// Number of nodes brute_force_max would visit.
double brute_force_nodes(std::size_t num_variables, double grid_step);

}  // namespace mmbarrier
