#include "mmbarrier/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mmbarrier/error.hpp"

namespace mmbarrier {
namespace {

constexpr double kMassFloor = 1e-300;
const double kLn2 = std::log(2.0);

}  // namespace

Theta::Theta(double t1, double t2, double t3) : values_{t1, t2, t3} {
  for (double t : values_) {
    if (!std::isfinite(t) || t < 0.0) throw InvalidArgument("theta entries must be finite and nonnegative");
  }
  if (std::abs(t1 + t2 + t3 - 1.0) > 1e-12) throw InvalidArgument("theta must sum to 1");
}

Theta Theta::symmetric(double t1) {
  const double rest = (1.0 - t1) / 2.0;
  return Theta(t1, rest, rest);
}

SupportDistribution uniform_distribution(const TensorSupport& support) {
  const auto n = static_cast<Eigen::Index>(support.size());
  return {Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n)), std::nullopt};
}

SupportDistribution from_orbit_weights(const OrbitPartition& orbits, const Eigen::VectorXd& orbit_mass) {
  if (static_cast<std::size_t>(orbit_mass.size()) != orbits.size()) {
    throw InvalidArgument("one mass per orbit expected");
  }
  Eigen::VectorXd mass(static_cast<Eigen::Index>(orbits.point_to_orbit.size()));
  for (std::size_t o = 0; o < orbits.size(); ++o) {
    const double each = orbit_mass(static_cast<Eigen::Index>(o)) / static_cast<double>(orbits.orbits[o].size());
    for (std::size_t x : orbits.orbits[o]) mass(static_cast<Eigen::Index>(x)) = each;
  }
  return {mass, orbits};
}

void validate(const SupportDistribution& dist, const TensorSupport& support) {
  if (static_cast<std::size_t>(dist.mass.size()) != support.size()) {
    throw InvalidArgument("distribution size does not match support");
  }
  if ((dist.mass.array() < 0.0).any() || !dist.mass.allFinite()) {
    throw InvalidArgument("distribution has a negative or non-finite mass");
  }
  if (std::abs(dist.mass.sum() - 1.0) > 1e-12) throw InvalidArgument("distribution does not sum to 1");
  if (dist.orbits) {
    if (dist.orbits->point_to_orbit.size() != support.size()) {
      throw InvalidArgument("orbit partition does not match support");
    }
    for (const auto& orbit : dist.orbits->orbits) {
      const double first = dist.mass(static_cast<Eigen::Index>(orbit.front()));
      for (std::size_t x : orbit) {
        if (std::abs(dist.mass(static_cast<Eigen::Index>(x)) - first) > 1e-12) {
          throw InvalidArgument("distribution is not constant on an orbit");
        }
      }
    }
  }
}

Marginals<double> marginals(const SupportDistribution& dist, const TensorSupport& support) {
  validate(dist, support);
  return point_marginals(support, dist.mass);
}

double objective(const SupportDistribution& dist, const TensorSupport& support, const Theta& theta) {
  validate(dist, support);
  return objective_bits(support, dist.mass, theta);
}

std::optional<Eigen::VectorXd> objective_gradient(const SupportDistribution& dist, const TensorSupport& support,
                                                  const Theta& theta) {
  validate(dist, support);
  if ((dist.mass.array() <= 0.0).any()) return std::nullopt;
  const auto m = point_marginals(support, dist.mass);
  Eigen::VectorXd grad(dist.mass.size());
  const auto& pts = support.points();
  for (std::size_t x = 0; x < pts.size(); ++x) {
    double g = 0.0;
    for (std::size_t a = 0; a < 3; ++a) {
      g += theta[a] * (-std::log(m[a](static_cast<Eigen::Index>(pts[x][a]))) - 1.0);
    }
    grad(static_cast<Eigen::Index>(x)) = g;
  }
  return grad;
}

EntropyProgram::EntropyProgram(TensorSupport support, std::optional<OrbitPartition> orbits)
    : support_(std::move(support)), orbits_(std::move(orbits)) {
  const std::size_t n = support_.size();
  const OrbitPartition part = orbits_ ? *orbits_ : OrbitPartition::trivial(n);
  if (part.point_to_orbit.size() != n) throw InvalidArgument("orbit partition does not match support");
  point_orbit_ = part.point_to_orbit;
  orbit_size_.resize(static_cast<Eigen::Index>(part.size()));
  for (std::size_t o = 0; o < part.size(); ++o) {
    orbit_size_(static_cast<Eigen::Index>(o)) = static_cast<double>(part.orbits[o].size());
  }
  for (std::size_t a = 0; a < 3; ++a) {
    labels_[a].resize(n);
    for (std::size_t x = 0; x < n; ++x) labels_[a][x] = support_.points()[x][a];
  }
}

// Objective in nats at orbit masses `weights`; fills the gradient with
// respect to each orbit mass when requested.
double EntropyProgram::evaluate(const Theta& theta, const Eigen::VectorXd& weights,
                                Eigen::VectorXd* orbit_grad) const {
  const std::size_t n = support_.size();
  std::array<Eigen::VectorXd, 3> marg;
  for (std::size_t a = 0; a < 3; ++a) marg[a] = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(support_.dim(a)));
  for (std::size_t x = 0; x < n; ++x) {
    const auto o = static_cast<Eigen::Index>(point_orbit_[x]);
    const double m = weights(o) / orbit_size_(o);
    for (std::size_t a = 0; a < 3; ++a) marg[a](static_cast<Eigen::Index>(labels_[a][x])) += m;
  }

  double value = 0.0;
  std::array<Eigen::VectorXd, 3> neg_log;
  for (std::size_t a = 0; a < 3; ++a) {
    if (theta[a] == 0.0) continue;
    neg_log[a] = -marg[a].array().max(kMassFloor).log();
    for (Eigen::Index l = 0; l < marg[a].size(); ++l) {
      if (marg[a](l) > 0.0) value += theta[a] * marg[a](l) * neg_log[a](l);
    }
  }

  if (orbit_grad != nullptr) {
    orbit_grad->setZero(weights.size());
    for (std::size_t x = 0; x < n; ++x) {
      double g = 0.0;
      for (std::size_t a = 0; a < 3; ++a) {
        if (theta[a] != 0.0) g += theta[a] * (neg_log[a](static_cast<Eigen::Index>(labels_[a][x])) - 1.0);
      }
      (*orbit_grad)(static_cast<Eigen::Index>(point_orbit_[x])) += g;
    }
    orbit_grad->array() /= orbit_size_.array();
  }
  return value;
}

EntropyReport EntropyProgram::solve(const Theta& theta, const SolverOptions& options) const {
  if (!(options.tol_bits > 0.0)) throw InvalidArgument("solver tolerance must be positive");

  // Uniform on the support, which is orbit-constant.
  Eigen::VectorXd w = orbit_size_ / static_cast<double>(support_.size());
  Eigen::VectorXd grad;
  const double tol_nats = options.tol_bits * kLn2;
  const std::size_t window = std::max<std::size_t>(options.stall_window, 1);
  std::vector<double> history(window + 1, -std::numeric_limits<double>::infinity());

  double value = 0.0;
  double gap = std::numeric_limits<double>::infinity();
  std::size_t it = 0;
  StopReason reason = StopReason::kGap;
  for (;; ++it) {
    value = evaluate(theta, w, &grad);
    const double top = grad.maxCoeff();
    gap = std::max(0.0, top - w.dot(grad));
    if (gap <= tol_nats) {
      reason = StopReason::kGap;
      break;
    }
    history[it % (window + 1)] = value;
    if (it >= window && value - history[(it - window) % (window + 1)] <= tol_nats / 100.0) {
      reason = StopReason::kStall;
      break;
    }
    if (it >= options.max_iterations) {
      throw SolverError("entropy solver did not converge in " + std::to_string(options.max_iterations) +
                            " iterations",
                        value / kLn2, gap / kLn2);
    }
    w = (w.array() * (grad.array() - top).exp()).max(kMassFloor).matrix();
    w /= w.sum();
  }

  EntropyReport report;
  w /= w.sum();
  if (orbits_) {
    report.distribution = from_orbit_weights(*orbits_, w);
  } else {
    report.distribution = {w, std::nullopt};
  }
  report.value_bits = objective_bits(support_, report.distribution.mass, theta);
  report.marginals = point_marginals(support_, report.distribution.mass);
  report.iterations = it;
  report.gap_bits = gap / kLn2;
  report.stop = reason;
  return report;
}

EntropyReport maximize_entropy(const TensorSupport& support, const Theta& theta,
                               const std::optional<OrbitPartition>& orbits, const SolverOptions& options) {
  return EntropyProgram(support, orbits).solve(theta, options);
}

}  // namespace mmbarrier
