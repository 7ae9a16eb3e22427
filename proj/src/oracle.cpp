// Exhaustive grid search over the simplex, kept independent of the
// exponentiated-gradient solver it is used to check.

#include <cmath>
#include <numeric>

#include "mmbarrier/entropy.hpp"
#include "mmbarrier/error.hpp"

namespace mmbarrier {
namespace {

std::size_t grid_divisions(double grid_step) {
  if (!(grid_step > 0.0 && grid_step < 1.0)) throw InvalidArgument("grid step must lie in (0, 1)");
  const double k = std::round(1.0 / grid_step);
  if (std::abs(k * grid_step - 1.0) > 1e-9) throw InvalidArgument("grid step must be 1/K for an integer K");
  return static_cast<std::size_t>(k);
}

struct GridSearch {
  // Per variable: the (axis, label) slots it feeds and the units added per grid step.
  std::vector<std::vector<std::array<std::size_t, 2>>> slots;
  std::vector<std::size_t> units_per_step;
  std::array<std::vector<std::size_t>, 3> counts;
  std::vector<double> xlogx;  // u/Z * ln(u/Z) for every unit count u
  std::array<double, 3> theta{};
  std::size_t steps = 0;
  double best = -1.0;

  void add(std::size_t var, std::size_t c, bool remove) {
    const std::size_t delta = c * units_per_step[var];
    for (const auto& s : slots[var]) {
      auto& cell = counts[s[0]][s[1]];
      cell = remove ? cell - delta : cell + delta;
    }
  }

  void leaf() {
    double value = 0.0;
    for (std::size_t a = 0; a < 3; ++a) {
      if (theta[a] == 0.0) continue;
      double h = 0.0;
      for (std::size_t u : counts[a]) h -= xlogx[u];
      value += theta[a] * h;
    }
    best = std::max(best, value);
  }

  void recurse(std::size_t var, std::size_t remaining) {
    if (var + 1 == slots.size()) {
      add(var, remaining, false);
      leaf();
      add(var, remaining, true);
      return;
    }
    for (std::size_t c = 0; c <= remaining; ++c) {
      add(var, c, false);
      recurse(var + 1, remaining - c);
      add(var, c, true);
    }
  }
};

}  // namespace

double brute_force_nodes(std::size_t num_variables, double grid_step) {
  const std::size_t k = grid_divisions(grid_step);
  // C(k + m - 1, m - 1) in floating point.
  double nodes = 1.0;
  for (std::size_t r = 1; r < num_variables; ++r) {
    nodes *= static_cast<double>(k + r) / static_cast<double>(r);
  }
  return nodes;
}

double brute_force_max(const TensorSupport& support, const Theta& theta, double grid_step,
                       const std::optional<OrbitPartition>& orbits, double max_nodes) {
  const OrbitPartition part = orbits ? *orbits : OrbitPartition::trivial(support.size());
  if (part.point_to_orbit.size() != support.size()) throw InvalidArgument("orbit partition does not match support");
  const std::size_t k = grid_divisions(grid_step);
  const double nodes = brute_force_nodes(part.size(), grid_step);
  if (nodes > max_nodes) {
    throw CapacityError("oracle grid has " + std::to_string(nodes) + " nodes, limit is " + std::to_string(max_nodes));
  }

  // Masses are measured in units of 1/(k*L), L the lcm of the orbit sizes, so
  // every marginal entry is an exact integer count.
  std::size_t lcm = 1;
  for (const auto& orbit : part.orbits) {
    lcm = std::lcm(lcm, orbit.size());
    if (lcm > 100'000) throw CapacityError("orbit sizes too irregular for the oracle grid");
  }
  const std::size_t total_units = k * lcm;

  GridSearch search;
  search.steps = k;
  search.theta = theta.values();
  search.slots.resize(part.size());
  search.units_per_step.resize(part.size());
  for (std::size_t o = 0; o < part.size(); ++o) {
    search.units_per_step[o] = lcm / part.orbits[o].size();
    for (std::size_t x : part.orbits[o]) {
      const Triple& t = support.points()[x];
      for (std::size_t a = 0; a < 3; ++a) search.slots[o].push_back({a, t[a]});
    }
  }
  for (std::size_t a = 0; a < 3; ++a) search.counts[a].assign(support.dim(a), 0);
  search.xlogx.resize(total_units + 1);
  search.xlogx[0] = 0.0;
  for (std::size_t u = 1; u <= total_units; ++u) {
    const double p = static_cast<double>(u) / static_cast<double>(total_units);
    search.xlogx[u] = p * std::log(p);
  }

  search.recurse(0, k);
  return search.best / std::log(2.0);
}

}  // namespace mmbarrier
