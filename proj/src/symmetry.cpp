#include "mmbarrier/symmetry.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <limits>
#include <sstream>

#include "mmbarrier/error.hpp"

namespace mmbarrier {
namespace {

constexpr std::size_t kUnassigned = std::numeric_limits<std::size_t>::max();

std::string describe(const Triple& t) {
  return "(" + std::to_string(t.i) + "," + std::to_string(t.j) + "," + std::to_string(t.k) + ")";
}

void check_bijection(const std::vector<std::size_t>& perm, std::size_t n, std::size_t gen, std::size_t axis) {
  const std::string where = "generator " + std::to_string(gen) + " axis " + std::to_string(axis + 1);
  if (perm.size() != n) {
    throw InvalidAction(where + ": permutation has length " + std::to_string(perm.size()) + ", axis has " +
                        std::to_string(n) + " indices");
  }
  std::vector<bool> seen(n, false);
  for (std::size_t x : perm) {
    if (x >= n || seen[x]) throw InvalidAction(where + ": not a bijection on [" + std::to_string(n) + "]");
    seen[x] = true;
  }
}

Triple apply(const AxisPermutations& g, const Triple& t) { return {g[0][t.i], g[1][t.j], g[2][t.k]}; }

std::vector<std::size_t> identity(std::size_t n) {
  std::vector<std::size_t> p(n);
  for (std::size_t x = 0; x < n; ++x) p[x] = x;
  return p;
}

}  // namespace

OrbitPartition OrbitPartition::trivial(std::size_t num_points) {
  OrbitPartition part;
  part.orbits.resize(num_points);
  part.point_to_orbit.resize(num_points);
  for (std::size_t n = 0; n < num_points; ++n) {
    part.orbits[n] = {n};
    part.point_to_orbit[n] = n;
  }
  return part;
}

OrbitPartition orbits(const TensorSupport& support, const SupportAction& action) {
  for (std::size_t g = 0; g < action.generators.size(); ++g) {
    for (std::size_t a = 0; a < 3; ++a) check_bijection(action.generators[g][a], support.dim(a), g, a);
  }

  // Images of every point under every generator, checked for closure.
  const std::size_t n = support.size();
  std::vector<std::vector<std::size_t>> image(action.generators.size(), std::vector<std::size_t>(n));
  for (std::size_t g = 0; g < action.generators.size(); ++g) {
    for (std::size_t x = 0; x < n; ++x) {
      const Triple& t = support.points()[x];
      const Triple y = apply(action.generators[g], t);
      const std::size_t idx = support.index_of(y);
      if (idx == n) {
        throw InvalidAction("generator " + std::to_string(g) + " maps support point " + describe(t) + " to " +
                            describe(y) + ", which is not in the support");
      }
      image[g][x] = idx;
    }
  }

  OrbitPartition part;
  part.point_to_orbit.assign(n, kUnassigned);
  // Points are sorted, so scanning in order yields orbits ordered by least member.
  for (std::size_t start = 0; start < n; ++start) {
    if (part.point_to_orbit[start] != kUnassigned) continue;
    const std::size_t id = part.orbits.size();
    std::vector<std::size_t> members{start};
    part.point_to_orbit[start] = id;
    std::deque<std::size_t> queue{start};
    while (!queue.empty()) {
      const std::size_t x = queue.front();
      queue.pop_front();
      for (const auto& img : image) {
        const std::size_t y = img[x];
        if (part.point_to_orbit[y] == kUnassigned) {
          part.point_to_orbit[y] = id;
          members.push_back(y);
          queue.push_back(y);
        }
      }
    }
    std::sort(members.begin(), members.end());
    part.orbits.push_back(std::move(members));
  }
  return part;
}

SupportAction cw_standard_action(std::size_t q, std::size_t dim) {
  if (q == 0) throw InvalidArgument("CW action needs q >= 1");
  if (dim == 0) dim = q + 2;
  if (dim < q + 1) throw InvalidArgument("CW action needs axis length at least q+1");

  std::vector<std::size_t> swap = identity(dim);
  std::vector<std::size_t> cycle = identity(dim);
  if (q >= 2) {
    std::swap(swap[1], swap[2]);
    for (std::size_t label = 1; label <= q; ++label) cycle[label] = label == q ? 1 : label + 1;
  }
  SupportAction action;
  action.generators.push_back({swap, swap, swap});
  action.generators.push_back({cycle, cycle, cycle});
  return action;
}

bool axis_swap_symmetric(const TensorSupport& support) {
  if (support.dim(1) != support.dim(2)) {
    throw InvalidArgument("axis swap needs equal dimensions on axes 2 and 3");
  }
  return std::all_of(support.points().begin(), support.points().end(),
                     [&](const Triple& t) { return support.contains({t.i, t.k, t.j}); });
}

SupportAction parse_action(const std::string& document) {
  std::istringstream in(document);
  std::string raw;
  std::size_t line_no = 0;
  SupportAction action;
  std::size_t next_axis = 0;

  while (std::getline(in, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream words(raw);
    std::string head;
    if (!(words >> head)) continue;

    const std::string expected = "axis" + std::to_string(next_axis + 1) + ":";
    if (head != expected) throw ParseError(line_no, "axis", "expected '" + expected + "'");
    if (next_axis == 0) action.generators.emplace_back();

    std::vector<std::size_t> perm;
    for (std::string w; words >> w;) {
      std::size_t used = 0;
      long long v = -1;
      try {
        v = std::stoll(w, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != w.size() || v < 0) throw ParseError(line_no, "image", "expected a nonnegative index, got '" + w + "'");
      perm.push_back(static_cast<std::size_t>(v));
    }
    if (perm.empty()) throw ParseError(line_no, "image", "empty permutation");
    action.generators.back()[next_axis] = std::move(perm);
    next_axis = (next_axis + 1) % 3;
  }
  if (next_axis != 0) throw ParseError(line_no, "axis", "generator is missing axis lines");
  return action;
}

SupportAction read_action_file(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw InvalidArgument("cannot open action file '" + path + "'");
  std::ostringstream buf;
  buf << file.rdbuf();
  return parse_action(buf.str());
}

}  // namespace mmbarrier
