#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "mmbarrier/tensor.hpp"

namespace mmbarrier {

/// One permutation per axis; `perm[a][x]` is the image of index x on axis a.
using AxisPermutations = std::array<std::vector<std::size_t>, 3>;

/// Generators of a group acting coordinate-wise on index triples.
struct SupportAction {
  std::vector<AxisPermutations> generators;
};

/// Orbits of a support under a SupportAction.
///
/// `orbits` holds indices into support.points(); each orbit is sorted and the
/// orbits are ordered by their least member. `point_to_orbit[n]` is the orbit
/// of point n.
struct OrbitPartition {
  std::vector<std::vector<std::size_t>> orbits;
  std::vector<std::size_t> point_to_orbit;

  std::size_t size() const { return orbits.size(); }

  /// Each point in its own orbit.
  static OrbitPartition trivial(std::size_t num_points);

  friend bool operator==(const OrbitPartition&, const OrbitPartition&) = default;
};

/// Breadth-first closure of every point under the generators.
///
/// Throws InvalidAction when a generator is not a bijection on some axis or
/// maps a support point outside the support; the message names the point.
OrbitPartition orbits(const TensorSupport& support, const SupportAction& action);

/// S_q acting on the labels 1..q of every axis, all other labels fixed.
///
/// Generated by the transposition (1 2) and the cycle (1 2 ... q). `dim` is
/// the axis length: q+2 for CW_q (the default), q+1 for cw_q.
SupportAction cw_standard_action(std::size_t q, std::size_t dim = 0);

/// True iff transposing the last two entries of every triple maps the
/// support onto itself. Throws InvalidArgument unless dim(1) == dim(2).
bool axis_swap_symmetric(const TensorSupport& support);

/// Parses an action document: each generator is three lines
/// `axis1: p0 p1 ...`, `axis2: ...`, `axis3: ...`; `#` starts a comment.
SupportAction parse_action(const std::string& document);

SupportAction read_action_file(const std::string& path);

}  // namespace mmbarrier
