#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mmbarrier/entropy.hpp"

namespace mmbarrier {

/// log2 of a functional value at a given theta.
struct FunctionalValue {
  double log2_value = 0.0;
  Theta theta;
  std::string presentation_id;
  /// Set when the value came from the entropy program.
  std::optional<EntropyReport> inner;
};

/// One support presenting a tensor, with an optional orbit reduction.
struct Presentation {
  std::string id;
  TensorSupport support;
  std::optional<OrbitPartition> orbits;
};

/// Upper support functional evaluated on a single presentation:
/// max over distributions on the support of sum_i theta_i H(P_i).
///
/// This bounds zeta^theta(T) from above; the basis-change minimum is only
/// taken over presentations the caller supplies.
FunctionalValue zeta_upper(const TensorSupport& support, const Theta& theta,
                           const std::optional<OrbitPartition>& orbits = std::nullopt,
                           const SolverOptions& options = {}, const std::string& presentation_id = "given");

FunctionalValue zeta_upper(const EntropyProgram& program, const Theta& theta, const SolverOptions& options = {},
                           const std::string& presentation_id = "given");

/// Closed form for <a,b,c>: (t1+t3) log a + (t1+t2) log b + (t2+t3) log c.
FunctionalValue zeta_matmul_closed(std::size_t a, std::size_t b, std::size_t c, const Theta& theta);

/// log2 F(<2,2,2^p>) = 2 t1 + t2 + t3 + p (t2 + t3).
FunctionalValue quasi_value(double p, const Theta& theta);

/// Minimum of zeta_upper over the supplied presentations; ties keep the
/// earliest. Throws InvalidArgument on an empty list.
FunctionalValue zeta_min_over_presentations(const std::vector<Presentation>& presentations, const Theta& theta,
                                            const SolverOptions& options = {});

/// True when 2^log2_value exceeds the asymptotic rank, which the true
/// functional never does.
bool exceeds_rank(const FunctionalValue& value, double asymptotic_rank);

}  // namespace mmbarrier
