#include "mmbarrier/functionals.hpp"

#include <cmath>

#include "mmbarrier/error.hpp"

namespace mmbarrier {

FunctionalValue zeta_upper(const EntropyProgram& program, const Theta& theta, const SolverOptions& options,
                           const std::string& presentation_id) {
  EntropyReport report = program.solve(theta, options);
  const double v = std::max(0.0, report.value_bits);
  return {v, theta, presentation_id, std::move(report)};
}

FunctionalValue zeta_upper(const TensorSupport& support, const Theta& theta,
                           const std::optional<OrbitPartition>& orbits, const SolverOptions& options,
                           const std::string& presentation_id) {
  return zeta_upper(EntropyProgram(support, orbits), theta, options, presentation_id);
}

FunctionalValue zeta_matmul_closed(std::size_t a, std::size_t b, std::size_t c, const Theta& theta) {
  if (a == 0 || b == 0 || c == 0) throw InvalidArgument("matrix multiplication sizes must be positive");
  const double v = (theta[0] + theta[2]) * std::log2(static_cast<double>(a)) +
                   (theta[0] + theta[1]) * std::log2(static_cast<double>(b)) +
                   (theta[1] + theta[2]) * std::log2(static_cast<double>(c));
  return {v, theta, "mm:" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c), std::nullopt};
}

FunctionalValue quasi_value(double p, const Theta& theta) {
  if (!std::isfinite(p) || p < 0.0) throw InvalidArgument("quasitensor exponent p must be finite and nonnegative");
  const double v = 2.0 * theta[0] + theta[1] + theta[2] + p * (theta[1] + theta[2]);
  return {v, theta, "quasi", std::nullopt};
}

FunctionalValue zeta_min_over_presentations(const std::vector<Presentation>& presentations, const Theta& theta,
                                            const SolverOptions& options) {
  if (presentations.empty()) throw InvalidArgument("at least one presentation is required");
  std::optional<FunctionalValue> best;
  for (const auto& pres : presentations) {
    FunctionalValue v = zeta_upper(pres.support, theta, pres.orbits, options, pres.id);
    if (!best || v.log2_value < best->log2_value) best = std::move(v);
  }
  return *best;
}

bool exceeds_rank(const FunctionalValue& value, double asymptotic_rank) {
  return value.log2_value > std::log2(asymptotic_rank);
}

}  // namespace mmbarrier
