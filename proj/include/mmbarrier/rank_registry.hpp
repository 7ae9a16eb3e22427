#pragma once

#include <map>
#include <optional>
#include <string>

namespace mmbarrier {

struct RankRegistryEntry {
  std::string tensor_id;
  double asymptotic_rank = 0.0;
  std::string provenance;
};

/// Known asymptotic ranks, keyed by tensor id.
///
/// The families `cw:q` (rank q+2) and `diag:n` (rank n) resolve without being
/// stored; everything else must be added explicitly.
class RankRegistry {
 public:
  /// Throws InvalidArgument unless rank >= 1.
  void add(RankRegistryEntry entry);

  std::optional<RankRegistryEntry> lookup(const std::string& tensor_id) const;

 private:
  std::map<std::string, RankRegistryEntry> entries_;
};

}  // namespace mmbarrier
