#include "mmbarrier/rank_registry.hpp"

#include "mmbarrier/error.hpp"
#include "mmbarrier/tensor.hpp"

namespace mmbarrier {

void RankRegistry::add(RankRegistryEntry entry) {
  if (!(entry.asymptotic_rank >= 1.0)) {
    throw InvalidArgument("asymptotic rank of '" + entry.tensor_id + "' must be at least 1");
  }
  const std::string key = entry.tensor_id;
  entries_.insert_or_assign(key, std::move(entry));
}

std::optional<RankRegistryEntry> RankRegistry::lookup(const std::string& tensor_id) const {
  if (const auto it = entries_.find(tensor_id); it != entries_.end()) return it->second;
  if (tensor_id.starts_with("cw:")) {
    const Tensor t = builtin_tensor(tensor_id);
    return RankRegistryEntry{tensor_id, static_cast<double>(t.dims()[0]),
                             "degeneration of a diagonal tensor: R(CW_q) = q+2"};
  }
  if (tensor_id.starts_with("diag:")) {
    const Tensor t = builtin_tensor(tensor_id);
    return RankRegistryEntry{tensor_id, static_cast<double>(t.dims()[0]), "unit tensor: R(<n>) = n"};
  }
  return std::nullopt;
}

}  // namespace mmbarrier
