#pragma once

#include <string>

#include "mmbarrier/tensor.hpp"

namespace mmbarrier {

// Text format:
//
//   # comment
//   dims n1 n2 n3
//   i j k num/den
//   ...
//
// Indices are 0-based, coefficients nonzero rationals (a bare integer is
// accepted on input). Point lines may come in any order.

/// Throws ParseError carrying the offending line and field.
Tensor parse_tensor(const std::string& document);

/// Emits points in canonical (sorted) order, so equal tensors serialize
/// byte-identically.
std::string serialize_tensor(const Tensor& tensor);

Tensor read_tensor_file(const std::string& path);

/// A built-in id (see builtin_tensor) or a path to a tensor document.
Tensor resolve_tensor(const std::string& spec);

}  // namespace mmbarrier
