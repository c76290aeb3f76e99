#pragma once

#include <string>

#include "marcink/fields.hpp"

namespace marcink::fields {

// Raw field files: little-endian (re, im) float64 pairs in row-major order,
// with a JSON sidecar at <path>.json holding {d, n_per_axis, L, domain_side}.
void write_field(const std::string& path, const Field& f);
Field read_field(const std::string& path);

}  // namespace marcink::fields
