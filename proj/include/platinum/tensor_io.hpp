#pragma once

#include "platinum/types.hpp"

#include <string>

namespace platinum {

/// "PLTT" tensor files: magic, dtype byte (element width: 1 = int8, 4 = int32),
/// rows u32, cols u32, then the row-major little-endian payload.
void write_tensor_file(const std::string& file, const TernaryMatrix& m);
void write_tensor_file(const std::string& file, const ActivationMatrix& m);

struct LoadedTensor {
  int dtype = 0;  // element width in bytes
  ActivationMatrix data;  // widened to 32-bit on load
};

LoadedTensor read_tensor_file(const std::string& file);

/// Narrows to {-1,0,1}; rejects anything else.
TernaryMatrix require_ternary(const ActivationMatrix& m);

}  // namespace platinum
