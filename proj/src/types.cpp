#include "platinum/types.hpp"

namespace platinum {

TernaryMatrix random_ternary(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  TernaryMatrix w(rows, cols);
  SplitMix64 rng(seed);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index k = 0; k < cols; ++k)
      w(i, k) = static_cast<std::int8_t>(static_cast<int>(rng.below(3)) - 1);
  return w;
}

ActivationMatrix random_activations(Eigen::Index rows, Eigen::Index cols, int bits,
                                    std::uint64_t seed) {
  if (bits < 2 || bits > 31) throw ValidationError("activation bits must be in [2,31]");
  ActivationMatrix x(rows, cols);
  SplitMix64 rng(seed);
  std::int64_t lo = -(1ll << (bits - 1));
  std::int64_t hi = (1ll << (bits - 1)) - 1;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index k = 0; k < cols; ++k)
      x(i, k) = static_cast<std::int32_t>(rng.range(lo, hi));
  return x;
}

bool fits_signed_bits(const ActivationMatrix& x, int bits) {
  std::int64_t lo = -(1ll << (bits - 1));
  std::int64_t hi = (1ll << (bits - 1)) - 1;
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index k = 0; k < x.cols(); ++k)
      if (x(i, k) < lo || x(i, k) > hi) return false;
  return true;
}

}  // namespace platinum
