#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace platinum {

/// Dense row-major matrix templated on scalar; the shape every operand uses.
template <typename Scalar>
using DenseRowMajor =
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using TernaryMatrix = DenseRowMajor<std::int8_t>;   // values in {-1,0,1}
using BinaryMatrix = DenseRowMajor<std::int8_t>;    // values in {0,1}
using IntMatrix = DenseRowMajor<std::int32_t>;      // general integer weights
using ActivationMatrix = DenseRowMajor<std::int32_t>;
using OutputMatrix = DenseRowMajor<std::int32_t>;   // 32-bit accumulators

enum class Mode : std::uint8_t { Ternary = 0, Binary = 1 };

inline const char* mode_name(Mode m) {
  return m == Mode::Ternary ? "ternary" : "binary";
}

/// Validation failure on inputs or flags (CLI exit code 2).
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree.
struct ShapeMismatch : ValidationError {
  using ValidationError::ValidationError;
};

/// Path/stream/config metadata disagree (mode, c, hash).
struct ConfigMismatch : ValidationError {
  using ValidationError::ValidationError;
};

/// Query byte addresses a LUT slot that does not exist.
struct BadAddress : ValidationError {
  using ValidationError::ValidationError;
};

/// Accumulator cannot hold the worst-case sum without wrapping.
struct OverflowError : ValidationError {
  using ValidationError::ValidationError;
};

/// RAW spacing cannot be met by any emission order (CLI exit code 3).
struct ScheduleError : std::runtime_error {
  int min_achievable_distance;
  explicit ScheduleError(int d)
      : std::runtime_error("schedule: read-after-write spacing unsatisfiable; "
                           "best achievable distance " + std::to_string(d)),
        min_achievable_distance(d) {}
};

/// Tile working set exceeds a buffer capacity (CLI exit code 3).
struct InfeasibleSchedule : std::runtime_error {
  std::string buffer;
  InfeasibleSchedule(std::string buf, std::string msg)
      : std::runtime_error("infeasible schedule: " + msg), buffer(std::move(buf)) {}
};

struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

// -- deterministic helpers ---------------------------------------------------

/// FNV-1a over a byte range; ties packed streams to the path that coded them.
inline std::uint64_t fnv1a64(const std::uint8_t* data, std::size_t n,
                             std::uint64_t h = 0xcbf29ce484222325ull) {
  for (std::size_t i = 0; i < n; ++i) {
    h ^= data[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::uint64_t fnv1a64(const std::vector<std::uint8_t>& v) {
  return fnv1a64(v.data(), v.size());
}

/// splitmix64: tiny portable generator; all randomness sits behind a seed.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  /// Uniform in [0, bound) by rejection; bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    std::uint64_t limit = ~0ull - ~0ull % bound;
    std::uint64_t x;
    do { x = next(); } while (x >= limit);
    return x % bound;
  }
  std::int64_t range(std::int64_t lo, std::int64_t hi) {  // inclusive
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }
};

/// Random ternary matrix, each entry uniform over {-1,0,1}.
TernaryMatrix random_ternary(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed);

/// Random activations uniform over the signed `bits`-wide range.
ActivationMatrix random_activations(Eigen::Index rows, Eigen::Index cols, int bits,
                                    std::uint64_t seed);

/// True iff every entry lies in [-2^(bits-1), 2^(bits-1)-1].
bool fits_signed_bits(const ActivationMatrix& x, int bits);

}  // namespace platinum
