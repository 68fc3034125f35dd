#pragma once

#include "platinum/weightcodec.hpp"

#include <span>

namespace platinum {

/// Entry width during construction. Wide keeps exact 32-bit entries; Saturate8
/// clamps after every step to mimic 8-bit hardware tables.
enum class LutEntryMode { Wide, Saturate8 };

struct Lut {
  ChunkConfig config;
  std::vector<std::int32_t> entries;  // indexed by LUT address
};

/// Counted work, captured while computing (not estimated).
struct OpCensus {
  std::int64_t construct_adds = 0;
  std::int64_t queries = 0;      // LUT reads (not additions)
  std::int64_t merge_adds = 0;   // combining bit planes of one chunk
  std::int64_t reduce_adds = 0;  // accumulating across chunk columns

  std::int64_t total_adds() const { return construct_adds + merge_adds + reduce_adds; }
};

/// Replays the build path over one activation chunk. a.size() == c.
/// One addition per step; LUT[0] starts at 0 for free.
Lut construct_lut(std::span<const std::int32_t> a, const BuildPath& path,
                  LutEntryMode entry_mode = LutEntryMode::Wide);

/// Resolves a packed byte: low 7 bits address the table, the top bit negates.
std::int32_t query(const Lut& lut, std::uint8_t byte);

struct GemmResult {
  OutputMatrix y;
  OpCensus census;
};

/// y = W x from a packed ternary stream; bit-exact against naive_gemm.
GemmResult mpgemm_ternary(const PackedWeightStream& stream, const ActivationMatrix& x,
                          const BuildPath& path,
                          LutEntryMode entry_mode = LutEntryMode::Wide);

/// y = (sum_i weight_i * plane_i) x, every plane querying one shared binary
/// LUT per chunk; plane results merge by shift-add.
GemmResult mpgemm_bitserial(const BitPlaneSet& planes, const ActivationMatrix& x,
                            const BuildPath& path_binary,
                            LutEntryMode entry_mode = LutEntryMode::Wide);

/// Ground-truth oracle: exact integer product (Eigen, 64-bit accumulation,
/// checked narrowing). Census counts M*K*N adds, or only nonzero-weight adds
/// when skip_zeros is set.
GemmResult naive_gemm(const IntMatrix& w, const ActivationMatrix& x,
                      bool skip_zeros = false);
GemmResult naive_gemm(const TernaryMatrix& w, const ActivationMatrix& x,
                      bool skip_zeros = false);

}  // namespace platinum
