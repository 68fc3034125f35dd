#pragma once

#include "platinum/types.hpp"

#include <array>
#include <cstdint>

namespace platinum {

constexpr int kMaxChunk = 7;        // addresses must fit 7 bits
constexpr int kMaxLutEntries = 128;
constexpr int kDefaultPipelineDepth = 4;

/// Weights of one chunk, little-endian (index 0 first along K).
using ChunkVec = std::array<std::int8_t, kMaxChunk>;

/// Chunk geometry shared by the path compiler, the codec and the engine.
///
/// Ternary value_code of a chunk w is sum (w_i+1)*3^i; an entry is canonical
/// iff its code is <= (3^c-1)/2, and the mirror partner is 3^c-1-code, so a
/// mirror lookup is a single arithmetic complement. Binary codes are plain
/// sum w_i*2^i and every code is stored.
struct ChunkConfig {
  Mode mode = Mode::Ternary;
  int c = 5;
  int pipeline_depth = kDefaultPipelineDepth;

  ChunkConfig() = default;
  ChunkConfig(Mode m, int chunk, int depth = kDefaultPipelineDepth);

  int radix() const { return mode == Mode::Ternary ? 3 : 2; }

  /// 3^c or 2^c: number of distinct chunk values.
  int total_codes() const;

  /// LUT slots: ceil(3^c/2) after mirror folding, or 2^c.
  int stored_entries() const;

  /// Largest canonical value_code; ternary only (== code of the zero chunk).
  int mirror_midpoint() const;

  int value_code(const ChunkVec& w) const;
  ChunkVec decode(int value_code) const;

  bool is_canonical(int value_code) const;
  int mirror(int value_code) const;

  bool operator==(const ChunkConfig&) const = default;
};

/// One stored LUT entry: its canonical weight vector and value code.
struct LutEntryId {
  ChunkVec vec{};
  int value_code = 0;
};

/// All stored entries, ordered by value code (== canonical rank).
std::vector<LutEntryId> enumerate_entries(const ChunkConfig& cfg);

}  // namespace platinum
