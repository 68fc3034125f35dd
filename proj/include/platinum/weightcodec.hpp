#pragma once

#include "platinum/pathgen.hpp"

#include <string>

namespace platinum {

/// Packed weights: one byte per chunk of c weights.
/// Ternary byte = sign<<7 | address of the mirror-folded canonical entry;
/// binary byte = address, sign bit always 0. Bytes are laid out
/// chunk-column-major (all M rows of chunk column g, then column g+1), the
/// order queries consume them when one LUT serves a whole chunk column.
struct PackedWeightStream {
  Mode mode = Mode::Ternary;
  int c = 5;
  Eigen::Index rows = 0;            // M
  Eigen::Index k = 0;               // K (pre-padding)
  std::uint64_t path_hash = 0;      // hash of the path whose map coded these
  std::vector<std::uint8_t> bytes;  // rows * ceil(k/c)

  Eigen::Index chunk_cols() const { return (k + c - 1) / c; }
  std::uint8_t byte_at(Eigen::Index i, Eigen::Index g) const {
    return bytes[static_cast<std::size_t>(g * rows + i)];
  }
};

/// Encode a {-1,0,1} matrix against a ternary path's address map.
/// Chunks beyond a K boundary are zero-padded before coding.
PackedWeightStream pack_ternary(const TernaryMatrix& w, const BuildPath& path);

/// Exact inverse of pack_ternary; rejects streams whose padding region
/// decodes to nonzero weights or whose bytes address missing entries.
TernaryMatrix unpack_ternary(const PackedWeightStream& stream, const BuildPath& path);

/// Encode a {0,1} plane against a binary path's address map.
PackedWeightStream pack_binary(const BinaryMatrix& plane, const BuildPath& path);

/// ceil(log2 3^c) / c, exact. value() is the real number (1.6 at c=5).
struct StorageRate {
  int bits;  // ceil(log2 3^c)
  int c;
  double value() const { return static_cast<double>(bits) / c; }
};
StorageRate bits_per_weight(int c);

/// Bit planes w = sum_i weight_i * plane_i with binary planes.
/// For b-bit two's-complement weights the top plane carries -2^(b-1);
/// ternary decomposes into a +1 plane and a -1 plane (two one-bit passes).
struct BitPlane {
  BinaryMatrix plane;
  std::int64_t weight;
};
using BitPlaneSet = std::vector<BitPlane>;

BitPlaneSet decompose_bitplanes(const IntMatrix& w, int bits, bool signed_mode);
BitPlaneSet decompose_ternary_planes(const TernaryMatrix& w);

/// Reconstruction helper (used by tests): sum weight_i * plane_i.
IntMatrix compose_bitplanes(const BitPlaneSet& planes);

// -- serialization ("PLTW") ----------------------------------------------------

std::vector<std::uint8_t> serialize_weights(const PackedWeightStream& s);
PackedWeightStream deserialize_weights(const std::vector<std::uint8_t>& bytes);
void write_weight_file(const std::string& file, const PackedWeightStream& s);
PackedWeightStream read_weight_file(const std::string& file);

}  // namespace platinum
