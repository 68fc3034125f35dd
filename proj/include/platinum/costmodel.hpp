#pragma once

#include "platinum/lutkernel.hpp"

#include <string>
#include <vector>

namespace platinum {

struct GemmShape {
  std::int64_t m = 0, k = 0, n = 1;
};

/// Closed-form addition counts for one method at chunk size c, split by term.
/// `formula` is the printed closed form; `path_budget` replaces the
/// construction basis with the stored-table size (path construction spends
/// table_size - 1 adds per LUT because the zero entry is free, so the budget
/// exceeds the measured census by at most chunks(K) * N).
struct CostTerms {
  std::string method;
  std::int64_t construct = 0;    // additions while building tables
  std::int64_t merge = 0;        // per-chunk plane merging
  std::int64_t reduce = 0;       // accumulation across chunk columns
  std::int64_t queries = 0;      // table reads (not additions)
  std::int64_t formula = 0;      // construct + merge + reduce as printed
  std::int64_t path_budget = 0;  // formula with table-size construction basis
};

inline std::int64_t chunks(std::int64_t k, int c) { return (k + c - 1) / c; }

/// Bit-serial ternary (two planes over one 2^c table, naive construction):
/// [ceil(K/c)*c*2^c + M*ceil(K/c) + M*(ceil(K/c)-1)] * N.
CostTerms adds_bitserial(const GemmShape& s, int c);

/// Unfolded ternary table (all 3^c entries, naive construction):
/// [ceil(K/c)*c*3^c + M*(ceil(K/c)-1)] * N.
CostTerms adds_ternary_naive(const GemmShape& s, int c);

/// Mirror-folded ternary table built along the path:
/// [ceil(K/c)*ceil(3^c/2) + M*(ceil(K/c)-1)] * N.
CostTerms adds_platinum(const GemmShape& s, int c);

/// Naive basis: M*K*N additions.
std::int64_t adds_naive(const GemmShape& s);

struct SweepRow {
  int c;
  std::string method;
  std::int64_t adds;       // printed closed form
  double reduction;        // naive / adds
  std::int64_t lut_size;   // stored entries implied by (method, c)
  std::int64_t adds_measured_equiv;  // path-budget column where one applies
};

/// Rows for every (c, method) plus a naive baseline row per c; CSV schema
/// (c, method, adds, reduction, lut_size, adds_measured_equiv).
std::vector<SweepRow> sweep_chunk_size(const GemmShape& s, int c_lo, int c_hi);
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

struct EncodingRow {
  int c;
  int bits;           // ceil(log2 3^c)
  double bits_per_weight;
  bool byte_aligned;  // bits is a whole number of bytes
};

/// Storage rate over chunk sizes; c=5 is the smallest byte-aligned optimum.
std::vector<EncodingRow> encoding_sweep(int c_lo, int c_hi);
std::string encoding_to_csv(const std::vector<EncodingRow>& rows);

}  // namespace platinum
