#pragma once

#include "platinum/chunk.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>

namespace platinum {

/// Undirected graph over stored entries: an edge joins two canonical entries
/// whose weight vectors differ by one +/-1 step in a single coordinate.
///
/// Steps that land on a non-canonical ternary vector are dropped rather than
/// folded through the mirror: the construction op is LUT[dst] = LUT[src] +/- a_j,
/// which cannot negate the source read, so a mirror-matched edge could never be
/// replayed. Direct edges alone keep the canonical set connected (every
/// canonical vector reaches zero by zeroing low coordinates first).
struct EntryGraph {
  struct Edge {
    int to;        // canonical value code
    int j;         // coordinate changed
    int delta;     // +1 or -1 applied to vec[j] when walking from -> to
  };
  ChunkConfig config;
  int root_code = 0;                      // canonical code of the zero chunk
  std::vector<std::vector<Edge>> adj;     // indexed by canonical value code

  std::size_t edge_count() const;
};

EntryGraph build_entry_graph(const ChunkConfig& cfg);

/// Edge cost hook for the tree build; unit cost reproduces the default.
using EdgeCostFn = std::function<int(int from_code, int to_code, int j)>;

struct SpanningTree {
  ChunkConfig config;
  std::vector<int> order;      // value codes in insertion order; order[0] = root
  std::vector<int> parent;     // by value code; root's parent = -1
  std::vector<int> edge_j;     // by value code
  std::vector<int> edge_delta; // by value code; +1 => add a_j, -1 => subtract
  std::vector<int> depth;      // by value code
};

/// Prim over unit (or hooked) costs. Ties break on the lowest
/// (parent insertion index, j, sign) so reruns emit identical trees.
SpanningTree extract_spanning_tree(const EntryGraph& graph,
                                   const EdgeCostFn& cost = nullptr);

/// One construction op: LUT[dst] = LUT[src] + (sign ? -a[j] : +a[j]).
struct PathStep {
  std::uint8_t dst;
  std::uint8_t src;
  std::uint8_t j;
  std::uint8_t sign;  // 0 add, 1 subtract
};

/// Bijection canonical value code <-> LUT address; address of the zero chunk is 0.
struct CanonicalMap {
  std::vector<std::uint8_t> address_of_rank;  // indexed by canonical code

  int address(int canonical_code) const {
    return address_of_rank[static_cast<std::size_t>(canonical_code)];
  }
};

struct BuildPath {
  ChunkConfig config;
  std::vector<PathStep> steps;   // dst strictly sequential 1,2,3,...
  CanonicalMap canonical_map;

  /// Smallest dst-src gap over steps whose src is not address 0.
  int min_raw_distance() const;
};

/// Orders tree edges (BFS level, then discovery) and greedily delays any step
/// whose source was written fewer than pipeline_depth steps earlier; reads of
/// address 0 are always safe because the zero entry exists before step 1.
/// Throws ScheduleError when no emission order can satisfy the spacing.
BuildPath schedule_path(const SpanningTree& tree);

struct VerifyReport {
  bool ok = true;
  std::string violation;   // empty when ok: DuplicateWrite, NonSequentialDst,
                           // BadSource, RawViolation, ValueMismatch, BadMap, BadStepCount
  int step_index = -1;     // 0-based offending step where applicable
  int min_raw_distance = 0;
  std::string detail;
};

/// Independent symbolic replay: executes the path over formal inputs and
/// checks every address ends up holding exactly its canonical dot product,
/// along with write order and RAW spacing.
VerifyReport verify_path(const BuildPath& path);

// -- serialization ------------------------------------------------------------

/// Compact binary form ("PLTP"): header, 3-byte steps, then the address table.
std::vector<std::uint8_t> serialize_path(const BuildPath& path);
BuildPath deserialize_path(const std::vector<std::uint8_t>& bytes);

void write_path_file(const std::string& file, const BuildPath& path);
BuildPath read_path_file(const std::string& file);

/// JSON mirror of the same fields, for debugging.
std::string path_to_json(const BuildPath& path);

/// Hash of the serialized path; packed weight streams carry it.
std::uint64_t path_hash(const BuildPath& path);

/// Convenience: graph -> tree -> schedule for a config.
BuildPath generate_build_path(const ChunkConfig& cfg);

}  // namespace platinum
