#include "platinum/pathgen.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>

namespace platinum {

std::size_t EntryGraph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& edges : adj) twice += edges.size();
  return twice / 2;
}

EntryGraph build_entry_graph(const ChunkConfig& cfg) {
  EntryGraph g;
  g.config = cfg;
  const int stored = cfg.stored_entries();
  g.adj.resize(static_cast<std::size_t>(stored));
  g.root_code = cfg.mode == Mode::Ternary ? cfg.mirror_midpoint() : 0;

  for (int code = 0; code < stored; ++code) {
    ChunkVec w = cfg.decode(code);
    int scale = 1;
    for (int j = 0; j < cfg.c; ++j) {
      for (int delta : {+1, -1}) {
        int digit = w[static_cast<std::size_t>(j)] + (cfg.mode == Mode::Ternary ? 1 : 0);
        int moved = digit + delta;
        if (moved < 0 || moved >= cfg.radix()) continue;
        int to = code + delta * scale;
        if (!cfg.is_canonical(to)) continue;
        g.adj[static_cast<std::size_t>(code)].push_back({to, j, delta});
      }
      scale *= cfg.radix();
    }
  }

  // Reachability from the zero entry; stored entries must form one component.
  std::vector<char> seen(static_cast<std::size_t>(stored), 0);
  std::deque<int> q{g.root_code};
  seen[static_cast<std::size_t>(g.root_code)] = 1;
  std::size_t reached = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (const auto& e : g.adj[static_cast<std::size_t>(v)]) {
      if (!seen[static_cast<std::size_t>(e.to)]) {
        seen[static_cast<std::size_t>(e.to)] = 1;
        ++reached;
        q.push_back(e.to);
      }
    }
  }
  if (reached != static_cast<std::size_t>(stored))
    throw InternalError("entry graph is disconnected");
  return g;
}

SpanningTree extract_spanning_tree(const EntryGraph& graph, const EdgeCostFn& cost) {
  const auto& cfg = graph.config;
  const int stored = cfg.stored_entries();
  SpanningTree tree;
  tree.config = cfg;
  tree.parent.assign(static_cast<std::size_t>(stored), -1);
  tree.edge_j.assign(static_cast<std::size_t>(stored), -1);
  tree.edge_delta.assign(static_cast<std::size_t>(stored), 0);
  tree.depth.assign(static_cast<std::size_t>(stored), 0);
  tree.order.reserve(static_cast<std::size_t>(stored));

  // Frontier keyed by (cost, parent insertion index, j, sign, child code);
  // lexicographic pop order makes the tree a deterministic function of the graph.
  struct Cand {
    int cost, parent_idx, j, sign, child, parent_code, delta;
    bool operator<(const Cand& o) const {
      return std::tie(cost, parent_idx, j, sign, child) <
             std::tie(o.cost, o.parent_idx, o.j, o.sign, o.child);
    }
  };
  std::set<Cand> frontier;
  std::vector<char> in_tree(static_cast<std::size_t>(stored), 0);
  std::vector<int> insert_idx(static_cast<std::size_t>(stored), -1);

  auto edge_cost = [&](int from, int to, int j) {
    return cost ? cost(from, to, j) : 1;
  };
  auto add_node = [&](int code) {
    in_tree[static_cast<std::size_t>(code)] = 1;
    insert_idx[static_cast<std::size_t>(code)] = static_cast<int>(tree.order.size());
    tree.order.push_back(code);
    for (const auto& e : graph.adj[static_cast<std::size_t>(code)]) {
      if (in_tree[static_cast<std::size_t>(e.to)]) continue;
      frontier.insert({edge_cost(code, e.to, e.j),
                       insert_idx[static_cast<std::size_t>(code)], e.j,
                       e.delta < 0 ? 1 : 0, e.to, code, e.delta});
    }
  };

  add_node(graph.root_code);
  while (tree.order.size() < static_cast<std::size_t>(stored)) {
    auto it = frontier.begin();
    while (it != frontier.end() && in_tree[static_cast<std::size_t>(it->child)])
      it = frontier.erase(it);
    if (it == frontier.end()) throw InternalError("spanning tree ran out of edges");
    Cand c = *it;
    frontier.erase(it);
    tree.parent[static_cast<std::size_t>(c.child)] = c.parent_code;
    tree.edge_j[static_cast<std::size_t>(c.child)] = c.j;
    tree.edge_delta[static_cast<std::size_t>(c.child)] = c.delta;
    tree.depth[static_cast<std::size_t>(c.child)] =
        tree.depth[static_cast<std::size_t>(c.parent_code)] + 1;
    add_node(c.child);
  }
  return tree;
}

int BuildPath::min_raw_distance() const {
  int best = static_cast<int>(steps.size()) + 1;
  for (const auto& s : steps)
    if (s.src != 0) best = std::min(best, static_cast<int>(s.dst) - static_cast<int>(s.src));
  return best;
}

BuildPath schedule_path(const SpanningTree& tree) {
  const auto& cfg = tree.config;
  const int stored = cfg.stored_entries();
  const int depth_req = cfg.pipeline_depth;

  // Candidates in (BFS level, discovery) order. Emission may only reorder
  // within the ready set; a child never precedes its parent.
  std::vector<int> candidates;
  candidates.reserve(static_cast<std::size_t>(stored) - 1);
  for (std::size_t i = 1; i < tree.order.size(); ++i) candidates.push_back(tree.order[i]);
  std::stable_sort(candidates.begin(), candidates.end(), [&](int a, int b) {
    return tree.depth[static_cast<std::size_t>(a)] < tree.depth[static_cast<std::size_t>(b)];
  });

  std::vector<int> address(static_cast<std::size_t>(stored), -1);
  address[static_cast<std::size_t>(tree.order[0])] = 0;

  BuildPath path;
  path.config = cfg;
  path.steps.reserve(candidates.size());

  std::vector<char> emitted(candidates.size(), 0);
  std::size_t done = 0;
  int pos = 0;
  while (done < candidates.size()) {
    ++pos;
    int pick = -1;
    int best_avail = 0;  // largest dependency distance currently available
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (emitted[i]) continue;
      int code = candidates[i];
      int parent = tree.parent[static_cast<std::size_t>(code)];
      int paddr = address[static_cast<std::size_t>(parent)];
      if (paddr < 0) continue;  // parent not yet written
      if (paddr == 0 || pos - paddr >= depth_req) {
        pick = static_cast<int>(i);
        break;
      }
      best_avail = std::max(best_avail, pos - paddr);
    }
    if (pick < 0) throw ScheduleError(best_avail);

    int code = candidates[static_cast<std::size_t>(pick)];
    emitted[static_cast<std::size_t>(pick)] = 1;
    ++done;
    address[static_cast<std::size_t>(code)] = pos;
    int parent = tree.parent[static_cast<std::size_t>(code)];
    path.steps.push_back(
        {static_cast<std::uint8_t>(pos),
         static_cast<std::uint8_t>(address[static_cast<std::size_t>(parent)]),
         static_cast<std::uint8_t>(tree.edge_j[static_cast<std::size_t>(code)]),
         static_cast<std::uint8_t>(tree.edge_delta[static_cast<std::size_t>(code)] < 0)});
  }

  path.canonical_map.address_of_rank.resize(static_cast<std::size_t>(stored));
  for (int code = 0; code < stored; ++code)
    path.canonical_map.address_of_rank[static_cast<std::size_t>(code)] =
        static_cast<std::uint8_t>(address[static_cast<std::size_t>(code)]);
  return path;
}

VerifyReport verify_path(const BuildPath& path) {
  const auto& cfg = path.config;
  const int stored = cfg.stored_entries();
  VerifyReport rep;
  rep.min_raw_distance = stored;  // shrunk below; stays past depth when no hazard exists

  auto fail = [&](std::string kind, int idx, std::string detail) {
    rep.ok = false;
    rep.violation = std::move(kind);
    rep.step_index = idx;
    rep.detail = std::move(detail);
    return rep;
  };

  if (static_cast<int>(path.steps.size()) != stored - 1)
    return fail("BadStepCount", -1,
                "expected " + std::to_string(stored - 1) + " steps, got " +
                    std::to_string(path.steps.size()));
  if (static_cast<int>(path.canonical_map.address_of_rank.size()) != stored)
    return fail("BadMap", -1, "address table size mismatch");

  // Formal replay: slot address -> coefficient vector over a_0..a_{c-1}.
  std::vector<std::array<int, kMaxChunk>> coeff(static_cast<std::size_t>(stored));
  std::vector<char> written(static_cast<std::size_t>(stored), 0);
  coeff[0].fill(0);
  written[0] = 1;

  for (std::size_t i = 0; i < path.steps.size(); ++i) {
    const PathStep& s = path.steps[i];
    int idx = static_cast<int>(i);
    if (s.dst >= stored || s.src >= stored)
      return fail("BadSource", idx, "address beyond stored entries");
    if (written[s.dst]) return fail("DuplicateWrite", idx, "dst " + std::to_string(s.dst));
    if (s.dst != i + 1)
      return fail("NonSequentialDst", idx, "dst " + std::to_string(s.dst));
    if (!written[s.src]) return fail("BadSource", idx, "src " + std::to_string(s.src) + " unwritten");
    if (s.j >= cfg.c) return fail("BadSource", idx, "input index out of range");
    if (s.src != 0) {
      int dist = static_cast<int>(s.dst) - static_cast<int>(s.src);
      rep.min_raw_distance = std::min(rep.min_raw_distance, dist);
      if (dist < cfg.pipeline_depth)
        return fail("RawViolation", idx,
                    "distance " + std::to_string(dist) + " < depth " +
                        std::to_string(cfg.pipeline_depth));
    }
    coeff[s.dst] = coeff[s.src];
    coeff[s.dst][s.j] += s.sign ? -1 : +1;
    written[s.dst] = 1;
  }

  // Every address must hold exactly the canonical entry the map assigns to it.
  std::vector<char> used(static_cast<std::size_t>(stored), 0);
  for (int code = 0; code < stored; ++code) {
    int addr = path.canonical_map.address(code);
    if (addr < 0 || addr >= stored || used[static_cast<std::size_t>(addr)])
      return fail("BadMap", -1, "address table is not a bijection");
    used[static_cast<std::size_t>(addr)] = 1;
    ChunkVec w = cfg.decode(code);
    for (int j = 0; j < cfg.c; ++j) {
      if (coeff[static_cast<std::size_t>(addr)][static_cast<std::size_t>(j)] !=
          w[static_cast<std::size_t>(j)])
        return fail("ValueMismatch", -1,
                    "address " + std::to_string(addr) + " coordinate " + std::to_string(j));
    }
  }
  int root = cfg.mode == Mode::Ternary ? cfg.mirror_midpoint() : 0;
  if (path.canonical_map.address(root) != 0)
    return fail("BadMap", -1, "zero chunk not at address 0");
  return rep;
}

// -- serialization ------------------------------------------------------------

namespace {

constexpr char kPathMagic[4] = {'P', 'L', 'T', 'P'};
constexpr std::uint8_t kPathVersion = 1;

void put_u16(std::vector<std::uint8_t>& v, std::uint16_t x) {
  v.push_back(static_cast<std::uint8_t>(x & 0xff));
  v.push_back(static_cast<std::uint8_t>(x >> 8));
}

}  // namespace

std::vector<std::uint8_t> serialize_path(const BuildPath& path) {
  std::vector<std::uint8_t> out;
  out.reserve(10 + path.steps.size() * 3 + path.canonical_map.address_of_rank.size());
  out.insert(out.end(), kPathMagic, kPathMagic + 4);
  out.push_back(kPathVersion);
  out.push_back(static_cast<std::uint8_t>(path.config.mode));
  out.push_back(static_cast<std::uint8_t>(path.config.c));
  out.push_back(static_cast<std::uint8_t>(path.config.pipeline_depth));
  put_u16(out, static_cast<std::uint16_t>(path.steps.size()));
  for (const auto& s : path.steps) {
    out.push_back(s.dst);
    out.push_back(s.src);
    out.push_back(static_cast<std::uint8_t>((s.j << 1) | s.sign));
  }
  out.insert(out.end(), path.canonical_map.address_of_rank.begin(),
             path.canonical_map.address_of_rank.end());
  return out;
}

BuildPath deserialize_path(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 10 || !std::equal(kPathMagic, kPathMagic + 4, bytes.begin()))
    throw ValidationError("not a PLTP path file");
  if (bytes[4] != kPathVersion) throw ValidationError("unsupported PLTP version");
  BuildPath path;
  path.config = ChunkConfig(static_cast<Mode>(bytes[5]), bytes[6], bytes[7]);
  std::size_t n_steps = bytes[8] | (static_cast<std::size_t>(bytes[9]) << 8);
  std::size_t stored = static_cast<std::size_t>(path.config.stored_entries());
  if (bytes.size() != 10 + n_steps * 3 + stored)
    throw ValidationError("PLTP length does not match header");
  std::size_t off = 10;
  path.steps.reserve(n_steps);
  for (std::size_t i = 0; i < n_steps; ++i, off += 3)
    path.steps.push_back({bytes[off], bytes[off + 1],
                          static_cast<std::uint8_t>(bytes[off + 2] >> 1),
                          static_cast<std::uint8_t>(bytes[off + 2] & 1)});
  path.canonical_map.address_of_rank.assign(bytes.begin() + static_cast<std::ptrdiff_t>(off),
                                            bytes.end());
  return path;
}

void write_path_file(const std::string& file, const BuildPath& path) {
  auto bytes = serialize_path(path);
  std::ofstream out(file, std::ios::binary);
  if (!out) throw ValidationError("cannot open for writing: " + file);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

BuildPath read_path_file(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ValidationError("cannot open: " + file);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return deserialize_path(bytes);
}

std::string path_to_json(const BuildPath& path) {
  std::ostringstream os;
  os << "{\n  \"magic\": \"PLTP\",\n  \"version\": 1,\n  \"mode\": \""
     << mode_name(path.config.mode) << "\",\n  \"c\": " << path.config.c
     << ",\n  \"pipeline_depth\": " << path.config.pipeline_depth
     << ",\n  \"step_count\": " << path.steps.size() << ",\n  \"steps\": [";
  for (std::size_t i = 0; i < path.steps.size(); ++i) {
    const auto& s = path.steps[i];
    os << (i ? "," : "") << "\n    {\"dst\": " << int(s.dst) << ", \"src\": " << int(s.src)
       << ", \"j\": " << int(s.j) << ", \"sign\": " << int(s.sign) << "}";
  }
  os << "\n  ],\n  \"address_of_rank\": [";
  const auto& map = path.canonical_map.address_of_rank;
  for (std::size_t i = 0; i < map.size(); ++i) os << (i ? ", " : "") << int(map[i]);
  os << "]\n}\n";
  return os.str();
}

std::uint64_t path_hash(const BuildPath& path) { return fnv1a64(serialize_path(path)); }

BuildPath generate_build_path(const ChunkConfig& cfg) {
  return schedule_path(extract_spanning_tree(build_entry_graph(cfg)));
}

}  // namespace platinum
