#pragma once

#include "platinum/chunk.hpp"
#include "platinum/costmodel.hpp"
#include "platinum/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace platinum {

/// Loop nest order of the tile sweep, named outermost -> innermost.
/// The innermost loop decides what stays resident: k innermost keeps the
/// output tile stationary, n innermost keeps the weight tile stationary,
/// m innermost keeps the input tile stationary.
enum class Stationarity { MNK, MKN, NMK, NKM, KMN, KNM };

const char* stationarity_name(Stationarity s);
Stationarity parse_stationarity(const std::string& name);
std::vector<Stationarity> all_stationarities();

struct BufferSizes {
  int64_t weight_bytes = 116736;  // packed weight tile
  int64_t input_bytes = 17408;    // 8-bit activation tile
  int64_t output_bytes = 139264;  // 32-bit accumulator tile
  int64_t path_bytes = 5120;      // serialized build paths
  int64_t lut_bytes = 53248;      // lanes x 128 entries x 8 B (dual-bank)
  int64_t streaming_total() const {
    return weight_bytes + input_bytes + output_bytes + path_bytes;
  }
  int64_t total() const { return streaming_total() + lut_bytes; }
};

/// Energy coefficients in pJ. Illustrative round numbers: the simulator is
/// used for relative comparisons between schedules and methods, not for
/// absolute power estimates.
struct EnergyModel {
  double construct_add_pj = 0.2;  // 8-bit saturating table build add
  double query_pj = 0.4;          // table lookup
  double merge_add_pj = 0.6;      // shift-add across bit planes
  double reduce_add_pj = 1.0;     // 32-bit tree/accumulate add
  double sram_byte_pj = 0.5;
  double dram_byte_pj = 100.0;
};

struct HardwareConfig {
  int lanes = 52;         // table-builder units, one chunk each per round
  int columns_per_lane = 8;  // output columns served by each lane
  int chunk_ternary = 5;
  int chunk_binary = 7;
  int pipeline_depth = 4;
  double clock_ghz = 0.5;
  double dram_gbps = 64.0;
  BufferSizes buffers;
  EnergyModel energy;

  int chunk_for(Mode mode) const {
    return mode == Mode::Ternary ? chunk_ternary : chunk_binary;
  }
  int construct_adders() const { return lanes * columns_per_lane; }
  int accumulate_adders() const { return lanes * columns_per_lane; }
  int total_adders() const { return construct_adders() + accumulate_adders(); }
  double dram_bytes_per_cycle() const { return dram_gbps / clock_ghz; }
  int drain_cycles() const;  // log2-depth lane reduction tree + handoff
  void validate() const;
};

/// Planes streamed through the query ports: the ternary engine reads one
/// packed stream; the bit-serial baseline replays one plane per weight bit.
int query_planes(Mode mode);

struct TileSchedule {
  int m_tile = 0;
  int k_tile = 0;
  int n_tile = 0;
  Stationarity order = Stationarity::MNK;
  bool operator==(const TileSchedule&) const = default;
};

TileSchedule default_schedule(Mode mode);

/// Throws InfeasibleSchedule naming the first buffer that overflows.
void validate_schedule(const HardwareConfig& hw, Mode mode, const TileSchedule& s);

struct RoundCost {
  int construct_cycles = 0;  // path steps + pipeline fill
  int query_cycles = 0;      // ceil(rows * planes / 2), dual read ports
  int drain_cycles = 0;
  int total() const { return construct_cycles + query_cycles + drain_cycles; }
};

RoundCost round_cost(const HardwareConfig& hw, Mode mode, int m_eff);

struct TrafficBytes {
  int64_t weight_read = 0;
  int64_t input_read = 0;
  int64_t output_read = 0;   // partial-tile reloads (spills)
  int64_t output_write = 0;
  int64_t total() const {
    return weight_read + input_read + output_read + output_write;
  }
};

/// Useful-work census with the same semantics as the engine's operation
/// counts: inactive lanes and padded columns contribute nothing.
struct SimCounts {
  int64_t construct_adds = 0;
  int64_t queries = 0;
  int64_t merge_adds = 0;
  int64_t reduce_adds = 0;
  int64_t total_adds() const { return construct_adds + merge_adds + reduce_adds; }
};

struct EnergyBreakdown {
  double construct_pj = 0;
  double query_pj = 0;
  double merge_pj = 0;
  double reduce_pj = 0;
  double sram_pj = 0;
  double dram_pj = 0;
  double total_pj() const {
    return construct_pj + query_pj + merge_pj + reduce_pj + sram_pj + dram_pj;
  }
};

struct SimReport {
  Mode mode = Mode::Ternary;
  GemmShape shape;
  TileSchedule schedule;

  int64_t compute_cycles = 0;  // array busy: construct + query + drain phases
  int64_t construct_cycles = 0;
  int64_t query_cycles = 0;
  int64_t drain_phase_cycles = 0;
  int64_t stall_cycles = 0;    // transfer time the prefetcher could not hide
  int64_t fill_cycles = 0;     // one-time first-tile load; excluded from totals
  int64_t total_cycles = 0;    // steady-state: compute + stalls + final drain
  int64_t rounds = 0;      // (round, column-group) pairs executed
  int64_t lut_builds = 0;  // active lane-column table constructions

  SimCounts useful;
  int64_t physical_adds = 0;  // lockstep adder activity across the full array
  TrafficBytes traffic;
  EnergyBreakdown energy;

  double adder_utilization = 0;       // physical_adds / (adders * compute_cycles)
  double query_port_utilization = 0;  // issued / (2 ports * query cycles)
  int64_t naive_adds = 0;             // m*k*n reference work

  double seconds(const HardwareConfig& hw) const {
    return static_cast<double>(total_cycles) / (hw.clock_ghz * 1e9);
  }
  double gops(const HardwareConfig& hw) const {
    return static_cast<double>(naive_adds) / seconds(hw) * 1e-9;
  }
};

SimReport simulate_kernel(const HardwareConfig& hw, Mode mode, GemmShape shape,
                          const TileSchedule& schedule);

/// Sums cycles, traffic, counts, and energy over a workload of (shape, count)
/// kernels, each simulated independently (cold buffers between kernels).
struct WorkloadKernel {
  std::string name;
  GemmShape shape;
  int count = 1;
};

struct WorkloadReport {
  std::vector<SimReport> kernels;  // one entry per WorkloadKernel
  std::vector<std::string> names;
  std::vector<int> counts;
  int64_t total_cycles = 0;
  int64_t compute_cycles = 0;
  int64_t stall_cycles = 0;
  int64_t fill_cycles = 0;
  int64_t naive_adds = 0;
  int64_t physical_adds = 0;
  SimCounts useful;
  TrafficBytes traffic;
  double energy_pj = 0;
  double adder_utilization = 0;
  double query_port_utilization = 0;

  double seconds(const HardwareConfig& hw) const {
    return static_cast<double>(total_cycles) / (hw.clock_ghz * 1e9);
  }
  double gops(const HardwareConfig& hw) const {
    return static_cast<double>(naive_adds) / seconds(hw) * 1e-9;
  }
};

WorkloadReport simulate_workload(const HardwareConfig& hw, Mode mode,
                                 const std::vector<WorkloadKernel>& kernels,
                                 const TileSchedule& schedule);

struct DseGrid {
  std::vector<int> m_tiles = {270, 540, 1080, 2160};
  std::vector<int> k_tiles_ternary = {260, 520, 1040};
  std::vector<int> k_tiles_binary = {182, 364, 728};
  std::vector<int> n_tiles = {8, 16, 32, 64};
  std::vector<Stationarity> orders = all_stationarities();
  const std::vector<int>& k_tiles(Mode mode) const {
    return mode == Mode::Ternary ? k_tiles_ternary : k_tiles_binary;
  }
};

struct DsePoint {
  TileSchedule schedule;
  bool feasible = false;
  std::string infeasible_reason;
  int64_t total_cycles = 0;
  double energy_pj = 0;
  double gops = 0;
  double utilization = 0;
  int64_t traffic_bytes = 0;
  bool pareto = false;  // non-dominated on (cycles, energy) among feasible
  bool is_default_schedule = false;
  double score = 0;  // normalized cycles + normalized energy, lower is better
};

struct DseResult {
  std::vector<DsePoint> points;
  int best_index = -1;  // lowest score among feasible points
};

DseResult run_dse(const HardwareConfig& hw, Mode mode,
                  const std::vector<WorkloadKernel>& kernels, const DseGrid& grid);

std::string dse_to_csv(const DseResult& r);

}  // namespace platinum
