#include "platinum/archsim.hpp"

#include "platinum/pathgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace platinum {
namespace {

constexpr std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

int axis_of(char ch) { return ch == 'm' ? 0 : ch == 'k' ? 1 : 2; }

std::int64_t weight_tile_bytes(const HardwareConfig& hw, Mode mode, std::int64_t m_eff,
                               std::int64_t k_eff) {
  const int c = hw.chunk_for(mode);
  return m_eff * ceil_div(k_eff, c) * query_planes(mode);
}

std::int64_t path_file_bytes(const BuildPath& path) {
  // magic 4 + version/mode/c/depth 4 + step count 2, then steps and the map
  return 10 + 3 * static_cast<std::int64_t>(path.steps.size()) +
         static_cast<std::int64_t>(path.canonical_map.address_of_rank.size());
}

RoundCost round_cost_with_steps(const HardwareConfig& hw, Mode mode, int steps,
                                std::int64_t m_eff) {
  RoundCost rc;
  rc.construct_cycles = steps + hw.pipeline_depth - 1;
  rc.query_cycles = static_cast<int>(ceil_div(m_eff * query_planes(mode), 2));
  rc.drain_cycles = hw.drain_cycles();
  return rc;
}

}  // namespace

const char* stationarity_name(Stationarity s) {
  switch (s) {
    case Stationarity::MNK: return "mnk";
    case Stationarity::MKN: return "mkn";
    case Stationarity::NMK: return "nmk";
    case Stationarity::NKM: return "nkm";
    case Stationarity::KMN: return "kmn";
    case Stationarity::KNM: return "knm";
  }
  throw InternalError("unknown stationarity");
}

Stationarity parse_stationarity(const std::string& name) {
  for (Stationarity s : all_stationarities())
    if (name == stationarity_name(s)) return s;
  throw ValidationError("unknown loop order: " + name +
                        " (expected one of mnk mkn nmk nkm kmn knm)");
}

std::vector<Stationarity> all_stationarities() {
  return {Stationarity::MNK, Stationarity::MKN, Stationarity::NMK,
          Stationarity::NKM, Stationarity::KMN, Stationarity::KNM};
}

int HardwareConfig::drain_cycles() const {
  int levels = 0;
  while ((1 << levels) < lanes) ++levels;
  return levels + 1;
}

void HardwareConfig::validate() const {
  if (lanes < 1 || lanes > 4096) throw ValidationError("lanes must be in [1, 4096]");
  if (columns_per_lane < 1 || columns_per_lane > 256)
    throw ValidationError("columns_per_lane must be in [1, 256]");
  if (pipeline_depth < 1) throw ValidationError("pipeline_depth must be >= 1");
  if (clock_ghz <= 0) throw ValidationError("clock_ghz must be positive");
  if (dram_gbps <= 0) throw ValidationError("dram_gbps must be positive");
  if (buffers.weight_bytes <= 0 || buffers.input_bytes <= 0 ||
      buffers.output_bytes <= 0 || buffers.path_bytes <= 0 || buffers.lut_bytes <= 0)
    throw ValidationError("buffer sizes must be positive");
  // chunk bounds ride on the table-address limit; the ctor enforces them
  (void)ChunkConfig(Mode::Ternary, chunk_ternary, pipeline_depth);
  (void)ChunkConfig(Mode::Binary, chunk_binary, pipeline_depth);
  const std::int64_t lut_need = static_cast<std::int64_t>(lanes) * kMaxLutEntries * 8;
  if (lut_need > buffers.lut_bytes)
    throw ValidationError("lut buffer too small for lane count: need " +
                          std::to_string(lut_need) + " B");
}

int query_planes(Mode mode) { return mode == Mode::Ternary ? 1 : 2; }

TileSchedule default_schedule(Mode mode) {
  if (mode == Mode::Ternary) return {1080, 520, 32, Stationarity::MNK};
  return {1080, 364, 32, Stationarity::MNK};
}

void validate_schedule(const HardwareConfig& hw, Mode mode, const TileSchedule& s) {
  hw.validate();
  if (s.m_tile < 1 || s.k_tile < 1 || s.n_tile < 1)
    throw ValidationError("tile sizes must be positive");

  const std::int64_t wb = weight_tile_bytes(hw, mode, s.m_tile, s.k_tile);
  if (wb > hw.buffers.weight_bytes)
    throw InfeasibleSchedule("weight", "weight tile needs " + std::to_string(wb) +
                                           " B > " + std::to_string(hw.buffers.weight_bytes) + " B");
  const std::int64_t xb = static_cast<std::int64_t>(s.k_tile) * s.n_tile;
  if (xb > hw.buffers.input_bytes)
    throw InfeasibleSchedule("input", "input tile needs " + std::to_string(xb) +
                                          " B > " + std::to_string(hw.buffers.input_bytes) + " B");
  const std::int64_t yb = 4ll * s.m_tile * s.n_tile;
  if (yb > hw.buffers.output_bytes)
    throw InfeasibleSchedule("output", "output tile needs " + std::to_string(yb) +
                                           " B > " + std::to_string(hw.buffers.output_bytes) + " B");
  const BuildPath path =
      generate_build_path(ChunkConfig(mode, hw.chunk_for(mode), hw.pipeline_depth));
  const std::int64_t pb = path_file_bytes(path);
  if (pb > hw.buffers.path_bytes)
    throw InfeasibleSchedule("path", "build path needs " + std::to_string(pb) +
                                         " B > " + std::to_string(hw.buffers.path_bytes) + " B");
}

RoundCost round_cost(const HardwareConfig& hw, Mode mode, int m_eff) {
  hw.validate();
  if (m_eff < 1) throw ValidationError("m_eff must be positive");
  const BuildPath path =
      generate_build_path(ChunkConfig(mode, hw.chunk_for(mode), hw.pipeline_depth));
  return round_cost_with_steps(hw, mode, static_cast<int>(path.steps.size()), m_eff);
}

SimReport simulate_kernel(const HardwareConfig& hw, Mode mode, GemmShape shape,
                          const TileSchedule& schedule) {
  if (shape.m < 1 || shape.k < 1 || shape.n < 1)
    throw ValidationError("kernel shape must be positive");
  validate_schedule(hw, mode, schedule);

  const int c = hw.chunk_for(mode);
  const int planes = query_planes(mode);
  const BuildPath path =
      generate_build_path(ChunkConfig(mode, c, hw.pipeline_depth));
  const int steps = static_cast<int>(path.steps.size());
  const std::int64_t lanes = hw.lanes;
  const std::int64_t cols = hw.columns_per_lane;
  const double bytes_per_cycle = hw.dram_bytes_per_cycle();

  SimReport rep;
  rep.mode = mode;
  rep.shape = shape;
  rep.schedule = schedule;
  rep.naive_adds = shape.m * shape.k * shape.n;

  const std::int64_t Tm = ceil_div(shape.m, schedule.m_tile);
  const std::int64_t Tk = ceil_div(shape.k, schedule.k_tile);
  const std::int64_t Tn = ceil_div(shape.n, schedule.n_tile);

  const auto m_eff = [&](std::int64_t im) {
    return std::min<std::int64_t>(schedule.m_tile, shape.m - im * schedule.m_tile);
  };
  const auto k_eff = [&](std::int64_t ik) {
    return std::min<std::int64_t>(schedule.k_tile, shape.k - ik * schedule.k_tile);
  };
  const auto n_eff = [&](std::int64_t in) {
    return std::min<std::int64_t>(schedule.n_tile, shape.n - in * schedule.n_tile);
  };
  const auto out_bytes = [&](std::int64_t yid) {
    return 4 * m_eff(yid / Tn) * n_eff(yid % Tn);
  };
  const auto dram_cycles = [&](std::int64_t bytes) {
    return static_cast<std::int64_t>(std::ceil(static_cast<double>(bytes) / bytes_per_cycle));
  };

  // residency of the three on-chip tiles; outputs may spill half-done
  std::int64_t cur_w = -1, cur_x = -1, cur_y = -1;
  bool y_dirty = false;
  std::vector<char> y_started(static_cast<std::size_t>(Tm * Tn), 0);

  std::int64_t total = 0, prev_compute = 0;
  std::int64_t port_issued = 0, port_slots = 0;
  bool first_visit = true;

  const std::string nm = stationarity_name(schedule.order);
  const int a0 = axis_of(nm[0]), a1 = axis_of(nm[1]), a2 = axis_of(nm[2]);
  std::int64_t tiles[3] = {Tm, Tk, Tn};
  std::int64_t idx[3] = {0, 0, 0};

  for (idx[a0] = 0; idx[a0] < tiles[a0]; ++idx[a0]) {
    for (idx[a1] = 0; idx[a1] < tiles[a1]; ++idx[a1]) {
      for (idx[a2] = 0; idx[a2] < tiles[a2]; ++idx[a2]) {
        const std::int64_t im = idx[0], ik = idx[1], in = idx[2];
        const std::int64_t me = m_eff(im), ke = k_eff(ik), ne = n_eff(in);

        // transfers this visit triggers (prefetched behind the previous visit)
        std::int64_t bytes = 0;
        const std::int64_t wid = im * Tk + ik;
        if (wid != cur_w) {
          const std::int64_t wb = weight_tile_bytes(hw, mode, me, ke);
          bytes += wb;
          rep.traffic.weight_read += wb;
          cur_w = wid;
        }
        const std::int64_t xid = ik * Tn + in;
        if (xid != cur_x) {
          bytes += ke * ne;
          rep.traffic.input_read += ke * ne;
          cur_x = xid;
        }
        const std::int64_t yid = im * Tn + in;
        if (yid != cur_y) {
          if (cur_y >= 0 && y_dirty) {
            const std::int64_t evict = out_bytes(cur_y);
            bytes += evict;
            rep.traffic.output_write += evict;
          }
          if (y_started[static_cast<std::size_t>(yid)]) {
            const std::int64_t reload = out_bytes(yid);  // resume a spilled tile
            bytes += reload;
            rep.traffic.output_read += reload;
          }
          cur_y = yid;
          y_dirty = false;
        }
        const bool fresh = !y_started[static_cast<std::size_t>(yid)];
        y_started[static_cast<std::size_t>(yid)] = 1;
        y_dirty = true;

        // array work: R chunk rounds per column group
        const std::int64_t g = ceil_div(ke, c);
        const std::int64_t R = ceil_div(g, lanes);
        const std::int64_t C = ceil_div(ne, cols);
        const RoundCost rc = round_cost_with_steps(hw, mode, steps, me);

        const std::int64_t compute = R * C * rc.total();
        rep.construct_cycles += R * C * rc.construct_cycles;
        rep.query_cycles += R * C * rc.query_cycles;
        rep.drain_phase_cycles += R * C * rc.drain_cycles;
        rep.compute_cycles += compute;
        rep.rounds += R * C;
        rep.lut_builds += g * ne;

        rep.useful.construct_adds += static_cast<std::int64_t>(steps) * g * ne;
        rep.useful.queries += me * planes * g * ne;
        rep.useful.merge_adds += me * (planes - 1) * g * ne;
        rep.useful.reduce_adds += (g - R) * me * ne;            // lane tree
        rep.useful.reduce_adds += (R - (fresh ? 1 : 0)) * me * ne;  // accumulate

        rep.physical_adds += R * C * (steps + me * planes) * lanes * cols;
        port_issued += R * C * me * planes;
        port_slots += R * C * 2 * rc.query_cycles;

        if (first_visit) {
          rep.fill_cycles = dram_cycles(bytes);  // unavoidable pipeline warm-up
          first_visit = false;
        } else {
          total += std::max(prev_compute, dram_cycles(bytes));
        }
        prev_compute = compute;
      }
    }
  }
  total += prev_compute;
  if (cur_y >= 0 && y_dirty) {
    const std::int64_t flush = out_bytes(cur_y);
    rep.traffic.output_write += flush;
    total += dram_cycles(flush);
  }

  if (rep.compute_cycles !=
      rep.construct_cycles + rep.query_cycles + rep.drain_phase_cycles)
    throw InternalError("simulate_kernel: phase accounting diverged");

  rep.total_cycles = total;
  rep.stall_cycles = total - rep.compute_cycles;
  rep.adder_utilization =
      rep.compute_cycles > 0
          ? static_cast<double>(rep.physical_adds) /
                (static_cast<double>(hw.total_adders()) * static_cast<double>(rep.compute_cycles))
          : 0.0;
  rep.query_port_utilization =
      port_slots > 0 ? static_cast<double>(port_issued) / static_cast<double>(port_slots) : 0.0;

  const EnergyModel& e = hw.energy;
  rep.energy.construct_pj = static_cast<double>(rep.useful.construct_adds) * e.construct_add_pj;
  rep.energy.query_pj = static_cast<double>(rep.useful.queries) * e.query_pj;
  rep.energy.merge_pj = static_cast<double>(rep.useful.merge_adds) * e.merge_add_pj;
  rep.energy.reduce_pj = static_cast<double>(rep.useful.reduce_adds) * e.reduce_add_pj;
  // every streamed byte crosses SRAM once; table builds write and queries read one byte
  rep.energy.sram_pj =
      static_cast<double>(rep.traffic.total() + rep.useful.construct_adds + rep.useful.queries) *
      e.sram_byte_pj;
  rep.energy.dram_pj = static_cast<double>(rep.traffic.total()) * e.dram_byte_pj;
  return rep;
}

WorkloadReport simulate_workload(const HardwareConfig& hw, Mode mode,
                                 const std::vector<WorkloadKernel>& kernels,
                                 const TileSchedule& schedule) {
  if (kernels.empty()) throw ValidationError("workload has no kernels");
  WorkloadReport w;
  double port_issued = 0, port_slots = 0;
  for (const WorkloadKernel& kn : kernels) {
    if (kn.count < 1) throw ValidationError("kernel count must be positive");
    SimReport rep = simulate_kernel(hw, mode, kn.shape, schedule);
    const std::int64_t cnt = kn.count;
    w.total_cycles += cnt * rep.total_cycles;
    w.compute_cycles += cnt * rep.compute_cycles;
    w.stall_cycles += cnt * rep.stall_cycles;
    w.fill_cycles += cnt * rep.fill_cycles;
    w.naive_adds += cnt * rep.naive_adds;
    w.physical_adds += cnt * rep.physical_adds;
    w.useful.construct_adds += cnt * rep.useful.construct_adds;
    w.useful.queries += cnt * rep.useful.queries;
    w.useful.merge_adds += cnt * rep.useful.merge_adds;
    w.useful.reduce_adds += cnt * rep.useful.reduce_adds;
    w.traffic.weight_read += cnt * rep.traffic.weight_read;
    w.traffic.input_read += cnt * rep.traffic.input_read;
    w.traffic.output_read += cnt * rep.traffic.output_read;
    w.traffic.output_write += cnt * rep.traffic.output_write;
    w.energy_pj += static_cast<double>(cnt) * rep.energy.total_pj();
    port_issued += static_cast<double>(cnt) * rep.query_port_utilization * 2.0 *
                   static_cast<double>(rep.query_cycles);
    port_slots += static_cast<double>(cnt) * 2.0 * static_cast<double>(rep.query_cycles);
    w.names.push_back(kn.name);
    w.counts.push_back(kn.count);
    w.kernels.push_back(std::move(rep));
  }
  w.adder_utilization =
      w.compute_cycles > 0
          ? static_cast<double>(w.physical_adds) /
                (static_cast<double>(hw.total_adders()) * static_cast<double>(w.compute_cycles))
          : 0.0;
  w.query_port_utilization = port_slots > 0 ? port_issued / port_slots : 0.0;
  return w;
}

DseResult run_dse(const HardwareConfig& hw, Mode mode,
                  const std::vector<WorkloadKernel>& kernels, const DseGrid& grid) {
  if (grid.m_tiles.empty() || grid.k_tiles(mode).empty() || grid.n_tiles.empty() ||
      grid.orders.empty())
    throw ValidationError("dse: search grid has an empty dimension");
  DseResult result;
  const TileSchedule def = default_schedule(mode);
  for (int m : grid.m_tiles) {
    for (int k : grid.k_tiles(mode)) {
      for (int n : grid.n_tiles) {
        for (Stationarity order : grid.orders) {
          DsePoint p;
          p.schedule = {m, k, n, order};
          p.is_default_schedule = (p.schedule == def);
          try {
            WorkloadReport w = simulate_workload(hw, mode, kernels, p.schedule);
            p.feasible = true;
            p.total_cycles = w.total_cycles;
            p.energy_pj = w.energy_pj;
            p.gops = w.gops(hw);
            p.utilization = w.adder_utilization;
            p.traffic_bytes = w.traffic.total();
          } catch (const InfeasibleSchedule& ex) {
            p.infeasible_reason = ex.what();
          }
          result.points.push_back(std::move(p));
        }
      }
    }
  }

  std::int64_t min_cycles = std::numeric_limits<std::int64_t>::max();
  double min_energy = std::numeric_limits<double>::max();
  for (const DsePoint& p : result.points) {
    if (!p.feasible) continue;
    min_cycles = std::min(min_cycles, p.total_cycles);
    min_energy = std::min(min_energy, p.energy_pj);
  }
  for (std::size_t i = 0; i < result.points.size(); ++i) {
    DsePoint& p = result.points[i];
    if (!p.feasible) continue;
    p.score = static_cast<double>(p.total_cycles) / static_cast<double>(min_cycles) +
              p.energy_pj / min_energy;
    bool dominated = false;
    for (const DsePoint& q : result.points) {
      if (!q.feasible) continue;
      if (q.total_cycles <= p.total_cycles && q.energy_pj <= p.energy_pj &&
          (q.total_cycles < p.total_cycles || q.energy_pj < p.energy_pj)) {
        dominated = true;
        break;
      }
    }
    p.pareto = !dominated;
    if (result.best_index < 0 || p.score < result.points[static_cast<std::size_t>(result.best_index)].score)
      result.best_index = static_cast<int>(i);
  }
  return result;
}

std::string dse_to_csv(const DseResult& r) {
  std::string out =
      "m_tile,k_tile,n_tile,order,feasible,total_cycles,gops,energy_mj,traffic_mb,"
      "adder_utilization,pareto,is_default_schedule,score,infeasible_reason\n";
  char buf[512];
  for (const DsePoint& p : r.points) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%d,%s,%d,%lld,%.3f,%.6f,%.3f,%.6f,%d,%d,%.6f,%s\n",
                  p.schedule.m_tile, p.schedule.k_tile, p.schedule.n_tile,
                  stationarity_name(p.schedule.order), p.feasible ? 1 : 0,
                  static_cast<long long>(p.total_cycles), p.gops, p.energy_pj * 1e-9,
                  static_cast<double>(p.traffic_bytes) / (1024.0 * 1024.0), p.utilization,
                  p.pareto ? 1 : 0, p.is_default_schedule ? 1 : 0, p.score,
                  p.infeasible_reason.c_str());
    out += buf;
  }
  return out;
}

}  // namespace platinum
