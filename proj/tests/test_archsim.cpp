#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "platinum/archsim.hpp"
#include "platinum/kernels.hpp"
#include "platinum/lutkernel.hpp"
#include "platinum/types.hpp"
#include "platinum/weightcodec.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

using namespace platinum;

namespace {

std::vector<WorkloadKernel> prefill_3b() {
  return workload_for(find_model(model_catalog(), "b1.58-3B"), kPrefillColumns);
}

std::vector<WorkloadKernel> decode_3b() {
  return workload_for(find_model(model_catalog(), "b1.58-3B"), kDecodeColumns);
}

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("default hardware parameters and derived quantities") {
  HardwareConfig hw;
  CHECK_NOTHROW(hw.validate());
  CHECK(hw.lanes == 52);
  CHECK(hw.columns_per_lane == 8);
  CHECK(hw.chunk_ternary == 5);
  CHECK(hw.chunk_binary == 7);
  CHECK(hw.pipeline_depth == 4);
  CHECK(hw.clock_ghz == 0.5);
  CHECK(hw.dram_gbps == 64.0);
  CHECK(hw.chunk_for(Mode::Ternary) == 5);
  CHECK(hw.chunk_for(Mode::Binary) == 7);
  CHECK(hw.construct_adders() == 416);
  CHECK(hw.accumulate_adders() == 416);
  CHECK(hw.total_adders() == 832);
  CHECK(hw.dram_bytes_per_cycle() == 128.0);
  // 52 lanes need a 6-level reduction tree plus one handoff cycle
  CHECK(hw.drain_cycles() == 7);

  CHECK(hw.buffers.weight_bytes == 116736);
  CHECK(hw.buffers.input_bytes == 17408);
  CHECK(hw.buffers.output_bytes == 139264);
  CHECK(hw.buffers.path_bytes == 5120);
  CHECK(hw.buffers.lut_bytes == 53248);
  CHECK(hw.buffers.streaming_total() == 278528);  // 272 KiB
  CHECK(hw.buffers.total() == 331776);            // 324 KiB
  CHECK(hw.buffers.total() == 324 * 1024);
}

TEST_CASE("hardware validation rejects broken configurations") {
  auto broken = [](auto&& tweak) {
    HardwareConfig hw;
    tweak(hw);
    return hw;
  };
  CHECK_THROWS_AS(broken([](HardwareConfig& h) { h.lanes = 0; }).validate(), ValidationError);
  CHECK_THROWS_AS(broken([](HardwareConfig& h) { h.lanes = 5000; }).validate(), ValidationError);
  CHECK_THROWS_AS(broken([](HardwareConfig& h) { h.columns_per_lane = 0; }).validate(),
                  ValidationError);
  CHECK_THROWS_AS(broken([](HardwareConfig& h) { h.pipeline_depth = 0; }).validate(),
                  ValidationError);
  CHECK_THROWS_AS(broken([](HardwareConfig& h) { h.clock_ghz = 0.0; }).validate(),
                  ValidationError);
  CHECK_THROWS_AS(broken([](HardwareConfig& h) { h.dram_gbps = -1.0; }).validate(),
                  ValidationError);
  CHECK_THROWS_AS(broken([](HardwareConfig& h) { h.buffers.input_bytes = 0; }).validate(),
                  ValidationError);
  // chunk widths ride on the 128-entry table address limit
  CHECK_THROWS_AS(broken([](HardwareConfig& h) { h.chunk_ternary = 6; }).validate(),
                  ValidationError);
  CHECK_THROWS_AS(broken([](HardwareConfig& h) { h.chunk_binary = 8; }).validate(),
                  ValidationError);
  CHECK_THROWS_AS(broken([](HardwareConfig& h) { h.chunk_ternary = 0; }).validate(),
                  ValidationError);
  // 52 lanes x 128 entries x 8 B = 53248 B must fit in the table buffer
  CHECK_THROWS_AS(broken([](HardwareConfig& h) { h.buffers.lut_bytes = 53247; }).validate(),
                  ValidationError);
  CHECK_NOTHROW(broken([](HardwareConfig& h) { h.buffers.lut_bytes = 53248; }).validate());
}

TEST_CASE("loop order names round-trip and unknown names are rejected") {
  const auto all = all_stationarities();
  CHECK(all.size() == 6);
  for (Stationarity s : all) CHECK(parse_stationarity(stationarity_name(s)) == s);
  CHECK(std::string(stationarity_name(Stationarity::MNK)) == "mnk");
  CHECK(std::string(stationarity_name(Stationarity::KNM)) == "knm");
  CHECK_THROWS_AS(parse_stationarity("mkm"), ValidationError);
  CHECK_THROWS_AS(parse_stationarity(""), ValidationError);
  CHECK_THROWS_AS(parse_stationarity("MNK"), ValidationError);
}

TEST_CASE("query plane counts per engine") {
  CHECK(query_planes(Mode::Ternary) == 1);
  CHECK(query_planes(Mode::Binary) == 2);
}

TEST_CASE("default schedules fit the buffers") {
  const TileSchedule t = default_schedule(Mode::Ternary);
  CHECK(t == TileSchedule{1080, 520, 32, Stationarity::MNK});
  const TileSchedule b = default_schedule(Mode::Binary);
  CHECK(b == TileSchedule{1080, 364, 32, Stationarity::MNK});
  HardwareConfig hw;
  CHECK_NOTHROW(validate_schedule(hw, Mode::Ternary, t));
  CHECK_NOTHROW(validate_schedule(hw, Mode::Binary, b));
}

TEST_CASE("schedule validation names the first overflowing buffer") {
  HardwareConfig hw;
  auto buffer_of = [&](Mode mode, TileSchedule s) -> std::string {
    try {
      validate_schedule(hw, mode, s);
      return "";
    } catch (const InfeasibleSchedule& ex) {
      return ex.buffer;
    }
  };
  // 1080 rows x 208 chunk-bytes = 224640 B packed weights > 116736 B
  CHECK(buffer_of(Mode::Ternary, {1080, 1040, 32, Stationarity::MNK}) == "weight");
  // 520 x 64 activation bytes = 33280 B > 17408 B
  CHECK(buffer_of(Mode::Ternary, {1080, 520, 64, Stationarity::MNK}) == "input");
  // 4 B x 2160 x 32 = 276480 B of accumulators > 139264 B
  CHECK(buffer_of(Mode::Ternary, {2160, 260, 32, Stationarity::MNK}) == "output");
  // binary packing doubles the weight bytes per chunk column
  CHECK(buffer_of(Mode::Binary, {1080, 728, 32, Stationarity::MNK}) == "weight");

  HardwareConfig tiny_path = hw;
  tiny_path.buffers.path_bytes = 100;  // serialized schedule program is 495 B
  try {
    validate_schedule(tiny_path, Mode::Ternary, default_schedule(Mode::Ternary));
    CHECK(false);
  } catch (const InfeasibleSchedule& ex) {
    CHECK(ex.buffer == "path");
  }

  CHECK_THROWS_AS(validate_schedule(hw, Mode::Ternary, {0, 520, 32, Stationarity::MNK}),
                  ValidationError);
  CHECK_THROWS_AS(validate_schedule(hw, Mode::Ternary, {1080, -5, 32, Stationarity::MNK}),
                  ValidationError);
}

TEST_CASE("per-round cycle costs") {
  HardwareConfig hw;
  const RoundCost t = round_cost(hw, Mode::Ternary, 1080);
  CHECK(t.construct_cycles == 124);  // 121 steps + 3 cycles of pipeline fill
  CHECK(t.query_cycles == 540);      // 1080 lookups over two ports
  CHECK(t.drain_cycles == 7);
  CHECK(t.total() == 671);

  const RoundCost b = round_cost(hw, Mode::Binary, 1080);
  CHECK(b.construct_cycles == 130);  // 127 steps + 3
  CHECK(b.query_cycles == 1080);     // two planes per row
  CHECK(b.drain_cycles == 7);

  CHECK(round_cost(hw, Mode::Ternary, 1).query_cycles == 1);
  CHECK(round_cost(hw, Mode::Binary, 1).query_cycles == 1);
  CHECK_THROWS_AS(round_cost(hw, Mode::Ternary, 0), ValidationError);
}

TEST_CASE("single-tile kernel simulation matches hand-computed totals") {
  HardwareConfig hw;
  const GemmShape shape{1080, 520, 32};
  const SimReport rep = simulate_kernel(hw, Mode::Ternary, shape, default_schedule(Mode::Ternary));

  // one tile visit: 104 chunks over 52 lanes = 2 rounds, 32 columns over 8 = 4 groups
  CHECK(rep.rounds == 8);
  CHECK(rep.lut_builds == 104 * 32);
  CHECK(rep.construct_cycles == 8 * 124);
  CHECK(rep.query_cycles == 8 * 540);
  CHECK(rep.drain_phase_cycles == 8 * 7);
  CHECK(rep.compute_cycles == 8 * 671);
  CHECK(rep.compute_cycles ==
        rep.construct_cycles + rep.query_cycles + rep.drain_phase_cycles);

  // first load (112320 weight B + 16640 input B at 128 B/cycle) is warm-up,
  // the only stall left is the final 138240 B accumulator flush
  CHECK(rep.fill_cycles == 1008);
  CHECK(rep.stall_cycles == 1080);
  CHECK(rep.total_cycles == 8 * 671 + 1080);
  CHECK(rep.total_cycles == rep.compute_cycles + rep.stall_cycles);

  CHECK(rep.traffic.weight_read == 112320);
  CHECK(rep.traffic.input_read == 16640);
  CHECK(rep.traffic.output_read == 0);
  CHECK(rep.traffic.output_write == 138240);

  CHECK(rep.useful.construct_adds == 121 * 104 * 32);
  CHECK(rep.useful.queries == 1080ll * 104 * 32);
  CHECK(rep.useful.merge_adds == 0);
  CHECK(rep.useful.reduce_adds == 103ll * 1080 * 32);
  CHECK(rep.physical_adds == 8ll * (121 + 1080) * 416);
  CHECK(rep.naive_adds == 1080ll * 520 * 32);

  CHECK(rep.query_port_utilization == 1.0);
  CHECK(rep.adder_utilization ==
        doctest::Approx(3996928.0 / (832.0 * 5368.0)).epsilon(1e-12));

  // energy: dram term is traffic at 100 pJ/B, total is the sum of parts
  CHECK(rep.energy.dram_pj == doctest::Approx(267200.0 * 100.0));
  CHECK(rep.energy.total_pj() ==
        doctest::Approx(rep.energy.construct_pj + rep.energy.query_pj + rep.energy.merge_pj +
                        rep.energy.reduce_pj + rep.energy.sram_pj + rep.energy.dram_pj));
  CHECK(rep.energy.merge_pj == 0.0);

  CHECK_THROWS_AS(simulate_kernel(hw, Mode::Ternary, GemmShape{0, 520, 32},
                                  default_schedule(Mode::Ternary)),
                  ValidationError);
}

TEST_CASE("simulator useful-work census equals the engine's operation counts") {
  HardwareConfig hw;
  const int m = 1080, k = 1040, n = 16;
  const TernaryMatrix w = random_ternary(m, k, 7);
  const ActivationMatrix x = random_activations(k, n, 8, 8);

  {
    const BuildPath path = generate_build_path(ChunkConfig(Mode::Ternary, 5));
    const PackedWeightStream ws = pack_ternary(w, path);
    const GemmResult r = mpgemm_ternary(ws, x, path);
    const SimReport s =
        simulate_kernel(hw, Mode::Ternary, GemmShape{m, k, n}, default_schedule(Mode::Ternary));
    CHECK(s.useful.construct_adds == r.census.construct_adds);
    CHECK(s.useful.queries == r.census.queries);
    CHECK(s.useful.merge_adds == r.census.merge_adds);
    CHECK(s.useful.reduce_adds == r.census.reduce_adds);
    CHECK(s.useful.total_adds() == r.census.total_adds());
  }
  {
    const BuildPath path = generate_build_path(ChunkConfig(Mode::Binary, 7));
    const GemmResult r = mpgemm_bitserial(decompose_ternary_planes(w), x, path);
    const SimReport s =
        simulate_kernel(hw, Mode::Binary, GemmShape{m, k, n}, default_schedule(Mode::Binary));
    CHECK(s.useful.construct_adds == r.census.construct_adds);
    CHECK(s.useful.queries == r.census.queries);
    CHECK(s.useful.merge_adds == r.census.merge_adds);
    CHECK(s.useful.reduce_adds == r.census.reduce_adds);
  }
}

TEST_CASE("simulation is deterministic") {
  HardwareConfig hw;
  const GemmShape shape{3200, 3200, 64};
  const SimReport a = simulate_kernel(hw, Mode::Ternary, shape, default_schedule(Mode::Ternary));
  const SimReport b = simulate_kernel(hw, Mode::Ternary, shape, default_schedule(Mode::Ternary));
  CHECK(a.total_cycles == b.total_cycles);
  CHECK(a.stall_cycles == b.stall_cycles);
  CHECK(a.physical_adds == b.physical_adds);
  CHECK(a.traffic.total() == b.traffic.total());
  CHECK(a.energy.total_pj() == b.energy.total_pj());
}

TEST_CASE("loop order controls which tile spills") {
  HardwareConfig hw;
  const GemmShape shape{2160, 1040, 64};
  // k innermost: each output tile finishes before eviction, no reloads
  const SimReport mnk = simulate_kernel(hw, Mode::Ternary, shape,
                                        {1080, 520, 32, Stationarity::MNK});
  CHECK(mnk.traffic.output_read == 0);
  CHECK(mnk.traffic.output_write == 4ll * 2160 * 64);
  // k outermost: every output tile is parked half-done and reloaded later
  const SimReport kmn = simulate_kernel(hw, Mode::Ternary, shape,
                                        {1080, 520, 32, Stationarity::KMN});
  CHECK(kmn.traffic.output_read > 0);
  CHECK(kmn.traffic.output_write > mnk.traffic.output_write);
  // compute work is identical either way
  CHECK(kmn.compute_cycles == mnk.compute_cycles);
  CHECK(kmn.useful.total_adds() == mnk.useful.total_adds());
}

TEST_CASE("more bandwidth or more lanes never hurts") {
  HardwareConfig hw;
  const GemmShape shape{3200, 3200, 1024};
  const SimReport base =
      simulate_kernel(hw, Mode::Ternary, shape, default_schedule(Mode::Ternary));

  HardwareConfig fat = hw;
  fat.dram_gbps = 128.0;
  const SimReport fast =
      simulate_kernel(fat, Mode::Ternary, shape, default_schedule(Mode::Ternary));
  CHECK(fast.total_cycles <= base.total_cycles);
  CHECK(fast.stall_cycles <= base.stall_cycles);

  HardwareConfig wide = hw;
  wide.lanes = 104;
  wide.buffers.lut_bytes = 104 * 128 * 8;
  const SimReport fewer =
      simulate_kernel(wide, Mode::Ternary, shape, default_schedule(Mode::Ternary));
  CHECK(fewer.rounds < base.rounds);
  CHECK(fewer.compute_cycles < base.compute_cycles);
}

TEST_CASE("model catalog and workload expansion") {
  const auto& models = model_catalog();
  CHECK(models.size() == 3);
  const ModelSpec& m3b = find_model(models, "b1.58-3B");
  CHECK(m3b.hidden == 3200);
  CHECK(m3b.ffn == 8640);
  REQUIRE(m3b.kernels.size() == 3);
  CHECK(m3b.kernels[0] == KernelSpec{"attn_qkvo", 3200, 3200, 4});
  CHECK(m3b.kernels[1] == KernelSpec{"ffn_gate_up", 8640, 3200, 2});
  CHECK(m3b.kernels[2] == KernelSpec{"ffn_down", 3200, 8640, 1});
  CHECK_THROWS_AS(find_model(models, "b1.58-13B"), ValidationError);

  CHECK(kPrefillColumns == 1024);
  CHECK(kDecodeColumns == 8);
  const auto prefill = workload_for(m3b, kPrefillColumns);
  REQUIRE(prefill.size() == 3);
  auto shape_is = [](const GemmShape& s, std::int64_t m, std::int64_t k, std::int64_t n) {
    return s.m == m && s.k == k && s.n == n;
  };
  CHECK(shape_is(prefill[0].shape, 3200, 3200, 1024));
  CHECK(prefill[0].count == 4);
  CHECK(shape_is(prefill[1].shape, 8640, 3200, 1024));
  CHECK(prefill[1].count == 2);
  CHECK(shape_is(prefill[2].shape, 3200, 8640, 1024));
  CHECK(prefill[2].count == 1);
  CHECK_THROWS_AS(workload_for(m3b, 0), ValidationError);
}

TEST_CASE("decoder-block workload totals and efficiency") {
  HardwareConfig hw;
  const WorkloadReport plat =
      simulate_workload(hw, Mode::Ternary, prefill_3b(), default_schedule(Mode::Ternary));
  REQUIRE(plat.kernels.size() == 3);
  CHECK(plat.names == std::vector<std::string>{"attn_qkvo", "ffn_gate_up", "ffn_down"});
  CHECK(plat.counts == std::vector<int>{4, 2, 1});

  // aggregate is the count-weighted sum of per-kernel reports
  std::int64_t cycles = 0, naive = 0;
  for (std::size_t i = 0; i < plat.kernels.size(); ++i) {
    cycles += plat.counts[i] * plat.kernels[i].total_cycles;
    naive += plat.counts[i] * plat.kernels[i].naive_adds;
  }
  CHECK(plat.total_cycles == cycles);
  CHECK(plat.naive_adds == naive);
  CHECK(plat.naive_adds == 126877696000ll);
  CHECK(plat.total_cycles == plat.compute_cycles + plat.stall_cycles);

  CHECK(plat.total_cycles == 39811008);
  CHECK(plat.gops(hw) == doctest::Approx(1593.5).epsilon(0.001));
  CHECK(plat.gops(hw) >= 1534.0 * 0.75);
  CHECK(plat.gops(hw) <= 1534.0 * 1.25);
  CHECK(plat.query_port_utilization == 1.0);
  CHECK(plat.adder_utilization > 0.875);
  CHECK(plat.adder_utilization < 0.935);
  CHECK(plat.adder_utilization == doctest::Approx(0.8944).epsilon(0.001));

  const WorkloadReport bs =
      simulate_workload(hw, Mode::Binary, prefill_3b(), default_schedule(Mode::Binary));
  CHECK(bs.total_cycles == 50171584);
  const double ratio =
      static_cast<double>(bs.total_cycles) / static_cast<double>(plat.total_cycles);
  CHECK(ratio > 1.2);
  CHECK(ratio < 1.6);

  const WorkloadReport dplat =
      simulate_workload(hw, Mode::Ternary, decode_3b(), default_schedule(Mode::Ternary));
  const WorkloadReport dbs =
      simulate_workload(hw, Mode::Binary, decode_3b(), default_schedule(Mode::Binary));
  CHECK(dplat.total_cycles == 323876);
  CHECK(dbs.total_cycles == 393748);
  const double dratio =
      static_cast<double>(dbs.total_cycles) / static_cast<double>(dplat.total_cycles);
  CHECK(dratio > 1.2);
  CHECK(dratio < 1.6);

  CHECK_THROWS_AS(simulate_workload(hw, Mode::Ternary, {}, default_schedule(Mode::Ternary)),
                  ValidationError);
  auto bad = prefill_3b();
  bad[0].count = 0;
  CHECK_THROWS_AS(simulate_workload(hw, Mode::Ternary, bad, default_schedule(Mode::Ternary)),
                  ValidationError);
}

TEST_CASE("schedule search sweeps the full grid and keeps the default on the front") {
  HardwareConfig hw;
  const DseGrid grid;
  CHECK(grid.k_tiles(Mode::Ternary) == std::vector<int>{260, 520, 1040});
  CHECK(grid.k_tiles(Mode::Binary) == std::vector<int>{182, 364, 728});

  const DseResult r = run_dse(hw, Mode::Ternary, prefill_3b(), grid);
  CHECK(r.points.size() == 288);  // 4 x 3 x 4 x 6

  int feasible = 0, pareto = 0, defaults = 0;
  const DsePoint* def = nullptr;
  for (const DsePoint& p : r.points) {
    if (p.feasible) {
      ++feasible;
      CHECK(p.infeasible_reason.empty());
      CHECK(p.total_cycles > 0);
      CHECK(p.gops > 0.0);
      CHECK(p.score > 0.0);
    } else {
      CHECK(!p.infeasible_reason.empty());
      CHECK(!p.pareto);
    }
    if (p.pareto) ++pareto;
    if (p.is_default_schedule) {
      ++defaults;
      def = &p;
    }
  }
  CHECK(feasible == 156);
  CHECK(pareto == 7);
  REQUIRE(defaults == 1);
  REQUIRE(def != nullptr);
  CHECK(def->schedule == default_schedule(Mode::Ternary));
  CHECK(def->feasible);
  CHECK(def->pareto);

  REQUIRE(r.best_index >= 0);
  REQUIRE(r.best_index < 288);
  const DsePoint& best = r.points[static_cast<std::size_t>(r.best_index)];
  CHECK(best.feasible);
  for (const DsePoint& p : r.points)
    if (p.feasible) CHECK(best.score <= p.score);

  // no feasible point both strictly faster and strictly cheaper than a pareto one
  for (const DsePoint& p : r.points) {
    if (!p.pareto) continue;
    for (const DsePoint& q : r.points) {
      if (!q.feasible) continue;
      CHECK(!(q.total_cycles < p.total_cycles && q.energy_pj < p.energy_pj));
    }
  }

  const std::string csv = dse_to_csv(r);
  CHECK(csv.substr(0, csv.find('\n')) ==
        "m_tile,k_tile,n_tile,order,feasible,total_cycles,gops,energy_mj,traffic_mb,"
        "adder_utilization,pareto,is_default_schedule,score,infeasible_reason");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 289);
  const DseResult r2 = run_dse(hw, Mode::Ternary, prefill_3b(), grid);
  CHECK(dse_to_csv(r2) == csv);

  DseGrid empty = grid;
  empty.n_tiles.clear();
  CHECK_THROWS_AS(run_dse(hw, Mode::Ternary, prefill_3b(), empty), ValidationError);
}

TEST_CASE("hardware config json round-trip") {
  HardwareConfig hw;
  hw.lanes = 26;
  hw.buffers.lut_bytes = 26 * 128 * 8;
  hw.dram_gbps = 32.0;
  hw.energy.query_pj = 0.7;
  const std::string text = hardware_config_to_json(hw);
  const std::string file = temp_path("platinum_hw_roundtrip.json");
  {
    std::ofstream out(file, std::ios::binary);
    out << text;
  }
  const HardwareConfig back = load_hardware_config(file);
  CHECK(back.lanes == 26);
  CHECK(back.columns_per_lane == 8);
  CHECK(back.chunk_ternary == 5);
  CHECK(back.chunk_binary == 7);
  CHECK(back.pipeline_depth == 4);
  CHECK(back.clock_ghz == 0.5);
  CHECK(back.dram_gbps == 32.0);
  CHECK(back.buffers.lut_bytes == 26 * 128 * 8);
  CHECK(back.buffers.weight_bytes == hw.buffers.weight_bytes);
  CHECK(back.energy.query_pj == 0.7);
  CHECK(back.energy.dram_byte_pj == 100.0);
  std::remove(file.c_str());

  // partial json keeps defaults; invalid values still go through validation
  const std::string partial = temp_path("platinum_hw_partial.json");
  {
    std::ofstream out(partial, std::ios::binary);
    out << "{\"dram_gbps\": 16.0}\n";
  }
  const HardwareConfig p = load_hardware_config(partial);
  CHECK(p.dram_gbps == 16.0);
  CHECK(p.lanes == 52);
  std::remove(partial.c_str());

  const std::string bad = temp_path("platinum_hw_bad.json");
  {
    std::ofstream out(bad, std::ios::binary);
    out << "{\"lanes\": 0}\n";
  }
  CHECK_THROWS_AS(load_hardware_config(bad), ValidationError);
  {
    std::ofstream out(bad, std::ios::binary);
    out << "not json at all\n";
  }
  CHECK_THROWS_AS(load_hardware_config(bad), ValidationError);
  std::remove(bad.c_str());
  CHECK_THROWS_AS(load_hardware_config(temp_path("platinum_hw_missing.json")),
                  ValidationError);
}

TEST_CASE("search grid json loader") {
  const std::string file = temp_path("platinum_grid.json");
  {
    std::ofstream out(file, std::ios::binary);
    out << "{\"m_tiles\":[540],\"k_tiles_ternary\":[260],\"k_tiles_binary\":[182],"
           "\"n_tiles\":[8,16],\"orders\":[\"mnk\",\"kmn\"]}\n";
  }
  const DseGrid g = load_dse_grid(file);
  CHECK(g.m_tiles == std::vector<int>{540});
  CHECK(g.k_tiles_ternary == std::vector<int>{260});
  CHECK(g.k_tiles_binary == std::vector<int>{182});
  CHECK(g.n_tiles == std::vector<int>{8, 16});
  REQUIRE(g.orders.size() == 2);
  CHECK(g.orders[0] == Stationarity::MNK);
  CHECK(g.orders[1] == Stationarity::KMN);

  {
    std::ofstream out(file, std::ios::binary);
    out << "{\"m_tiles\":[]}\n";
  }
  CHECK_THROWS_AS(load_dse_grid(file), ValidationError);
  {
    std::ofstream out(file, std::ios::binary);
    out << "{\"orders\":[\"zzz\"]}\n";
  }
  CHECK_THROWS_AS(load_dse_grid(file), ValidationError);
  std::remove(file.c_str());
}

TEST_CASE("model catalog json loader") {
  const std::string file = temp_path("platinum_models.json");
  {
    std::ofstream out(file, std::ios::binary);
    out << "{\"models\":[{\"name\":\"tiny\",\"hidden\":64,\"ffn\":128,"
           "\"kernels\":[{\"name\":\"qkvo\",\"m\":64,\"k\":64,\"count\":4}]}]}\n";
  }
  const auto models = load_model_catalog(file);
  REQUIRE(models.size() == 1);
  CHECK(models[0].name == "tiny");
  CHECK(models[0].kernels[0] == KernelSpec{"qkvo", 64, 64, 4});

  {
    std::ofstream out(file, std::ios::binary);
    out << "{\"models\":[{\"name\":\"bad\",\"hidden\":64,\"ffn\":128,"
           "\"kernels\":[{\"name\":\"x\",\"m\":0,\"k\":64,\"count\":1}]}]}\n";
  }
  CHECK_THROWS_AS(load_model_catalog(file), ValidationError);
  {
    std::ofstream out(file, std::ios::binary);
    out << "{\"models\":[]}\n";
  }
  CHECK_THROWS_AS(load_model_catalog(file), ValidationError);
  {
    std::ofstream out(file, std::ios::binary);
    out << "{}\n";
  }
  CHECK_THROWS_AS(load_model_catalog(file), ValidationError);
  std::remove(file.c_str());
}
