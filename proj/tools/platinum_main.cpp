#include "platinum/archsim.hpp"
#include "platinum/costmodel.hpp"
#include "platinum/kernels.hpp"
#include "platinum/lutkernel.hpp"
#include "platinum/pathgen.hpp"
#include "platinum/tensor_io.hpp"
#include "platinum/weightcodec.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

namespace {

using namespace platinum;
using nlohmann::ordered_json;

constexpr std::uint64_t kDefaultSeed = 0x506c6174696e756dull;

void write_text(const std::string& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot open for writing: " + file);
  out << text;
  if (!out) throw ValidationError("write failed: " + file);
}

Mode parse_alphabet(const std::string& s) {
  if (s == "ternary") return Mode::Ternary;
  if (s == "binary") return Mode::Binary;
  throw ValidationError("unknown alphabet: " + s);
}

Mode parse_method(const std::string& s) {
  if (s == "platinum") return Mode::Ternary;
  if (s == "bitserial") return Mode::Binary;
  throw ValidationError("unknown method: " + s);
}

ordered_json census_json(const OpCensus& c) {
  return ordered_json{{"construct_adds", c.construct_adds},
                      {"queries", c.queries},
                      {"merge_adds", c.merge_adds},
                      {"reduce_adds", c.reduce_adds},
                      {"total_adds", c.total_adds()}};
}

ordered_json sim_counts_json(const SimCounts& c) {
  return ordered_json{{"construct_adds", c.construct_adds},
                      {"queries", c.queries},
                      {"merge_adds", c.merge_adds},
                      {"reduce_adds", c.reduce_adds},
                      {"total_adds", c.total_adds()}};
}

ordered_json traffic_json(const TrafficBytes& t) {
  return ordered_json{{"weight_read", t.weight_read},
                      {"input_read", t.input_read},
                      {"output_read", t.output_read},
                      {"output_write", t.output_write},
                      {"total", t.total()}};
}

ordered_json schedule_json(const TileSchedule& s) {
  return ordered_json{{"m_tile", s.m_tile},
                      {"k_tile", s.k_tile},
                      {"n_tile", s.n_tile},
                      {"order", stationarity_name(s.order)}};
}

ordered_json workload_json(const HardwareConfig& hw, Mode mode, const WorkloadReport& w,
                           const TileSchedule& sched) {
  ordered_json jk = ordered_json::array();
  for (std::size_t i = 0; i < w.kernels.size(); ++i) {
    const SimReport& r = w.kernels[i];
    jk.push_back(ordered_json{
        {"name", w.names[i]},
        {"count", w.counts[i]},
        {"shape", {{"m", r.shape.m}, {"k", r.shape.k}, {"n", r.shape.n}}},
        {"total_cycles", r.total_cycles},
        {"compute_cycles", r.compute_cycles},
        {"stall_cycles", r.stall_cycles},
        {"fill_cycles", r.fill_cycles},
        {"rounds", r.rounds},
        {"lut_builds", r.lut_builds},
        {"useful", sim_counts_json(r.useful)},
        {"physical_adds", r.physical_adds},
        {"traffic_bytes", traffic_json(r.traffic)},
        {"adder_utilization", r.adder_utilization},
        {"query_port_utilization", r.query_port_utilization},
        {"gops", r.gops(hw)},
        {"energy_pj",
         {{"construct", r.energy.construct_pj},
          {"query", r.energy.query_pj},
          {"merge", r.energy.merge_pj},
          {"reduce", r.energy.reduce_pj},
          {"sram", r.energy.sram_pj},
          {"dram", r.energy.dram_pj},
          {"total", r.energy.total_pj()}}},
    });
  }
  return ordered_json{
      {"method", mode == Mode::Ternary ? "platinum" : "bitserial"},
      {"schedule", schedule_json(sched)},
      {"clock_ghz", hw.clock_ghz},
      {"kernels", jk},
      {"aggregate",
       {{"total_cycles", w.total_cycles},
        {"compute_cycles", w.compute_cycles},
        {"stall_cycles", w.stall_cycles},
        {"fill_cycles", w.fill_cycles},
        {"time_ms", w.seconds(hw) * 1e3},
        {"gops", w.gops(hw)},
        {"adder_utilization", w.adder_utilization},
        {"query_port_utilization", w.query_port_utilization},
        {"useful", sim_counts_json(w.useful)},
        {"physical_adds", w.physical_adds},
        {"traffic_bytes", traffic_json(w.traffic)},
        {"energy_mj", w.energy_pj * 1e-9}}},
  };
}

int run_genpath(const std::string& mode_str, int chunk, int depth, const std::string& out,
                const std::string& json_out) {
  const ChunkConfig cfg(parse_alphabet(mode_str), chunk, depth);
  const BuildPath path = generate_build_path(cfg);
  const VerifyReport rep = verify_path(path);
  if (!rep.ok) throw InternalError("generated path failed verification: " + rep.violation);
  if (!out.empty()) write_path_file(out, path);
  if (!json_out.empty()) write_text(json_out, path_to_json(path));
  std::printf("alphabet=%s c=%d entries=%d steps=%zu pipeline_depth=%d min_raw_distance=%d\n",
              mode_name(cfg.mode), cfg.c, cfg.stored_entries(), path.steps.size(),
              cfg.pipeline_depth, rep.min_raw_distance);
  return 0;
}

int run_pack(const std::string& weights_file, const std::string& path_file,
             const std::string& out) {
  const BuildPath path = read_path_file(path_file);
  if (path.config.mode != Mode::Ternary)
    throw ValidationError("pack needs a ternary path; got a binary one");
  const TernaryMatrix w = require_ternary(read_tensor_file(weights_file).data);
  const PackedWeightStream s = pack_ternary(w, path);
  write_weight_file(out, s);
  std::printf("packed %lld x %lld ternary weights into %lld bytes (%lld chunk columns)\n",
              static_cast<long long>(s.rows), static_cast<long long>(s.k),
              static_cast<long long>(s.bytes.size()), static_cast<long long>(s.chunk_cols()));
  return 0;
}

int run_gemm(const std::string& path_file, const std::string& packed_file,
             const std::string& weights_file, const std::string& input_file,
             const std::string& out, int bits, bool check, bool census, bool saturate) {
  const BuildPath path = read_path_file(path_file);
  const ActivationMatrix x = read_tensor_file(input_file).data;
  const LutEntryMode entry_mode = saturate ? LutEntryMode::Saturate8 : LutEntryMode::Wide;

  GemmResult got;
  GemmResult oracle;
  bool have_oracle = false;

  if (!packed_file.empty()) {
    const PackedWeightStream stream = read_weight_file(packed_file);
    got = mpgemm_ternary(stream, x, path, entry_mode);
    if (check) {
      oracle = naive_gemm(unpack_ternary(stream, path), x);
      have_oracle = true;
    }
  } else if (path.config.mode == Mode::Ternary) {
    const TernaryMatrix w = require_ternary(read_tensor_file(weights_file).data);
    got = mpgemm_ternary(pack_ternary(w, path), x, path, entry_mode);
    if (check) {
      oracle = naive_gemm(w, x);
      have_oracle = true;
    }
  } else {
    const ActivationMatrix raw = read_tensor_file(weights_file).data;
    BitPlaneSet planes;
    if (bits > 0) {
      planes = decompose_bitplanes(raw, bits, true);
    } else {
      planes = decompose_ternary_planes(require_ternary(raw));
    }
    got = mpgemm_bitserial(planes, x, path, entry_mode);
    if (check) {
      oracle = naive_gemm(raw, x);
      have_oracle = true;
    }
  }

  if (!out.empty()) write_tensor_file(out, got.y);
  if (census) std::printf("%s\n", census_json(got.census).dump(2).c_str());

  if (have_oracle) {
    if (got.y.rows() != oracle.y.rows() || got.y.cols() != oracle.y.cols())
      throw InternalError("oracle shape disagrees with engine output");
    for (Eigen::Index i = 0; i < got.y.rows(); ++i) {
      for (Eigen::Index j = 0; j < got.y.cols(); ++j) {
        if (got.y(i, j) != oracle.y(i, j)) {
          std::fprintf(stderr, "check FAILED at (%lld,%lld): engine %d, exact %d\n",
                       static_cast<long long>(i), static_cast<long long>(j), got.y(i, j),
                       oracle.y(i, j));
          return 4;
        }
      }
    }
    std::printf("check ok: %lld x %lld outputs match the exact product\n",
                static_cast<long long>(got.y.rows()), static_cast<long long>(got.y.cols()));
  }
  return 0;
}

TileSchedule schedule_from_flags(Mode mode, int m_tile, int k_tile, int n_tile,
                                 const std::string& order) {
  TileSchedule s = default_schedule(mode);
  if (m_tile > 0) s.m_tile = m_tile;
  if (k_tile > 0) s.k_tile = k_tile;
  if (n_tile > 0) s.n_tile = n_tile;
  if (!order.empty()) s.order = parse_stationarity(order);
  return s;
}

std::vector<WorkloadKernel> workload_from_flags(const std::string& kernels_file,
                                                const std::string& model,
                                                const std::string& phase,
                                                std::int64_t columns) {
  const std::vector<ModelSpec> catalog =
      kernels_file.empty() ? model_catalog() : load_model_catalog(kernels_file);
  const ModelSpec& spec = find_model(catalog, model);
  std::int64_t n = phase == "decode" ? kDecodeColumns : kPrefillColumns;
  if (columns > 0) n = columns;
  return workload_for(spec, n);
}

int run_sim(const std::string& model, const std::string& phase, const std::string& method,
            const std::string& config_file, const std::string& kernels_file,
            std::int64_t columns, int m_tile, int k_tile, int n_tile,
            const std::string& order, const std::string& json_out) {
  const Mode mode = parse_method(method);
  const HardwareConfig hw =
      config_file.empty() ? HardwareConfig{} : load_hardware_config(config_file);
  const TileSchedule sched = schedule_from_flags(mode, m_tile, k_tile, n_tile, order);
  const std::vector<WorkloadKernel> kernels =
      workload_from_flags(kernels_file, model, phase, columns);

  const WorkloadReport w = simulate_workload(hw, mode, kernels, sched);

  std::printf("%-12s %5s %14s %12s %10s %8s %8s\n", "kernel", "count", "cycles", "stalls",
              "gops", "util", "portutil");
  for (std::size_t i = 0; i < w.kernels.size(); ++i) {
    const SimReport& r = w.kernels[i];
    std::printf("%-12s %5d %14lld %12lld %10.1f %7.2f%% %7.2f%%\n", w.names[i].c_str(),
                w.counts[i], static_cast<long long>(r.total_cycles),
                static_cast<long long>(r.stall_cycles), r.gops(hw),
                100.0 * r.adder_utilization, 100.0 * r.query_port_utilization);
  }
  std::printf("%-12s %5s %14lld %12lld %10.1f %7.2f%% %7.2f%%\n", "aggregate", "",
              static_cast<long long>(w.total_cycles), static_cast<long long>(w.stall_cycles),
              w.gops(hw), 100.0 * w.adder_utilization, 100.0 * w.query_port_utilization);
  std::printf("time %.3f ms, energy %.3f mJ, dram traffic %.1f MB\n", w.seconds(hw) * 1e3,
              w.energy_pj * 1e-9, static_cast<double>(w.traffic.total()) / (1024.0 * 1024.0));

  if (!json_out.empty())
    write_text(json_out, workload_json(hw, mode, w, sched).dump(2) + "\n");
  return 0;
}

int run_dse_cmd(const std::string& model, const std::string& phase, const std::string& method,
                const std::string& config_file, const std::string& kernels_file,
                const std::string& grid_file, std::int64_t columns, const std::string& csv_out) {
  const Mode mode = parse_method(method);
  const HardwareConfig hw =
      config_file.empty() ? HardwareConfig{} : load_hardware_config(config_file);
  const DseGrid grid = grid_file.empty() ? DseGrid{} : load_dse_grid(grid_file);
  const std::vector<WorkloadKernel> kernels =
      workload_from_flags(kernels_file, model, phase, columns);

  const DseResult res = run_dse(hw, mode, kernels, grid);

  int feasible = 0, pareto = 0;
  for (const DsePoint& p : res.points) {
    feasible += p.feasible ? 1 : 0;
    pareto += p.pareto ? 1 : 0;
  }
  std::printf("searched %zu schedules: %d feasible, %d on the cycles/energy front\n",
              res.points.size(), feasible, pareto);
  const auto describe = [&](const char* tag, const DsePoint& p) {
    std::printf("%s m=%d k=%d n=%d order=%s cycles=%lld gops=%.1f energy=%.3f mJ "
                "pareto=%d score=%.4f\n",
                tag, p.schedule.m_tile, p.schedule.k_tile, p.schedule.n_tile,
                stationarity_name(p.schedule.order), static_cast<long long>(p.total_cycles),
                p.gops, p.energy_pj * 1e-9, p.pareto ? 1 : 0, p.score);
  };
  if (res.best_index >= 0)
    describe("best:   ", res.points[static_cast<std::size_t>(res.best_index)]);
  for (const DsePoint& p : res.points)
    if (p.is_default_schedule) {
      if (p.feasible)
        describe("default:", p);
      else
        std::printf("default: infeasible (%s)\n", p.infeasible_reason.c_str());
    }
  if (!csv_out.empty()) write_text(csv_out, dse_to_csv(res));
  return 0;
}

int run_cost(std::int64_t m, std::int64_t k, std::int64_t n, int c_lo, int c_hi,
             const std::string& csv_out, const std::string& encoding_out) {
  const GemmShape shape{m, k, n};
  const std::vector<SweepRow> rows = sweep_chunk_size(shape, c_lo, c_hi);
  const std::string csv = sweep_to_csv(rows);
  if (csv_out.empty())
    std::fputs(csv.c_str(), stdout);
  else
    write_text(csv_out, csv);
  if (!encoding_out.empty())
    write_text(encoding_out, encoding_to_csv(encoding_sweep(c_lo, c_hi)));
  return 0;
}

int run_rand(const std::string& kind, std::int64_t rows, std::int64_t cols, int bits,
             std::uint64_t seed, const std::string& out) {
  if (rows < 1 || cols < 1) throw ValidationError("rows and cols must be positive");
  if (kind == "ternary") {
    write_tensor_file(out, random_ternary(rows, cols, seed));
  } else if (kind == "activations") {
    write_tensor_file(out, random_activations(rows, cols, bits, seed));
  } else {
    throw ValidationError("unknown kind: " + kind);
  }
  std::printf("wrote %lld x %lld %s tensor (seed %llu)\n", static_cast<long long>(rows),
              static_cast<long long>(cols), kind.c_str(),
              static_cast<unsigned long long>(seed));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"platinum: table-lookup ternary GEMM toolkit"};
  app.require_subcommand(1);

  // genpath
  std::string gp_mode = "ternary", gp_out, gp_json;
  int gp_chunk = 5, gp_depth = kDefaultPipelineDepth;
  auto* gp = app.add_subcommand("genpath", "compile a table build path");
  gp->add_option("--mode", gp_mode, "alphabet: ternary|binary")
      ->check(CLI::IsMember({"ternary", "binary"}));
  gp->add_option("--chunk", gp_chunk, "weights per chunk");
  gp->add_option("--depth", gp_depth, "adder pipeline depth (RAW spacing)");
  gp->add_option("--out", gp_out, "path file to write");
  gp->add_option("--json", gp_json, "JSON dump to write");

  // pack
  std::string pk_weights, pk_path, pk_out;
  auto* pk = app.add_subcommand("pack", "encode ternary weights against a path");
  pk->add_option("--weights", pk_weights, "ternary tensor file")->required();
  pk->add_option("--path", pk_path, "ternary path file")->required();
  pk->add_option("--out", pk_out, "packed stream to write")->required();

  // gemm
  std::string gm_path, gm_packed, gm_weights, gm_input, gm_out;
  int gm_bits = 0;
  bool gm_check = false, gm_census = false, gm_saturate = false;
  auto* gm = app.add_subcommand("gemm", "run the table-lookup engine");
  gm->add_option("--path", gm_path, "path file")->required();
  auto* gm_opt_packed = gm->add_option("--packed", gm_packed, "packed weight stream");
  gm->add_option("--weights", gm_weights, "raw weight tensor")->excludes(gm_opt_packed);
  gm->add_option("--input", gm_input, "activation tensor")->required();
  gm->add_option("--out", gm_out, "output tensor to write");
  gm->add_option("--bits", gm_bits, "bit-serial width for integer weights (0 = ternary planes)");
  gm->add_flag("--check", gm_check, "compare against the exact product");
  gm->add_flag("--census", gm_census, "print counted work as JSON");
  gm->add_flag("--saturate", gm_saturate, "clamp table entries to 8 bits during build");

  // sim
  std::string sm_model = "b1.58-3B", sm_phase = "prefill", sm_method = "platinum";
  std::string sm_config, sm_kernels, sm_order, sm_json;
  std::int64_t sm_columns = 0;
  int sm_mt = 0, sm_kt = 0, sm_nt = 0;
  auto* sm = app.add_subcommand("sim", "cycle model over a model's kernels");
  sm->add_option("--model", sm_model, "model name from the catalog");
  sm->add_option("--phase", sm_phase, "prefill|decode")
      ->check(CLI::IsMember({"prefill", "decode"}));
  sm->add_option("--method", sm_method, "platinum|bitserial")
      ->check(CLI::IsMember({"platinum", "bitserial"}));
  sm->add_option("--config", sm_config, "hardware config JSON");
  sm->add_option("--kernels", sm_kernels, "kernel catalog JSON");
  sm->add_option("--columns", sm_columns, "override activation column count");
  sm->add_option("--m-tile", sm_mt, "rows per weight tile");
  sm->add_option("--k-tile", sm_kt, "reduction depth per tile");
  sm->add_option("--n-tile", sm_nt, "columns per tile");
  sm->add_option("--order", sm_order, "loop order outer->inner (mnk, mkn, ...)");
  sm->add_option("--json", sm_json, "full report JSON to write");

  // dse
  std::string ds_model = "b1.58-3B", ds_phase = "prefill", ds_method = "platinum";
  std::string ds_config, ds_kernels, ds_grid, ds_csv;
  std::int64_t ds_columns = 0;
  auto* ds = app.add_subcommand("dse", "sweep tile schedules and rank them");
  ds->add_option("--model", ds_model, "model name from the catalog");
  ds->add_option("--phase", ds_phase, "prefill|decode")
      ->check(CLI::IsMember({"prefill", "decode"}));
  ds->add_option("--method", ds_method, "platinum|bitserial")
      ->check(CLI::IsMember({"platinum", "bitserial"}));
  ds->add_option("--config", ds_config, "hardware config JSON");
  ds->add_option("--kernels", ds_kernels, "kernel catalog JSON");
  ds->add_option("--grid", ds_grid, "search grid JSON");
  ds->add_option("--columns", ds_columns, "override activation column count");
  ds->add_option("--csv", ds_csv, "write every searched point as CSV");

  // cost
  std::int64_t co_m = 1080, co_k = 5, co_n = 1;
  int co_lo = 1, co_hi = 8;
  std::string co_csv, co_encoding;
  auto* co = app.add_subcommand("cost", "closed-form addition counts per chunk size");
  co->add_option("--m", co_m, "output rows");
  co->add_option("--k", co_k, "reduction depth");
  co->add_option("--n", co_n, "activation columns");
  co->add_option("--c-lo", co_lo, "smallest chunk size");
  co->add_option("--c-hi", co_hi, "largest chunk size");
  co->add_option("--csv", co_csv, "write the sweep CSV here instead of stdout");
  co->add_option("--encoding", co_encoding, "also write the storage-rate CSV here");

  // rand
  std::string rd_kind = "ternary", rd_out;
  std::int64_t rd_rows = 8, rd_cols = 8;
  int rd_bits = 8;
  std::uint64_t rd_seed = kDefaultSeed;
  auto* rd = app.add_subcommand("rand", "deterministic random test tensors");
  rd->add_option("--kind", rd_kind, "ternary|activations")
      ->check(CLI::IsMember({"ternary", "activations"}));
  rd->add_option("--rows", rd_rows, "rows");
  rd->add_option("--cols", rd_cols, "cols");
  rd->add_option("--bits", rd_bits, "signed activation width");
  rd->add_option("--seed", rd_seed, "generator seed");
  rd->add_option("--out", rd_out, "tensor file to write")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*gp) return run_genpath(gp_mode, gp_chunk, gp_depth, gp_out, gp_json);
    if (*pk) return run_pack(pk_weights, pk_path, pk_out);
    if (*gm) {
      if (gm_packed.empty() && gm_weights.empty())
        throw ValidationError("gemm needs --packed or --weights");
      return run_gemm(gm_path, gm_packed, gm_weights, gm_input, gm_out, gm_bits, gm_check,
                      gm_census, gm_saturate);
    }
    if (*sm)
      return run_sim(sm_model, sm_phase, sm_method, sm_config, sm_kernels, sm_columns, sm_mt,
                     sm_kt, sm_nt, sm_order, sm_json);
    if (*ds)
      return run_dse_cmd(ds_model, ds_phase, ds_method, ds_config, ds_kernels, ds_grid,
                         ds_columns, ds_csv);
    if (*co) return run_cost(co_m, co_k, co_n, co_lo, co_hi, co_csv, co_encoding);
    if (*rd) return run_rand(rd_kind, rd_rows, rd_cols, rd_bits, rd_seed, rd_out);
  } catch (const InfeasibleSchedule& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const ScheduleError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 1;
  }
  return 0;
}
