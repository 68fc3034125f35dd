#include "platinum/kernels.hpp"

#include <json.hpp>

#include <fstream>

namespace platinum {
namespace {

using nlohmann::ordered_json;

ModelSpec make_model(std::string name, int hidden, int ffn) {
  ModelSpec m;
  m.name = std::move(name);
  m.hidden = hidden;
  m.ffn = ffn;
  m.kernels = {
      {"attn_qkvo", hidden, hidden, 4},
      {"ffn_gate_up", ffn, hidden, 2},
      {"ffn_down", hidden, ffn, 1},
  };
  return m;
}

ordered_json read_json(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ValidationError("cannot open json file: " + file);
  ordered_json j;
  try {
    in >> j;
  } catch (const std::exception& ex) {
    throw ValidationError("bad json in " + file + ": " + ex.what());
  }
  return j;
}

}  // namespace

const std::vector<ModelSpec>& model_catalog() {
  static const std::vector<ModelSpec> models = {
      make_model("b1.58-large", 1536, 4096),
      make_model("b1.58-xl", 2048, 5460),
      make_model("b1.58-3B", 3200, 8640),
  };
  return models;
}

std::vector<ModelSpec> load_model_catalog(const std::string& json_file) {
  const ordered_json j = read_json(json_file);
  if (!j.contains("models") || !j["models"].is_array())
    throw ValidationError("kernel catalog needs a 'models' array: " + json_file);
  std::vector<ModelSpec> out;
  for (const auto& jm : j["models"]) {
    ModelSpec m;
    m.name = jm.at("name").get<std::string>();
    m.hidden = jm.at("hidden").get<int>();
    m.ffn = jm.at("ffn").get<int>();
    for (const auto& jk : jm.at("kernels")) {
      KernelSpec k;
      k.name = jk.at("name").get<std::string>();
      k.m = jk.at("m").get<std::int64_t>();
      k.k = jk.at("k").get<std::int64_t>();
      k.count = jk.at("count").get<int>();
      if (k.m < 1 || k.k < 1 || k.count < 1)
        throw ValidationError("bad kernel entry in " + json_file + ": " + k.name);
      m.kernels.push_back(std::move(k));
    }
    out.push_back(std::move(m));
  }
  if (out.empty()) throw ValidationError("kernel catalog is empty: " + json_file);
  return out;
}

const ModelSpec& find_model(const std::vector<ModelSpec>& models, const std::string& name) {
  for (const ModelSpec& m : models)
    if (m.name == name) return m;
  std::string known;
  for (const ModelSpec& m : models) known += " " + m.name;
  throw ValidationError("unknown model '" + name + "'; known:" + known);
}

std::vector<WorkloadKernel> workload_for(const ModelSpec& model, std::int64_t n) {
  if (n < 1) throw ValidationError("activation column count must be positive");
  std::vector<WorkloadKernel> out;
  for (const KernelSpec& k : model.kernels)
    out.push_back({k.name, GemmShape{k.m, k.k, n}, k.count});
  return out;
}

HardwareConfig load_hardware_config(const std::string& json_file) {
  const ordered_json j = read_json(json_file);
  HardwareConfig hw;
  hw.lanes = j.value("lanes", hw.lanes);
  hw.columns_per_lane = j.value("columns_per_lane", hw.columns_per_lane);
  hw.chunk_ternary = j.value("chunk_ternary", hw.chunk_ternary);
  hw.chunk_binary = j.value("chunk_binary", hw.chunk_binary);
  hw.pipeline_depth = j.value("pipeline_depth", hw.pipeline_depth);
  hw.clock_ghz = j.value("clock_ghz", hw.clock_ghz);
  hw.dram_gbps = j.value("dram_gbps", hw.dram_gbps);
  if (j.contains("buffers")) {
    const auto& b = j["buffers"];
    hw.buffers.weight_bytes = b.value("weight_bytes", hw.buffers.weight_bytes);
    hw.buffers.input_bytes = b.value("input_bytes", hw.buffers.input_bytes);
    hw.buffers.output_bytes = b.value("output_bytes", hw.buffers.output_bytes);
    hw.buffers.path_bytes = b.value("path_bytes", hw.buffers.path_bytes);
    hw.buffers.lut_bytes = b.value("lut_bytes", hw.buffers.lut_bytes);
  }
  if (j.contains("energy_pj")) {
    const auto& e = j["energy_pj"];
    hw.energy.construct_add_pj = e.value("construct_add", hw.energy.construct_add_pj);
    hw.energy.query_pj = e.value("query", hw.energy.query_pj);
    hw.energy.merge_add_pj = e.value("merge_add", hw.energy.merge_add_pj);
    hw.energy.reduce_add_pj = e.value("reduce_add", hw.energy.reduce_add_pj);
    hw.energy.sram_byte_pj = e.value("sram_byte", hw.energy.sram_byte_pj);
    hw.energy.dram_byte_pj = e.value("dram_byte", hw.energy.dram_byte_pj);
  }
  hw.validate();
  return hw;
}

std::string hardware_config_to_json(const HardwareConfig& hw) {
  ordered_json j;
  j["lanes"] = hw.lanes;
  j["columns_per_lane"] = hw.columns_per_lane;
  j["chunk_ternary"] = hw.chunk_ternary;
  j["chunk_binary"] = hw.chunk_binary;
  j["pipeline_depth"] = hw.pipeline_depth;
  j["clock_ghz"] = hw.clock_ghz;
  j["dram_gbps"] = hw.dram_gbps;
  j["buffers"] = {{"weight_bytes", hw.buffers.weight_bytes},
                  {"input_bytes", hw.buffers.input_bytes},
                  {"output_bytes", hw.buffers.output_bytes},
                  {"path_bytes", hw.buffers.path_bytes},
                  {"lut_bytes", hw.buffers.lut_bytes}};
  j["energy_pj"] = {{"note", "illustrative coefficients, for relative comparison only"},
                    {"construct_add", hw.energy.construct_add_pj},
                    {"query", hw.energy.query_pj},
                    {"merge_add", hw.energy.merge_add_pj},
                    {"reduce_add", hw.energy.reduce_add_pj},
                    {"sram_byte", hw.energy.sram_byte_pj},
                    {"dram_byte", hw.energy.dram_byte_pj}};
  return j.dump(2) + "\n";
}

DseGrid load_dse_grid(const std::string& json_file) {
  const ordered_json j = read_json(json_file);
  DseGrid g;
  if (j.contains("m_tiles")) g.m_tiles = j["m_tiles"].get<std::vector<int>>();
  if (j.contains("k_tiles_ternary"))
    g.k_tiles_ternary = j["k_tiles_ternary"].get<std::vector<int>>();
  if (j.contains("k_tiles_binary"))
    g.k_tiles_binary = j["k_tiles_binary"].get<std::vector<int>>();
  if (j.contains("n_tiles")) g.n_tiles = j["n_tiles"].get<std::vector<int>>();
  if (j.contains("orders")) {
    g.orders.clear();
    for (const auto& o : j["orders"]) g.orders.push_back(parse_stationarity(o.get<std::string>()));
  }
  if (g.m_tiles.empty() || g.k_tiles_ternary.empty() || g.k_tiles_binary.empty() ||
      g.n_tiles.empty() || g.orders.empty())
    throw ValidationError("search grid has an empty axis: " + json_file);
  return g;
}

}  // namespace platinum
