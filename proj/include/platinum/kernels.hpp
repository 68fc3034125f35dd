#pragma once

#include "platinum/archsim.hpp"

#include <string>
#include <vector>

namespace platinum {

/// One weight matrix shape (m x k) appearing `count` times per decoder block.
struct KernelSpec {
  std::string name;
  std::int64_t m = 0;
  std::int64_t k = 0;
  int count = 1;
  bool operator==(const KernelSpec&) const = default;
};

/// Ternary transformer sizes used by the simulator workloads.
struct ModelSpec {
  std::string name;
  int hidden = 0;
  int ffn = 0;
  std::vector<KernelSpec> kernels;
  bool operator==(const ModelSpec&) const = default;
};

/// Built-in catalog; data/kernels.json carries the same content for editing.
const std::vector<ModelSpec>& model_catalog();

std::vector<ModelSpec> load_model_catalog(const std::string& json_file);

const ModelSpec& find_model(const std::vector<ModelSpec>& models, const std::string& name);

constexpr std::int64_t kPrefillColumns = 1024;
constexpr std::int64_t kDecodeColumns = 8;

/// Expands a model into simulator kernels with `n` activation columns.
std::vector<WorkloadKernel> workload_for(const ModelSpec& model, std::int64_t n);

// -- JSON config ---------------------------------------------------------------

HardwareConfig load_hardware_config(const std::string& json_file);
std::string hardware_config_to_json(const HardwareConfig& hw);

DseGrid load_dse_grid(const std::string& json_file);

}  // namespace platinum
