#include "platinum/chunk.hpp"

namespace platinum {

namespace {

int pow_int(int base, int exp) {
  int v = 1;
  for (int i = 0; i < exp; ++i) v *= base;
  return v;
}

}  // namespace

ChunkConfig::ChunkConfig(Mode m, int chunk, int depth)
    : mode(m), c(chunk), pipeline_depth(depth) {
  if (c < 1 || c > kMaxChunk)
    throw ValidationError("chunk size must be in [1," + std::to_string(kMaxChunk) + "]");
  if (pipeline_depth < 1)
    throw ValidationError("pipeline depth must be >= 1");
  if (stored_entries() > kMaxLutEntries)
    throw ValidationError("stored entries " + std::to_string(stored_entries()) +
                          " exceed 7-bit addressing (" + std::to_string(kMaxLutEntries) + ")");
}

int ChunkConfig::total_codes() const { return pow_int(radix(), c); }

int ChunkConfig::stored_entries() const {
  return mode == Mode::Ternary ? (total_codes() + 1) / 2 : total_codes();
}

int ChunkConfig::mirror_midpoint() const { return (total_codes() - 1) / 2; }

int ChunkConfig::value_code(const ChunkVec& w) const {
  int code = 0;
  int scale = 1;
  int bias = mode == Mode::Ternary ? 1 : 0;
  for (int i = 0; i < c; ++i) {
    int digit = w[static_cast<std::size_t>(i)] + bias;
    if (digit < 0 || digit >= radix())
      throw ValidationError("weight outside chunk alphabet");
    code += digit * scale;
    scale *= radix();
  }
  return code;
}

ChunkVec ChunkConfig::decode(int value_code) const {
  if (value_code < 0 || value_code >= total_codes())
    throw ValidationError("value code out of range");
  ChunkVec w{};
  int bias = mode == Mode::Ternary ? 1 : 0;
  for (int i = 0; i < c; ++i) {
    w[static_cast<std::size_t>(i)] =
        static_cast<std::int8_t>(value_code % radix() - bias);
    value_code /= radix();
  }
  return w;
}

bool ChunkConfig::is_canonical(int value_code) const {
  return mode == Mode::Binary || value_code <= mirror_midpoint();
}

int ChunkConfig::mirror(int value_code) const {
  return mode == Mode::Ternary ? total_codes() - 1 - value_code : value_code;
}

std::vector<LutEntryId> enumerate_entries(const ChunkConfig& cfg) {
  std::vector<LutEntryId> out;
  out.reserve(static_cast<std::size_t>(cfg.stored_entries()));
  for (int code = 0; code < cfg.stored_entries(); ++code)
    out.push_back({cfg.decode(code), code});
  return out;
}

}  // namespace platinum
