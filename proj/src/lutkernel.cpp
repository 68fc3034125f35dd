#include "platinum/lutkernel.hpp"

#include <algorithm>
#include <cmath>

namespace platinum {

namespace {

std::int32_t clamp8(std::int64_t v) {
  return static_cast<std::int32_t>(std::clamp<std::int64_t>(v, -128, 127));
}

/// 32-bit accumulators must cover |x|_max * K without wrapping.
void check_accumulator(const ActivationMatrix& x) {
  std::int64_t amax = 0;
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index n = 0; n < x.cols(); ++n)
      amax = std::max(amax, std::abs(static_cast<std::int64_t>(x(i, n))));
  std::int64_t worst = amax * std::max<std::int64_t>(x.rows(), 1);
  if (worst > std::numeric_limits<std::int32_t>::max())
    throw OverflowError("activation magnitude * K exceeds the 32-bit accumulator");
}

void construct_into(std::vector<std::int32_t>& entries,
                    std::span<const std::int32_t> a, const BuildPath& path,
                    LutEntryMode entry_mode) {
  entries.assign(static_cast<std::size_t>(path.config.stored_entries()), 0);
  if (entry_mode == LutEntryMode::Wide) {
    for (const PathStep& s : path.steps) {
      std::int32_t in = a[s.j];
      entries[s.dst] = entries[s.src] + (s.sign ? -in : in);
    }
  } else {
    for (const PathStep& s : path.steps) {
      std::int64_t in = s.sign ? -static_cast<std::int64_t>(a[s.j]) : a[s.j];
      entries[s.dst] = clamp8(static_cast<std::int64_t>(entries[s.src]) + in);
    }
  }
}

}  // namespace

Lut construct_lut(std::span<const std::int32_t> a, const BuildPath& path,
                  LutEntryMode entry_mode) {
  if (static_cast<int>(a.size()) != path.config.c)
    throw ShapeMismatch("construct_lut: chunk length != c");
  Lut lut;
  lut.config = path.config;
  construct_into(lut.entries, a, path, entry_mode);
  return lut;
}

std::int32_t query(const Lut& lut, std::uint8_t byte) {
  int addr = byte & 0x7f;
  if (addr >= static_cast<int>(lut.entries.size()))
    throw BadAddress("query: address " + std::to_string(addr));
  std::int32_t v = lut.entries[static_cast<std::size_t>(addr)];
  return (byte & 0x80) ? -v : v;
}

GemmResult mpgemm_ternary(const PackedWeightStream& stream, const ActivationMatrix& x,
                          const BuildPath& path, LutEntryMode entry_mode) {
  if (path.config.mode != Mode::Ternary)
    throw ConfigMismatch("mpgemm_ternary: path is not ternary");
  if (stream.mode != Mode::Ternary || stream.c != path.config.c)
    throw ConfigMismatch("mpgemm_ternary: stream/path chunk configs differ");
  if (stream.path_hash != path_hash(path))
    throw ConfigMismatch("mpgemm_ternary: stream coded against a different path");
  if (x.rows() != stream.k)
    throw ShapeMismatch("mpgemm_ternary: x rows != K");
  check_accumulator(x);

  const int c = stream.c;
  const Eigen::Index m = stream.rows, n_cols = x.cols(), groups = stream.chunk_cols();
  const int stored = path.config.stored_entries();

  GemmResult r;
  r.y.resize(m, n_cols);
  std::vector<std::int32_t> chunk(static_cast<std::size_t>(c));
  std::vector<std::int32_t> entries;
  entries.reserve(static_cast<std::size_t>(path.config.stored_entries()));
  const std::int64_t steps = static_cast<std::int64_t>(path.steps.size());

  for (Eigen::Index n = 0; n < n_cols; ++n) {
    for (Eigen::Index g = 0; g < groups; ++g) {
      const Eigen::Index base = g * c;
      for (int t = 0; t < c; ++t)
        chunk[static_cast<std::size_t>(t)] = base + t < stream.k ? x(base + t, n) : 0;
      construct_into(entries, chunk, path, entry_mode);
      r.census.construct_adds += steps;
      const std::uint8_t* col = &stream.bytes[static_cast<std::size_t>(g * m)];
      for (Eigen::Index i = 0; i < m; ++i) {
        std::uint8_t b = col[i];
        int addr = b & 0x7f;
        if (addr >= stored) throw BadAddress("mpgemm_ternary: address " + std::to_string(addr));
        std::int32_t v = entries[static_cast<std::size_t>(addr)];
        if (b & 0x80) v = -v;
        ++r.census.queries;
        if (g == 0) {
          r.y(i, n) = v;
        } else {
          r.y(i, n) += v;
          ++r.census.reduce_adds;
        }
      }
    }
  }
  return r;
}

GemmResult mpgemm_bitserial(const BitPlaneSet& planes, const ActivationMatrix& x,
                            const BuildPath& path_binary, LutEntryMode entry_mode) {
  if (path_binary.config.mode != Mode::Binary)
    throw ConfigMismatch("mpgemm_bitserial: path is not binary");
  if (planes.empty()) throw ValidationError("mpgemm_bitserial: no planes");
  for (const auto& p : planes)
    if (p.plane.rows() != planes[0].plane.rows() || p.plane.cols() != planes[0].plane.cols())
      throw ShapeMismatch("mpgemm_bitserial: plane shapes differ");
  if (x.rows() != planes[0].plane.cols())
    throw ShapeMismatch("mpgemm_bitserial: x rows != K");
  check_accumulator(x);

  std::vector<PackedWeightStream> packed;
  packed.reserve(planes.size());
  for (const auto& p : planes) packed.push_back(pack_binary(p.plane, path_binary));

  const int c = path_binary.config.c;
  const Eigen::Index m = planes[0].plane.rows(), n_cols = x.cols(),
                     groups = packed[0].chunk_cols();
  GemmResult r;
  r.y.resize(m, n_cols);
  std::vector<std::int32_t> chunk(static_cast<std::size_t>(c));
  std::vector<std::int32_t> entries;
  const std::int64_t steps = static_cast<std::int64_t>(path_binary.steps.size());

  for (Eigen::Index n = 0; n < n_cols; ++n) {
    for (Eigen::Index g = 0; g < groups; ++g) {
      const Eigen::Index base = g * c;
      for (int t = 0; t < c; ++t)
        chunk[static_cast<std::size_t>(t)] = base + t < x.rows() ? x(base + t, n) : 0;
      construct_into(entries, chunk, path_binary, entry_mode);  // one LUT, all planes
      r.census.construct_adds += steps;
      for (Eigen::Index i = 0; i < m; ++i) {
        std::int64_t merged = 0;
        for (std::size_t p = 0; p < packed.size(); ++p) {
          std::int32_t v = entries[packed[p].byte_at(i, g)];  // plane sign bit is always 0
          ++r.census.queries;
          merged += planes[p].weight * v;  // shift-add: plane weights are +/-2^b
          if (p > 0) ++r.census.merge_adds;
        }
        std::int32_t narrowed = static_cast<std::int32_t>(merged);
        if (narrowed != merged)
          throw OverflowError("mpgemm_bitserial: merged chunk overflows 32 bits");
        if (g == 0) {
          r.y(i, n) = narrowed;
        } else {
          r.y(i, n) += narrowed;
          ++r.census.reduce_adds;
        }
      }
    }
  }
  return r;
}

namespace {

GemmResult naive_impl(const IntMatrix& w, const ActivationMatrix& x, bool skip_zeros) {
  if (w.cols() != x.rows()) throw ShapeMismatch("naive_gemm: inner dimensions differ");
  DenseRowMajor<std::int64_t> wide =
      w.cast<std::int64_t>() * x.cast<std::int64_t>();
  GemmResult r;
  r.y.resize(w.rows(), x.cols());
  for (Eigen::Index i = 0; i < wide.rows(); ++i)
    for (Eigen::Index n = 0; n < wide.cols(); ++n) {
      if (wide(i, n) != static_cast<std::int32_t>(wide(i, n)))
        throw OverflowError("naive_gemm: result overflows 32-bit accumulator");
      r.y(i, n) = static_cast<std::int32_t>(wide(i, n));
    }
  std::int64_t terms = 0;
  if (skip_zeros) {
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      for (Eigen::Index k = 0; k < w.cols(); ++k)
        if (w(i, k) != 0) ++terms;
  } else {
    terms = static_cast<std::int64_t>(w.rows()) * w.cols();
  }
  r.census.reduce_adds = terms * x.cols();
  return r;
}

}  // namespace

GemmResult naive_gemm(const IntMatrix& w, const ActivationMatrix& x, bool skip_zeros) {
  return naive_impl(w, x, skip_zeros);
}

GemmResult naive_gemm(const TernaryMatrix& w, const ActivationMatrix& x, bool skip_zeros) {
  return naive_impl(w.cast<std::int32_t>(), x, skip_zeros);
}

}  // namespace platinum
