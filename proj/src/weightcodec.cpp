#include "platinum/weightcodec.hpp"

#include <fstream>

namespace platinum {

namespace {

void check_mode(const BuildPath& path, Mode want, const char* who) {
  if (path.config.mode != want)
    throw ConfigMismatch(std::string(who) + ": path mode is " +
                         mode_name(path.config.mode));
}

/// Encodes one chunk-column-major stream against the path's address map.
template <typename Matrix, typename EncodeChunk>
PackedWeightStream pack_stream(const Matrix& w, const BuildPath& path,
                               EncodeChunk&& encode) {
  PackedWeightStream s;
  s.mode = path.config.mode;
  s.c = path.config.c;
  s.rows = w.rows();
  s.k = w.cols();
  s.path_hash = path_hash(path);
  const Eigen::Index groups = s.chunk_cols();
  s.bytes.resize(static_cast<std::size_t>(s.rows * groups));
  ChunkVec chunk{};
  for (Eigen::Index g = 0; g < groups; ++g) {
    for (Eigen::Index i = 0; i < s.rows; ++i) {
      chunk.fill(0);
      Eigen::Index base = g * s.c;
      Eigen::Index take = std::min<Eigen::Index>(s.c, s.k - base);
      for (Eigen::Index t = 0; t < take; ++t)
        chunk[static_cast<std::size_t>(t)] = static_cast<std::int8_t>(w(i, base + t));
      s.bytes[static_cast<std::size_t>(g * s.rows + i)] = encode(chunk);
    }
  }
  return s;
}

}  // namespace

PackedWeightStream pack_ternary(const TernaryMatrix& w, const BuildPath& path) {
  check_mode(path, Mode::Ternary, "pack_ternary");
  const auto& cfg = path.config;
  const int mid = cfg.mirror_midpoint();
  return pack_stream(w, path, [&](const ChunkVec& chunk) {
    int v = cfg.value_code(chunk);
    int sign = v > mid ? 1 : 0;
    int canonical = sign ? cfg.mirror(v) : v;
    return static_cast<std::uint8_t>((sign << 7) | path.canonical_map.address(canonical));
  });
}

PackedWeightStream pack_binary(const BinaryMatrix& plane, const BuildPath& path) {
  check_mode(path, Mode::Binary, "pack_binary");
  const auto& cfg = path.config;
  return pack_stream(plane, path, [&](const ChunkVec& chunk) {
    for (int t = 0; t < cfg.c; ++t)
      if (chunk[static_cast<std::size_t>(t)] != 0 && chunk[static_cast<std::size_t>(t)] != 1)
        throw ValidationError("pack_binary: plane value outside {0,1}");
    return static_cast<std::uint8_t>(path.canonical_map.address(cfg.value_code(chunk)));
  });
}

TernaryMatrix unpack_ternary(const PackedWeightStream& stream, const BuildPath& path) {
  check_mode(path, Mode::Ternary, "unpack_ternary");
  const auto& cfg = path.config;
  if (stream.mode != cfg.mode || stream.c != cfg.c)
    throw ConfigMismatch("unpack_ternary: stream coded for a different chunk config");
  if (stream.path_hash != path_hash(path))
    throw ConfigMismatch("unpack_ternary: stream coded against a different path");
  const Eigen::Index groups = stream.chunk_cols();
  if (stream.bytes.size() != static_cast<std::size_t>(stream.rows * groups))
    throw ValidationError("unpack_ternary: byte count does not match shape");

  // address -> canonical code
  std::vector<int> code_of_addr(static_cast<std::size_t>(cfg.stored_entries()), -1);
  for (int code = 0; code < cfg.stored_entries(); ++code)
    code_of_addr[static_cast<std::size_t>(path.canonical_map.address(code))] = code;

  TernaryMatrix w(stream.rows, stream.k);
  for (Eigen::Index g = 0; g < groups; ++g) {
    for (Eigen::Index i = 0; i < stream.rows; ++i) {
      std::uint8_t b = stream.byte_at(i, g);
      int addr = b & 0x7f;
      int sign = b >> 7;
      if (addr >= cfg.stored_entries())
        throw BadAddress("unpack_ternary: address " + std::to_string(addr));
      ChunkVec chunk = cfg.decode(code_of_addr[static_cast<std::size_t>(addr)]);
      Eigen::Index base = g * cfg.c;
      for (int t = 0; t < cfg.c; ++t) {
        std::int8_t val = sign ? static_cast<std::int8_t>(-chunk[static_cast<std::size_t>(t)])
                               : chunk[static_cast<std::size_t>(t)];
        if (base + t < stream.k) {
          w(i, base + t) = val;
        } else if (val != 0) {
          throw ValidationError("unpack_ternary: nonzero weight in K padding");
        }
      }
    }
  }
  return w;
}

StorageRate bits_per_weight(int c) {
  if (c < 1 || c > 40) throw ValidationError("bits_per_weight: c out of range");
  // smallest b with 2^b >= 3^c
  unsigned long long pow3 = 1;
  for (int i = 0; i < c; ++i) pow3 *= 3ull;
  int b = 0;
  unsigned long long pow2 = 1;
  while (pow2 < pow3) {
    pow2 <<= 1;
    ++b;
  }
  return {b, c};
}

BitPlaneSet decompose_bitplanes(const IntMatrix& w, int bits, bool signed_mode) {
  if (bits < 1 || bits > 32) throw ValidationError("decompose_bitplanes: bits out of range");
  std::int64_t lo = signed_mode ? -(1ll << (bits - 1)) : 0;
  std::int64_t hi = signed_mode ? (1ll << (bits - 1)) - 1 : (1ll << bits) - 1;
  if (signed_mode && bits == 1) { lo = -1; hi = 0; }
  for (Eigen::Index i = 0; i < w.rows(); ++i)
    for (Eigen::Index k = 0; k < w.cols(); ++k)
      if (w(i, k) < lo || w(i, k) > hi)
        throw OverflowError("decompose_bitplanes: weight does not fit " +
                            std::to_string(bits) + " bits");
  BitPlaneSet planes;
  planes.reserve(static_cast<std::size_t>(bits));
  for (int b = 0; b < bits; ++b) {
    BitPlane p;
    p.weight = 1ll << b;
    if (signed_mode && b == bits - 1) p.weight = -p.weight;  // two's-complement top plane
    p.plane.resize(w.rows(), w.cols());
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      for (Eigen::Index k = 0; k < w.cols(); ++k) {
        std::uint32_t enc = static_cast<std::uint32_t>(w(i, k)) & ((bits == 32 ? ~0u : (1u << bits) - 1u));
        p.plane(i, k) = static_cast<std::int8_t>((enc >> b) & 1u);
      }
    planes.push_back(std::move(p));
  }
  return planes;
}

BitPlaneSet decompose_ternary_planes(const TernaryMatrix& w) {
  BitPlane pos{BinaryMatrix(w.rows(), w.cols()), +1};
  BitPlane neg{BinaryMatrix(w.rows(), w.cols()), -1};
  for (Eigen::Index i = 0; i < w.rows(); ++i)
    for (Eigen::Index k = 0; k < w.cols(); ++k) {
      if (w(i, k) < -1 || w(i, k) > 1)
        throw ValidationError("decompose_ternary_planes: value outside {-1,0,1}");
      pos.plane(i, k) = w(i, k) == 1;
      neg.plane(i, k) = w(i, k) == -1;
    }
  BitPlaneSet planes;
  planes.push_back(std::move(pos));
  planes.push_back(std::move(neg));
  return planes;
}

IntMatrix compose_bitplanes(const BitPlaneSet& planes) {
  if (planes.empty()) throw ValidationError("compose_bitplanes: empty set");
  IntMatrix w = IntMatrix::Zero(planes[0].plane.rows(), planes[0].plane.cols());
  for (const auto& p : planes) {
    if (p.plane.rows() != w.rows() || p.plane.cols() != w.cols())
      throw ShapeMismatch("compose_bitplanes: plane shapes differ");
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      for (Eigen::Index k = 0; k < w.cols(); ++k)
        w(i, k) += static_cast<std::int32_t>(p.weight * p.plane(i, k));
  }
  return w;
}

// -- serialization -------------------------------------------------------------

namespace {

constexpr char kWeightMagic[4] = {'P', 'L', 'T', 'W'};
constexpr std::uint8_t kWeightVersion = 1;

void put_u32(std::vector<std::uint8_t>& v, std::uint32_t x) {
  for (int i = 0; i < 4; ++i) v.push_back(static_cast<std::uint8_t>(x >> (8 * i)));
}
void put_u64(std::vector<std::uint8_t>& v, std::uint64_t x) {
  for (int i = 0; i < 8; ++i) v.push_back(static_cast<std::uint8_t>(x >> (8 * i)));
}
std::uint32_t get_u32(const std::uint8_t* p) {
  std::uint32_t x = 0;
  for (int i = 0; i < 4; ++i) x |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return x;
}
std::uint64_t get_u64(const std::uint8_t* p) {
  std::uint64_t x = 0;
  for (int i = 0; i < 8; ++i) x |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return x;
}

}  // namespace

std::vector<std::uint8_t> serialize_weights(const PackedWeightStream& s) {
  std::vector<std::uint8_t> out;
  out.reserve(23 + s.bytes.size());
  out.insert(out.end(), kWeightMagic, kWeightMagic + 4);
  out.push_back(kWeightVersion);
  out.push_back(static_cast<std::uint8_t>(s.mode));
  out.push_back(static_cast<std::uint8_t>(s.c));
  put_u32(out, static_cast<std::uint32_t>(s.rows));
  put_u32(out, static_cast<std::uint32_t>(s.k));
  put_u64(out, s.path_hash);
  out.insert(out.end(), s.bytes.begin(), s.bytes.end());
  return out;
}

PackedWeightStream deserialize_weights(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 23 || !std::equal(kWeightMagic, kWeightMagic + 4, bytes.begin()))
    throw ValidationError("not a PLTW weight file");
  if (bytes[4] != kWeightVersion) throw ValidationError("unsupported PLTW version");
  PackedWeightStream s;
  s.mode = static_cast<Mode>(bytes[5]);
  s.c = bytes[6];
  s.rows = get_u32(&bytes[7]);
  s.k = get_u32(&bytes[11]);
  s.path_hash = get_u64(&bytes[15]);
  s.bytes.assign(bytes.begin() + 23, bytes.end());
  if (s.c < 1 || s.c > kMaxChunk) throw ValidationError("PLTW chunk size out of range");
  if (s.bytes.size() != static_cast<std::size_t>(s.rows * s.chunk_cols()))
    throw ValidationError("PLTW payload length does not match shape");
  return s;
}

void write_weight_file(const std::string& file, const PackedWeightStream& s) {
  auto bytes = serialize_weights(s);
  std::ofstream out(file, std::ios::binary);
  if (!out) throw ValidationError("cannot open for writing: " + file);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

PackedWeightStream read_weight_file(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ValidationError("cannot open: " + file);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return deserialize_weights(bytes);
}

}  // namespace platinum
