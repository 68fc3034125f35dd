#include "platinum/tensor_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace platinum {
namespace {

constexpr char kMagic[4] = {'P', 'L', 'T', 'T'};

void put_u32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

uint32_t get_u32(const std::string& buf, size_t at) {
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(static_cast<uint8_t>(buf[at + i])) << (8 * i);
  return v;
}

void write_blob(const std::string& file, const std::string& blob) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot open for writing: " + file);
  out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
  if (!out) throw ValidationError("write failed: " + file);
}

std::string header(int dtype, Eigen::Index rows, Eigen::Index cols) {
  std::string blob(kMagic, 4);
  blob.push_back(static_cast<char>(dtype));
  put_u32(blob, static_cast<uint32_t>(rows));
  put_u32(blob, static_cast<uint32_t>(cols));
  return blob;
}

}  // namespace

void write_tensor_file(const std::string& file, const TernaryMatrix& m) {
  std::string blob = header(1, m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      blob.push_back(static_cast<char>(m(i, j)));
  write_blob(file, blob);
}

void write_tensor_file(const std::string& file, const ActivationMatrix& m) {
  std::string blob = header(4, m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      put_u32(blob, static_cast<uint32_t>(m(i, j)));
  write_blob(file, blob);
}

LoadedTensor read_tensor_file(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ValidationError("cannot open tensor file: " + file);
  std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < 13 || std::memcmp(buf.data(), kMagic, 4) != 0)
    throw ValidationError("not a tensor file: " + file);
  const int dtype = static_cast<uint8_t>(buf[4]);
  if (dtype != 1 && dtype != 4)
    throw ValidationError("unsupported tensor dtype width: " + std::to_string(dtype));
  const uint32_t rows = get_u32(buf, 5);
  const uint32_t cols = get_u32(buf, 9);
  const size_t need = 13 + static_cast<size_t>(rows) * cols * dtype;
  if (buf.size() != need) throw ValidationError("tensor payload size mismatch: " + file);

  LoadedTensor t;
  t.dtype = dtype;
  t.data.resize(rows, cols);
  size_t at = 13;
  for (uint32_t i = 0; i < rows; ++i) {
    for (uint32_t j = 0; j < cols; ++j) {
      if (dtype == 1) {
        t.data(i, j) = static_cast<int8_t>(buf[at]);
        at += 1;
      } else {
        t.data(i, j) = static_cast<int32_t>(get_u32(buf, at));
        at += 4;
      }
    }
  }
  return t;
}

TernaryMatrix require_ternary(const ActivationMatrix& m) {
  TernaryMatrix w(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const int32_t v = m(i, j);
      if (v < -1 || v > 1)
        throw ValidationError("matrix is not ternary at (" + std::to_string(i) + "," +
                              std::to_string(j) + "): " + std::to_string(v));
      w(i, j) = static_cast<int8_t>(v);
    }
  }
  return w;
}

}  // namespace platinum
