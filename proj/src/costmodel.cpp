#include "platinum/costmodel.hpp"

#include <cstdio>
#include <sstream>

namespace platinum {

namespace {

std::int64_t pow_i64(std::int64_t base, int exp) {
  std::int64_t v = 1;
  for (int i = 0; i < exp; ++i) v *= base;
  return v;
}

void validate(const GemmShape& s, int c) {
  if (s.m < 1 || s.k < 1 || s.n < 1) throw ValidationError("cost model: shape must be positive");
  if (c < 1 || c > 24) throw ValidationError("cost model: c out of range");
}

}  // namespace

CostTerms adds_bitserial(const GemmShape& s, int c) {
  validate(s, c);
  const std::int64_t g = chunks(s.k, c), table = pow_i64(2, c);
  CostTerms t;
  t.method = "bitserial";
  t.construct = g * c * table * s.n;
  t.merge = s.m * g * s.n;           // one add folds the two plane results
  t.reduce = s.m * (g - 1) * s.n;
  t.queries = 2 * s.m * g * s.n;     // both planes read the shared table
  t.formula = t.construct + t.merge + t.reduce;
  t.path_budget = g * table * s.n + t.merge + t.reduce;
  return t;
}

CostTerms adds_ternary_naive(const GemmShape& s, int c) {
  validate(s, c);
  const std::int64_t g = chunks(s.k, c), table = pow_i64(3, c);
  CostTerms t;
  t.method = "ternary_naive";
  t.construct = g * c * table * s.n;
  t.reduce = s.m * (g - 1) * s.n;
  t.queries = s.m * g * s.n;
  t.formula = t.construct + t.reduce;
  t.path_budget = g * table * s.n + t.reduce;
  return t;
}

CostTerms adds_platinum(const GemmShape& s, int c) {
  validate(s, c);
  const std::int64_t g = chunks(s.k, c), table = (pow_i64(3, c) + 1) / 2;
  CostTerms t;
  t.method = "platinum";
  t.construct = g * table * s.n;
  t.reduce = s.m * (g - 1) * s.n;
  t.queries = s.m * g * s.n;
  t.formula = t.construct + t.reduce;
  t.path_budget = t.formula;  // construction basis is already the table size
  return t;
}

std::int64_t adds_naive(const GemmShape& s) {
  if (s.m < 1 || s.k < 1 || s.n < 1) throw ValidationError("cost model: shape must be positive");
  return s.m * s.k * s.n;
}

std::vector<SweepRow> sweep_chunk_size(const GemmShape& s, int c_lo, int c_hi) {
  if (c_lo < 1 || c_hi < c_lo) throw ValidationError("sweep: bad c range");
  const double naive = static_cast<double>(adds_naive(s));
  std::vector<SweepRow> rows;
  for (int c = c_lo; c <= c_hi; ++c) {
    rows.push_back({c, "naive", adds_naive(s), 1.0, 0, adds_naive(s)});
    for (auto fn : {adds_bitserial, adds_ternary_naive, adds_platinum}) {
      CostTerms t = fn(s, c);
      std::int64_t lut = t.method == "bitserial"      ? pow_i64(2, c)
                         : t.method == "ternary_naive" ? pow_i64(3, c)
                                                       : (pow_i64(3, c) + 1) / 2;
      rows.push_back({c, t.method, t.formula, naive / static_cast<double>(t.formula), lut,
                      t.path_budget});
    }
  }
  return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "c,method,adds,reduction,lut_size,adds_measured_equiv\n";
  char buf[64];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.6f", r.reduction);
    os << r.c << ',' << r.method << ',' << r.adds << ',' << buf << ',' << r.lut_size << ','
       << r.adds_measured_equiv << '\n';
  }
  return os.str();
}

std::vector<EncodingRow> encoding_sweep(int c_lo, int c_hi) {
  if (c_lo < 1 || c_hi < c_lo) throw ValidationError("encoding sweep: bad c range");
  std::vector<EncodingRow> rows;
  for (int c = c_lo; c <= c_hi; ++c) {
    StorageRate r = bits_per_weight(c);
    rows.push_back({c, r.bits, r.value(), r.bits % 8 == 0});
  }
  return rows;
}

std::string encoding_to_csv(const std::vector<EncodingRow>& rows) {
  std::ostringstream os;
  os << "c,bits,bits_per_weight,byte_aligned\n";
  char buf[64];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.6f", r.bits_per_weight);
    os << r.c << ',' << r.bits << ',' << buf << ',' << (r.byte_aligned ? 1 : 0) << '\n';
  }
  return os.str();
}

}  // namespace platinum
