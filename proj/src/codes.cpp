#include "qcf/codes.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qcf {

namespace {

// Packed GF(2) rows for elimination and distance enumeration.
struct PackedRows {
  int width = 0;  // bits per row
  int words = 0;
  std::vector<std::uint64_t> data;  // rows * words

  PackedRows(const std::vector<BitString>& rows, int s)
      : width(s), words((s + 63) / 64), data(rows.size() * words, 0) {
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (int j = 0; j < s; ++j)
        if (rows[r][j]) data[r * words + j / 64] |= 1ull << (j % 64);
  }
  std::uint64_t* row(std::size_t r) { return data.data() + r * words; }
  const std::uint64_t* row(std::size_t r) const { return data.data() + r * words; }
  void xor_into(std::uint64_t* dst, const std::uint64_t* src) const {
    for (int w = 0; w < words; ++w) dst[w] ^= src[w];
  }
  static int weight(const std::uint64_t* row, int words) {
    int c = 0;
    for (int w = 0; w < words; ++w) c += std::popcount(row[w]);
    return c;
  }
  bool get(std::size_t r, int j) const { return (row(r)[j / 64] >> (j % 64)) & 1; }
};

// Row-reduce in place; returns pivot column per reduced row (rank-many).
std::vector<int> rref(PackedRows& m, std::size_t rows) {
  std::vector<int> pivots;
  std::size_t rank = 0;
  for (int col = 0; col < m.width && rank < rows; ++col) {
    std::size_t pivot = rank;
    while (pivot < rows && !m.get(pivot, col)) ++pivot;
    if (pivot == rows) continue;
    if (pivot != rank)
      for (int w = 0; w < m.words; ++w) std::swap(m.row(pivot)[w], m.row(rank)[w]);
    for (std::size_t r = 0; r < rows; ++r)
      if (r != rank && m.get(r, col)) m.xor_into(m.row(r), m.row(rank));
    pivots.push_back(col);
    ++rank;
  }
  return pivots;
}

// Parity-check rows from the reduced generator: one row per non-pivot column
// f, with 1 at f and at each pivot column whose reduced row has 1 at f.
std::vector<BitString> build_check(const std::vector<BitString>& generator, int s, int k) {
  PackedRows m(generator, s);
  const std::vector<int> pivots = rref(m, generator.size());
  if (static_cast<int>(pivots.size()) != k)
    throw std::invalid_argument("generator rows are not linearly independent");
  std::vector<char> is_pivot(s, 0);
  for (int c : pivots) is_pivot[c] = 1;
  std::vector<BitString> check;
  check.reserve(s - k);
  for (int f = 0; f < s; ++f) {
    if (is_pivot[f]) continue;
    BitString h(s, 0);
    h[f] = 1;
    for (int r = 0; r < k; ++r)
      if (m.get(r, f)) h[pivots[r]] = 1;
    check.push_back(std::move(h));
  }
  return check;
}

void finalize(LinearCode& code) {
  if (code.s <= 0 || code.k <= 0 || code.k >= code.s + 1)
    throw std::invalid_argument("bad code dimensions");
  for (const auto& row : code.generator)
    if (static_cast<int>(row.size()) != code.s)
      throw std::invalid_argument("generator row length mismatch");
  if (static_cast<int>(code.generator.size()) != code.k)
    throw std::invalid_argument("generator row count mismatch");
  code.check = build_check(code.generator, code.s, code.k);
}

LinearCode make_hamming(int m) {
  // positions 1..2^m-1; power-of-two positions carry parity bits
  const int s = (1 << m) - 1;
  LinearCode code;
  code.s = s;
  code.k = s - m;
  code.d = 3;
  code.provenance = LinearCode::Provenance::Preset;
  std::ostringstream nm;
  nm << "hamming-" << s << "-" << code.k;
  code.name = nm.str();
  for (int pos = 1; pos <= s; ++pos) {
    if ((pos & (pos - 1)) == 0) continue;  // parity position
    BitString row(s, 0);
    row[pos - 1] = 1;
    for (int t = 0; t < m; ++t)
      if ((pos >> t) & 1) row[(1 << t) - 1] = 1;
    code.generator.push_back(std::move(row));
  }
  finalize(code);
  return code;
}

LinearCode make_repetition(int s) {
  if (s < 1) throw std::invalid_argument("repetition code needs s >= 1");
  LinearCode code;
  code.s = s;
  code.k = 1;
  code.d = s;
  code.provenance = LinearCode::Provenance::Preset;
  code.name = "repetition-" + std::to_string(s);
  code.generator.push_back(BitString(s, 1));
  finalize(code);
  return code;
}

}  // namespace

LinearCode build_code_preset(const std::string& name) {
  if (name == "hamming-7-4") return make_hamming(3);
  if (name == "hamming-15-11") return make_hamming(4);
  if (name == "hamming-31-26") return make_hamming(5);
  if (name == "hamming-63-57") return make_hamming(6);
  if (name.rfind("repetition-", 0) == 0) {
    const int s = std::stoi(name.substr(11));
    return make_repetition(s);
  }
  throw std::invalid_argument("unknown code preset: " + name);
}

LinearCode build_code_random(int s, int k, std::uint64_t seed) {
  if (k < 1 || k > 12 || s <= k)
    throw std::invalid_argument("random codes require 1 <= k <= 12 and s > k");
  RandomStream rng(seed);
  for (int attempt = 0; attempt < 4096; ++attempt) {
    LinearCode code;
    code.s = s;
    code.k = k;
    code.provenance = LinearCode::Provenance::Verified;
    {
      std::ostringstream nm;
      nm << "random-" << s << "-" << k << "-" << seed;
      code.name = nm.str();
    }
    for (int r = 0; r < k; ++r) {
      BitString row(s);
      for (int j = 0; j < s; ++j) row[j] = static_cast<std::uint8_t>(rng.coin());
      code.generator.push_back(std::move(row));
    }
    PackedRows m(code.generator, s);
    if (static_cast<int>(rref(m, code.generator.size()).size()) != k) continue;
    bool has_odd_row = false;
    for (const auto& row : code.generator) has_odd_row |= (parity_of(row) == 1);
    if (!has_odd_row) continue;
    code.check = build_check(code.generator, s, k);
    code.d = min_distance(code);
    if (code.d < 2) continue;
    return code;
  }
  throw std::runtime_error("random code construction did not converge");
}

LinearCode load_code_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open code file: " + path);
  LinearCode code;
  int claimed_d = 0;
  if (!(in >> code.s >> code.k >> claimed_d))
    throw std::runtime_error("code file: malformed header (want: s k d)");
  if (code.k > 24) throw std::runtime_error("code file: k > 24 cannot be distance-verified");
  for (int r = 0; r < code.k; ++r) {
    std::string row_str;
    if (!(in >> row_str) || static_cast<int>(row_str.size()) != code.s)
      throw std::runtime_error("code file: bad generator row");
    BitString row(code.s);
    for (int j = 0; j < code.s; ++j) {
      if (row_str[j] != '0' && row_str[j] != '1')
        throw std::runtime_error("code file: generator rows must be 0/1 strings");
      row[j] = static_cast<std::uint8_t>(row_str[j] - '0');
    }
    code.generator.push_back(std::move(row));
  }
  code.name = "file:" + path;
  code.provenance = LinearCode::Provenance::Verified;
  finalize(code);
  code.d = min_distance(code);
  if (code.d != claimed_d)
    throw std::runtime_error("code file: claimed distance " + std::to_string(claimed_d) +
                             " but brute force gives " + std::to_string(code.d));
  return code;
}

void save_code_file(const LinearCode& code, std::ostream& os) {
  os << code.s << " " << code.k << " " << code.d << "\n";
  for (const auto& row : code.generator) {
    for (auto b : row) os << static_cast<char>('0' + b);
    os << "\n";
  }
}

LinearCode build_code(const std::string& spec) {
  if (spec.rfind("file:", 0) == 0) return load_code_file(spec.substr(5));
  if (spec.rfind("random-", 0) == 0) {
    int s = 0, k = 0;
    unsigned long long seed = 0;
    if (std::sscanf(spec.c_str(), "random-%d-%d-%llu", &s, &k, &seed) == 3)
      return build_code_random(s, k, seed);
    throw std::invalid_argument("random code spec: want random-<s>-<k>-<seed>");
  }
  return build_code_preset(spec);
}

BitString encode(const LinearCode& code, const BitString& message) {
  if (static_cast<int>(message.size()) != code.k)
    throw std::invalid_argument("encode: message length must equal k");
  BitString word(code.s, 0);
  for (int r = 0; r < code.k; ++r) {
    if (!message[r]) continue;
    for (int j = 0; j < code.s; ++j) word[j] ^= code.generator[r][j];
  }
  return word;
}

bool is_codeword(const LinearCode& code, const BitString& word) {
  if (static_cast<int>(word.size()) != code.s)
    throw std::invalid_argument("is_codeword: word length must equal s");
  for (const auto& h : code.check) {
    int syndrome = 0;
    for (int j = 0; j < code.s; ++j) syndrome ^= (h[j] & word[j]);
    if (syndrome) return false;
  }
  return true;
}

int min_distance(const LinearCode& code) {
  if (code.k > 24) throw std::invalid_argument("min_distance: brute force limited to k <= 24");
  PackedRows rows(code.generator, code.s);
  std::vector<std::uint64_t> acc(rows.words, 0);
  int best = code.s + 1;
  // Gray-code walk over all nonzero messages: step i toggles row ctz(i).
  const std::uint32_t total = 1u << code.k;
  for (std::uint32_t i = 1; i < total; ++i) {
    rows.xor_into(acc.data(), rows.row(static_cast<std::size_t>(std::countr_zero(i))));
    best = std::min(best, PackedRows::weight(acc.data(), rows.words));
  }
  return best;
}

ParityCensus parity_census(const LinearCode& code) {
  bool has_odd_row = false;
  for (const auto& row : code.generator) has_odd_row |= (parity_of(row) == 1);
  ParityCensus census;
  if (has_odd_row) {
    census.even = 1ull << (code.k - 1);
    census.odd = 1ull << (code.k - 1);
  } else {
    census.even = 1ull << code.k;
    census.odd = 0;
  }
  return census;
}

bool feasible(const LinearCode& code, const LieFrequencies& freqs) {
  if (!freqs.valid()) return false;
  const double fac = freqs.fa + freqs.fc;
  return 2.0 * code.d / code.s < fac && fac < 0.5 && freqs.fb > freqs.fc;
}

BitString sample_codeword(const LinearCode& code, RandomStream& rng) {
  for (int attempt = 0; attempt < 256; ++attempt) {
    BitString msg(code.k);
    for (int r = 0; r < code.k; ++r) msg[r] = static_cast<std::uint8_t>(rng.coin());
    BitString word = encode(code, msg);
    const int ones = static_cast<int>(std::count(word.begin(), word.end(), 1));
    if (ones == 0 || ones == code.s) continue;
    return word;
  }
  throw std::runtime_error("sample_codeword: no mixed-bit codeword found");
}

}  // namespace qcf
