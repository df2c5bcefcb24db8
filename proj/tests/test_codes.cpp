#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "qcf/codes.hpp"

using namespace qcf;

namespace {

// Independent brute-force oracle: every GF(2) combination of generator rows.
std::set<BitString> enumerate_codewords(const LinearCode& code) {
  REQUIRE(code.k <= 12);
  std::set<BitString> words;
  for (std::uint32_t msg = 0; msg < (1u << code.k); ++msg) {
    BitString w(code.s, 0);
    for (int r = 0; r < code.k; ++r)
      if ((msg >> r) & 1)
        for (int j = 0; j < code.s; ++j) w[j] ^= code.generator[r][j];
    words.insert(std::move(w));
  }
  return words;
}

int weight(const BitString& w) { return static_cast<int>(std::count(w.begin(), w.end(), 1)); }

}  // namespace

TEST_CASE("hamming presets") {
  const LinearCode h7 = build_code_preset("hamming-7-4");
  CHECK(h7.s == 7);
  CHECK(h7.k == 4);
  CHECK(h7.d == 3);
  CHECK(min_distance(h7) == 3);
  const ParityCensus c7 = parity_census(h7);
  CHECK(c7.even == 8);
  CHECK(c7.odd == 8);

  const LinearCode h15 = build_code_preset("hamming-15-11");
  CHECK(min_distance(h15) == 3);
  const ParityCensus c15 = parity_census(h15);
  CHECK(c15.even == 1024);
  CHECK(c15.odd == 1024);

  SUBCASE("large hamming members have d = 3 by structure") {
    for (const char* name : {"hamming-31-26", "hamming-63-57"}) {
      const LinearCode code = build_code_preset(name);
      // no weight-1 or weight-2 word passes the check rows...
      for (int i = 0; i < code.s; ++i) {
        BitString e1(code.s, 0);
        e1[i] = 1;
        CHECK_FALSE(is_codeword(code, e1));
        for (int j = i + 1; j < code.s; ++j) {
          BitString e2 = e1;
          e2[j] = 1;
          CHECK_FALSE(is_codeword(code, e2));
        }
      }
      // ...and positions {1,2,3} form a weight-3 codeword
      BitString w3(code.s, 0);
      w3[0] = w3[1] = w3[2] = 1;
      CHECK(is_codeword(code, w3));
    }
  }

  SUBCASE("repetition") {
    const LinearCode rep = build_code_preset("repetition-5");
    CHECK(rep.s == 5);
    CHECK(rep.k == 1);
    CHECK(rep.d == 5);
    CHECK(min_distance(rep) == 5);
    const ParityCensus cr = parity_census(rep);
    CHECK(cr.even == 1);
    CHECK(cr.odd == 1);
  }

  CHECK_THROWS_AS(build_code_preset("golay-23-12"), std::invalid_argument);
}

TEST_CASE("encode") {
  const LinearCode h7 = build_code_preset("hamming-7-4");
  CHECK(encode(h7, {0, 0, 0, 0}) == BitString(7, 0));
  CHECK(encode(h7, {1, 0, 0, 0}) == h7.generator[0]);
  CHECK_THROWS_AS(encode(h7, {1, 0, 0}), std::invalid_argument);

  SUBCASE("all encodings are distinct") {
    for (const LinearCode& code :
         {build_code_preset("hamming-7-4"), build_code_random(20, 8, 99)}) {
      CHECK(enumerate_codewords(code).size() == (1u << code.k));
    }
  }
}

TEST_CASE("is_codeword agrees with exhaustive enumeration") {
  RandomStream rng(42);
  for (const LinearCode& code :
       {build_code_preset("hamming-7-4"), build_code_random(20, 8, 7)}) {
    const auto words = enumerate_codewords(code);
    for (const auto& w : words) CHECK(is_codeword(code, w));
    int checked = 0;
    for (int t = 0; t < 1000; ++t) {
      BitString w(code.s);
      for (auto& b : w) b = static_cast<std::uint8_t>(rng.coin());
      CHECK(is_codeword(code, w) == (words.count(w) > 0));
      ++checked;
    }
    CHECK(checked == 1000);

    // one flipped bit leaves the code (d >= 2)
    BitString flipped = encode(code, BitString(code.k, 1));
    flipped[3] ^= 1;
    CHECK_FALSE(is_codeword(code, flipped));
  }
}

TEST_CASE("min_distance equals the enumeration oracle") {
  for (const LinearCode& code : {build_code_preset("hamming-7-4"),
                                 build_code_preset("repetition-5"),
                                 build_code_random(18, 7, 5), build_code_random(24, 10, 6)}) {
    int best = code.s + 1;
    for (const auto& w : enumerate_codewords(code))
      if (weight(w) > 0) best = std::min(best, weight(w));
    CHECK(min_distance(code) == best);
    CHECK(code.d == best);

    // random-pair sanity: pairwise distances never undercut d
    RandomStream rng(12);
    const auto wordset = enumerate_codewords(code);
    const std::vector<BitString> words(wordset.begin(), wordset.end());
    for (int t = 0; t < 1000; ++t) {
      const BitString& a = words[rng.uniform_int(static_cast<std::uint32_t>(words.size()))];
      const BitString& b = words[rng.uniform_int(static_cast<std::uint32_t>(words.size()))];
      if (a == b) continue;
      int dist = 0;
      for (int j = 0; j < code.s; ++j) dist += a[j] != b[j];
      CHECK(dist >= code.d);
    }
  }
  CHECK_THROWS_AS(min_distance(build_code_preset("hamming-31-26")), std::invalid_argument);
}

TEST_CASE("parity census closed form matches enumeration") {
  for (const LinearCode& code :
       {build_code_preset("hamming-7-4"), build_code_random(15, 6, 3),
        build_code_random(20, 9, 11)}) {
    std::uint64_t even = 0, odd = 0;
    for (const auto& w : enumerate_codewords(code)) (parity_of(w) ? odd : even)++;
    const ParityCensus census = parity_census(code);
    CHECK(census.even == even);
    CHECK(census.odd == odd);
  }
}

TEST_CASE("random code construction") {
  const LinearCode a = build_code_random(20, 8, 1234);
  const LinearCode b = build_code_random(20, 8, 1234);
  CHECK(a.generator == b.generator);
  CHECK(a.d == b.d);
  CHECK(a.d >= 2);
  const ParityCensus census = parity_census(a);
  CHECK(census.odd >= 2);
  CHECK(census.even >= 2);
  CHECK_THROWS_AS(build_code_random(30, 13, 1), std::invalid_argument);
}

TEST_CASE("code descriptor files") {
  const LinearCode code = build_code_random(20, 8, 77);
  const std::string path = "test_code_roundtrip.txt";
  {
    std::ofstream f(path);
    save_code_file(code, f);
  }
  const LinearCode loaded = load_code_file(path);
  CHECK(loaded.s == code.s);
  CHECK(loaded.k == code.k);
  CHECK(loaded.d == code.d);
  CHECK(loaded.generator == code.generator);

  SUBCASE("a wrong claimed distance is rejected") {
    std::ostringstream buf;
    save_code_file(code, buf);
    std::string text = buf.str();
    const auto header_end = text.find('\n');
    std::ostringstream tampered;
    tampered << code.s << " " << code.k << " " << (code.d + 1) << text.substr(header_end);
    std::ofstream f(path);
    f << tampered.str();
    f.close();
    CHECK_THROWS_AS(load_code_file(path), std::runtime_error);
  }

  SUBCASE("k above the brute-force bound is rejected") {
    std::ofstream f(path);
    f << "63 57 3\n";
    f.close();
    CHECK_THROWS_AS(load_code_file(path), std::runtime_error);
  }
}

TEST_CASE("protocol feasibility predicate") {
  const LinearCode h63 = build_code_preset("hamming-63-57");
  CHECK(feasible(h63, {0.1, 0.1, 0.05}));   // 0.095 < 0.15 < 0.5, 0.1 > 0.05
  CHECK_FALSE(feasible(h63, {0, 0, 0}));    // fa+fc below 2d/s
  CHECK_FALSE(feasible(h63, {0.1, 0.05, 0.05}));  // fb = fc
  CHECK_FALSE(feasible(h63, {0.3, 0.3, 0.2}));    // fa+fc at 0.5
  CHECK_FALSE(feasible(build_code_preset("repetition-5"), {0.2, 0.2, 0.1}));
}

TEST_CASE("sample_codeword avoids the trivial words") {
  RandomStream rng(5);
  const LinearCode h7 = build_code_preset("hamming-7-4");
  for (int t = 0; t < 200; ++t) {
    const BitString q = sample_codeword(h7, rng);
    CHECK(is_codeword(h7, q));
    const int w = weight(q);
    CHECK(w > 0);
    CHECK(w < h7.s);
  }

  SUBCASE("per-column marginals match the enumerated column density") {
    // enumerate the eligible words (neither all-zero nor all-one) once
    std::vector<long> column_sums(h7.s, 0);
    long eligible = 0;
    for (const auto& w : enumerate_codewords(h7)) {
      const int wt = weight(w);
      if (wt == 0 || wt == h7.s) continue;
      ++eligible;
      for (int j = 0; j < h7.s; ++j) column_sums[j] += w[j];
    }
    const int n = 10000;
    std::vector<long> observed(h7.s, 0);
    for (int t = 0; t < n; ++t) {
      const BitString q = sample_codeword(h7, rng);
      for (int j = 0; j < h7.s; ++j) observed[j] += q[j];
    }
    for (int j = 0; j < h7.s; ++j) {
      const double density = static_cast<double>(column_sums[j]) / eligible;
      const double sigma = std::sqrt(n * density * (1.0 - density));
      CHECK(std::abs(observed[j] - n * density) <= 4.0 * std::max(1.0, sigma));
    }
  }
}
