// Binary linear codes for protocol step (1). Only two requirements matter
// here: both parities represented among the codewords, and minimum distance
// at least d. No decoding machinery.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qcf/liedetect.hpp"

namespace qcf {

using BitString = std::vector<std::uint8_t>;  // entries 0/1

inline int parity_of(const BitString& w) {
  int p = 0;
  for (auto b : w) p ^= b;
  return p;
}

struct LinearCode {
  int s = 0;  // block length
  int k = 0;  // dimension
  int d = 0;  // minimum distance (verified for non-preset codes)
  std::vector<BitString> generator;  // k rows of s bits, linearly independent
  std::string name;
  enum class Provenance { Preset, Verified } provenance = Provenance::Verified;

  // parity-check rows ((s-k) x s), built at construction
  std::vector<BitString> check;
};

// Presets: hamming-7-4, hamming-15-11, hamming-31-26, hamming-63-57,
// repetition-<s>. Throws std::invalid_argument for unknown names.
LinearCode build_code_preset(const std::string& name);

// Random code, k <= 12; distance brute-forced at build; retries until d >= 2
// and both parity classes are populated. Deterministic in seed.
LinearCode build_code_random(int s, int k, std::uint64_t seed);

// Descriptor format: "s k d" header line, then k generator rows as 0/1
// strings. Loading verifies row independence and (k <= 24) brute-forces the
// distance; a mismatch with the header is an error.
LinearCode load_code_file(const std::string& path);
void save_code_file(const LinearCode& code, std::ostream& os);

// "hamming-63-57", "repetition-5", "file:<path>", or "random-s-k-seed".
LinearCode build_code(const std::string& spec);

BitString encode(const LinearCode& code, const BitString& message);

// Syndrome test against the parity-check rows.
bool is_codeword(const LinearCode& code, const BitString& word);

// Minimum Hamming weight over all nonzero codewords; requires k <= 24.
int min_distance(const LinearCode& code);

// (even_count, odd_count) over all 2^k codewords. Closed form: any odd-weight
// generator row splits the classes evenly; otherwise every codeword is even.
struct ParityCensus {
  std::uint64_t even = 0;
  std::uint64_t odd = 0;
};
ParityCensus parity_census(const LinearCode& code);

// Protocol step (3) feasibility: 2d/s < fa+fc < 1/2 and fb > fc.
bool feasible(const LinearCode& code, const LieFrequencies& freqs);

// Uniform codeword, rejecting the all-zero and all-one words.
BitString sample_codeword(const LinearCode& code, RandomStream& rng);

}  // namespace qcf
