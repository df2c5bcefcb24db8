// The lie-detecting problem: Bob's lie generation at target frequencies and
// Alice's detection algorithms I-IV with their set partitions.
//
// Lie classification on (actual |p',q'>, announced |p'',q''>):
//   honest: equal   a: p''=p', q''=~q'   b: p''=~p', q''=q'   c: both flipped

#pragma once

#include <span>
#include <vector>

#include "qcf/quantum.hpp"
#include "qcf/rng.hpp"

namespace qcf {

enum class LieType { Honest, A, B, C };

const char* to_string(LieType t);

LieType classify_lie(QubitOutcome actual, QubitOutcome announced);

// The unique announcement with classify_lie(actual, result) == type.
QubitOutcome apply_lie(QubitOutcome actual, LieType type);

struct LieFrequencies {
  double fa = 0.0;
  double fb = 0.0;
  double fc = 0.0;

  double fh() const { return 1.0 - fa - fb - fc; }
  bool valid() const {
    return fa >= 0.0 && fb >= 0.0 && fc >= 0.0 && fa + fb + fc <= 1.0 + 1e-12;
  }
};

enum class AssignMode { Exact, Iid };

// Exact mode: exactly floor(f*s) indices of each lie type, remainder honest,
// positions shuffled. Iid mode: each index sampled independently.
// Throws std::invalid_argument on invalid frequencies.
std::vector<LieType> assign_lie_types(int s, const LieFrequencies& freqs, AssignMode mode,
                                      RandomStream& rng);

// Bob's private ground truth, one record per index.
struct LieRecord {
  QubitOutcome actual;
  QubitOutcome announced;
  LieType type = LieType::Honest;
};
using LieLedger = std::vector<LieRecord>;

// Bob measures each beta in a uniformly random conjugate basis and announces
// apply_lie(actual, plan[i]). Shared by the standalone algorithm drivers and
// the protocol's honest Bob.
struct BobAnnouncement {
  std::vector<QubitOutcome> announced;
  LieLedger ledger;
};
BobAnnouncement bob_measure_and_announce(std::span<PairState> pairs,
                                         const std::vector<LieType>& plan, RandomStream& rng);

// Delayed-measurement mode: Bob announces uniformly random results first and
// only then measures, each in a fresh uniformly random basis. Realizes lie
// types a/b/c/honest with probability 1/4 each.
BobAnnouncement bob_announce_delayed(std::span<PairState> pairs, RandomStream& rng);

// ---- Alice's detection rules ----

// Algorithm I. `prepared` holds the |p,q> Alice sent; detected =
// {i : p''=p and q''=~q}.
std::vector<int> algorithm_I_detect(const std::vector<QubitOutcome>& prepared,
                                    const std::vector<QubitOutcome>& announced);

// Algorithm II. Pairs prepared MaxEntangled; Alice measures each alpha in the
// basis that collapses beta to the announced basis p'' and detects q'' != q.
std::vector<int> algorithm_II_detect(std::span<PairState> pairs,
                                     const std::vector<QubitOutcome>& announced,
                                     RandomStream& rng);

// Index partition produced by algorithms III / IV.
struct Partition {
  int s = 0;
  std::vector<int> U;
  std::vector<int> L;
  std::vector<int> N;

  std::vector<int> M() const;  // L and N merged, sorted
  // Throws std::logic_error unless U, L, N are disjoint and cover {0..s-1}.
  void validate() const;
};

// Algorithm III. Pairs prepared AlgIII/Protocol with per-index q[i]; alpha is
// measured in {|x>,|y>} only for i with q''_i != q_i.
Partition algorithm_III_partition(std::span<PairState> pairs, const std::vector<uint8_t>& q,
                                  const std::vector<QubitOutcome>& announced, RandomStream& rng);

// Algorithm IV. Pairs prepared AlgIV; M' = {announced = |0,~q> or |1,q>};
// returned Partition stores U', L', N'.
Partition algorithm_IV_partition(std::span<PairState> pairs, const std::vector<uint8_t>& q,
                                 const std::vector<QubitOutcome>& announced, RandomStream& rng);

// ---- closed-form expectations and tolerance checks ----

struct ExpectedSizes {
  double u = 0.0;
  double l = 0.0;
  double n = 0.0;
  double m = 0.0;
};

// Expected |U|, |L|, |N|, |M| for Algorithm III; u + l + n == s identically.
ExpectedSizes expected_sizes(const LieFrequencies& freqs, int s);

// |M| = (1/4 + (fa+fc)/2) s, the compact form.
double expected_m_compact(const LieFrequencies& freqs, int s);

// Expected detected-lie count of Algorithm I: (fa/2 + fb/4 + fc/4) s.
double expected_algorithm_I(const LieFrequencies& freqs, int s);

// Expected |M'| of Algorithm IV: (1/4 + (fa+fb)/2) s.
double expected_m_algorithm_IV(const LieFrequencies& freqs, int s);

struct ToleranceCheck {
  bool pass = false;
  double observed = 0.0;
  double expected = 0.0;
  double sigma = 0.0;
  double tolerance = 0.0;
};

// Pass iff |observed - expected| <= z * max(1, sqrt(s * p * (1-p))) with
// p = expected/s. Throws std::invalid_argument if expected lies outside [0,s].
ToleranceCheck size_tolerance_check(double observed, double expected, int s, double z);

}  // namespace qcf
