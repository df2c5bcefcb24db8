// The ten-step coin-flipping protocol as two party state machines exchanging
// messages through a quantum environment.
//
// The environment owns every pair; a party can only measure its own half
// (alpha handles for set U move to Bob at step 8). Violations are harness
// errors (std::logic_error), not protocol aborts. Alice's strategy never
// sees Bob's ledger or actual bases; Bob's never sees q or touches alpha
// before the transfer.

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qcf/codes.hpp"
#include "qcf/liedetect.hpp"
#include "qcf/quantum.hpp"

namespace qcf {

inline constexpr double kProtocolTheta = 0.78539816339744830962;  // pi/4

enum class CheckId {
  A4Counts,       // 0s and 1s in q'' both non-trivial
  A4Msize,        // |M| > d + s/4 (exact)
  B6Lsize,        // |L| vs its closed-form expectation, z-tolerance
  B6LallLies,     // every i in L is a lie (exact)
  B91Codeword,    // deduced q is a codeword (exact)
  B92Sizes,       // |N|, |U| vs their closed-form expectations, z-tolerance
  B93NoTypeB,     // N holds no type-b lie (exact)
  B94AlphaStates  // per-index alpha verification for U
};

const char* to_string(CheckId id);

enum class Party { Alice, Bob };
const char* to_string(Party p);

enum class BobMode { MeasureFirst, Delayed };
enum class B94Mode { Conditional, Collective };

struct ProtocolConfig {
  LinearCode code;
  double z = 4.0;
  // Minimum 0/1 counts accepted as "non-trivial"; < 0 means the s/8 default.
  double nontrivial_threshold = -1.0;
  LieFrequencies bob_freqs{0.1, 0.1, 0.05};
  BobMode bob_mode = BobMode::MeasureFirst;
  B94Mode b94_mode = B94Mode::Conditional;
  double withhold_fraction = 0.2;  // beta measurements Bob defers (Collective)

  int s() const { return code.s; }
  double threshold() const {
    return nontrivial_threshold < 0.0 ? code.s / 8.0 : nontrivial_threshold;
  }
  // Effective lie-type profile Bob realizes (and checks against).
  LieFrequencies effective_freqs() const;
  // Throws std::invalid_argument with a reason on an infeasible config.
  void validate() const;
};

struct CheckRecord {
  CheckId id;
  bool exact;
  double observed;
  double expected;
  double tolerance;  // 0 for exact checks
  bool pass;
};

struct Outcome {
  enum class Status { Completed, Aborted };
  Status status = Status::Completed;
  int c = 0;                       // Completed only
  CheckId check = CheckId::A4Counts;  // Aborted only
  Party by = Party::Alice;            // Aborted only
  bool completed() const { return status == Status::Completed; }
};

struct Transcript {
  std::vector<std::string> lines;
  std::vector<CheckRecord> checks;

  void message(const std::string& line) { lines.push_back(line); }
  void check(const CheckRecord& record);
  std::string text() const;
};

// ---- quantum environment and per-party ports ----

class PairEnvironment {
 public:
  explicit PairEnvironment(std::vector<PairState> pairs);

  int size() const { return static_cast<int>(pairs_.size()); }
  void transfer_alpha(int i);  // Alice -> Bob; runner only
  bool alpha_owned_by(int i, Party p) const { return alpha_owner_.at(i) == p; }

  bool beta_measured(int i) const { return pairs_.at(i).beta_measured(); }
  bool alpha_measured(int i) const { return pairs_.at(i).alpha_measured(); }

  QubitOutcome measure_beta(Party caller, int i, int basis_p, RandomStream& rng);
  int measure_beta_general(Party caller, int i, const MeasurementBasis& basis, RandomStream& rng);
  int measure_alpha(Party caller, int i, const MeasurementBasis& basis, RandomStream& rng);
  // Collective projection onto `target`; requires the caller to hold both
  // halves unmeasured. Returns the Bernoulli draw against the overlap.
  bool project(Party caller, int i, const PairState& target, RandomStream& rng);

 private:
  std::vector<PairState> pairs_;
  std::vector<Party> alpha_owner_;
  // An owner gets one alpha measurement; a transferred half may be measured
  // again by its new owner even if the sender already collapsed it.
  std::vector<char> alpha_used_;
};

// Thin capability handles passed to strategies.
class BetaPort {
 public:
  BetaPort(PairEnvironment& env, Party party) : env_(env), party_(party) {}
  int size() const { return env_.size(); }
  bool measured(int i) const { return env_.beta_measured(i); }
  QubitOutcome measure(int i, int basis_p, RandomStream& rng) {
    return env_.measure_beta(party_, i, basis_p, rng);
  }
  int measure_general(int i, const MeasurementBasis& basis, RandomStream& rng) {
    return env_.measure_beta_general(party_, i, basis, rng);
  }
  bool project(int i, const PairState& target, RandomStream& rng) {
    return env_.project(party_, i, target, rng);
  }

 private:
  PairEnvironment& env_;
  Party party_;
};

class AlphaPort {
 public:
  AlphaPort(PairEnvironment& env, Party party) : env_(env), party_(party) {}
  bool measured(int i) const { return env_.alpha_measured(i); }
  int measure(int i, const MeasurementBasis& basis, RandomStream& rng) {
    return env_.measure_alpha(party_, i, basis, rng);
  }

 private:
  PairEnvironment& env_;
  Party party_;
};

// ---- per-step check procedures (used by the honest strategies) ----

// Step 4: non-trivial count check, Algorithm III partition, |M| > d + s/4.
std::variant<Partition, CheckId> alice_check_and_partition(
    const BitString& q, const std::vector<QubitOutcome>& announced, const ProtocolConfig& config,
    AlphaPort& alpha, RandomStream& rng, std::vector<CheckRecord>& records);

// Step 6: |L| against its expectation with z-tolerance, then every member a
// lie.
std::optional<CheckId> bob_check_L(const std::vector<int>& L, const LieLedger& ledger,
                                   const LieFrequencies& freqs, const ProtocolConfig& config,
                                   std::vector<CheckRecord>& records);

// Step 9 preamble: q_i = q''_i on U, flipped on L and N.
BitString deduce_q(const std::vector<QubitOutcome>& announced, const Partition& partition);

// Steps 9.1-9.4. `actual` holds Bob's measurement results where he has them
// (nullopt for withheld betas; those use the collective projection when
// enabled, and are measured on the spot otherwise).
std::optional<CheckId> bob_final_checks(const Partition& partition,
                                        const std::vector<QubitOutcome>& announced,
                                        std::vector<std::optional<QubitOutcome>>& actual,
                                        const std::vector<LieType>& types,
                                        const LieFrequencies& freqs, const ProtocolConfig& config,
                                        BetaPort& beta, AlphaPort& alpha, RandomStream& rng,
                                        std::vector<CheckRecord>& records);

// Step 10 value from shared data: parity of deduced q over N, xor f.
int compute_c(const std::vector<QubitOutcome>& announced, const Partition& partition, int f);

// ---- strategy interfaces ----

struct AlicePreparation {
  BitString q;
  std::vector<PairState> pairs;
};

class AliceStrategy {
 public:
  virtual ~AliceStrategy() = default;
  virtual AlicePreparation prepare(const ProtocolConfig&, RandomStream&) = 0;
  virtual std::variant<Partition, CheckId> partition_and_check(
      const ProtocolConfig&, const std::vector<QubitOutcome>& announced, AlphaPort&,
      RandomStream&, std::vector<CheckRecord>&) = 0;
  // Step 8; L must be exactly the set announced at step 5.
  virtual Partition announce_sets(const ProtocolConfig&, int f, RandomStream&) = 0;
  virtual bool cheat_activated() const { return false; }
};

class BobStrategy {
 public:
  virtual ~BobStrategy() = default;
  virtual std::vector<QubitOutcome> announce(const ProtocolConfig&, BetaPort&, RandomStream&) = 0;
  virtual std::optional<CheckId> check_L(const ProtocolConfig&, const std::vector<int>& L,
                                         BetaPort&, RandomStream&, std::vector<CheckRecord>&) = 0;
  virtual int choose_f(const ProtocolConfig&, RandomStream&) = 0;
  virtual std::optional<CheckId> final_checks(const ProtocolConfig&, const Partition&, BetaPort&,
                                              AlphaPort&, RandomStream&,
                                              std::vector<CheckRecord>&) = 0;
  virtual bool cheat_activated() const { return false; }
};

class HonestAlice : public AliceStrategy {
 public:
  AlicePreparation prepare(const ProtocolConfig&, RandomStream&) override;
  std::variant<Partition, CheckId> partition_and_check(const ProtocolConfig&,
                                                       const std::vector<QubitOutcome>&,
                                                       AlphaPort&, RandomStream&,
                                                       std::vector<CheckRecord>&) override;
  Partition announce_sets(const ProtocolConfig&, int f, RandomStream&) override;

  const BitString& q() const { return q_; }
  const Partition& partition() const { return partition_; }

 protected:
  BitString q_;
  Partition partition_;
};

class HonestBob : public BobStrategy {
 public:
  std::vector<QubitOutcome> announce(const ProtocolConfig&, BetaPort&, RandomStream&) override;
  std::optional<CheckId> check_L(const ProtocolConfig&, const std::vector<int>&, BetaPort&,
                                 RandomStream&, std::vector<CheckRecord>&) override;
  int choose_f(const ProtocolConfig&, RandomStream&) override;
  std::optional<CheckId> final_checks(const ProtocolConfig&, const Partition&, BetaPort&,
                                      AlphaPort&, RandomStream&,
                                      std::vector<CheckRecord>&) override;

  const LieLedger ledger() const;  // complete records for measured indices

 protected:
  // Measures beta i now if still withheld, updating actual_/types_.
  void ensure_measured(int i, BetaPort& beta, RandomStream& rng);

  std::vector<QubitOutcome> announced_;
  std::vector<std::optional<QubitOutcome>> actual_;
  std::vector<LieType> types_;  // meaningful where actual_ is set
  LieFrequencies eff_freqs_;
};

// ---- runner ----

struct RunResult {
  Outcome outcome;
  Transcript transcript;
  int size_u = -1, size_l = -1, size_n = -1;  // -1 until the partition exists
  int alice_c = -1, bob_c = -1;
  bool cheat_activated = false;
};

RunResult run_protocol(AliceStrategy& alice, BobStrategy& bob, const ProtocolConfig& config,
                       std::uint64_t seed);

}  // namespace qcf
