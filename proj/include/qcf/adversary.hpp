// Dishonest-party strategy suite and the bias-estimation harness.
//
// Strategies never get more than their party's capabilities: cheating Bobs
// work from beta measurements and announced sets alone; cheating Alices from
// their own preparations and Bob's announcements. Each shipped adversary
// exercises one of the security arguments (Helstrom guessing, type-b
// flooding, N/U relabeling, unentangled preparation).

#pragma once

#include <map>
#include <memory>
#include <string>

#include "qcf/protocol.hpp"

namespace qcf {

// Per-bit Helstrom discrimination of rho_{q=0} vs rho_{q=1}: the projective
// measurement onto the eigenbasis of rho0 - rho1. Outcome 0 means "guess
// q = 0"; succeeds with probability cos^2(pi/8) per bit.
MeasurementBasis helstrom_basis();

// 1/2 + (2p-1)^m / 2: accuracy of a parity guess over m bits each known
// independently with probability p.
double parity_guess_accuracy(double p, int m);

// ---- strategies ----

class HelstromBob : public BobStrategy {
 public:
  explicit HelstromBob(int desired_c = 0) : desired_c_(desired_c) {}
  std::vector<QubitOutcome> announce(const ProtocolConfig&, BetaPort&, RandomStream&) override;
  std::optional<CheckId> check_L(const ProtocolConfig&, const std::vector<int>&, BetaPort&,
                                 RandomStream&, std::vector<CheckRecord>&) override;
  int choose_f(const ProtocolConfig&, RandomStream&) override;
  std::optional<CheckId> final_checks(const ProtocolConfig&, const Partition&, BetaPort&,
                                      AlphaPort&, RandomStream&,
                                      std::vector<CheckRecord>&) override;
  bool cheat_activated() const override { return true; }

  const std::vector<std::uint8_t>& guesses() const { return guess_; }

 private:
  int desired_c_;
  std::vector<std::uint8_t> guess_;   // q-hat per index
  std::vector<char> flipped_;         // announced q'' = guess xor flipped
  std::vector<QubitOutcome> announced_;
  std::vector<int> L_;
};

class TypeBFloodBob : public HonestBob {
 public:
  explicit TypeBFloodBob(double fb = 0.3, int desired_c = 0)
      : fb_(fb), desired_c_(desired_c) {}
  std::vector<QubitOutcome> announce(const ProtocolConfig&, BetaPort&, RandomStream&) override;
  std::optional<CheckId> check_L(const ProtocolConfig&, const std::vector<int>&, BetaPort&,
                                 RandomStream&, std::vector<CheckRecord>&) override;
  int choose_f(const ProtocolConfig&, RandomStream&) override;
  std::optional<CheckId> final_checks(const ProtocolConfig&, const Partition&, BetaPort&,
                                      AlphaPort&, RandomStream&,
                                      std::vector<CheckRecord>&) override;
  bool cheat_activated() const override { return true; }

  // |L| plus type-b lies outside L: bits of q Bob knows exactly after step 5.
  long known_bits() const { return known_bits_; }

 private:
  double fb_;
  int desired_c_;
  long known_bits_ = 0;
  std::vector<int> L_;
};

// Runs honestly; if the honest outcome would differ from desired_c, relabels
// `flips` indices between N and U before step 8 (caught by B9.1 for any
// flips < d).
class BitflipAlice : public HonestAlice {
 public:
  explicit BitflipAlice(int flips, int desired_c = 0)
      : flips_(flips), desired_c_(desired_c) {}
  std::variant<Partition, CheckId> partition_and_check(const ProtocolConfig&,
                                                       const std::vector<QubitOutcome>&,
                                                       AlphaPort&, RandomStream&,
                                                       std::vector<CheckRecord>&) override;
  Partition announce_sets(const ProtocolConfig&, int f, RandomStream&) override;
  bool cheat_activated() const override { return activated_; }

 private:
  int flips_;
  int desired_c_;
  bool activated_ = false;

 protected:
  std::vector<QubitOutcome> announced_;
};

// Like BitflipAlice but relabels along a low-weight nonzero codeword avoiding
// L, so the deduced string lands on another codeword and B9.1 passes;
// detection falls to B9.3 / B9.4 per relabeled index.
class CodewordSwapAlice : public HonestAlice {
 public:
  explicit CodewordSwapAlice(int desired_c = 0) : desired_c_(desired_c) {}
  std::variant<Partition, CheckId> partition_and_check(const ProtocolConfig&,
                                                       const std::vector<QubitOutcome>&,
                                                       AlphaPort&, RandomStream&,
                                                       std::vector<CheckRecord>&) override;
  Partition announce_sets(const ProtocolConfig&, int f, RandomStream&) override;
  bool cheat_activated() const override { return activated_; }

 private:
  int desired_c_;
  bool activated_ = false;
  std::vector<QubitOutcome> announced_;
};

// Prepares unentangled |p,q> betas (knowing each would-be same-basis outcome)
// and fabricates the partition. informed_L = Algorithm-I certain lies (all
// sizes come out right; B9.4 catches the fake alphas); otherwise L is guessed
// among q'' != q indices (B6-LallLies catches it).
class ProductStateAlice : public AliceStrategy {
 public:
  explicit ProductStateAlice(bool informed_L, int desired_c = 0)
      : informed_L_(informed_L), desired_c_(desired_c) {}
  AlicePreparation prepare(const ProtocolConfig&, RandomStream&) override;
  std::variant<Partition, CheckId> partition_and_check(const ProtocolConfig&,
                                                       const std::vector<QubitOutcome>&,
                                                       AlphaPort&, RandomStream&,
                                                       std::vector<CheckRecord>&) override;
  Partition announce_sets(const ProtocolConfig&, int f, RandomStream&) override;
  bool cheat_activated() const override { return true; }

 private:
  bool informed_L_;
  int desired_c_;
  BitString q_;
  std::vector<std::uint8_t> p_;  // prepared basis per index
  Partition partition_;
  std::vector<QubitOutcome> announced_;
};

// ---- registry ----

// Alice: honest | bitflip-<n> | codeword-swap | product-state |
// product-state-guess. Bob: honest | helstrom-guess | typeb-flood[-<fb>].
// Throws std::invalid_argument for unknown names.
std::unique_ptr<AliceStrategy> make_alice_strategy(const std::string& name);
std::unique_ptr<BobStrategy> make_bob_strategy(const std::string& name);

// ---- campaigns ----

struct CampaignStats {
  long trials = 0;
  long completed = 0;
  long c0 = 0;
  long c1 = 0;
  std::map<std::string, long> abort_histogram;
  long activated = 0;
  long activated_completed = 0;
  std::map<std::string, long> activated_abort_histogram;
  long sized_runs = 0;  // runs that reached a partition
  double sum_u = 0, sum_l = 0, sum_n = 0, sum_m = 0;
  double sum_u2 = 0, sum_l2 = 0, sum_n2 = 0, sum_m2 = 0;

  double abort_rate() const {
    return trials > 0 ? 1.0 - static_cast<double>(completed) / trials : 0.0;
  }
};

CampaignStats run_campaign(const std::string& alice, const std::string& bob,
                           const ProtocolConfig& config, long trials, std::uint64_t seed,
                           int threads = 1);

struct BiasReport {
  long trials = 0;
  double p0 = 0, p1 = 0, p_abort = 0;
  double epsilon_hat = 0;             // over completed runs
  double epsilon_hat_abort_loss = 0;  // aborts counted against the adversary
  double ci_halfwidth = 0;            // 4 sigma on the completed-run estimate
  std::map<std::string, long> abort_histogram;
};

BiasReport bias_from_stats(const CampaignStats& stats);

BiasReport estimate_bias(const std::string& alice, const std::string& bob,
                         const ProtocolConfig& config, long trials, std::uint64_t seed,
                         int threads = 1);

}  // namespace qcf
