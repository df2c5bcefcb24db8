#include "qcf/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace qcf {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h = 0xcbf29ce484222325ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string digest_outcomes(const std::vector<QubitOutcome>& xs) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const auto& o : xs) {
    const unsigned char b = static_cast<unsigned char>(o.p << 1 | o.q);
    h = fnv1a(&b, 1, h);
  }
  return hex64(h);
}

std::string digest_indices(const std::vector<int>& xs) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (int i : xs) h = fnv1a(&i, sizeof(i), h);
  return hex64(h);
}

}  // namespace

const char* to_string(CheckId id) {
  switch (id) {
    case CheckId::A4Counts: return "A4-counts";
    case CheckId::A4Msize: return "A4-Msize";
    case CheckId::B6Lsize: return "B6-Lsize";
    case CheckId::B6LallLies: return "B6-LallLies";
    case CheckId::B91Codeword: return "B9.1-codeword";
    case CheckId::B92Sizes: return "B9.2-sizes";
    case CheckId::B93NoTypeB: return "B9.3-noTypeB";
    case CheckId::B94AlphaStates: return "B9.4-alphaStates";
  }
  return "?";
}

const char* to_string(Party p) { return p == Party::Alice ? "alice" : "bob"; }

LieFrequencies ProtocolConfig::effective_freqs() const {
  if (bob_mode == BobMode::Delayed) return LieFrequencies{0.25, 0.25, 0.25};
  if (b94_mode == B94Mode::Collective) {
    const int nw = static_cast<int>(std::floor(withhold_fraction * s()));
    const double w = static_cast<double>(nw) / s();
    return LieFrequencies{(1.0 - w) * bob_freqs.fa + 0.25 * w,
                          (1.0 - w) * bob_freqs.fb + 0.25 * w,
                          (1.0 - w) * bob_freqs.fc + 0.25 * w};
  }
  return bob_freqs;
}

void ProtocolConfig::validate() const {
  if (code.s <= 0 || code.generator.empty())
    throw std::invalid_argument("config: code is empty");
  if (z <= 0.0) throw std::invalid_argument("config: z must be positive");
  if (withhold_fraction < 0.0 || withhold_fraction >= 1.0)
    throw std::invalid_argument("config: withhold fraction must lie in [0, 1)");
  if (bob_mode == BobMode::MeasureFirst) {
    if (!bob_freqs.valid()) throw std::invalid_argument("config: invalid lie frequencies");
    if (!feasible(code, bob_freqs)) {
      std::ostringstream msg;
      msg << "config: infeasible (code, frequencies): need 2d/s = "
          << fmt(2.0 * code.d / code.s) << " < fa+fc = " << fmt(bob_freqs.fa + bob_freqs.fc)
          << " < 0.5 and fb = " << fmt(bob_freqs.fb) << " > fc = " << fmt(bob_freqs.fc);
      throw std::invalid_argument(msg.str());
    }
  } else {
    // Delayed mode realizes frequencies (1/4,1/4,1/4); only the structural
    // requirement s > 4d can be demanded.
    if (code.s <= 4 * code.d)
      throw std::invalid_argument("config: delayed mode requires s > 4d");
  }
}

void Transcript::check(const CheckRecord& r) {
  checks.push_back(r);
  std::ostringstream line;
  line << "check id=" << to_string(r.id) << " exact=" << (r.exact ? 1 : 0)
       << " observed=" << fmt(r.observed) << " expected=" << fmt(r.expected)
       << " tolerance=" << fmt(r.tolerance) << " verdict=" << (r.pass ? "pass" : "fail");
  lines.push_back(line.str());
}

std::string Transcript::text() const {
  std::string out;
  for (const auto& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

PairEnvironment::PairEnvironment(std::vector<PairState> pairs)
    : pairs_(std::move(pairs)),
      alpha_owner_(pairs_.size(), Party::Alice),
      alpha_used_(pairs_.size(), 0) {}

void PairEnvironment::transfer_alpha(int i) {
  alpha_owner_.at(i) = Party::Bob;
  alpha_used_.at(i) = 0;
}

QubitOutcome PairEnvironment::measure_beta(Party caller, int i, int basis_p, RandomStream& rng) {
  if (caller != Party::Bob)
    throw std::logic_error("capability violation: beta halves belong to Bob");
  return pairs_.at(i).measure_beta(basis_p, rng);
}

int PairEnvironment::measure_beta_general(Party caller, int i, const MeasurementBasis& basis,
                                          RandomStream& rng) {
  if (caller != Party::Bob)
    throw std::logic_error("capability violation: beta halves belong to Bob");
  return pairs_.at(i).measure_beta_general(basis, rng);
}

int PairEnvironment::measure_alpha(Party caller, int i, const MeasurementBasis& basis,
                                   RandomStream& rng) {
  if (alpha_owner_.at(i) != caller)
    throw std::logic_error("capability violation: alpha half not owned by caller");
  if (alpha_used_.at(i))
    throw std::logic_error("alpha half has already been measured by its owner");
  alpha_used_.at(i) = 1;
  PairState& pair = pairs_.at(i);
  if (pair.alpha_measured()) return pair.measure_collapsed(Half::Alpha, basis, rng);
  return pair.measure_alpha(basis, rng);
}

bool PairEnvironment::project(Party caller, int i, const PairState& target, RandomStream& rng) {
  if (caller != Party::Bob || alpha_owner_.at(i) != Party::Bob)
    throw std::logic_error("capability violation: collective projection needs both halves");
  return pairs_.at(i).project_and_collapse(target, rng);
}

// ---- per-step procedures ----

std::variant<Partition, CheckId> alice_check_and_partition(
    const BitString& q, const std::vector<QubitOutcome>& announced, const ProtocolConfig& config,
    AlphaPort& alpha, RandomStream& rng, std::vector<CheckRecord>& records) {
  const int s = config.s();
  int ones = 0;
  for (const auto& o : announced) ones += o.q;
  const int zeros = s - ones;
  const double threshold = config.threshold();
  const bool counts_ok = zeros >= threshold && ones >= threshold;
  records.push_back({CheckId::A4Counts, true, static_cast<double>(std::min(zeros, ones)),
                     threshold, 0.0, counts_ok});
  if (!counts_ok) return CheckId::A4Counts;

  Partition part;
  part.s = s;
  for (int i = 0; i < s; ++i) {
    if (announced[i].q == q[i]) {
      part.U.push_back(i);
      continue;
    }
    const int p_i = alpha.measure(i, MeasurementBasis::alpha_xy(), rng);
    if (p_i == announced[i].p) part.L.push_back(i);
    else part.N.push_back(i);
  }

  const double m_size = static_cast<double>(part.L.size() + part.N.size());
  const double m_threshold = config.code.d + s / 4.0;
  const bool m_ok = m_size > m_threshold;
  records.push_back({CheckId::A4Msize, true, m_size, m_threshold, 0.0, m_ok});
  if (!m_ok) return CheckId::A4Msize;
  return part;
}

std::optional<CheckId> bob_check_L(const std::vector<int>& L, const LieLedger& ledger,
                                   const LieFrequencies& freqs, const ProtocolConfig& config,
                                   std::vector<CheckRecord>& records) {
  const int s = config.s();
  const ToleranceCheck tc =
      size_tolerance_check(static_cast<double>(L.size()), expected_sizes(freqs, s).l, s, config.z);
  records.push_back(
      {CheckId::B6Lsize, false, tc.observed, tc.expected, tc.tolerance, tc.pass});
  if (!tc.pass) return CheckId::B6Lsize;

  int honest_in_L = 0;
  for (int i : L)
    if (ledger.at(i).type == LieType::Honest) ++honest_in_L;
  records.push_back(
      {CheckId::B6LallLies, true, static_cast<double>(honest_in_L), 0.0, 0.0, honest_in_L == 0});
  if (honest_in_L != 0) return CheckId::B6LallLies;
  return std::nullopt;
}

BitString deduce_q(const std::vector<QubitOutcome>& announced, const Partition& partition) {
  BitString q(partition.s);
  for (int i = 0; i < partition.s; ++i) q[i] = static_cast<std::uint8_t>(announced[i].q);
  for (int i : partition.L) q[i] ^= 1;
  for (int i : partition.N) q[i] ^= 1;
  return q;
}

std::optional<CheckId> bob_final_checks(const Partition& partition,
                                        const std::vector<QubitOutcome>& announced,
                                        std::vector<std::optional<QubitOutcome>>& actual,
                                        const std::vector<LieType>& types_in,
                                        const LieFrequencies& freqs, const ProtocolConfig& config,
                                        BetaPort& beta, AlphaPort& alpha, RandomStream& rng,
                                        std::vector<CheckRecord>& records) {
  const int s = config.s();
  std::vector<LieType> types = types_in;
  auto ensure_measured = [&](int i) {
    if (actual[i]) return;
    actual[i] = beta.measure(i, rng.coin(), rng);
    types[i] = classify_lie(*actual[i], announced[i]);
  };

  // 9.1
  const BitString q_ded = deduce_q(announced, partition);
  const bool in_code = is_codeword(config.code, q_ded);
  records.push_back({CheckId::B91Codeword, true, in_code ? 1.0 : 0.0, 1.0, 0.0, in_code});
  if (!in_code) return CheckId::B91Codeword;

  // 9.2
  const ExpectedSizes exp = expected_sizes(freqs, s);
  const ToleranceCheck tn =
      size_tolerance_check(static_cast<double>(partition.N.size()), exp.n, s, config.z);
  records.push_back({CheckId::B92Sizes, false, tn.observed, tn.expected, tn.tolerance, tn.pass});
  const ToleranceCheck tu =
      size_tolerance_check(static_cast<double>(partition.U.size()), exp.u, s, config.z);
  records.push_back({CheckId::B92Sizes, false, tu.observed, tu.expected, tu.tolerance, tu.pass});
  if (!tn.pass || !tu.pass) return CheckId::B92Sizes;

  // 9.3
  int type_b_in_N = 0;
  for (int i : partition.N) {
    ensure_measured(i);
    if (types[i] == LieType::B) ++type_b_in_N;
  }
  records.push_back(
      {CheckId::B93NoTypeB, true, static_cast<double>(type_b_in_N), 0.0, 0.0, type_b_in_N == 0});
  if (type_b_in_N != 0) return CheckId::B93NoTypeB;

  // 9.4: verify each alpha in U against the protocol state for the deduced q_i.
  int failures = 0;
  for (int i : partition.U) {
    const int q_i = q_ded[i];
    if (config.b94_mode == B94Mode::Collective && !beta.measured(i)) {
      const PairState target = prepare_pair(PairKind::Protocol, q_i, kProtocolTheta);
      if (!beta.project(i, target, rng)) ++failures;
      continue;
    }
    ensure_measured(i);
    const SingleQubitState expect = conditional_alpha(q_i, *actual[i], kProtocolTheta);
    const int outcome = alpha.measure(i, MeasurementBasis::around(expect), rng);
    if (outcome != 0) ++failures;
  }
  records.push_back(
      {CheckId::B94AlphaStates, true, static_cast<double>(failures), 0.0, 0.0, failures == 0});
  if (failures != 0) return CheckId::B94AlphaStates;
  return std::nullopt;
}

int compute_c(const std::vector<QubitOutcome>& announced, const Partition& partition, int f) {
  int parity = 0;
  for (int i : partition.N) parity ^= 1 - announced[i].q;  // deduced q_i on N
  return parity ^ f;
}

// ---- honest strategies ----

AlicePreparation HonestAlice::prepare(const ProtocolConfig& config, RandomStream& rng) {
  AlicePreparation prep;
  prep.q = sample_codeword(config.code, rng);
  q_ = prep.q;
  prep.pairs.reserve(config.s());
  for (int i = 0; i < config.s(); ++i)
    prep.pairs.push_back(prepare_pair(PairKind::Protocol, prep.q[i], kProtocolTheta));
  return prep;
}

std::variant<Partition, CheckId> HonestAlice::partition_and_check(
    const ProtocolConfig& config, const std::vector<QubitOutcome>& announced, AlphaPort& alpha,
    RandomStream& rng, std::vector<CheckRecord>& records) {
  auto result = alice_check_and_partition(q_, announced, config, alpha, rng, records);
  if (std::holds_alternative<Partition>(result)) partition_ = std::get<Partition>(result);
  return result;
}

Partition HonestAlice::announce_sets(const ProtocolConfig&, int, RandomStream&) {
  return partition_;
}

std::vector<QubitOutcome> HonestBob::announce(const ProtocolConfig& config, BetaPort& beta,
                                              RandomStream& rng) {
  const int s = config.s();
  announced_.assign(s, QubitOutcome{});
  actual_.assign(s, std::nullopt);
  types_.assign(s, LieType::Honest);
  eff_freqs_ = config.effective_freqs();

  std::vector<char> withhold(s, 0);
  if (config.b94_mode == B94Mode::Collective) {
    const int nw = static_cast<int>(std::floor(config.withhold_fraction * s));
    std::vector<int> order(s);
    for (int i = 0; i < s; ++i) order[i] = i;
    for (int i = s - 1; i > 0; --i)
      std::swap(order[i], order[rng.uniform_int(static_cast<std::uint32_t>(i + 1))]);
    for (int j = 0; j < nw; ++j) withhold[order[j]] = 1;
  }

  if (config.bob_mode == BobMode::MeasureFirst) {
    const std::vector<LieType> plan =
        assign_lie_types(s, config.bob_freqs, AssignMode::Exact, rng);
    for (int i = 0; i < s; ++i) {
      if (withhold[i]) {
        announced_[i] = QubitOutcome{rng.coin(), rng.coin()};
        continue;
      }
      const QubitOutcome a = beta.measure(i, rng.coin(), rng);
      actual_[i] = a;
      types_[i] = plan[i];
      announced_[i] = apply_lie(a, plan[i]);
    }
  } else {
    // Delayed: announce first; measurement follows (or is withheld), with
    // realized lie types honest/a/b/c each at probability 1/4.
    for (int i = 0; i < s; ++i) announced_[i] = QubitOutcome{rng.coin(), rng.coin()};
    for (int i = 0; i < s; ++i) {
      if (withhold[i]) continue;
      const QubitOutcome a = beta.measure(i, rng.coin(), rng);
      actual_[i] = a;
      types_[i] = classify_lie(a, announced_[i]);
    }
  }
  return announced_;
}

void HonestBob::ensure_measured(int i, BetaPort& beta, RandomStream& rng) {
  if (actual_[i]) return;
  actual_[i] = beta.measure(i, rng.coin(), rng);
  types_[i] = classify_lie(*actual_[i], announced_[i]);
}

const LieLedger HonestBob::ledger() const {
  LieLedger out(announced_.size());
  for (std::size_t i = 0; i < announced_.size(); ++i) {
    out[i].announced = announced_[i];
    out[i].actual = actual_[i] ? *actual_[i] : announced_[i];
    out[i].type = actual_[i] ? types_[i] : LieType::Honest;
  }
  return out;
}

std::optional<CheckId> HonestBob::check_L(const ProtocolConfig& config, const std::vector<int>& L,
                                          BetaPort& beta, RandomStream& rng,
                                          std::vector<CheckRecord>& records) {
  for (int i : L) ensure_measured(i, beta, rng);
  return bob_check_L(L, ledger(), eff_freqs_, config, records);
}

int HonestBob::choose_f(const ProtocolConfig&, RandomStream& rng) { return rng.coin(); }

std::optional<CheckId> HonestBob::final_checks(const ProtocolConfig& config,
                                               const Partition& partition, BetaPort& beta,
                                               AlphaPort& alpha, RandomStream& rng,
                                               std::vector<CheckRecord>& records) {
  return bob_final_checks(partition, announced_, actual_, types_, eff_freqs_, config, beta,
                          alpha, rng, records);
}

// ---- runner ----

namespace {

void flush_checks(Transcript& tr, std::vector<CheckRecord>& records, std::size_t& seen) {
  for (; seen < records.size(); ++seen) tr.check(records[seen]);
}

RunResult finish_aborted(RunResult rr, CheckId check, Party by) {
  rr.outcome = Outcome{Outcome::Status::Aborted, 0, check, by};
  rr.transcript.message(std::string("event=abort check=") + to_string(check) +
                        " by=" + to_string(by));
  return rr;
}

}  // namespace

RunResult run_protocol(AliceStrategy& alice, BobStrategy& bob, const ProtocolConfig& config,
                       std::uint64_t seed) {
  config.validate();
  const int s = config.s();
  RandomStream root(seed);
  RandomStream alice_rng = root.split(1);
  RandomStream bob_rng = root.split(2);

  RunResult rr;
  Transcript& tr = rr.transcript;
  std::vector<CheckRecord> records;
  std::size_t flushed = 0;

  tr.message("step=1 event=agree code=" + config.code.name + " s=" + std::to_string(s) +
             " d=" + std::to_string(config.code.d) + " seed=" + std::to_string(seed));

  AlicePreparation prep = alice.prepare(config, alice_rng);
  if (static_cast<int>(prep.q.size()) != s || static_cast<int>(prep.pairs.size()) != s)
    throw std::logic_error("alice strategy produced a malformed preparation");
  PairEnvironment env(std::move(prep.pairs));
  BetaPort bob_beta(env, Party::Bob);
  AlphaPort alice_alpha(env, Party::Alice);
  AlphaPort bob_alpha(env, Party::Bob);
  tr.message("step=2 from=alice event=beta_transfer count=" + std::to_string(s));

  const std::vector<QubitOutcome> announced = bob.announce(config, bob_beta, bob_rng);
  if (static_cast<int>(announced.size()) != s)
    throw std::logic_error("bob strategy produced a malformed announcement");
  {
    int ones = 0;
    for (const auto& o : announced) ones += o.q;
    tr.message("step=3 from=bob event=announce_results digest=" + digest_outcomes(announced) +
               " zeros=" + std::to_string(s - ones) + " ones=" + std::to_string(ones));
  }

  auto step4 = alice.partition_and_check(config, announced, alice_alpha, alice_rng, records);
  flush_checks(tr, records, flushed);
  rr.cheat_activated = alice.cheat_activated() || bob.cheat_activated();
  if (std::holds_alternative<CheckId>(step4))
    return finish_aborted(std::move(rr), std::get<CheckId>(step4), Party::Alice);
  Partition partition = std::get<Partition>(step4);
  partition.validate();
  rr.size_u = static_cast<int>(partition.U.size());
  rr.size_l = static_cast<int>(partition.L.size());
  rr.size_n = static_cast<int>(partition.N.size());
  tr.message("step=5 from=alice event=announce_L size=" + std::to_string(partition.L.size()) +
             " digest=" + digest_indices(partition.L));

  auto step6 = bob.check_L(config, partition.L, bob_beta, bob_rng, records);
  flush_checks(tr, records, flushed);
  if (step6) {
    rr.cheat_activated = alice.cheat_activated() || bob.cheat_activated();
    return finish_aborted(std::move(rr), *step6, Party::Bob);
  }

  const int f = bob.choose_f(config, bob_rng);
  tr.message("step=7 from=bob event=announce_f f=" + std::to_string(f));

  const Partition final_partition = alice.announce_sets(config, f, alice_rng);
  final_partition.validate();
  if (final_partition.L != partition.L)
    throw std::logic_error("alice strategy altered L after it was announced");
  rr.size_u = static_cast<int>(final_partition.U.size());
  rr.size_l = static_cast<int>(final_partition.L.size());
  rr.size_n = static_cast<int>(final_partition.N.size());
  tr.message("step=8 from=alice event=announce_NU sizeN=" +
             std::to_string(final_partition.N.size()) +
             " sizeU=" + std::to_string(final_partition.U.size()) +
             " digestN=" + digest_indices(final_partition.N) +
             " digestU=" + digest_indices(final_partition.U) + " alpha_transfer=" +
             std::to_string(final_partition.U.size()));
  for (int i : final_partition.U) env.transfer_alpha(i);

  auto step9 = bob.final_checks(config, final_partition, bob_beta, bob_alpha, bob_rng, records);
  flush_checks(tr, records, flushed);
  rr.cheat_activated = alice.cheat_activated() || bob.cheat_activated();
  if (step9) return finish_aborted(std::move(rr), *step9, Party::Bob);

  rr.alice_c = compute_c(announced, final_partition, f);
  rr.bob_c = compute_c(announced, final_partition, f);
  rr.outcome = Outcome{Outcome::Status::Completed, rr.alice_c, CheckId::A4Counts, Party::Alice};
  tr.message("step=10 event=result c=" + std::to_string(rr.alice_c) +
             " alice_c=" + std::to_string(rr.alice_c) + " bob_c=" + std::to_string(rr.bob_c));
  return rr;
}

}  // namespace qcf
