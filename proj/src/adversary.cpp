#include "qcf/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <thread>

namespace qcf {

MeasurementBasis helstrom_basis() {
  const DensityMatrix2 diff = reduced_rho_q(0) - reduced_rho_q(1);
  const auto vecs = diff.eigenvectors_hermitian(Half::Beta);
  // eigenvalues ascending: [1] belongs to +1/sqrt2, the rho0 side
  return MeasurementBasis{vecs[1], vecs[0]};
}

double parity_guess_accuracy(double p, int m) {
  if (p < 0.5 || p > 1.0) throw std::invalid_argument("parity_guess_accuracy: p outside [1/2,1]");
  if (m < 0) throw std::invalid_argument("parity_guess_accuracy: negative m");
  return 0.5 + 0.5 * std::pow(2.0 * p - 1.0, m);
}

// ---- HelstromBob ----

std::vector<QubitOutcome> HelstromBob::announce(const ProtocolConfig& config, BetaPort& beta,
                                                RandomStream& rng) {
  const int s = config.s();
  const double h = helstrom_success(reduced_rho_q(0), reduced_rho_q(1));
  guess_.assign(s, 0);
  flipped_.assign(s, 0);
  announced_.assign(s, QubitOutcome{});

  const MeasurementBasis basis = helstrom_basis();
  for (int i = 0; i < s; ++i)
    guess_[i] = static_cast<std::uint8_t>(beta.measure_general(i, basis, rng));

  // Announce ~guess on a subset T just large enough that |M| clears the
  // step-(4) threshold with ~3 sigma to spare; every extra member of T is a
  // q_i Bob deliberately forfeits.
  const double sigma = std::sqrt(0.125 * s);
  const double need = config.code.d + s / 4.0 + 3.0 * sigma - (1.0 - h) * s;
  int t = static_cast<int>(std::ceil(std::max(0.0, need / (2.0 * h - 1.0))));
  t = std::min(t, s);
  std::vector<int> order(s);
  for (int i = 0; i < s; ++i) order[i] = i;
  for (int i = s - 1; i > 0; --i)
    std::swap(order[i], order[rng.uniform_int(static_cast<std::uint32_t>(i + 1))]);
  for (int j = 0; j < t; ++j) flipped_[order[j]] = 1;

  for (int i = 0; i < s; ++i)
    announced_[i] = QubitOutcome{rng.coin(), guess_[i] ^ flipped_[i]};
  return announced_;
}

std::optional<CheckId> HelstromBob::check_L(const ProtocolConfig&, const std::vector<int>& L,
                                            BetaPort&, RandomStream&,
                                            std::vector<CheckRecord>&) {
  L_ = L;  // a cheater records L and waves the check through
  return std::nullopt;
}

int HelstromBob::choose_f(const ProtocolConfig&, RandomStream&) {
  // Predicted N: flipped indices that Alice did not flag (Pr[N | flipped,
  // not in L] ~ 3/4 beats every alternative). A member of N has q_i = ~q''_i.
  std::vector<char> in_L(guess_.size(), 0);
  for (int i : L_) in_L[i] = 1;
  int parity = 0;
  for (std::size_t i = 0; i < guess_.size(); ++i)
    if (flipped_[i] && !in_L[i]) parity ^= 1 - announced_[i].q;
  return desired_c_ ^ parity;
}

std::optional<CheckId> HelstromBob::final_checks(const ProtocolConfig&, const Partition&,
                                                 BetaPort&, AlphaPort&, RandomStream&,
                                                 std::vector<CheckRecord>&) {
  return std::nullopt;
}

// ---- TypeBFloodBob ----

std::vector<QubitOutcome> TypeBFloodBob::announce(const ProtocolConfig& config, BetaPort& beta,
                                                  RandomStream& rng) {
  ProtocolConfig flooded = config;
  flooded.bob_freqs.fb = fb_;
  flooded.bob_mode = BobMode::MeasureFirst;
  flooded.b94_mode = B94Mode::Conditional;
  if (!feasible(config.code, flooded.bob_freqs))
    throw std::invalid_argument("typeb-flood: flooded frequencies infeasible");
  return HonestBob::announce(flooded, beta, rng);
}

std::optional<CheckId> TypeBFloodBob::check_L(const ProtocolConfig&, const std::vector<int>& L,
                                              BetaPort&, RandomStream&,
                                              std::vector<CheckRecord>&) {
  L_ = L;
  std::vector<char> in_L(announced_.size(), 0);
  for (int i : L) in_L[i] = 1;
  known_bits_ = static_cast<long>(L.size());
  for (std::size_t i = 0; i < announced_.size(); ++i)
    if (!in_L[i] && types_[i] == LieType::B) ++known_bits_;  // surely in U, q_i = q''_i
  return std::nullopt;
}

int TypeBFloodBob::choose_f(const ProtocolConfig&, RandomStream&) {
  // Guess N as the announced-flipped indices (types a and c) Alice did not
  // flag; their q_i values are ~q''_i whenever the membership guess is right.
  std::vector<char> in_L(announced_.size(), 0);
  for (int i : L_) in_L[i] = 1;
  int parity = 0;
  for (std::size_t i = 0; i < announced_.size(); ++i) {
    if (in_L[i]) continue;
    if (types_[i] == LieType::A || types_[i] == LieType::C) parity ^= 1 - announced_[i].q;
  }
  return desired_c_ ^ parity;
}

std::optional<CheckId> TypeBFloodBob::final_checks(const ProtocolConfig&, const Partition&,
                                                   BetaPort&, AlphaPort&, RandomStream&,
                                                   std::vector<CheckRecord>&) {
  return std::nullopt;
}

// ---- Alice-side cheats ----

namespace {

Partition moved_partition(const Partition& base, const std::vector<int>& move_set) {
  std::vector<char> move(base.s, 0);
  for (int i : move_set) move[i] = 1;
  Partition out;
  out.s = base.s;
  out.L = base.L;
  for (int i : base.N) (move[i] ? out.U : out.N).push_back(i);
  for (int i : base.U) (move[i] ? out.N : out.U).push_back(i);
  std::sort(out.U.begin(), out.U.end());
  std::sort(out.N.begin(), out.N.end());
  return out;
}

// Nonzero codewords from generator rows and row pairs (plus everything for
// small k), unique, lightest first.
std::vector<BitString> codeword_pool(const LinearCode& code) {
  std::set<BitString> seen;
  auto add = [&](BitString w) {
    if (std::count(w.begin(), w.end(), 1) > 0) seen.insert(std::move(w));
  };
  for (const auto& row : code.generator) add(row);
  for (int i = 0; i < code.k; ++i)
    for (int j = i + 1; j < code.k; ++j) {
      BitString w = code.generator[i];
      for (int b = 0; b < code.s; ++b) w[b] ^= code.generator[j][b];
      add(std::move(w));
    }
  if (code.k <= 12) {
    for (std::uint32_t msg = 1; msg < (1u << code.k); ++msg) {
      BitString m(code.k, 0);
      for (int r = 0; r < code.k; ++r) m[r] = (msg >> r) & 1;
      add(encode(code, m));
    }
  }
  std::vector<BitString> pool(seen.begin(), seen.end());
  std::stable_sort(pool.begin(), pool.end(), [](const BitString& a, const BitString& b) {
    return std::count(a.begin(), a.end(), 1) < std::count(b.begin(), b.end(), 1);
  });
  return pool;
}

// Lightest codeword-supported relabeling avoiding L that lands the outcome on
// desired_c; nullopt if the pool has none.
std::optional<Partition> find_codeword_swap(const LinearCode& code, const Partition& base,
                                            const std::vector<QubitOutcome>& announced, int f,
                                            int desired_c) {
  std::vector<char> in_L(base.s, 0);
  for (int i : base.L) in_L[i] = 1;
  for (const BitString& w : codeword_pool(code)) {
    std::vector<int> move_set;
    bool touches_L = false;
    for (int i = 0; i < code.s; ++i) {
      if (!w[i]) continue;
      if (in_L[i]) {
        touches_L = true;
        break;
      }
      move_set.push_back(i);
    }
    if (touches_L) continue;
    Partition candidate = moved_partition(base, move_set);
    if (compute_c(announced, candidate, f) == desired_c) return candidate;
  }
  return std::nullopt;
}

}  // namespace

std::variant<Partition, CheckId> BitflipAlice::partition_and_check(
    const ProtocolConfig& config, const std::vector<QubitOutcome>& announced, AlphaPort& alpha,
    RandomStream& rng, std::vector<CheckRecord>& records) {
  announced_ = announced;
  return HonestAlice::partition_and_check(config, announced, alpha, rng, records);
}

Partition BitflipAlice::announce_sets(const ProtocolConfig&, int f, RandomStream&) {
  if (compute_c(announced_, partition_, f) == desired_c_) return partition_;
  activated_ = true;
  std::vector<int> move_set;
  for (int i : partition_.N) {
    if (static_cast<int>(move_set.size()) == flips_) break;
    move_set.push_back(i);
  }
  for (int i : partition_.U) {
    if (static_cast<int>(move_set.size()) == flips_) break;
    move_set.push_back(i);
  }
  return moved_partition(partition_, move_set);
}

std::variant<Partition, CheckId> CodewordSwapAlice::partition_and_check(
    const ProtocolConfig& config, const std::vector<QubitOutcome>& announced, AlphaPort& alpha,
    RandomStream& rng, std::vector<CheckRecord>& records) {
  announced_ = announced;
  return HonestAlice::partition_and_check(config, announced, alpha, rng, records);
}

Partition CodewordSwapAlice::announce_sets(const ProtocolConfig& config, int f, RandomStream&) {
  if (compute_c(announced_, partition_, f) == desired_c_) return partition_;
  auto swapped = find_codeword_swap(config.code, partition_, announced_, f, desired_c_);
  if (!swapped) return partition_;  // no usable codeword; concede the flip
  activated_ = true;
  return *swapped;
}

AlicePreparation ProductStateAlice::prepare(const ProtocolConfig& config, RandomStream& rng) {
  AlicePreparation prep;
  prep.q = sample_codeword(config.code, rng);
  q_ = prep.q;
  p_.assign(config.s(), 0);
  prep.pairs.reserve(config.s());
  for (int i = 0; i < config.s(); ++i) {
    p_[i] = static_cast<std::uint8_t>(rng.coin());
    prep.pairs.push_back(prepare_product(QubitOutcome{p_[i], q_[i]}));
  }
  return prep;
}

std::variant<Partition, CheckId> ProductStateAlice::partition_and_check(
    const ProtocolConfig& config, const std::vector<QubitOutcome>& announced, AlphaPort&,
    RandomStream& rng, std::vector<CheckRecord>&) {
  announced_ = announced;
  const int s = config.s();
  partition_ = Partition{};
  partition_.s = s;
  std::vector<int> m_set;
  for (int i = 0; i < s; ++i) {
    if (announced[i].q == q_[i]) partition_.U.push_back(i);
    else m_set.push_back(i);
  }
  if (informed_L_) {
    // Algorithm-I certain lies: correct announced basis, flipped value.
    for (int i : m_set) {
      if (announced[i].p == p_[i]) partition_.L.push_back(i);
      else partition_.N.push_back(i);
    }
  } else {
    // Name |L| of the right size by guessing among q'' != q indices.
    const long target =
        std::lround(expected_sizes(config.bob_freqs, s).l);
    std::vector<int> shuffled = m_set;
    for (int i = static_cast<int>(shuffled.size()) - 1; i > 0; --i)
      std::swap(shuffled[i], shuffled[rng.uniform_int(static_cast<std::uint32_t>(i + 1))]);
    for (std::size_t j = 0; j < shuffled.size(); ++j)
      (static_cast<long>(j) < target ? partition_.L : partition_.N).push_back(shuffled[j]);
    std::sort(partition_.L.begin(), partition_.L.end());
    std::sort(partition_.N.begin(), partition_.N.end());
  }
  return partition_;
}

Partition ProductStateAlice::announce_sets(const ProtocolConfig& config, int f, RandomStream&) {
  if (compute_c(announced_, partition_, f) == desired_c_) return partition_;
  auto swapped = find_codeword_swap(config.code, partition_, announced_, f, desired_c_);
  return swapped ? *swapped : partition_;
}

// ---- registry ----

std::unique_ptr<AliceStrategy> make_alice_strategy(const std::string& name) {
  if (name == "honest") return std::make_unique<HonestAlice>();
  if (name.rfind("bitflip-", 0) == 0)
    return std::make_unique<BitflipAlice>(std::stoi(name.substr(8)));
  if (name == "codeword-swap") return std::make_unique<CodewordSwapAlice>();
  if (name == "product-state") return std::make_unique<ProductStateAlice>(true);
  if (name == "product-state-guess") return std::make_unique<ProductStateAlice>(false);
  throw std::invalid_argument("unknown alice strategy: " + name);
}

std::unique_ptr<BobStrategy> make_bob_strategy(const std::string& name) {
  if (name == "honest") return std::make_unique<HonestBob>();
  if (name == "helstrom-guess") return std::make_unique<HelstromBob>();
  if (name == "typeb-flood") return std::make_unique<TypeBFloodBob>();
  if (name.rfind("typeb-flood-", 0) == 0)
    return std::make_unique<TypeBFloodBob>(std::stod(name.substr(12)));
  throw std::invalid_argument("unknown bob strategy: " + name);
}

// ---- campaigns ----

namespace {

struct TrialResult {
  bool completed = false;
  int c = 0;
  std::string abort_check;
  bool activated = false;
  int size_u = -1, size_l = -1, size_n = -1;
};

template <typename Fn>
void parallel_for(long n, int threads, Fn&& fn) {
  if (threads <= 1) {
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (long i = t; i < n; i += threads) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

CampaignStats run_campaign(const std::string& alice, const std::string& bob,
                           const ProtocolConfig& config, long trials, std::uint64_t seed,
                           int threads) {
  if (trials < 1) throw std::invalid_argument("run_campaign: trials must be >= 1");
  config.validate();
  std::vector<TrialResult> results(trials);

  parallel_for(trials, threads, [&](long t) {
    auto a = make_alice_strategy(alice);
    auto b = make_bob_strategy(bob);
    const std::uint64_t trial_seed = RandomStream(seed).split(static_cast<std::uint64_t>(t)).next_u64();
    const RunResult rr = run_protocol(*a, *b, config, trial_seed);
    TrialResult& out = results[t];
    out.completed = rr.outcome.completed();
    out.c = rr.outcome.c;
    if (!out.completed)
      out.abort_check = to_string(rr.outcome.check);
    out.activated = rr.cheat_activated;
    out.size_u = rr.size_u;
    out.size_l = rr.size_l;
    out.size_n = rr.size_n;
  });

  CampaignStats stats;
  stats.trials = trials;
  for (const TrialResult& r : results) {
    if (r.completed) {
      ++stats.completed;
      (r.c == 0 ? stats.c0 : stats.c1)++;
      if (r.activated) ++stats.activated_completed;
    } else {
      ++stats.abort_histogram[r.abort_check];
      if (r.activated) ++stats.activated_abort_histogram[r.abort_check];
    }
    if (r.activated) ++stats.activated;
    if (r.size_u >= 0) {
      ++stats.sized_runs;
      const double m = static_cast<double>(r.size_l) + r.size_n;
      stats.sum_u += r.size_u;
      stats.sum_l += r.size_l;
      stats.sum_n += r.size_n;
      stats.sum_m += m;
      stats.sum_u2 += static_cast<double>(r.size_u) * r.size_u;
      stats.sum_l2 += static_cast<double>(r.size_l) * r.size_l;
      stats.sum_n2 += static_cast<double>(r.size_n) * r.size_n;
      stats.sum_m2 += m * m;
    }
  }
  return stats;
}

BiasReport bias_from_stats(const CampaignStats& stats) {
  BiasReport report;
  report.trials = stats.trials;
  report.p0 = static_cast<double>(stats.c0) / stats.trials;
  report.p1 = static_cast<double>(stats.c1) / stats.trials;
  report.p_abort = static_cast<double>(stats.trials - stats.completed) / stats.trials;
  report.abort_histogram = stats.abort_histogram;
  if (stats.completed > 0) {
    const double top = static_cast<double>(std::max(stats.c0, stats.c1));
    const double phat = top / stats.completed;
    report.epsilon_hat = phat - 0.5;
    report.ci_halfwidth = 4.0 * std::sqrt(phat * (1.0 - phat) / stats.completed);
  }
  report.epsilon_hat_abort_loss =
      static_cast<double>(std::max(stats.c0, stats.c1)) / stats.trials - 0.5;
  return report;
}

BiasReport estimate_bias(const std::string& alice, const std::string& bob,
                         const ProtocolConfig& config, long trials, std::uint64_t seed,
                         int threads) {
  return bias_from_stats(run_campaign(alice, bob, config, trials, seed, threads));
}

}  // namespace qcf
