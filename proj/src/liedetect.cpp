#include "qcf/liedetect.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qcf {

const char* to_string(LieType t) {
  switch (t) {
    case LieType::Honest: return "honest";
    case LieType::A: return "a";
    case LieType::B: return "b";
    case LieType::C: return "c";
  }
  return "?";
}

LieType classify_lie(QubitOutcome actual, QubitOutcome announced) {
  const bool p_same = announced.p == actual.p;
  const bool q_same = announced.q == actual.q;
  if (p_same && q_same) return LieType::Honest;
  if (p_same) return LieType::A;
  if (q_same) return LieType::B;
  return LieType::C;
}

QubitOutcome apply_lie(QubitOutcome actual, LieType type) {
  switch (type) {
    case LieType::Honest: return actual;
    case LieType::A: return {actual.p, 1 - actual.q};
    case LieType::B: return {1 - actual.p, actual.q};
    case LieType::C: return {1 - actual.p, 1 - actual.q};
  }
  throw std::invalid_argument("unknown lie type");
}

std::vector<LieType> assign_lie_types(int s, const LieFrequencies& freqs, AssignMode mode,
                                      RandomStream& rng) {
  if (s < 0) throw std::invalid_argument("assign_lie_types: negative s");
  if (!freqs.valid()) throw std::invalid_argument("assign_lie_types: invalid frequencies");

  std::vector<LieType> plan;
  plan.reserve(s);
  if (mode == AssignMode::Exact) {
    const int na = static_cast<int>(std::floor(freqs.fa * s));
    const int nb = static_cast<int>(std::floor(freqs.fb * s));
    const int nc = static_cast<int>(std::floor(freqs.fc * s));
    plan.insert(plan.end(), na, LieType::A);
    plan.insert(plan.end(), nb, LieType::B);
    plan.insert(plan.end(), nc, LieType::C);
    plan.insert(plan.end(), s - na - nb - nc, LieType::Honest);
    // Fisher-Yates
    for (int i = s - 1; i > 0; --i) {
      const int j = static_cast<int>(rng.uniform_int(static_cast<std::uint32_t>(i + 1)));
      std::swap(plan[i], plan[j]);
    }
  } else {
    for (int i = 0; i < s; ++i) {
      const double u = rng.next_double();
      if (u < freqs.fa) plan.push_back(LieType::A);
      else if (u < freqs.fa + freqs.fb) plan.push_back(LieType::B);
      else if (u < freqs.fa + freqs.fb + freqs.fc) plan.push_back(LieType::C);
      else plan.push_back(LieType::Honest);
    }
  }
  return plan;
}

BobAnnouncement bob_measure_and_announce(std::span<PairState> pairs,
                                         const std::vector<LieType>& plan, RandomStream& rng) {
  if (plan.size() != pairs.size())
    throw std::invalid_argument("bob_measure_and_announce: plan size mismatch");
  BobAnnouncement out;
  out.announced.reserve(pairs.size());
  out.ledger.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const QubitOutcome actual = pairs[i].measure_beta(rng.coin(), rng);
    const QubitOutcome announced = apply_lie(actual, plan[i]);
    out.announced.push_back(announced);
    out.ledger.push_back({actual, announced, plan[i]});
  }
  return out;
}

BobAnnouncement bob_announce_delayed(std::span<PairState> pairs, RandomStream& rng) {
  BobAnnouncement out;
  out.announced.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i)
    out.announced.push_back(QubitOutcome{rng.coin(), rng.coin()});
  out.ledger.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const QubitOutcome actual = pairs[i].measure_beta(rng.coin(), rng);
    out.ledger.push_back({actual, out.announced[i], classify_lie(actual, out.announced[i])});
  }
  return out;
}

std::vector<int> algorithm_I_detect(const std::vector<QubitOutcome>& prepared,
                                    const std::vector<QubitOutcome>& announced) {
  if (prepared.size() != announced.size())
    throw std::invalid_argument("algorithm_I_detect: size mismatch");
  std::vector<int> detected;
  for (std::size_t i = 0; i < prepared.size(); ++i) {
    if (announced[i].p == prepared[i].p && announced[i].q != prepared[i].q)
      detected.push_back(static_cast<int>(i));
  }
  return detected;
}

std::vector<int> algorithm_II_detect(std::span<PairState> pairs,
                                     const std::vector<QubitOutcome>& announced,
                                     RandomStream& rng) {
  if (pairs.size() != announced.size())
    throw std::invalid_argument("algorithm_II_detect: size mismatch");
  std::vector<int> detected;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    // Collapse beta into the announced basis; q_i follows from the alpha
    // outcome (x / + mean q=0).
    const MeasurementBasis basis = (announced[i].p == 0) ? MeasurementBasis::alpha_xy()
                                                         : MeasurementBasis::alpha_diagonal();
    const int q_i = pairs[i].measure_alpha(basis, rng);
    if (announced[i].q != q_i) detected.push_back(static_cast<int>(i));
  }
  return detected;
}

std::vector<int> Partition::M() const {
  std::vector<int> m;
  m.reserve(L.size() + N.size());
  std::merge(L.begin(), L.end(), N.begin(), N.end(), std::back_inserter(m));
  return m;
}

void Partition::validate() const {
  std::vector<char> seen(s, 0);
  auto mark = [&](const std::vector<int>& set) {
    for (int i : set) {
      if (i < 0 || i >= s || seen[i]) throw std::logic_error("partition is not a partition");
      seen[i] = 1;
    }
  };
  mark(U);
  mark(L);
  mark(N);
  if (static_cast<int>(U.size() + L.size() + N.size()) != s)
    throw std::logic_error("partition does not cover the index set");
}

Partition algorithm_III_partition(std::span<PairState> pairs, const std::vector<uint8_t>& q,
                                  const std::vector<QubitOutcome>& announced, RandomStream& rng) {
  if (pairs.size() != q.size() || pairs.size() != announced.size())
    throw std::invalid_argument("algorithm_III_partition: size mismatch");
  Partition part;
  part.s = static_cast<int>(pairs.size());
  for (int i = 0; i < part.s; ++i) {
    if (announced[i].q == q[i]) {
      part.U.push_back(i);  // left unmeasured
      continue;
    }
    const int p_i = pairs[i].measure_alpha(MeasurementBasis::alpha_xy(), rng);
    if (p_i == announced[i].p) part.L.push_back(i);
    else part.N.push_back(i);
  }
  return part;
}

Partition algorithm_IV_partition(std::span<PairState> pairs, const std::vector<uint8_t>& q,
                                 const std::vector<QubitOutcome>& announced, RandomStream& rng) {
  if (pairs.size() != q.size() || pairs.size() != announced.size())
    throw std::invalid_argument("algorithm_IV_partition: size mismatch");
  Partition part;
  part.s = static_cast<int>(pairs.size());
  for (int i = 0; i < part.s; ++i) {
    const bool in_m = (announced[i].p == 0 && announced[i].q != q[i]) ||
                      (announced[i].p == 1 && announced[i].q == q[i]);
    if (!in_m) {
      part.U.push_back(i);
      continue;
    }
    const int p_i = pairs[i].measure_alpha(MeasurementBasis::alpha_xy(), rng);
    if (p_i == announced[i].p) part.L.push_back(i);
    else part.N.push_back(i);
  }
  return part;
}

ExpectedSizes expected_sizes(const LieFrequencies& freqs, int s) {
  if (!freqs.valid()) throw std::invalid_argument("expected_sizes: invalid frequencies");
  const double fh = freqs.fh();
  ExpectedSizes e;
  e.u = (0.75 * fh + 0.25 * freqs.fa + 0.75 * freqs.fb + 0.25 * freqs.fc) * s;
  e.l = (0.50 * freqs.fa + 0.25 * freqs.fb + 0.25 * freqs.fc) * s;
  e.n = (0.25 * fh + 0.25 * freqs.fa + 0.50 * freqs.fc) * s;
  e.m = (0.25 * fh + 0.75 * freqs.fa + 0.25 * freqs.fb + 0.75 * freqs.fc) * s;
  return e;
}

double expected_m_compact(const LieFrequencies& freqs, int s) {
  return (0.25 + 0.5 * (freqs.fa + freqs.fc)) * s;
}

double expected_algorithm_I(const LieFrequencies& freqs, int s) {
  return (0.5 * freqs.fa + 0.25 * freqs.fb + 0.25 * freqs.fc) * s;
}

double expected_m_algorithm_IV(const LieFrequencies& freqs, int s) {
  return (0.25 + 0.5 * (freqs.fa + freqs.fb)) * s;
}

ToleranceCheck size_tolerance_check(double observed, double expected, int s, double z) {
  if (z <= 0.0) throw std::invalid_argument("size_tolerance_check: z must be positive");
  if (expected < 0.0 || expected > static_cast<double>(s))
    throw std::invalid_argument("size_tolerance_check: expected outside [0, s]");
  const double p = (s > 0) ? expected / s : 0.0;
  const double sigma = std::sqrt(static_cast<double>(s) * p * (1.0 - p));
  ToleranceCheck c;
  c.observed = observed;
  c.expected = expected;
  c.sigma = sigma;
  c.tolerance = z * std::max(1.0, sigma);
  c.pass = std::abs(observed - expected) <= c.tolerance;
  return c;
}

}  // namespace qcf
