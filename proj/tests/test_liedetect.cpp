#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "qcf/liedetect.hpp"

using namespace qcf;

namespace {

struct AlgorithmRun {
  Partition partition;
  LieLedger ledger;
};

std::vector<PairState> make_pairs(PairKind kind, const std::vector<uint8_t>& q, double theta) {
  std::vector<PairState> pairs;
  pairs.reserve(q.size());
  for (auto qi : q) pairs.push_back(prepare_pair(kind, qi, theta));
  return pairs;
}

AlgorithmRun run_algorithm_III(int s, const LieFrequencies& freqs, double theta,
                               RandomStream& rng) {
  std::vector<uint8_t> q(s);
  for (auto& qi : q) qi = static_cast<uint8_t>(rng.coin());
  auto pairs = make_pairs(PairKind::AlgIII, q, theta);
  const auto plan = assign_lie_types(s, freqs, AssignMode::Exact, rng);
  auto bob = bob_measure_and_announce(pairs, plan, rng);
  AlgorithmRun run{algorithm_III_partition(pairs, q, bob.announced, rng), std::move(bob.ledger)};
  run.partition.validate();
  return run;
}

AlgorithmRun run_algorithm_IV(int s, const LieFrequencies& freqs, double theta,
                              RandomStream& rng) {
  std::vector<uint8_t> q(s);
  for (auto& qi : q) qi = static_cast<uint8_t>(rng.coin());
  auto pairs = make_pairs(PairKind::AlgIV, q, theta);
  const auto plan = assign_lie_types(s, freqs, AssignMode::Exact, rng);
  auto bob = bob_measure_and_announce(pairs, plan, rng);
  AlgorithmRun run{algorithm_IV_partition(pairs, q, bob.announced, rng), std::move(bob.ledger)};
  run.partition.validate();
  return run;
}

bool within_sigma(double observed, double expected, int s, double z = 4.0) {
  return size_tolerance_check(observed, expected, s, z).pass;
}

}  // namespace

TEST_CASE("lie classification is total and invertible") {
  CHECK(classify_lie({0, 0}, {0, 1}) == LieType::A);
  CHECK(classify_lie({1, 0}, {1, 0}) == LieType::Honest);
  CHECK(classify_lie({1, 0}, {0, 1}) == LieType::C);
  CHECK(apply_lie({0, 0}, LieType::B) == QubitOutcome{1, 0});
  CHECK(apply_lie({1, 1}, LieType::C) == QubitOutcome{0, 0});

  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q)
      for (LieType t : {LieType::Honest, LieType::A, LieType::B, LieType::C}) {
        const QubitOutcome actual{p, q};
        CHECK(classify_lie(actual, apply_lie(actual, t)) == t);
      }
}

TEST_CASE("assign_lie_types") {
  RandomStream rng(1);
  SUBCASE("exact mode hits the floor counts") {
    const auto plan = assign_lie_types(100, {0.2, 0.2, 0.1}, AssignMode::Exact, rng);
    CHECK(std::count(plan.begin(), plan.end(), LieType::A) == 20);
    CHECK(std::count(plan.begin(), plan.end(), LieType::B) == 20);
    CHECK(std::count(plan.begin(), plan.end(), LieType::C) == 10);
    CHECK(std::count(plan.begin(), plan.end(), LieType::Honest) == 50);
  }
  SUBCASE("zero frequencies mean all honest") {
    const auto plan = assign_lie_types(57, {0, 0, 0}, AssignMode::Exact, rng);
    CHECK(std::count(plan.begin(), plan.end(), LieType::Honest) == 57);
  }
  SUBCASE("iid mode lands within 4 sigma") {
    const int s = 100000;
    const auto plan = assign_lie_types(s, {0.2, 0.2, 0.1}, AssignMode::Iid, rng);
    CHECK(within_sigma(std::count(plan.begin(), plan.end(), LieType::A), 0.2 * s, s));
    CHECK(within_sigma(std::count(plan.begin(), plan.end(), LieType::B), 0.2 * s, s));
    CHECK(within_sigma(std::count(plan.begin(), plan.end(), LieType::C), 0.1 * s, s));
  }
  SUBCASE("over-unity frequencies rejected") {
    CHECK_THROWS_AS(assign_lie_types(10, {0.5, 0.4, 0.2}, AssignMode::Exact, rng),
                    std::invalid_argument);
  }
}

TEST_CASE("algorithm I detected-lie counts follow (fa/2 + fb/4 + fc/4) s") {
  const int s = 10000;
  RandomStream rng(21);
  auto run = [&](const LieFrequencies& freqs) {
    std::vector<QubitOutcome> prepared(s);
    std::vector<PairState> pairs;
    pairs.reserve(s);
    for (int i = 0; i < s; ++i) {
      prepared[i] = QubitOutcome{rng.coin(), rng.coin()};
      pairs.push_back(prepare_product(prepared[i]));
    }
    const auto plan = assign_lie_types(s, freqs, AssignMode::Exact, rng);
    const auto bob = bob_measure_and_announce(pairs, plan, rng);
    return algorithm_I_detect(prepared, bob.announced);
  };
  CHECK(run({0, 0, 0}).empty());
  CHECK(within_sigma(run({0.4, 0, 0}).size(), 2000.0, s));
  CHECK(within_sigma(run({0.2, 0.2, 0.1}).size(), 1750.0, s));
}

TEST_CASE("algorithm II doubles algorithm I's detection count") {
  const int s = 10000;
  RandomStream rng(22);
  auto run = [&](const LieFrequencies& freqs) {
    std::vector<PairState> pairs;
    pairs.reserve(s);
    for (int i = 0; i < s; ++i) pairs.push_back(prepare_pair(PairKind::MaxEntangled, 0, 0.0));
    const auto plan = assign_lie_types(s, freqs, AssignMode::Exact, rng);
    const auto bob = bob_measure_and_announce(pairs, plan, rng);
    return algorithm_II_detect(pairs, bob.announced, rng);
  };
  CHECK(run({0, 0, 0}).empty());
  CHECK(within_sigma(run({0.4, 0, 0}).size(), 4000.0, s));
  CHECK(within_sigma(run({0.2, 0.2, 0.1}).size(), 3500.0, s));

  SUBCASE("twice algorithm I within combined tolerance") {
    const LieFrequencies freqs{0.15, 0.2, 0.1};
    const double expected_l = expected_algorithm_I(freqs, s);
    const double detected_II = static_cast<double>(run(freqs).size());
    CHECK(within_sigma(detected_II, 2.0 * expected_l, s));
  }
}

TEST_CASE("algorithm III set sizes and exact structure") {
  const int s = 10000;
  RandomStream rng(23);

  SUBCASE("honest Bob: |M| near s/4 and L exactly empty") {
    const auto run = run_algorithm_III(s, {0, 0, 0}, 0.25 * M_PI, rng);
    CHECK(within_sigma(run.partition.M().size(), s / 4.0, s));
    CHECK(run.partition.L.empty());
  }

  SUBCASE("sizes match Eqs for (0.2, 0.2, 0.1)") {
    const auto run = run_algorithm_III(s, {0.2, 0.2, 0.1}, 0.25 * M_PI, rng);
    CHECK(within_sigma(run.partition.U.size(), 6000.0, s));
    CHECK(within_sigma(run.partition.L.size(), 1750.0, s));
    CHECK(within_sigma(run.partition.N.size(), 2250.0, s));
    CHECK(within_sigma(run.partition.M().size(), 4000.0, s));
  }

  SUBCASE("per-type detection rates at theta = pi/4") {
    const auto run = run_algorithm_III(s, {0.2, 0.2, 0.1}, 0.25 * M_PI, rng);
    long a_total = 0, a_in_L = 0, b_total = 0, b_in_L = 0, c_total = 0, c_in_L = 0;
    std::vector<char> in_L(s, 0);
    for (int i : run.partition.L) in_L[i] = 1;
    for (int i = 0; i < s; ++i) {
      switch (run.ledger[i].type) {
        case LieType::A: ++a_total; a_in_L += in_L[i]; break;
        case LieType::B: ++b_total; b_in_L += in_L[i]; break;
        case LieType::C: ++c_total; c_in_L += in_L[i]; break;
        case LieType::Honest:
          CHECK(in_L[i] == 0);  // honest results are never detected
          break;
      }
    }
    CHECK(within_sigma(a_in_L, 0.5 * a_total, a_total));
    CHECK(within_sigma(b_in_L, 0.25 * b_total, b_total));  // = fb s/4 of all type-b
    CHECK(within_sigma(c_in_L, 0.25 * c_total, c_total));
  }

  SUBCASE("no type-b lie ever lands in N, for any theta and frequencies") {
    for (double theta : {M_PI / 6.0, 0.25 * M_PI, M_PI / 3.0})
      for (const LieFrequencies freqs : {LieFrequencies{0.2, 0.2, 0.1},
                                         LieFrequencies{0.05, 0.5, 0.05},
                                         LieFrequencies{0.3, 0.1, 0.2}}) {
        const auto run = run_algorithm_III(500, freqs, theta, rng);
        for (int i : run.partition.N) CHECK(run.ledger[i].type != LieType::B);
      }
  }

  SUBCASE("expected sizes do not depend on theta") {
    for (double theta : {M_PI / 6.0, 0.25 * M_PI, M_PI / 3.0}) {
      const auto run = run_algorithm_III(s, {0.2, 0.2, 0.1}, theta, rng);
      CHECK(within_sigma(run.partition.U.size(), 6000.0, s));
      CHECK(within_sigma(run.partition.L.size(), 1750.0, s));
      CHECK(within_sigma(run.partition.N.size(), 2250.0, s));
    }
  }
}

TEST_CASE("algorithm IV mirrors algorithm III") {
  const int s = 10000;
  RandomStream rng(24);

  SUBCASE("|M'| = (1/4 + (fa+fb)/2) s") {
    const auto run = run_algorithm_IV(s, {0.2, 0.2, 0.1}, 0.25 * M_PI, rng);
    CHECK(within_sigma(run.partition.M().size(), 4500.0, s));
    const auto honest = run_algorithm_IV(s, {0, 0, 0}, 0.25 * M_PI, rng);
    CHECK(within_sigma(honest.partition.M().size(), 2500.0, s));
  }

  SUBCASE("no type-c lie ever lands in N'") {
    for (double theta : {M_PI / 6.0, 0.25 * M_PI, M_PI / 3.0})
      for (const LieFrequencies freqs : {LieFrequencies{0.2, 0.2, 0.1},
                                         LieFrequencies{0.05, 0.05, 0.5}}) {
        const auto run = run_algorithm_IV(500, freqs, theta, rng);
        for (int i : run.partition.N) CHECK(run.ledger[i].type != LieType::C);
      }
  }
}

TEST_CASE("expected_sizes closed forms") {
  const ExpectedSizes e = expected_sizes({0.2, 0.2, 0.1}, 1000);
  CHECK(e.u == doctest::Approx(600.0).epsilon(1e-12));
  CHECK(e.l == doctest::Approx(175.0).epsilon(1e-12));
  CHECK(e.n == doctest::Approx(225.0).epsilon(1e-12));
  CHECK(e.m == doctest::Approx(400.0).epsilon(1e-12));

  SUBCASE("honest limit") {
    const ExpectedSizes h = expected_sizes({0, 0, 0}, 1000);
    CHECK(h.u == doctest::Approx(750.0));
    CHECK(h.l == doctest::Approx(0.0));
    CHECK(h.n == doctest::Approx(250.0));
    CHECK(h.m == doctest::Approx(250.0));
  }

  SUBCASE("both |M| forms agree and the partition sums to s") {
    RandomStream rng(3);
    for (int t = 0; t < 100; ++t) {
      LieFrequencies f;
      f.fa = rng.next_double() / 3.0;
      f.fb = rng.next_double() / 3.0;
      f.fc = rng.next_double() / 3.0;
      const ExpectedSizes e2 = expected_sizes(f, 1000);
      CHECK(std::abs(e2.m - expected_m_compact(f, 1000)) < 1e-12);
      CHECK(std::abs(e2.u + e2.l + e2.n - 1000.0) < 1e-12);
      CHECK(std::abs(e2.l - expected_algorithm_I(f, 1000)) < 1e-12);
    }
  }
}

TEST_CASE("size_tolerance_check") {
  CHECK(size_tolerance_check(600, 600, 1000, 4).pass);
  const ToleranceCheck far = size_tolerance_check(700, 600, 1000, 4);
  CHECK_FALSE(far.pass);
  CHECK(far.tolerance == doctest::Approx(4.0 * std::sqrt(1000 * 0.6 * 0.4)));
  CHECK(size_tolerance_check(640, 600, 1000, 4).pass);
  // the floor keeps tiny expectations testable
  CHECK(size_tolerance_check(3, 0, 1000, 4).pass);
  CHECK_FALSE(size_tolerance_check(5, 0, 1000, 4).pass);
  CHECK_THROWS_AS(size_tolerance_check(0, 2000, 1000, 4), std::invalid_argument);
  CHECK_THROWS_AS(size_tolerance_check(0, 500, 1000, 0.0), std::invalid_argument);
}

TEST_CASE("delayed announcements realize the quarter profile and match measure-first") {
  RandomStream rng(31);
  const int s = 400, runs = 400;
  double sum_delayed[3] = {0, 0, 0}, sum_iid[3] = {0, 0, 0};
  double sum2_delayed[3] = {0, 0, 0}, sum2_iid[3] = {0, 0, 0};
  long type_counts[4] = {0, 0, 0, 0};
  for (int t = 0; t < runs; ++t) {
    std::vector<uint8_t> q(s);
    for (auto& qi : q) qi = static_cast<uint8_t>(rng.coin());

    auto pairs_d = make_pairs(PairKind::AlgIII, q, 0.25 * M_PI);
    auto bob_d = bob_announce_delayed(pairs_d, rng);
    for (const auto& rec : bob_d.ledger) ++type_counts[static_cast<int>(rec.type)];
    Partition part_d = algorithm_III_partition(pairs_d, q, bob_d.announced, rng);

    auto pairs_i = make_pairs(PairKind::AlgIII, q, 0.25 * M_PI);
    const auto plan = assign_lie_types(s, {0.25, 0.25, 0.25}, AssignMode::Iid, rng);
    auto bob_i = bob_measure_and_announce(pairs_i, plan, rng);
    Partition part_i = algorithm_III_partition(pairs_i, q, bob_i.announced, rng);

    const double d_sizes[3] = {double(part_d.U.size()), double(part_d.L.size()),
                               double(part_d.N.size())};
    const double i_sizes[3] = {double(part_i.U.size()), double(part_i.L.size()),
                               double(part_i.N.size())};
    for (int k = 0; k < 3; ++k) {
      sum_delayed[k] += d_sizes[k];
      sum2_delayed[k] += d_sizes[k] * d_sizes[k];
      sum_iid[k] += i_sizes[k];
      sum2_iid[k] += i_sizes[k] * i_sizes[k];
    }
  }
  // realized lie types are uniform over {honest, a, b, c}
  for (int t = 0; t < 4; ++t)
    CHECK(within_sigma(type_counts[t], 0.25 * s * runs, s * runs));
  // two-sample mean comparison per set
  for (int k = 0; k < 3; ++k) {
    const double mean_d = sum_delayed[k] / runs, mean_i = sum_iid[k] / runs;
    const double var_d = sum2_delayed[k] / runs - mean_d * mean_d;
    const double var_i = sum2_iid[k] / runs - mean_i * mean_i;
    const double se = std::sqrt(var_d / runs + var_i / runs);
    CHECK(std::abs(mean_d - mean_i) <= 4.0 * std::max(0.5, se));
  }
}
