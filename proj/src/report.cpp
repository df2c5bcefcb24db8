#include "qcf/report.hpp"

#include <cmath>

namespace qcf {

namespace {

const char* bob_mode_name(BobMode m) {
  return m == BobMode::MeasureFirst ? "measure-first" : "delayed";
}

const char* b94_mode_name(B94Mode m) {
  return m == B94Mode::Conditional ? "conditional" : "collective";
}

}  // namespace

ojson code_json(const LinearCode& code, bool include_generator) {
  ojson j;
  j["name"] = code.name;
  j["s"] = code.s;
  j["k"] = code.k;
  j["d"] = code.d;
  j["provenance"] = code.provenance == LinearCode::Provenance::Preset ? "preset" : "verified";
  if (include_generator) {
    ojson rows = ojson::array();
    for (const auto& row : code.generator) {
      std::string bits;
      for (auto b : row) bits.push_back(static_cast<char>('0' + b));
      rows.push_back(bits);
    }
    j["generator"] = rows;
  }
  return j;
}

ojson config_json(const ProtocolConfig& config) {
  ojson j;
  j["code"] = code_json(config.code);
  j["theta"] = kProtocolTheta;
  j["z"] = config.z;
  j["nontrivial_threshold"] = config.threshold();
  j["fa"] = config.bob_freqs.fa;
  j["fb"] = config.bob_freqs.fb;
  j["fc"] = config.bob_freqs.fc;
  j["mode"] = bob_mode_name(config.bob_mode);
  j["b94"] = b94_mode_name(config.b94_mode);
  if (config.b94_mode == B94Mode::Collective)
    j["withhold_fraction"] = config.withhold_fraction;
  return j;
}

ojson check_record_json(const CheckRecord& r) {
  ojson j;
  j["id"] = to_string(r.id);
  j["exact"] = r.exact;
  j["observed"] = r.observed;
  j["expected"] = r.expected;
  j["tolerance"] = r.tolerance;
  j["pass"] = r.pass;
  return j;
}

ojson outcome_json(const Outcome& o) {
  ojson j;
  if (o.completed()) {
    j["status"] = "completed";
    j["c"] = o.c;
  } else {
    j["status"] = "aborted";
    j["check"] = to_string(o.check);
    j["by"] = to_string(o.by);
  }
  return j;
}

ojson run_report_json(const ProtocolConfig& config, std::uint64_t seed, const RunResult& result,
                      bool include_transcript) {
  ojson j;
  j["report"] = "run";
  j["version"] = 1;
  j["config"] = config_json(config);
  j["seed"] = seed;
  j["outcome"] = outcome_json(result.outcome);
  ojson checks = ojson::array();
  for (const auto& r : result.transcript.checks) checks.push_back(check_record_json(r));
  j["checks"] = checks;
  if (result.size_u >= 0) {
    ojson sets;
    sets["U"] = result.size_u;
    sets["L"] = result.size_l;
    sets["N"] = result.size_n;
    sets["M"] = result.size_l + result.size_n;
    j["sets"] = sets;
  }
  if (result.outcome.completed()) {
    j["alice_c"] = result.alice_c;
    j["bob_c"] = result.bob_c;
  }
  j["cheat_activated"] = result.cheat_activated;
  if (include_transcript) {
    ojson lines = ojson::array();
    for (const auto& l : result.transcript.lines) lines.push_back(l);
    j["transcript"] = lines;
  }
  return j;
}

ojson campaign_report_json(const ProtocolConfig& config, std::uint64_t seed,
                           const std::string& alice, const std::string& bob,
                           const CampaignStats& stats) {
  ojson j;
  j["report"] = "campaign";
  j["version"] = 1;
  j["config"] = config_json(config);
  j["seed"] = seed;
  j["alice"] = alice;
  j["bob"] = bob;
  j["trials"] = stats.trials;
  j["completed"] = stats.completed;
  j["abort_rate"] = stats.abort_rate();
  j["p_c0"] = stats.trials > 0 ? static_cast<double>(stats.c0) / stats.trials : 0.0;
  j["p_c1"] = stats.trials > 0 ? static_cast<double>(stats.c1) / stats.trials : 0.0;
  ojson hist = ojson::object();
  for (const auto& [check, count] : stats.abort_histogram) hist[check] = count;
  j["abort_histogram"] = hist;
  j["cheat_activated"] = stats.activated;
  ojson act = ojson::object();
  for (const auto& [check, count] : stats.activated_abort_histogram) act[check] = count;
  j["activated_abort_histogram"] = act;
  j["activated_completed"] = stats.activated_completed;

  if (stats.sized_runs > 0) {
    const double n = static_cast<double>(stats.sized_runs);
    const ExpectedSizes exp = expected_sizes(config.effective_freqs(), config.s());
    auto block = [&](double sum, double sum2, double expected) {
      ojson b;
      const double mean = sum / n;
      b["mean"] = mean;
      b["stddev"] = std::sqrt(std::max(0.0, sum2 / n - mean * mean));
      b["expected"] = expected;
      return b;
    };
    ojson sizes;
    sizes["runs"] = stats.sized_runs;
    sizes["U"] = block(stats.sum_u, stats.sum_u2, exp.u);
    sizes["L"] = block(stats.sum_l, stats.sum_l2, exp.l);
    sizes["N"] = block(stats.sum_n, stats.sum_n2, exp.n);
    sizes["M"] = block(stats.sum_m, stats.sum_m2, exp.m);
    j["set_sizes"] = sizes;
  }
  return j;
}

ojson bias_report_json(const BiasReport& r) {
  ojson j;
  j["report"] = "bias";
  j["version"] = 1;
  j["trials"] = r.trials;
  j["p0"] = r.p0;
  j["p1"] = r.p1;
  j["p_abort"] = r.p_abort;
  j["epsilon_hat"] = r.epsilon_hat;
  j["epsilon_hat_abort_loss"] = r.epsilon_hat_abort_loss;
  j["ci_halfwidth"] = r.ci_halfwidth;
  ojson hist = ojson::object();
  for (const auto& [check, count] : r.abort_histogram) hist[check] = count;
  j["abort_histogram"] = hist;
  return j;
}

std::string render(const ojson& j) { return j.dump(2) + "\n"; }

}  // namespace qcf
