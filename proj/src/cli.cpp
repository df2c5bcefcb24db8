#include "qcf/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qcf/adversary.hpp"
#include "qcf/codes.hpp"
#include "qcf/protocol.hpp"

namespace qcf {

namespace {

struct CommonOpts {
  std::string code = "hamming-63-57";
  std::string code_file;
  double fa = 0.1, fb = 0.1, fc = 0.05;
  double z = 4.0;
  double threshold = -1.0;
  std::string mode = "measure-first";
  std::string b94 = "conditional";
  double withhold = 0.2;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out;
  bool timing = false;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_protocol_knobs) {
  cmd->add_option("--seed", o.seed, "Random seed (default: QCF_SEED env or 0)")
      ->each([&o](const std::string&) { o.seed_given = true; });
  cmd->add_option("--out", o.out, "Write the report to a file instead of stdout");
  if (with_protocol_knobs) {
    cmd->add_option("--code", o.code, "Code preset (hamming-63-57, ..., repetition-N)");
    cmd->add_option("--code-file", o.code_file, "Code descriptor file (s k d + rows)");
    cmd->add_option("--fa", o.fa, "Bob's type-a lie frequency");
    cmd->add_option("--fb", o.fb, "Bob's type-b lie frequency");
    cmd->add_option("--fc", o.fc, "Bob's type-c lie frequency");
    cmd->add_option("--z", o.z, "Tolerance multiplier for statistical checks");
    cmd->add_option("--threshold", o.threshold, "Non-trivial count threshold (default s/8)");
    cmd->add_option("--mode", o.mode, "Bob's mode: measure-first | delayed")
        ->check(CLI::IsMember({"measure-first", "delayed"}));
    cmd->add_option("--b94", o.b94, "Step 9.4 mode: conditional | collective")
        ->check(CLI::IsMember({"conditional", "collective"}));
    cmd->add_option("--withhold", o.withhold,
                    "Fraction of beta measurements Bob defers (collective mode)");
    cmd->add_flag("--timing", o.timing, "Add wall time to the report (breaks byte identity)");
  }
}

std::uint64_t resolve_seed(const CommonOpts& o) {
  if (o.seed_given) return o.seed;
  if (const char* env = std::getenv("QCF_SEED")) return std::strtoull(env, nullptr, 10);
  return 0;
}

ProtocolConfig make_config(const CommonOpts& o) {
  ProtocolConfig config;
  config.code = o.code_file.empty() ? build_code(o.code) : load_code_file(o.code_file);
  config.bob_freqs = LieFrequencies{o.fa, o.fb, o.fc};
  config.z = o.z;
  config.nontrivial_threshold = o.threshold;
  config.bob_mode = (o.mode == "delayed") ? BobMode::Delayed : BobMode::MeasureFirst;
  config.b94_mode = (o.b94 == "collective") ? B94Mode::Collective : B94Mode::Conditional;
  config.withhold_fraction = o.withhold;
  config.validate();
  return config;
}

class Timer {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(clock::now() - start_).count();
  }

 private:
  using clock = std::chrono::steady_clock;
  clock::time_point start_ = clock::now();
};

void write_csv(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write csv file: " + path);
  f << content;
}

}  // namespace

ojson run_formula_cell(const LieFrequencies& freqs, int s, double theta, double z,
                       std::uint64_t seed) {
  RandomStream root(seed);
  ojson cell;
  cell["fa"] = freqs.fa;
  cell["fb"] = freqs.fb;
  cell["fc"] = freqs.fc;
  cell["s"] = s;
  cell["theta"] = theta;
  bool all_pass = true;

  auto check_json = [&](double observed, double expected) {
    const ToleranceCheck tc = size_tolerance_check(observed, expected, s, z);
    all_pass = all_pass && tc.pass;
    ojson j;
    j["observed"] = observed;
    j["expected"] = expected;
    j["sigma"] = tc.sigma;
    j["tolerance"] = tc.tolerance;
    j["pass"] = tc.pass;
    return j;
  };

  // Algorithm I: product states, random prepared (p, q).
  {
    RandomStream rng = root.split(1);
    std::vector<QubitOutcome> prepared(s);
    std::vector<PairState> pairs;
    pairs.reserve(s);
    for (int i = 0; i < s; ++i) {
      prepared[i] = QubitOutcome{rng.coin(), rng.coin()};
      pairs.push_back(prepare_product(prepared[i]));
    }
    const auto plan = assign_lie_types(s, freqs, AssignMode::Exact, rng);
    const auto bob = bob_measure_and_announce(pairs, plan, rng);
    const auto detected = algorithm_I_detect(prepared, bob.announced);
    cell["alg1_detected"] =
        check_json(static_cast<double>(detected.size()), expected_algorithm_I(freqs, s));
  }

  // Algorithm II: maximally entangled states; expected 2l.
  {
    RandomStream rng = root.split(2);
    std::vector<PairState> pairs;
    pairs.reserve(s);
    for (int i = 0; i < s; ++i) pairs.push_back(prepare_pair(PairKind::MaxEntangled, 0, 0.0));
    const auto plan = assign_lie_types(s, freqs, AssignMode::Exact, rng);
    const auto bob = bob_measure_and_announce(pairs, plan, rng);
    const auto detected = algorithm_II_detect(pairs, bob.announced, rng);
    cell["alg2_detected"] =
        check_json(static_cast<double>(detected.size()), 2.0 * expected_algorithm_I(freqs, s));
  }

  // Algorithm III: sizes per Eqs. (9)-(13), no type-b lies in N.
  {
    RandomStream rng = root.split(3);
    std::vector<uint8_t> q(s);
    std::vector<PairState> pairs;
    pairs.reserve(s);
    for (int i = 0; i < s; ++i) {
      q[i] = static_cast<std::uint8_t>(rng.coin());
      pairs.push_back(prepare_pair(PairKind::AlgIII, q[i], theta));
    }
    const auto plan = assign_lie_types(s, freqs, AssignMode::Exact, rng);
    const auto bob = bob_measure_and_announce(pairs, plan, rng);
    Partition part = algorithm_III_partition(pairs, q, bob.announced, rng);
    part.validate();
    const ExpectedSizes exp = expected_sizes(freqs, s);
    ojson alg3;
    alg3["U"] = check_json(static_cast<double>(part.U.size()), exp.u);
    alg3["L"] = check_json(static_cast<double>(part.L.size()), exp.l);
    alg3["N"] = check_json(static_cast<double>(part.N.size()), exp.n);
    alg3["M"] = check_json(static_cast<double>(part.M().size()), exp.m);
    int type_b_in_n = 0;
    for (int i : part.N)
      if (bob.ledger[i].type == LieType::B) ++type_b_in_n;
    alg3["no_type_b_in_N"] = (type_b_in_n == 0);
    all_pass = all_pass && type_b_in_n == 0;
    cell["alg3"] = alg3;
  }

  // Algorithm IV: |M'| per its closed form, no type-c lies in N'.
  {
    RandomStream rng = root.split(4);
    std::vector<uint8_t> q(s);
    std::vector<PairState> pairs;
    pairs.reserve(s);
    for (int i = 0; i < s; ++i) {
      q[i] = static_cast<std::uint8_t>(rng.coin());
      pairs.push_back(prepare_pair(PairKind::AlgIV, q[i], theta));
    }
    const auto plan = assign_lie_types(s, freqs, AssignMode::Exact, rng);
    const auto bob = bob_measure_and_announce(pairs, plan, rng);
    Partition part = algorithm_IV_partition(pairs, q, bob.announced, rng);
    part.validate();
    ojson alg4;
    alg4["M"] = check_json(static_cast<double>(part.M().size()),
                           expected_m_algorithm_IV(freqs, s));
    int type_c_in_n = 0;
    for (int i : part.N)
      if (bob.ledger[i].type == LieType::C) ++type_c_in_n;
    alg4["no_type_c_in_Nprime"] = (type_c_in_n == 0);
    all_pass = all_pass && type_c_in_n == 0;
    cell["alg4"] = alg4;
  }

  cell["pass"] = all_pass;
  return cell;
}

namespace {

int cmd_flip(const CommonOpts& o, bool transcript, std::string& output) {
  const ProtocolConfig config = make_config(o);
  const std::uint64_t seed = resolve_seed(o);
  Timer timer;
  HonestAlice alice;
  HonestBob bob;
  const RunResult rr = run_protocol(alice, bob, config, seed);
  ojson report = run_report_json(config, seed, rr, transcript);
  if (o.timing) report["timing_ms"] = timer.ms();
  output = render(report);
  return rr.outcome.completed() ? 0 : 3;
}

int cmd_montecarlo(const CommonOpts& o, long trials, int threads, const std::string& csv,
                   std::string& output) {
  const ProtocolConfig config = make_config(o);
  const std::uint64_t seed = resolve_seed(o);
  Timer timer;
  const CampaignStats stats = run_campaign("honest", "honest", config, trials, seed, threads);
  ojson report = campaign_report_json(config, seed, "honest", "honest", stats);
  if (o.timing) report["timing_ms"] = timer.ms();
  output = render(report);
  if (!csv.empty() && report.contains("set_sizes")) {
    std::ostringstream table;
    table << "set,mean,stddev,expected\n";
    for (const char* set : {"U", "L", "N", "M"}) {
      const auto& b = report["set_sizes"][set];
      table << set << "," << b["mean"].dump() << "," << b["stddev"].dump() << ","
            << b["expected"].dump() << "\n";
    }
    write_csv(csv, table.str());
  }
  return 0;
}

int cmd_attack(const CommonOpts& o, const std::string& alice, const std::string& bob,
               long trials, int threads, std::string& output) {
  const ProtocolConfig config = make_config(o);
  const std::uint64_t seed = resolve_seed(o);
  // Fail fast on unknown strategy names.
  make_alice_strategy(alice);
  make_bob_strategy(bob);
  Timer timer;
  const CampaignStats stats = run_campaign(alice, bob, config, trials, seed, threads);
  ojson report = campaign_report_json(config, seed, alice, bob, stats);
  report["bias"] = bias_report_json(bias_from_stats(stats));
  if (o.timing) report["timing_ms"] = timer.ms();
  output = render(report);
  return 0;
}

int cmd_verify_formulas(const CommonOpts& o, int s, std::vector<std::string> freq_specs,
                        std::vector<double> thetas, const std::string& csv,
                        std::string& output) {
  if (freq_specs.empty())
    freq_specs = {"0.2,0.2,0.1", "0.1,0.3,0.05", "0.3,0.1,0.2"};
  if (thetas.empty()) thetas = {kProtocolTheta};
  std::vector<LieFrequencies> grid;
  for (const auto& spec : freq_specs) {
    LieFrequencies f;
    if (std::sscanf(spec.c_str(), "%lf,%lf,%lf", &f.fa, &f.fb, &f.fc) != 3 || !f.valid())
      throw std::invalid_argument("bad --freqs entry: " + spec);
    grid.push_back(f);
  }
  const std::uint64_t seed = resolve_seed(o);
  ojson report;
  report["report"] = "verify-formulas";
  report["version"] = 1;
  report["s"] = s;
  report["seed"] = seed;
  ojson cells = ojson::array();
  bool all_pass = true;
  std::uint64_t cell_id = 0;
  for (double theta : thetas)
    for (const auto& freqs : grid) {
      ojson cell = run_formula_cell(freqs, s, theta, o.z,
                                    RandomStream(seed).split(cell_id++).next_u64());
      all_pass = all_pass && cell["pass"].get<bool>();
      cells.push_back(std::move(cell));
    }
  report["cells"] = cells;
  report["all_pass"] = all_pass;
  output = render(report);
  if (!csv.empty()) {
    std::ostringstream table;
    table << "fa,fb,fc,s,theta,quantity,observed,expected,sigma,pass\n";
    for (const auto& cell : report["cells"]) {
      auto row = [&](const std::string& name, const ojson& b) {
        table << cell["fa"].dump() << "," << cell["fb"].dump() << "," << cell["fc"].dump()
              << "," << cell["s"].dump() << "," << cell["theta"].dump() << "," << name << ","
              << b["observed"].dump() << "," << b["expected"].dump() << "," << b["sigma"].dump()
              << "," << (b["pass"].get<bool>() ? "1" : "0") << "\n";
      };
      row("alg1_detected", cell["alg1_detected"]);
      row("alg2_detected", cell["alg2_detected"]);
      for (const char* set : {"U", "L", "N", "M"}) row(std::string("alg3_") + set,
                                                       cell["alg3"][set]);
      row("alg4_M", cell["alg4"]["M"]);
    }
    write_csv(csv, table.str());
  }
  return all_pass ? 0 : 1;
}

int cmd_code(const std::string& preset, const std::string& code_file, const std::string& random,
             bool show_generator, std::string& output) {
  LinearCode code;
  if (!code_file.empty()) code = load_code_file(code_file);
  else if (!random.empty()) {
    int s = 0, k = 0;
    unsigned long long seed = 0;
    if (std::sscanf(random.c_str(), "%d,%d,%llu", &s, &k, &seed) != 3)
      throw std::invalid_argument("--random wants s,k,seed");
    code = build_code_random(s, k, seed);
  } else {
    code = build_code_preset(preset);
  }
  const ParityCensus census = parity_census(code);
  ojson report = code_json(code, show_generator);
  report["report"] = "code";
  ojson census_json;
  census_json["even"] = census.even;
  census_json["odd"] = census.odd;
  report["parity_census"] = census_json;
  ojson feas;
  feas["two_d_over_s"] = 2.0 * code.d / code.s;
  feas["fa_plus_fc_upper"] = 0.5;
  feas["feasible_region_nonempty"] = 2.0 * code.d / code.s < 0.5;
  report["feasibility"] = feas;
  {
    char line[128];
    std::snprintf(line, sizeof(line), "2d/s = %.4g < fa+fc < 0.5", 2.0 * code.d / code.s);
    report["feasibility_line"] = line;
  }
  output = render(report);
  return 0;
}

}  // namespace

CliResult run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Quantum coin-flipping simulator and verification harness"};
  app.require_subcommand(1);

  CommonOpts flip_o, mc_o, attack_o, vf_o;
  bool flip_transcript = false;
  long mc_trials = 1000, attack_trials = 1000;
  int mc_threads = 1, attack_threads = 1;
  std::string mc_csv, vf_csv;
  std::string attack_alice = "honest", attack_bob = "honest";
  int vf_s = 10000;
  std::vector<std::string> vf_freqs;
  std::vector<double> vf_thetas;
  std::string code_preset = "hamming-63-57", code_file_only, code_random;
  bool code_show_generator = false;

  CLI::App* flip = app.add_subcommand("flip", "Run one protocol instance");
  add_common(flip, flip_o, true);
  flip->add_flag("--transcript", flip_transcript, "Include the message transcript");

  CLI::App* mc = app.add_subcommand("montecarlo", "Honest-vs-honest campaign");
  add_common(mc, mc_o, true);
  mc->add_option("--trials", mc_trials, "Number of protocol runs")->check(CLI::PositiveNumber);
  mc->add_option("--threads", mc_threads, "Worker threads");
  mc->add_option("--csv", mc_csv, "Also write the set-size table as CSV");

  CLI::App* attack = app.add_subcommand("attack", "Strategy-pair bias estimation");
  add_common(attack, attack_o, true);
  attack->add_option("--alice", attack_alice, "Alice strategy name");
  attack->add_option("--bob", attack_bob, "Bob strategy name");
  attack->add_option("--trials", attack_trials, "Number of protocol runs")
      ->check(CLI::PositiveNumber);
  attack->add_option("--threads", attack_threads, "Worker threads");

  CLI::App* vf = app.add_subcommand("verify-formulas",
                                    "Run algorithms I-IV standalone over a frequency grid");
  add_common(vf, vf_o, false);
  vf->add_option("--s", vf_s, "Qubit count per cell")->check(CLI::PositiveNumber);
  vf->add_option("--freqs", vf_freqs, "Grid cell fa,fb,fc (repeatable)");
  vf->add_option("--theta", vf_thetas, "Preparation angle (repeatable)");
  vf->add_option("--z", vf_o.z, "Tolerance multiplier");
  vf->add_option("--csv", vf_csv, "Also write the observed/expected table as CSV");

  CLI::App* code_cmd = app.add_subcommand("code", "Inspect a code");
  code_cmd->add_option("--preset", code_preset, "Preset name");
  code_cmd->add_option("--code-file", code_file_only, "Code descriptor file");
  code_cmd->add_option("--random", code_random, "Random code as s,k,seed");
  code_cmd->add_flag("--show-generator", code_show_generator, "Include generator rows");
  std::string code_out;
  code_cmd->add_option("--out", code_out, "Write the report to a file");

  std::vector<const char*> argv;
  argv.push_back("qcf");
  for (const auto& a : args) argv.push_back(a.c_str());

  CliResult result;
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    std::ostringstream os;
    if (e.get_exit_code() == 0) {
      result.exit_code = 0;
      os << app.help();
    } else {
      result.exit_code = 2;
      os << "error: " << e.what() << "\n";
    }
    result.output = os.str();
    return result;
  }

  std::string out_path;
  try {
    if (flip->parsed()) {
      out_path = flip_o.out;
      result.exit_code = cmd_flip(flip_o, flip_transcript, result.output);
    } else if (mc->parsed()) {
      out_path = mc_o.out;
      result.exit_code = cmd_montecarlo(mc_o, mc_trials, mc_threads, mc_csv, result.output);
    } else if (attack->parsed()) {
      out_path = attack_o.out;
      result.exit_code =
          cmd_attack(attack_o, attack_alice, attack_bob, attack_trials, attack_threads,
                     result.output);
    } else if (vf->parsed()) {
      out_path = vf_o.out;
      result.exit_code =
          cmd_verify_formulas(vf_o, vf_s, vf_freqs, vf_thetas, vf_csv, result.output);
    } else if (code_cmd->parsed()) {
      out_path = code_out;
      result.exit_code =
          cmd_code(code_preset, code_file_only, code_random, code_show_generator, result.output);
    }
  } catch (const std::exception& e) {
    result.exit_code = 2;
    result.output = std::string("error: ") + e.what() + "\n";
    return result;
  }

  if (!out_path.empty() && result.exit_code != 2) {
    std::ofstream f(out_path);
    if (!f) {
      result.exit_code = 2;
      result.output = "error: cannot write output file: " + out_path + "\n";
      return result;
    }
    f << result.output;
  }
  return result;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  const CliResult result = run_cli(args);
  std::cout << result.output;
  return result.exit_code;
}

}  // namespace qcf
