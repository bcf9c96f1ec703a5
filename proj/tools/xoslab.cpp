// Command-line front end: instance generation, verification reports, the
// welfare oracle and protocol runs.
//
// Exit codes: 0 all assertions passed, 1 an assertion failed, 2 usage or
// input error.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "xoslab/lab.hpp"
#include "xoslab/protocol.hpp"
#include "xoslab/valuation.hpp"

using namespace xoslab;

namespace {

constexpr int kOk = 0;
constexpr int kAssertionFailed = 1;
constexpr int kUsage = 2;

struct Options {
  lab::ExperimentConfig cfg;
  std::string variant = "nu";
  std::string in_path;
  bool runtime = false;
};

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open '" + path + "' for writing");
  out << text;
}

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void add_common(CLI::App* cmd, Options& o, bool experiment) {
  cmd->add_option("--m", o.cfg.m, "number of items (multiple of 16)");
  cmd->add_option("--n", o.cfg.n, "clause pairs per bidder");
  cmd->add_option("--seed", o.cfg.seed, "RNG seed (default: $XOSLAB_SEED or 1)");
  cmd->add_option("--variant", o.variant, "nu or nu_prime")->check(CLI::IsMember({"nu", "nu_prime"}));
  cmd->add_option("--out", o.cfg.output_path, "output file (default stdout)");
  if (experiment) {
    cmd->add_option("--eps", o.cfg.eps, "margin as a fraction of m");
    cmd->add_option("--trials", o.cfg.trials, "number of sampled instances or joints");
    cmd->add_option("--workers", o.cfg.workers, "worker threads (0 = all cores)");
    cmd->add_flag("--runtime", o.runtime, "include wall time in the report");
  }
}

int emit(const lab::Report& base, const Options& o, double seconds) {
  lab::Report r = base;
  if (o.runtime) r.runtime_seconds = seconds;
  write_output(o.cfg.output_path, r.dump());
  for (const auto& c : r.checks) {
    if (c.status == lab::Status::Fail) std::cerr << "FAIL " << c.name << "\n";
  }
  return r.passed() ? kOk : kAssertionFailed;
}

template <class F>
int timed(const Options& o, F run) {
  const auto t0 = std::chrono::steady_clock::now();
  const lab::Report r = run();
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return emit(r, o, s);
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  if (const char* env = std::getenv("XOSLAB_SEED")) {
    try {
      o.cfg.seed = std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "XOSLAB_SEED is not an unsigned integer: " << env << "\n";
      return kUsage;
    }
  }

  CLI::App app{"Hard-instance laboratory for two-bidder binary-XOS auctions"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "sample one instance and write it as JSON");
  add_common(gen, o, false);

  auto* verify = app.add_subcommand("verify", "run a verification and write its report");
  verify->require_subcommand(1);
  auto* v_conc = verify->add_subcommand("concentration", "cross intersections against the exact deltas");
  auto* v_theta = verify->add_subcommand("theta", "opt = m and recovery of the special copy");
  auto* v_nu = verify->add_subcommand("nu-equivalence", "nu against nu_prime and i_star independence");
  auto* v_info = verify->add_subcommand("info", "information-theory identities");
  for (auto* c : {v_conc, v_theta, v_nu, v_info}) add_common(c, o, true);

  auto* opt = app.add_subcommand("opt", "welfare oracle on an instance file");
  opt->add_option("--in", o.in_path, "instance JSON ('-' for stdin)")->required();
  opt->add_option("--out", o.cfg.output_path, "output file (default stdout)");

  auto* run = app.add_subcommand("run", "execute a registered protocol over sampled instances");
  add_common(run, o, true);
  run->add_option("--protocol", o.cfg.protocol, "protocol name")->required()->check(CLI::IsMember(protocol_names()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    o.cfg.variant = parse_variant(o.variant);
    if (*gen) {
      lab::ExperimentConfig c = o.cfg;
      c.trials = 1;
      lab::validate(c);
      RngStream rng(o.cfg.seed, 0);
      write_output(o.cfg.output_path, lab::serialize_instance(sample_instance(c.m, c.n, c.variant, rng)));
      return kOk;
    }
    if (*opt) {
      const Instance inst = lab::parse_instance(read_input(o.in_path));
      const auto vals = build_valuations(inst);
      const auto best = opt_clause_pair(vals.vA, vals.vB);
      const auto alloc = opt_allocation(vals.vA, vals.vB, best);
      const lab::Json j{{"opt", best.value},
                        {"clause_alice", best.clause_a + 1},
                        {"clause_bob", best.clause_b + 1},
                        {"to_alice", alloc.to_alice.to_hex()},
                        {"to_bob", alloc.to_bob.to_hex()},
                        {"opt_equals_m", best.value == inst.m}};
      write_output(o.cfg.output_path, j.dump(2) + "\n");
      return kOk;
    }
    if (*v_conc) return timed(o, [&] { return lab::verify_concentration(o.cfg); });
    if (*v_theta) return timed(o, [&] { return lab::verify_theta_recovery(o.cfg); });
    if (*v_nu) return timed(o, [&] { return lab::verify_nu_equivalence(o.cfg); });
    if (*v_info) return timed(o, [&] { return lab::verify_info(o.cfg); });
    if (*run) return timed(o, [&] { return lab::run_protocol(o.cfg); });
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kAssertionFailed;
  }
  return kUsage;
}
