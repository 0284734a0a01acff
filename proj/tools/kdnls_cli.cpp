#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <set>

#include "kdnls/kdnls.hpp"

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  bool seed_set = false;
  unsigned threads = 1;
  bool strict = false;
  bool dry_run = false;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* sub, Flags& f, bool experiment) {
  sub->add_option("--out", f.out, "output directory");
  sub->add_option("--threads", f.threads, "worker threads")->check(CLI::Range(1u, 256u));
  sub->add_flag("--strict", f.strict, "treat warnings as failures");
  if (!experiment) return;
  sub->add_option("--config", f.config, "config file (key = value)")->check(CLI::ExistingFile);
  sub->add_option_function<std::uint64_t>(
      "--seed", [&f](const std::uint64_t& s) { f.seed = s, f.seed_set = true; }, "override seed");
  sub->add_option("--set", f.overrides, "override a config key, key=value (repeatable)");
  sub->add_flag("--dry-run", f.dry_run, "print the resolved config and exit");
}

int run_experiment_cmd(const std::string& name, const Flags& f) {
  using namespace kdnls;
  const ExperimentKind kind = parse_kind(name);
  std::set<std::string> keys;
  ExperimentConfig c = f.config.empty() ? ExperimentConfig{} : load_config(f.config, &keys);
  if (keys.count("experiment") && c.kind != kind)
    throw ConfigError("config declares experiment = " + to_string(c.kind) + " but the subcommand is " + name);
  c.kind = kind;
  for (const auto& kv : f.overrides) apply_override(c, kv);
  if (f.seed_set) c.seed = f.seed;
  validate(c);
  if (f.dry_run) {
    std::cout << canonical_text(c);
    return 0;
  }
  Report r = run_experiment(c, RunOptions{f.threads});
  const std::filesystem::path dir = f.out.empty() ? std::filesystem::path("out") / name : std::filesystem::path(f.out);
  write_report(r, dir);
  for (const auto& n : r.notes) std::cerr << "note: " << n << "\n";
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  for (const auto& [k, v] : r.metrics) std::cout << k << " = " << v << "\n";
  const bool pass = r.pass && !(f.strict && !r.warnings.empty());
  std::cout << name << ": " << (pass ? "PASS" : "FAIL") << "  (report in " << (dir / "report.txt").string() << ")\n";
  return pass ? 0 : 1;
}

int run_verify(const Flags& f) {
  kdnls::AcceptanceOptions o;
  o.run.threads = f.threads;
  o.strict = f.strict;
  if (!f.out.empty()) o.out = f.out;
  o.on_result = [](const kdnls::CriterionResult& r) {
    std::cout << kdnls::format_result(r) << std::endl;
  };
  bool all = true;
  for (const auto& r : kdnls::run_acceptance(o)) all = all && r.pass;
  std::cout << (all ? "ALL PASS" : "SOME CRITERIA FAILED") << "\n";
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"KDNLS simulation and verification lab"};
  app.require_subcommand(1);
  Flags flags;
  const std::vector<std::pair<std::string, std::string>> experiments = {
      {"solve", "time-step one configuration, with optional identity checks"},
      {"picard", "Duhamel fixed-point iteration for eps > 0"},
      {"dissipation-study", "L2 behaviour for beta = -b, 0, +b"},
      {"eps-convergence", "distances to a small-eps reference along a ladder"},
      {"lipschitz", "solution distance against data perturbation size"},
      {"h2-growth", "energy ledger and growth envelope fit"},
      {"lemma-bench", "ratio suites on a random ensemble"}};
  std::string chosen;
  for (const auto& [name, help] : experiments) {
    auto* sub = app.add_subcommand(name, help);
    add_common(sub, flags, true);
    sub->callback([&chosen, n = name] { chosen = n; });
  }
  auto* verify = app.add_subcommand("verify", "run the acceptance suite");
  add_common(verify, flags, false);
  verify->callback([&chosen] { chosen = "verify"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  try {
    return chosen == "verify" ? run_verify(flags) : run_experiment_cmd(chosen, flags);
  } catch (const kdnls::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
