#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nnecon/harness/config.hpp"
#include "nnecon/harness/run.hpp"
#include "nnecon/harness/verify.hpp"

namespace {

using namespace nnecon::harness;

enum class Mode { SubscriptionNe, AdNe, Bargain, Sweep };

struct Args {
  std::string config;
  std::string out;
  int workers = 1;
  double tol = 1e-10;
  std::string suite = "all";
  bool list = false;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError("config", what);
}

int run(Mode mode, const Args& args) {
  ScenarioConfig cfg;
  try {
    cfg = load_config(args.config);
    switch (mode) {
      case Mode::SubscriptionNe:
        require(cfg.model == ModelKind::Subscription, "subscription-ne needs model=subscription");
        require(!cfg.bargain, "use the bargain subcommand for bargained side payments");
        require(!cfg.sweep && !cfg.series, "use the sweep subcommand for sweeps");
        break;
      case Mode::AdNe:
        require(cfg.model == ModelKind::Advertisement, "ad-ne needs model=advertisement");
        require(!cfg.bargain, "use the bargain subcommand for bargained side payments");
        require(!cfg.sweep && !cfg.series, "use the sweep subcommand for sweeps");
        break;
      case Mode::Bargain:
        require(cfg.bargain.has_value(), "bargain needs bargain=pre or bargain=post");
        require(!cfg.sweep && !cfg.series, "use the sweep subcommand for sweeps");
        break;
      case Mode::Sweep:
        require(cfg.sweep || cfg.series, "sweep needs a sweep= or series= line");
        break;
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << args.config << ":" << e.line() << ": " << e.what() << '\n';
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  RunOptions opts;
  opts.workers = args.workers;
  opts.solve.abs_tol = args.tol;
  const std::vector<SweepRow> rows = run_scenario(cfg, opts);

  const std::string out = !args.out.empty() ? args.out : cfg.output;
  try {
    if (out.empty() || out == "-") {
      emit_csv(rows, std::cout);
    } else {
      emit_csv(rows, out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  if (mode != Mode::Sweep && rows.front().error) {
    std::cerr << "error: " << *rows.front().error << '\n';
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equilibria and bargained side payments in a two-sided ISP/CP market"};
  app.require_subcommand(1);
  Args args;

  auto add_run = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", args.config, "scenario file (key=value lines)")->required();
    sub->add_option("--out", args.out, "CSV destination, '-' for stdout");
    sub->add_option("--workers", args.workers, "concurrent sweep points")
        ->check(CLI::PositiveNumber);
    sub->add_option("--tol", args.tol, "absolute solver tolerance")->check(CLI::PositiveNumber);
    return sub;
  };
  CLI::App* ne = add_run("subscription-ne", "Nash equilibrium of the subscription market");
  CLI::App* ad = add_run("ad-ne", "equilibrium of the advertisement market");
  CLI::App* bargain = add_run("bargain", "Nash-bargained side payment");
  CLI::App* sweep = add_run("sweep", "parameter sweep written as CSV");

  CLI::App* verify_cmd = app.add_subcommand("verify", "run verification suites");
  verify_cmd->add_option("suite", args.suite, "suite name, alias, or 'all'");
  verify_cmd->add_flag("--list", args.list, "list suites and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*ne) return run(Mode::SubscriptionNe, args);
  if (*ad) return run(Mode::AdNe, args);
  if (*bargain) return run(Mode::Bargain, args);
  if (*sweep) return run(Mode::Sweep, args);

  if (args.list) {
    for (const SuiteInfo& s : suites()) {
      std::cout << s.name << '\t' << (s.alias.empty() ? "-" : s.alias) << '\t' << s.title << '\n';
    }
    return 0;
  }
  return verify(args.suite, std::cout);
}
