#include "harness/cli.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "planloop/errors.hpp"

namespace planloop::harness {

namespace {

const std::vector<std::string> kRunCommands{"closed-loop", "open-loop", "ablate"};

struct Parser {
  CLI::App app{"Imagine-and-plan loop harness for the toy driving world", "planloop"};
  Invocation inv;
  std::string selector = "directional";
  bool no_ess = false;
  bool no_tss = false;
  CLI::Option* seed = nullptr;

  Parser() {
    app.set_config("--config", "", "key = value file; command-line flags take precedence");
    app.require_subcommand(1);
    app.fallthrough();

    auto& c = inv.config;
    app.add_option("--scenarios", c.scenarios, "Scenario files or directories")->capture_default_str();
    app.add_option("--mode", c.mode, "agent_only, imagine or both")
        ->check(CLI::IsMember({"agent_only", "imagine", "both"}))
        ->capture_default_str();
    app.add_option("--selector", selector, "directional, smoothsel, softmin, maxcons, last, first")
        ->transform(CLI::IsMember({"directional", "smoothsel", "softmin", "maxcons", "last", "first"},
                                  CLI::ignore_case))
        ->capture_default_str();
    app.add_option("--theta", c.theta, "Early-stop TCR threshold")->capture_default_str();
    app.add_option("--max-refinements", c.max_refinements, "Refinement rounds after the first plan")
        ->capture_default_str();
    app.add_flag("--no-ess", no_ess, "Disable early stopping");
    app.add_flag("--no-tss", no_tss, "Use the last buffer entry instead of selecting");
    app.add_option("--noise-std", c.noise_std, "Imaginer actor position noise (m)")->capture_default_str();
    seed = app.add_option("--seed", c.seed, "Master seed");
    app.add_option("--replan-hz", c.replan_hz, "Closed-loop replanning rate")->capture_default_str();
    app.add_option("--jobs", c.jobs, "Scenario worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--out", c.out, "Output directory")->capture_default_str();
    app.add_flag("--traces", c.traces, "Write per-scenario ego trace CSVs");
    app.add_option("--dataset", c.dataset, "Open-loop dataset file")->capture_default_str();

    app.add_subcommand("closed-loop", "Run scenarios in closed loop and write outcomes plus summary");
    app.add_subcommand("open-loop", "Score planned trajectories against logged ground truth");
    app.add_subcommand("ablate", "ESS/TSS grid and selector comparison");
    app.add_subcommand("make-suite", "Generate the procedural scenario suite")
        ->add_option("--per-category", inv.per_category)
        ->capture_default_str();
    app.add_subcommand("make-dataset", "Generate the toy open-loop dataset from a suite")
        ->add_option("--count", inv.count)
        ->capture_default_str();
  }

  void finish() {
    inv.command = app.get_subcommands().front()->get_name();
    inv.config.selector = selector_from_string(selector);
    inv.config.ess = !no_ess;
    inv.config.tss = !no_tss;
    const bool needs_seed = std::find(kRunCommands.begin(), kRunCommands.end(), inv.command) != kRunCommands.end();
    if (needs_seed && seed->count() == 0) throw CLI::RequiredError("--seed");
    if (inv.command == "make-suite" && seed->count() == 0) inv.config.seed = kDefaultSuiteSeed;
  }
};

}  // namespace

Invocation parse_cli(const std::vector<std::string>& args) {
  Parser p;
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  p.app.parse(reversed);
  p.finish();
  return p.inv;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Parser p;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    p.app.parse(reversed);
    p.finish();
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e_stream;
    const int code = p.app.exit(e, o, e_stream);
    out << o.str();
    err << e_stream.str();
    return code == 0 ? kSuccess : kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  const Invocation& inv = p.inv;
  try {
    if (inv.command == "closed-loop") return cmd_closed_loop(inv.config, out);
    if (inv.command == "open-loop") return cmd_open_loop(inv.config, out);
    if (inv.command == "ablate") return cmd_ablate(inv.config, out);
    if (inv.command == "make-suite") {
      return cmd_make_suite(inv.config.out, inv.config.seed, inv.per_category, out);
    }
    return cmd_make_dataset(inv.config, inv.count, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
}

}  // namespace planloop::harness
