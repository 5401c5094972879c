#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nonlocal/classical.hpp"
#include "nonlocal/errors.hpp"
#include "nonlocal/game.hpp"
#include "nonlocal/report.hpp"
#include "nonlocal/steering.hpp"
#include "nonlocal/uncertainty.hpp"

namespace {

constexpr int kExitNumeric = 1;
constexpr int kExitInput = 2;

struct Common {
  std::string game;
  std::size_t grid = 721;
  bool search = false;
  unsigned threads = 0;

  nonlocal::AnalysisOptions options(bool closed_form) const {
    nonlocal::AnalysisOptions o;
    o.grid_points = grid;
    o.closed_form = closed_form;
    o.workers = threads;
    return o;
  }
};

void add_game(CLI::App* cmd, Common& c) {
  cmd->add_option("game", c.game, "Catalog id or path to a game file")->required();
}

void add_strategy_options(CLI::App* cmd, Common& c) {
  cmd->add_option("--grid", c.grid, "Grid points per angle for the planar search")->check(CLI::Range(64, 100000));
  cmd->add_flag("--search", c.search, "Search for the optimum even when a closed form is known");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classical/quantum values, uncertainty relations and steering for non-local games",
               "nonlocal-audit"};
  app.set_version_flag("--version", std::string(nonlocal::tool_version()));
  app.require_subcommand(1);

  Common c;
  app.add_option("--threads", c.threads, "Worker threads (0 = NONLOCAL_AUDIT_THREADS or all cores)");

  auto* list = app.add_subcommand("list-games", "List the built-in games");

  auto* classical = app.add_subcommand("classical", "Classical value by deterministic enumeration");
  add_game(classical, c);

  bool closed_form = false;
  auto* quantum = app.add_subcommand("quantum", "Quantum value in the planar qubit family");
  add_game(quantum, c);
  quantum->add_option("--grid", c.grid, "Grid points per angle")->check(CLI::Range(64, 100000));
  quantum->add_flag("--closed-form", closed_form, "Use the radical closed form (g1, g2)");

  std::string side = "alice";
  auto* uncertainty = app.add_subcommand("uncertainty", "Fine-grained uncertainty relations of one side");
  add_game(uncertainty, c);
  add_strategy_options(uncertainty, c);
  uncertainty->add_option("--side", side, "alice: Alice steers Bob; bob: Bob steers Alice")
      ->check(CLI::IsMember({"alice", "bob"}));

  auto* steer = app.add_subcommand("steer", "Steering saturation verdicts for both sides");
  add_game(steer, c);
  add_strategy_options(steer, c);

  std::string format = "text";
  std::string out_path;
  auto* analyze = app.add_subcommand("analyze", "Full classical, quantum, uncertainty and steering report");
  add_game(analyze, c);
  add_strategy_options(analyze, c);
  analyze->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
  analyze->add_option("--out", out_path, "Write the report to FILE instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "nonlocal-audit: usage error: " << e.what() << '\n';
    return kExitInput;
  }

  try {
    if (*list) {
      std::cout << nonlocal::render_catalog();
    } else if (*classical) {
      const auto spec = nonlocal::resolve_game(c.game);
      std::cout << nonlocal::render_classical(spec, nonlocal::classical_value(spec, c.threads));
    } else if (*quantum) {
      const auto spec = nonlocal::resolve_game(c.game);
      std::cout << nonlocal::render_quantum(spec, nonlocal::resolve_strategy(spec, c.options(closed_form)));
    } else if (*uncertainty) {
      const auto spec = nonlocal::resolve_game(c.game);
      const auto strategy = nonlocal::resolve_strategy(spec, c.options(!c.search)).solution.strategy;
      const auto s = side == "alice" ? nonlocal::Side::AliceSteersBob : nonlocal::Side::BobSteersAlice;
      const auto& remote = s == nonlocal::Side::AliceSteersBob ? strategy.meas_b : strategy.meas_a;
      std::cout << nonlocal::render_relations(spec, nonlocal::fine_grained_relations(spec, s, remote));
    } else if (*steer) {
      const auto spec = nonlocal::resolve_game(c.game);
      const auto strategy = nonlocal::resolve_strategy(spec, c.options(!c.search)).solution.strategy;
      std::cout << nonlocal::render_steering(spec, nonlocal::upqgv_verdict(spec, strategy));
    } else if (*analyze) {
      const auto run = nonlocal::run_analyze(c.game, c.options(!c.search));
      const auto doc = nonlocal::render_report(
          run, format == "json" ? nonlocal::ReportFormat::Json : nonlocal::ReportFormat::Text);
      if (out_path.empty()) {
        std::cout << doc;
      } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!(out << doc)) {
          std::cerr << "nonlocal-audit: cannot write " << out_path << '\n';
          return kExitInput;
        }
      }
    }
  } catch (const nonlocal::Error& e) {
    std::cerr << "nonlocal-audit: " << e.what() << '\n';
    return nonlocal::is_input_error(e.code()) ? kExitInput : kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "nonlocal-audit: internal error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return 0;
}
