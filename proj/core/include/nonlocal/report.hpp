#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "nonlocal/classical.hpp"
#include "nonlocal/game.hpp"
#include "nonlocal/quantum.hpp"
#include "nonlocal/steering.hpp"
#include "nonlocal/uncertainty.hpp"

namespace nonlocal {

std::string_view tool_version();

inline constexpr std::string_view kReportSchema = "nonlocal-audit/report/v1";

struct AnalysisOptions {
  std::size_t grid_points = 721;
  std::size_t refine_iters = 500;
  // Use the radical closed form for games that have one instead of searching.
  bool closed_form = true;
  unsigned workers = 0;
};

enum class StrategySource { ClosedForm, PlanarSearch, FixedCglmp };

std::string_view to_string(StrategySource s);

struct ResolvedStrategy {
  OptimalSolution solution;
  StrategySource source = StrategySource::PlanarSearch;
};

struct AnalysisRun {
  std::string game_ref;
  AnalysisOptions options;
  GameSpec spec;
  // Catalog id whose tables match spec, if any.
  std::optional<std::string> catalog_id;
  ClassicalResult classical;
  ResolvedStrategy strategy;
  UPQGVReport report;
  std::string tool_version;
  double wall_time_s = 0.0;
};

/// Catalog id first, then a path to a game file. Throws UnknownGame when
/// neither matches.
GameSpec resolve_game(std::string_view ref);

/// Closed form (when allowed and known), else planar search for 2x2x2x2
/// games, else the fixed qutrit strategy for CGLMP. Throws
/// NotPlanarApplicable for other games.
ResolvedStrategy resolve_strategy(const GameSpec& spec, const AnalysisOptions& options);

AnalysisRun run_analyze(std::string_view game_ref, const AnalysisOptions& options = {});
AnalysisRun run_analyze(const GameSpec& spec, std::string game_ref, const AnalysisOptions& options = {});

enum class ReportFormat { Text, Json };

/// Text is a per-side table; json follows docs/report-schema.md with reals
/// rounded to 12 significant digits and no timing fields.
std::string render_report(const AnalysisRun& run, ReportFormat format);
nlohmann::json report_to_json(const AnalysisRun& run);

/// Rounds to 12 significant digits; maps -0 and non-finite values to 0.
double round_significant(double x);

/// The numeric content of a report, as carried by its json rendering.
struct ReportDigest {
  struct Row {
    std::size_t input = 0;
    std::size_t output = 0;
    double p = 0.0;
    double xi = 0.0;
    double achieved = 0.0;
    double gap = 0.0;
    bool saturated = false;
    bool vacuous = false;

    bool operator==(const Row&) const = default;
  };
  struct SideDigest {
    std::string side;
    double up_bound = 0.0;
    double ns_deviation = 0.0;
    bool all_saturated = false;
    std::vector<Row> rows;

    bool operator==(const SideDigest&) const = default;
  };

  std::string game_id;
  double omega_c = 0.0;
  double omega_q = 0.0;
  double up_bound = 0.0;
  double ns_assemblage_deviation = 0.0;
  bool correspondence_holds = false;
  std::vector<SideDigest> sides;

  bool operator==(const ReportDigest&) const = default;
};

/// Digest of a run at rendering precision.
ReportDigest digest(const AnalysisRun& run);
/// Throws ParseError on malformed or schema-mismatched documents.
ReportDigest parse_report_json(std::string_view text);

// Text tables used by the individual CLI subcommands.
std::string render_catalog();
std::string render_classical(const GameSpec& spec, const ClassicalResult& result);
std::string render_quantum(const GameSpec& spec, const ResolvedStrategy& strategy);
std::string render_relations(const GameSpec& spec, const std::vector<FineGrainedRelation>& relations);
std::string render_steering(const GameSpec& spec, const UPQGVReport& report);

}  // namespace nonlocal
