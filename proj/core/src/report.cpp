#include "nonlocal/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nonlocal/errors.hpp"

namespace nonlocal {

using nlohmann::json;

namespace {

std::string fixed(double x, int decimals = 6) {
  if (x == 0.0) x = 0.0;  // no "-0.000000"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
  std::string s = buf;
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
  return s;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

std::string pad_right(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string complex_text(Complex z) {
  const std::string im = fixed(z.imag());
  return fixed(z.real()) + (im.front() == '-' ? im : "+" + im) + "i";
}

json real(double x) { return round_significant(x); }

json complex_list(std::span<const Complex> v) {
  json out = json::array();
  for (const auto& z : v) out.push_back(json::array({real(z.real()), real(z.imag())}));
  return out;
}

json value_pair(const GameSpec& spec, double omega) {
  return json::array({
      {{"value", real(omega)}, {"convention", to_string(ValueConvention::Normalized)}},
      {{"value", real(omega * secondary_scale(spec))},
       {"convention", to_string(secondary_convention(spec))}},
  });
}

std::string value_line(const GameSpec& spec, double omega) {
  return fixed(omega) + " (normalized)  " + fixed(omega * secondary_scale(spec)) + " (" +
         std::string(to_string(secondary_convention(spec))) + ")";
}

std::string status_of(const SteeringVerdict& v) {
  if (v.vacuous) return "vacuous";
  return v.saturated ? "saturated" : "unsaturated";
}

std::string relation_kind(const FineGrainedRelation& rel) {
  if (rel.empty()) return "empty";
  if (!rel.trivial) return "";
  return *rel.trivial ? "trivial" : "non-trivial";
}

void side_table(std::ostringstream& os, const SideReport& side) {
  os << "side " << to_string(side.side) << "  up_bound " << fixed(side.up_bound)
     << "  certain-assemblage deviation " << fixed(side.certain_assemblage.deviation)
     << (side.certain_assemblage.passes ? " (no-signaling)" : " (signaling)") << '\n';
  os << "  x  a" << pad("p", 10) << pad("xi", 10) << pad("achieved", 10) << pad("gap", 10)
     << "  status\n";
  for (std::size_t k = 0; k < side.verdicts.size(); ++k) {
    const auto& v = side.verdicts[k];
    os << pad(std::to_string(v.input), 3) << pad(std::to_string(v.output), 3) << pad(fixed(v.p), 10)
       << pad(fixed(v.xi), 10) << pad(v.vacuous ? "-" : fixed(v.achieved), 10)
       << pad(v.vacuous ? "-" : fixed(v.gap), 10) << "  " << status_of(v);
    const std::string kind = relation_kind(side.relations[k]);
    if (!kind.empty()) os << std::string(12 - status_of(v).size(), ' ') << kind;
    os << '\n';
  }
}

json side_json(const GameSpec& spec, const SideReport& side) {
  json rows = json::array();
  for (std::size_t k = 0; k < side.verdicts.size(); ++k) {
    const auto& v = side.verdicts[k];
    const auto& rel = side.relations[k];
    const CertainSpace space = maximally_certain(rel);
    json basis = json::array();
    for (const auto& b : space.basis) basis.push_back(complex_list(b));
    rows.push_back({
        {"input", v.input},
        {"output", v.output},
        {"p", real(v.p)},
        {"weight", real(rel.weight)},
        {"xi", real(v.xi)},
        {"xi_canonical", real(rel.xi)},
        {"xi_unweighted", real(rel.xi_unweighted)},
        {"xi_reported", real(rel.xi_reported(spec))},
        {"achieved", real(v.achieved)},
        {"achieved_canonical", real(v.achieved_canonical)},
        {"gap", real(v.gap)},
        {"saturated", v.saturated},
        {"vacuous", v.vacuous},
        {"empty", v.empty_relation},
        {"trivial", v.trivial_relation ? json(*v.trivial_relation) : json(nullptr)},
        {"certain_space", {{"degenerate", space.degenerate}, {"basis", basis}}},
    });
  }
  return {
      {"side", to_string(side.side)},
      {"up_bound", real(side.up_bound)},
      {"ns_deviation", real(side.certain_assemblage.deviation)},
      {"ns_passes", side.certain_assemblage.passes},
      {"all_saturated", side.all_saturated},
      {"relations", rows},
  };
}

ReportDigest::SideDigest side_digest(const SideReport& side) {
  ReportDigest::SideDigest d;
  d.side = std::string(to_string(side.side));
  d.up_bound = round_significant(side.up_bound);
  d.ns_deviation = round_significant(side.certain_assemblage.deviation);
  d.all_saturated = side.all_saturated;
  for (const auto& v : side.verdicts) {
    d.rows.push_back({v.input, v.output, round_significant(v.p), round_significant(v.xi),
                      round_significant(v.achieved), round_significant(v.gap), v.saturated, v.vacuous});
  }
  return d;
}

}  // namespace

std::string_view tool_version() { return NONLOCAL_VERSION; }

std::string_view to_string(StrategySource s) {
  switch (s) {
    case StrategySource::ClosedForm: return "closed_form";
    case StrategySource::PlanarSearch: return "planar_search";
    case StrategySource::FixedCglmp: return "fixed_cglmp";
  }
  return "unknown";
}

double round_significant(double x) {
  if (!std::isfinite(x) || x == 0.0) return 0.0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.11e", x);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;
}

GameSpec resolve_game(std::string_view ref) {
  for (const auto& entry : game_catalog())
    if (entry.spec.id == ref) return entry.spec;
  const std::filesystem::path path{std::string(ref)};
  std::error_code ec;
  if (std::filesystem::is_regular_file(path, ec)) return load_game(path);
  throw Error(ErrorCode::UnknownGame,
              "'" + std::string(ref) + "' is neither a catalog game nor a readable game file");
}

ResolvedStrategy resolve_strategy(const GameSpec& spec, const AnalysisOptions& options) {
  const auto id = match_catalog(spec);
  if (options.closed_form && id && (*id == "g1" || *id == "g2")) {
    return {closed_form_optimum(*id), StrategySource::ClosedForm};
  }
  if (spec.n_x == 2 && spec.n_y == 2 && spec.n_a == 2 && spec.n_b == 2) {
    PlanarSearchOptions search;
    search.grid_points = options.grid_points;
    search.refine_iters = options.refine_iters;
    search.workers = options.workers;
    return {optimize_planar(spec, search), StrategySource::PlanarSearch};
  }
  if (id && *id == "cglmp") {
    OptimalSolution sol;
    sol.strategy = cglmp_strategy();
    sol.value = quantum_game_value(spec, sol.strategy);
    return {std::move(sol), StrategySource::FixedCglmp};
  }
  throw Error(ErrorCode::NotPlanarApplicable,
              "no quantum strategy available for a " + std::to_string(spec.n_x) + "x" +
                  std::to_string(spec.n_y) + " input, " + std::to_string(spec.n_a) + "x" +
                  std::to_string(spec.n_b) + " output game");
}

AnalysisRun run_analyze(const GameSpec& spec, std::string game_ref, const AnalysisOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  AnalysisRun run;
  run.game_ref = std::move(game_ref);
  run.options = options;
  run.spec = spec;
  run.catalog_id = match_catalog(spec);
  run.tool_version = std::string(tool_version());
  run.classical = classical_value(spec, options.workers);
  run.strategy = resolve_strategy(spec, options);
  run.report = upqgv_verdict(spec, run.strategy.solution.strategy, run.classical);
  run.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

AnalysisRun run_analyze(std::string_view game_ref, const AnalysisOptions& options) {
  return run_analyze(resolve_game(game_ref), std::string(game_ref), options);
}

json report_to_json(const AnalysisRun& run) {
  const auto& sol = run.strategy.solution;
  json strategy = {
      {"source", to_string(run.strategy.source)},
      {"dims", json::array({sol.strategy.d_a, sol.strategy.d_b})},
      {"state", complex_list(sol.strategy.state)},
      {"angles", nullptr},
      {"residual", nullptr},
  };
  if (sol.angles) {
    json alpha = json::array(), beta = json::array();
    for (double a : sol.angles->alpha) alpha.push_back(real(a));
    for (double b : sol.angles->beta) beta.push_back(real(b));
    strategy["angles"] = {{"alpha", alpha}, {"beta", beta}};
  }
  if (sol.residual) strategy["residual"] = real(*sol.residual);

  const auto& rep = run.report;
  return {
      {"schema", kReportSchema},
      {"tool_version", run.tool_version},
      {"game",
       {{"ref", run.game_ref},
        {"id", run.spec.id},
        {"catalog_id", run.catalog_id ? json(*run.catalog_id) : json(nullptr)},
        {"inputs", json::array({run.spec.n_x, run.spec.n_y})},
        {"outputs", json::array({run.spec.n_a, run.spec.n_b})},
        {"binary_predicate", run.spec.binary_predicate}}},
      {"options",
       {{"grid_points", run.options.grid_points},
        {"refine_iters", run.options.refine_iters},
        {"closed_form", run.options.closed_form}}},
      {"classical",
       {{"omega_c", value_pair(run.spec, rep.omega_c)},
        {"maximizers", run.classical.maximizers.size()},
        {"strategies_examined", run.classical.strategies_examined}}},
      {"quantum", {{"omega_q", value_pair(run.spec, rep.omega_q)}, {"strategy", strategy}}},
      {"sides", json::array({side_json(run.spec, rep.alice_steers_bob), side_json(run.spec, rep.bob_steers_alice)})},
      {"verdict",
       {{"up_bound", {{"value", real(rep.up_bound)}, {"convention", to_string(ValueConvention::Normalized)}}},
        {"ns_assemblage_deviation", real(rep.ns_assemblage_deviation)},
        {"correspondence_holds", rep.correspondence_holds}}},
  };
}

std::string render_report(const AnalysisRun& run, ReportFormat format) {
  if (format == ReportFormat::Json) return report_to_json(run).dump(2) + "\n";

  const auto& rep = run.report;
  std::ostringstream os;
  os << "game            " << run.spec.id << " (" << run.spec.n_x << "x" << run.spec.n_y << " inputs, "
     << run.spec.n_a << "x" << run.spec.n_b << " outputs)\n";
  os << "strategy        " << to_string(run.strategy.source) << '\n';
  os << "omega_c         " << value_line(run.spec, rep.omega_c) << '\n';
  os << "omega_q         " << value_line(run.spec, rep.omega_q) << '\n';
  os << "up_bound        " << fixed(rep.up_bound) << '\n';
  os << "ns deviation    " << fixed(rep.ns_assemblage_deviation) << '\n';
  os << "correspondence  " << (rep.correspondence_holds ? "holds" : "fails") << "\n\n";
  side_table(os, rep.alice_steers_bob);
  os << '\n';
  side_table(os, rep.bob_steers_alice);
  os << "\nwall time " << fixed(run.wall_time_s, 3) << " s\n";
  return os.str();
}

ReportDigest digest(const AnalysisRun& run) {
  ReportDigest d;
  d.game_id = run.spec.id;
  d.omega_c = round_significant(run.report.omega_c);
  d.omega_q = round_significant(run.report.omega_q);
  d.up_bound = round_significant(run.report.up_bound);
  d.ns_assemblage_deviation = round_significant(run.report.ns_assemblage_deviation);
  d.correspondence_holds = run.report.correspondence_holds;
  d.sides = {side_digest(run.report.alice_steers_bob), side_digest(run.report.bob_steers_alice)};
  return d;
}

ReportDigest parse_report_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    if (doc.at("schema").get<std::string>() != kReportSchema) {
      throw Error(ErrorCode::ParseError, "unsupported report schema");
    }
    ReportDigest d;
    d.game_id = doc.at("game").at("id").get<std::string>();
    d.omega_c = doc.at("classical").at("omega_c").at(0).at("value").get<double>();
    d.omega_q = doc.at("quantum").at("omega_q").at(0).at("value").get<double>();
    const auto& verdict = doc.at("verdict");
    d.up_bound = verdict.at("up_bound").at("value").get<double>();
    d.ns_assemblage_deviation = verdict.at("ns_assemblage_deviation").get<double>();
    d.correspondence_holds = verdict.at("correspondence_holds").get<bool>();
    for (const auto& s : doc.at("sides")) {
      ReportDigest::SideDigest sd;
      sd.side = s.at("side").get<std::string>();
      sd.up_bound = s.at("up_bound").get<double>();
      sd.ns_deviation = s.at("ns_deviation").get<double>();
      sd.all_saturated = s.at("all_saturated").get<bool>();
      for (const auto& r : s.at("relations")) {
        sd.rows.push_back({r.at("input").get<std::size_t>(), r.at("output").get<std::size_t>(),
                           r.at("p").get<double>(), r.at("xi").get<double>(), r.at("achieved").get<double>(),
                           r.at("gap").get<double>(), r.at("saturated").get<bool>(),
                           r.at("vacuous").get<bool>()});
      }
      d.sides.push_back(std::move(sd));
    }
    return d;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed report: ") + e.what());
  }
}

std::string render_catalog() {
  std::ostringstream os;
  os << pad_right("id", 8) << pad_right("inputs", 8) << pad_right("outputs", 9) << pad_right("omega_c", 22)
     << "omega_q\n";
  for (const auto& e : game_catalog()) {
    const auto conv = std::string(to_string(e.known_value_convention));
    const auto& s = e.spec;
    os << pad_right(s.id, 8) << pad_right(std::to_string(s.n_x) + "x" + std::to_string(s.n_y), 8)
       << pad_right(std::to_string(s.n_a) + "x" + std::to_string(s.n_b), 9)
       << pad_right(e.known_classical_value ? fixed(*e.known_classical_value) + " " + conv : "-", 22)
       << (e.known_quantum_value ? fixed(*e.known_quantum_value) + " " + conv : "-") << '\n';
    os << "        " << e.description << '\n';
  }
  return os.str();
}

std::string render_classical(const GameSpec& spec, const ClassicalResult& result) {
  std::ostringstream os;
  os << "game        " << spec.id << '\n';
  os << "omega_c     " << value_line(spec, result.omega_c) << '\n';
  os << "strategies  " << result.strategies_examined << " examined, " << result.maximizers.size()
     << " optimal\n";
  if (!result.maximizers.empty()) {
    const auto& s = result.maximizers.front();
    os << "first       f_a = (";
    for (std::size_t i = 0; i < s.f_a.size(); ++i) os << (i ? "," : "") << s.f_a[i];
    os << ")  f_b = (";
    for (std::size_t i = 0; i < s.f_b.size(); ++i) os << (i ? "," : "") << s.f_b[i];
    os << ")\n";
  }
  return os.str();
}

std::string render_quantum(const GameSpec& spec, const ResolvedStrategy& strategy) {
  const auto& sol = strategy.solution;
  std::ostringstream os;
  os << "game      " << spec.id << '\n';
  os << "source    " << to_string(strategy.source) << '\n';
  os << "omega_q   " << value_line(spec, sol.value) << '\n';
  if (sol.angles) {
    os << "alpha_1   " << fixed(sol.angles->alpha.at(1), 9) << '\n';
    os << "beta_1    " << fixed(sol.angles->beta.at(1), 9) << '\n';
  }
  if (sol.residual) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", *sol.residual);
    os << "residual  " << buf << '\n';
  }
  os << "state     ";
  for (std::size_t i = 0; i < sol.strategy.state.size(); ++i) {
    os << (i ? "  " : "") << complex_text(sol.strategy.state[i]);
  }
  os << '\n';
  return os.str();
}

std::string render_relations(const GameSpec& spec, const std::vector<FineGrainedRelation>& relations) {
  std::ostringstream os;
  os << "game " << spec.id;
  if (!relations.empty()) os << "  side " << to_string(relations.front().side);
  os << '\n';
  os << "  x  a" << pad("weight", 10) << pad("xi", 10) << pad("xi_norm", 10) << pad("xi_unw", 10)
     << "  dim  kind\n";
  for (const auto& rel : relations) {
    const CertainSpace space = maximally_certain(rel);
    os << pad(std::to_string(rel.input), 3) << pad(std::to_string(rel.output), 3) << pad(fixed(rel.weight), 10)
       << pad(fixed(rel.xi), 10) << pad(fixed(rel.xi_normalized), 10) << pad(fixed(rel.xi_unweighted), 10)
       << pad(std::to_string(space.basis.size()), 5);
    const std::string kind = relation_kind(rel);
    if (!kind.empty()) os << "  " << kind;
    os << '\n';
    for (const auto& v : space.basis) {
      os << "        certain ";
      for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "  " : "") << complex_text(v[i]);
      os << '\n';
    }
  }
  return os.str();
}

std::string render_steering(const GameSpec& spec, const UPQGVReport& report) {
  std::ostringstream os;
  os << "game " << spec.id << "  omega_q " << fixed(report.omega_q) << "  up_bound " << fixed(report.up_bound)
     << "  correspondence " << (report.correspondence_holds ? "holds" : "fails") << "\n\n";
  side_table(os, report.alice_steers_bob);
  os << '\n';
  side_table(os, report.bob_steers_alice);
  return os.str();
}

}  // namespace nonlocal
