#include "nonlocal/game.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nonlocal/errors.hpp"

namespace nonlocal {

using nlohmann::json;

GameSpec GameSpec::zeros(std::string id, std::size_t n_x, std::size_t n_y, std::size_t n_a,
                         std::size_t n_b, bool binary) {
  GameSpec g;
  g.id = std::move(id);
  g.n_x = n_x;
  g.n_y = n_y;
  g.n_a = n_a;
  g.n_b = n_b;
  g.predicate.assign(n_x * n_y * n_a * n_b, 0.0);
  g.input_dist.assign(n_x * n_y, 0.0);
  g.binary_predicate = binary;
  return g;
}

double GameSpec::pi_a(std::size_t x) const {
  double s = 0.0;
  for (std::size_t y = 0; y < n_y; ++y) s += pi(x, y);
  return s;
}

double GameSpec::pi_b(std::size_t y) const {
  double s = 0.0;
  for (std::size_t x = 0; x < n_x; ++x) s += pi(x, y);
  return s;
}

double GameSpec::pi_b_given_a(std::size_t y, std::size_t x) const {
  const double m = pi_a(x);
  return m > 0.0 ? pi(x, y) / m : 0.0;
}

double GameSpec::pi_a_given_b(std::size_t x, std::size_t y) const {
  const double m = pi_b(y);
  return m > 0.0 ? pi(x, y) / m : 0.0;
}

bool GameSpec::same_tables(const GameSpec& other) const {
  return n_x == other.n_x && n_y == other.n_y && n_a == other.n_a && n_b == other.n_b &&
         predicate == other.predicate && input_dist == other.input_dist;
}

std::string_view to_string(ValueConvention c) {
  switch (c) {
    case ValueConvention::Normalized: return "normalized";
    case ValueConvention::Times4: return "times4";
    case ValueConvention::RawSum: return "raw_sum";
  }
  return "normalized";
}

ValueConvention secondary_convention(const GameSpec& spec) {
  return spec.binary_predicate ? ValueConvention::Times4 : ValueConvention::RawSum;
}

double secondary_scale(const GameSpec& spec) {
  return static_cast<double>(spec.n_x * spec.n_y);
}

namespace {

GameSpec uniform_2x2(std::string id, std::size_t outputs, bool binary) {
  GameSpec g = GameSpec::zeros(std::move(id), 2, 2, outputs, outputs, binary);
  for (auto& p : g.input_dist) p = 0.25;
  return g;
}

GameSpec make_g1() {
  GameSpec g = uniform_2x2("g1", 2, true);
  // (x, y, a, b)
  g.v(0, 0, 0, 0) = 1;
  g.v(0, 1, 1, 0) = 1;
  g.v(1, 0, 0, 1) = 1;
  g.v(1, 0, 1, 0) = 1;
  g.v(1, 1, 0, 1) = 1;
  return g;
}

GameSpec make_g2() {
  GameSpec g = uniform_2x2("g2", 2, true);
  g.v(0, 0, 0, 0) = 1;
  g.v(0, 0, 1, 1) = 1;
  g.v(0, 1, 0, 1) = 1;
  g.v(0, 1, 1, 0) = 1;
  g.v(1, 0, 0, 1) = 1;
  g.v(1, 0, 1, 0) = 1;
  g.v(1, 1, 0, 1) = 1;
  return g;
}

GameSpec make_chsh() {
  GameSpec g = uniform_2x2("chsh", 2, true);
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 2; ++y)
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) g.v(x, y, a, b) = ((a ^ b) == (x & y)) ? 1.0 : 0.0;
  return g;
}

// 2[P(a=b|00) + P(a=b|01) + P(a=b|10) + P(a=b+2|11)]
//  + P(a=b+2|00) + P(a=b+1|01) + P(a=b+1|10) + P(a=b+1|11) <= 6, addition mod 3.
GameSpec make_cglmp() {
  GameSpec g = uniform_2x2("cglmp", 3, false);
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = 0; b < 3; ++b) {
      const bool equal = a == b;
      const bool plus1 = a == (b + 1) % 3;
      const bool plus2 = a == (b + 2) % 3;
      g.v(0, 0, a, b) = equal ? 2 : plus2 ? 1 : 0;
      g.v(0, 1, a, b) = equal ? 2 : plus1 ? 1 : 0;
      g.v(1, 0, a, b) = equal ? 2 : plus1 ? 1 : 0;
      g.v(1, 1, a, b) = plus2 ? 2 : plus1 ? 1 : 0;
    }
  }
  return g;
}

std::vector<GameCatalogEntry> build_catalog() {
  const double sqrt29 = std::sqrt(29.0);
  const double g2_quantum = (35.0 + std::cbrt(15740.0 - 972.0 * sqrt29) +
                             std::pow(2.0, 2.0 / 3.0) * std::cbrt(3935.0 + 243.0 * sqrt29)) /
                            108.0;
  return {
      {make_g1(), 0.5, (16.0 + std::sqrt(13.0)) / 36.0, ValueConvention::Normalized,
       "planar counter-example 1: trivial relations unsaturated, classical bound 4*omega_c = 2"},
      {make_g2(), 0.75, g2_quantum, ValueConvention::Normalized,
       "planar counter-example 2: non-trivial relations unsaturated, classical bound 4*omega_c = 3"},
      {make_chsh(), 0.75, (2.0 + std::sqrt(2.0)) / 4.0, ValueConvention::Normalized,
       "CHSH xor game: a xor b = x*y, Tsirelson value (2+sqrt2)/4"},
      {make_cglmp(), 6.0, std::nullopt, ValueConvention::RawSum,
       "CGLMP 2-input 3-output expression with weights {1,2}, raw-sum classical bound 6; "
       "fixed non-maximally entangled qutrit strategy"},
  };
}

}  // namespace

const std::vector<GameCatalogEntry>& game_catalog() {
  static const std::vector<GameCatalogEntry> catalog = build_catalog();
  return catalog;
}

const GameCatalogEntry& catalog_entry(std::string_view id) {
  for (const auto& entry : game_catalog())
    if (entry.spec.id == id) return entry;
  throw Error(ErrorCode::UnknownGame, "no built-in game named '" + std::string(id) + "'");
}

GameSpec builtin_game(std::string_view id) { return catalog_entry(id).spec; }

std::optional<std::string> match_catalog(const GameSpec& spec) {
  for (const auto& entry : game_catalog())
    if (entry.spec.same_tables(spec)) return entry.spec.id;
  return std::nullopt;
}

std::vector<Violation> validate_game(const GameSpec& spec) {
  std::vector<Violation> out;
  if (spec.n_x == 0 || spec.n_y == 0) out.push_back({"inputs", "empty input set"});
  if (spec.n_a == 0 || spec.n_b == 0) out.push_back({"outputs", "empty output set"});

  const std::size_t pred_size = spec.n_x * spec.n_y * spec.n_a * spec.n_b;
  if (spec.predicate.size() != pred_size) {
    out.push_back({"predicate", "expected " + std::to_string(pred_size) + " entries, got " +
                                    std::to_string(spec.predicate.size())});
  }
  if (spec.input_dist.size() != spec.n_x * spec.n_y) {
    out.push_back({"pi", "expected " + std::to_string(spec.n_x * spec.n_y) + " entries, got " +
                             std::to_string(spec.input_dist.size())});
    return out;
  }

  double total = 0.0;
  for (std::size_t x = 0; x < spec.n_x; ++x) {
    for (std::size_t y = 0; y < spec.n_y; ++y) {
      const double p = spec.pi(x, y);
      if (!std::isfinite(p) || p < 0.0) {
        out.push_back({"pi[" + std::to_string(x) + "][" + std::to_string(y) + "]",
                       "negative or non-finite probability"});
      }
      total += p;
    }
  }
  if (spec.n_x > 0 && spec.n_y > 0 && std::abs(total - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "input distribution sums to " << total << ", not 1";
    out.push_back({"pi", msg.str()});
  }

  if (spec.predicate.size() == pred_size) {
    for (std::size_t x = 0; x < spec.n_x; ++x)
      for (std::size_t y = 0; y < spec.n_y; ++y)
        for (std::size_t a = 0; a < spec.n_a; ++a)
          for (std::size_t b = 0; b < spec.n_b; ++b) {
            const double v = spec.v(x, y, a, b);
            const std::string path = "predicate[" + std::to_string(x) + "," + std::to_string(y) +
                                     "," + std::to_string(a) + "," + std::to_string(b) + "]";
            if (!std::isfinite(v) || v < 0.0) {
              out.push_back({path, "negative or non-finite weight"});
            } else if (spec.binary_predicate && v != 0.0 && v != 1.0) {
              out.push_back({path, "value outside {0,1} in a binary predicate"});
            }
          }
  }
  return out;
}

json game_to_json(const GameSpec& spec) {
  json pi = json::array();
  for (std::size_t x = 0; x < spec.n_x; ++x) {
    json row = json::array();
    for (std::size_t y = 0; y < spec.n_y; ++y) row.push_back(spec.pi(x, y));
    pi.push_back(std::move(row));
  }
  json pred = json::array();
  for (std::size_t x = 0; x < spec.n_x; ++x)
    for (std::size_t y = 0; y < spec.n_y; ++y)
      for (std::size_t a = 0; a < spec.n_a; ++a)
        for (std::size_t b = 0; b < spec.n_b; ++b)
          if (const double v = spec.v(x, y, a, b); v != 0.0)
            pred.push_back({{"x", x}, {"y", y}, {"a", a}, {"b", b}, {"v", v}});
  return {{"id", spec.id},
          {"inputs", {spec.n_x, spec.n_y}},
          {"outputs", {spec.n_a, spec.n_b}},
          {"pi", std::move(pi)},
          {"predicate", std::move(pred)},
          {"binary_predicate", spec.binary_predicate}};
}

namespace {

[[noreturn]] void parse_fail(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::ParseError, path + ": " + what);
}

const json& field(const json& doc, const char* key) {
  if (!doc.contains(key)) parse_fail(key, "missing field");
  return doc.at(key);
}

std::size_t count_field(const json& value, const std::string& path) {
  if (!value.is_number_integer() || value.get<long long>() < 0) {
    parse_fail(path, "expected a non-negative integer");
  }
  return value.get<std::size_t>();
}

double number_field(const json& value, const std::string& path) {
  if (!value.is_number()) parse_fail(path, "expected a number");
  return value.get<double>();
}

std::pair<std::size_t, std::size_t> pair_field(const json& doc, const char* key) {
  const json& value = field(doc, key);
  if (!value.is_array() || value.size() != 2) parse_fail(key, "expected a two-element array");
  return {count_field(value[0], std::string(key) + "[0]"),
          count_field(value[1], std::string(key) + "[1]")};
}

}  // namespace

GameSpec game_from_json(const json& doc) {
  if (!doc.is_object()) parse_fail("$", "expected a JSON object");
  const json& id = field(doc, "id");
  if (!id.is_string()) parse_fail("id", "expected a string");
  const auto [n_x, n_y] = pair_field(doc, "inputs");
  const auto [n_a, n_b] = pair_field(doc, "outputs");
  bool binary = true;
  if (doc.contains("binary_predicate")) {
    if (!doc["binary_predicate"].is_boolean()) parse_fail("binary_predicate", "expected a bool");
    binary = doc["binary_predicate"].get<bool>();
  }

  GameSpec spec = GameSpec::zeros(id.get<std::string>(), n_x, n_y, n_a, n_b, binary);
  std::vector<Violation> violations;

  const json& pi = field(doc, "pi");
  if (!pi.is_array()) parse_fail("pi", "expected an array of rows");
  if (pi.size() != n_x) {
    violations.push_back({"pi", "expected " + std::to_string(n_x) + " rows"});
  }
  for (std::size_t x = 0; x < std::min(pi.size(), n_x); ++x) {
    const std::string row_path = "pi[" + std::to_string(x) + "]";
    if (!pi[x].is_array()) parse_fail(row_path, "expected an array");
    if (pi[x].size() != n_y) {
      violations.push_back({row_path, "expected " + std::to_string(n_y) + " columns"});
    }
    for (std::size_t y = 0; y < std::min(pi[x].size(), n_y); ++y)
      spec.pi(x, y) = number_field(pi[x][y], row_path + "[" + std::to_string(y) + "]");
  }

  const json& pred = field(doc, "predicate");
  if (!pred.is_array()) parse_fail("predicate", "expected an array of entries");
  for (std::size_t k = 0; k < pred.size(); ++k) {
    const std::string path = "predicate[" + std::to_string(k) + "]";
    const json& e = pred[k];
    if (!e.is_object()) parse_fail(path, "expected an object {x,y,a,b,v}");
    for (const char* key : {"x", "y", "a", "b", "v"})
      if (!e.contains(key)) parse_fail(path + "." + key, "missing field");
    const std::size_t x = count_field(e["x"], path + ".x");
    const std::size_t y = count_field(e["y"], path + ".y");
    const std::size_t a = count_field(e["a"], path + ".a");
    const std::size_t b = count_field(e["b"], path + ".b");
    const double v = number_field(e["v"], path + ".v");
    if (x >= n_x || y >= n_y || a >= n_a || b >= n_b) {
      violations.push_back({path, "index out of range"});
      continue;
    }
    spec.v(x, y, a, b) = v;
  }

  for (auto& v : validate_game(spec)) violations.push_back(std::move(v));
  if (!violations.empty()) {
    std::string msg;
    for (const auto& v : violations) {
      if (!msg.empty()) msg += "; ";
      msg += v.path + ": " + v.message;
    }
    throw Error(ErrorCode::ValidationError, msg);
  }
  return spec;
}

GameSpec parse_game(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  return game_from_json(doc);
}

GameSpec load_game(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_game(buffer.str());
}

std::string serialize_game(const GameSpec& spec) { return game_to_json(spec).dump(2) + "\n"; }

}  // namespace nonlocal
