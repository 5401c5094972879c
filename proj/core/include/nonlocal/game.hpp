#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace nonlocal {

/// A two-party non-local game: predicate table V(a,b|x,y) and joint input
/// distribution pi(x,y). Predicate entries are non-negative reals so that
/// weighted Bell expressions (CGLMP) fit the same type; `binary_predicate`
/// additionally restricts them to {0, 1}.
struct GameSpec {
  std::string id;
  std::size_t n_x = 0;
  std::size_t n_y = 0;
  std::size_t n_a = 0;
  std::size_t n_b = 0;
  // Index ((x * n_y + y) * n_a + a) * n_b + b.
  std::vector<double> predicate;
  // Index x * n_y + y.
  std::vector<double> input_dist;
  bool binary_predicate = true;

  static GameSpec zeros(std::string id, std::size_t n_x, std::size_t n_y, std::size_t n_a,
                        std::size_t n_b, bool binary = true);

  std::size_t predicate_index(std::size_t x, std::size_t y, std::size_t a, std::size_t b) const {
    return ((x * n_y + y) * n_a + a) * n_b + b;
  }
  double v(std::size_t x, std::size_t y, std::size_t a, std::size_t b) const {
    return predicate[predicate_index(x, y, a, b)];
  }
  double& v(std::size_t x, std::size_t y, std::size_t a, std::size_t b) {
    return predicate[predicate_index(x, y, a, b)];
  }
  double pi(std::size_t x, std::size_t y) const { return input_dist[x * n_y + y]; }
  double& pi(std::size_t x, std::size_t y) { return input_dist[x * n_y + y]; }

  double pi_a(std::size_t x) const;
  double pi_b(std::size_t y) const;
  // pi(y|x); zero when pi_a(x) is zero.
  double pi_b_given_a(std::size_t y, std::size_t x) const;
  // pi(x|y); zero when pi_b(y) is zero.
  double pi_a_given_b(std::size_t x, std::size_t y) const;

  bool same_tables(const GameSpec& other) const;
  bool operator==(const GameSpec&) const = default;
};

/// Which scaling a reported game value uses.
///   normalized - sum_{x,y} pi(x,y) sum_{a,b} V P  (the game value omega)
///   times4     - 4 * omega, the "classical bound is 4 omega_c" form for g1/g2
///   raw_sum    - sum_{x,y} sum_{a,b} V P, the CGLMP "<= 6" form
enum class ValueConvention { Normalized, Times4, RawSum };

std::string_view to_string(ValueConvention c);

/// Secondary reporting convention for a game: raw_sum for weighted predicates,
/// times4 otherwise. Both scale omega by n_x * n_y (exact for uniform pi).
ValueConvention secondary_convention(const GameSpec& spec);
double secondary_scale(const GameSpec& spec);

struct GameCatalogEntry {
  GameSpec spec;
  std::optional<double> known_classical_value;
  std::optional<double> known_quantum_value;
  ValueConvention known_value_convention = ValueConvention::Normalized;
  std::string description;
};

/// Catalog ids in listing order: g1, g2, chsh, cglmp.
const std::vector<GameCatalogEntry>& game_catalog();
const GameCatalogEntry& catalog_entry(std::string_view id);
/// Throws UnknownGame.
GameSpec builtin_game(std::string_view id);
/// Id of the catalog game with identical tables, if any.
std::optional<std::string> match_catalog(const GameSpec& spec);

struct Violation {
  std::string path;
  std::string message;
};

/// Every broken GameSpec invariant, each naming the offending field/index.
std::vector<Violation> validate_game(const GameSpec& spec);

nlohmann::json game_to_json(const GameSpec& spec);
/// Throws ParseError for malformed structure, ValidationError for invariant
/// violations (message lists each violation path).
GameSpec game_from_json(const nlohmann::json& doc);
GameSpec parse_game(std::string_view text);
GameSpec load_game(const std::filesystem::path& path);
std::string serialize_game(const GameSpec& spec);

}  // namespace nonlocal
