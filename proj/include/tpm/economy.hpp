#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tpm/matrix.hpp"

namespace tpm {

/// Exhaustive cycle enumeration is only offered up to this many players.
inline constexpr std::size_t kDefaultEnumerationLimit = 12;
/// Relative tolerance for comparing a cycle product against 1.
inline constexpr double kProductTolerance = 1e-12;
/// Relative tolerance under which two geometric means count as tied.
inline constexpr double kTieTolerance = 1e-9;

/// Additive-production economy. a(i, j) is the amount of good i that
/// player i makes from one unit of good j; good j flows to player i
/// whenever a(i, j) > 0. Indices are 0-based internally.
class Economy {
 public:
  /// Square, finite, non-negative, and strongly connected on positive edges.
  static Economy validate(Matrix a, std::vector<std::string> labels = {});

  /// Square, finite and non-negative only. Used by the splitting-rule
  /// fixtures, some of which are deliberately not strongly connected.
  static Economy from_coefficients(Matrix a, std::vector<std::string> labels = {});

  std::size_t size() const noexcept { return a_.size(); }
  const Matrix& coefficients() const noexcept { return a_; }
  double operator()(std::size_t i, std::size_t j) const { return a_(i, j); }
  bool uses(std::size_t player, std::size_t good) const { return a_(player, good) > 0.0; }

  std::size_t positive_edge_count() const noexcept { return positive_edges_; }
  bool strongly_connected() const noexcept { return strongly_connected_; }
  bool is_complete() const;
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  /// Same digraph, every coefficient multiplied by `factor` (> 0).
  Economy scaled(double factor) const;

 private:
  Economy(Matrix a, std::vector<std::string> labels);

  Matrix a_;
  std::vector<std::string> labels_;
  std::size_t positive_edges_ = 0;
  bool strongly_connected_ = false;
};

/// Simple directed cycle (i_1, ..., i_k): player i_{m+1} uses the good of
/// i_m, and i_1 uses the good of i_k. Stored in canonical rotation with the
/// smallest index first.
struct Cycle {
  std::vector<std::size_t> vertices;
  double product = 0.0;
  double geo_mean = 0.0;

  std::size_t length() const noexcept { return vertices.size(); }
  bool contains(std::size_t player) const;
  /// Player who uses the good of vertices[pos].
  std::size_t successor_of_position(std::size_t pos) const {
    return vertices[(pos + 1) % vertices.size()];
  }
  /// The player whose good `player` consumes along the cycle.
  std::size_t predecessor(std::size_t player) const;

  /// Checks the edges exist in `econ` and the vertices are distinct;
  /// fills product/geo_mean and rotates to canonical form.
  static Cycle make(const Economy& econ, std::vector<std::size_t> vertices);

  /// 1-based, e.g. "(1,2)".
  std::string to_string() const;

  friend bool operator==(const Cycle& a, const Cycle& b) { return a.vertices == b.vertices; }
};

enum class CycleSign { Bad, Neutral, Good };

/// Compares a cycle product against 1 with kProductTolerance.
CycleSign cycle_sign(double product) noexcept;

/// All simple cycles over strictly positive edges, each once, in canonical
/// rotation. Throws Errc::TooManyPlayers above `limit`.
std::vector<Cycle> enumerate_simple_cycles(const Economy& econ,
                                           std::size_t limit = kDefaultEnumerationLimit);

/// Maximum geometric-mean cycle via Karp's algorithm on log weights.
/// Throws Errc::NoCycle if the positive subgraph is acyclic.
Cycle max_mean_cycle(const Economy& econ);
/// Minimum geometric-mean cycle (Karp on negated log weights).
Cycle min_mean_cycle(const Economy& econ);

struct BestCycle {
  Cycle cycle;
  std::vector<Cycle> ties;  ///< other cycles with the same geo_mean (1e-9 rel)
  bool exhaustive = true;   ///< false when found by Karp; ties are then unknown
};

BestCycle best_cycle(const Economy& econ, std::size_t limit = kDefaultEnumerationLimit);

enum class GrowthTag { VanishesAlways, GrowsUnderAnyNonWasteful, GrowsUnderSome, NoGrowthPossible };

std::string_view to_string(GrowthTag tag) noexcept;

struct GrowthClass {
  GrowthTag tag = GrowthTag::NoGrowthPossible;
  std::optional<Cycle> witness;  ///< best good cycle for the two growth tags
  double max_geo_mean = 0.0;
  double min_geo_mean = 0.0;
};

/// Growth class under general mechanisms. "Every cycle" ranges over cycles
/// with strictly positive edges; cycles through a zero edge do not exist.
GrowthClass classify(const Economy& econ, std::size_t limit = kDefaultEnumerationLimit);

struct NormalizedEconomy {
  Economy economy;
  double w = 1.0;
};

/// Divides every edge by the best cycle's geometric mean.
NormalizedEconomy normalize(const Economy& econ);

/// Star economy: every positive edge touches `center`, which trades both
/// ways with every other player, and there are no self-loops.
struct StarShape {
  std::size_t center = 0;
  std::vector<std::size_t> spokes;
  Vector lambda;  ///< a(spoke, center)
  Vector mu;      ///< a(center, spoke)
  Vector alpha;   ///< lambda * mu
  double alpha_star = 0.0;
};

std::optional<StarShape> detect_star(const Economy& econ);

/// Builds a star with center n-1 (last player) and spokes 0..n-2.
Economy make_star(std::span<const double> lambda, std::span<const double> mu);

}  // namespace tpm
