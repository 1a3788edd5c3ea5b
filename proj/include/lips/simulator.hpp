#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>

#include "lips/dataset.hpp"

namespace lips {

// One of the 16 triangles of a tiling: the unit square is cut into 2x2
// quadrant sub-squares and each quadrant is cut by its diagonals into
// north/south/east/west triangles.
struct Tile {
  int index = 0;  // quadrant * 4 + orientation

  enum Quadrant { LL = 0, LR = 1, UL = 2, UR = 3 };
  enum Orientation { N = 0, S = 1, E = 2, W = 3 };

  static Tile of(Quadrant q, Orientation o) {
    return Tile{static_cast<int>(q) * 4 + static_cast<int>(o)};
  }
  Quadrant quadrant() const { return static_cast<Quadrant>(index / 4); }
  Orientation orientation() const { return static_cast<Orientation>(index % 4); }

  // centroid over the unit square; interiors avoid all predicate lines
  std::pair<double, double> centroid() const {
    double ox = (quadrant() == LR || quadrant() == UR) ? 0.5 : 0.0;
    double oy = (quadrant() == UL || quadrant() == UR) ? 0.5 : 0.0;
    switch (orientation()) {
      case N: return {ox + 0.25, oy + 5.0 / 12.0};
      case S: return {ox + 0.25, oy + 1.0 / 12.0};
      case E: return {ox + 5.0 / 12.0, oy + 0.25};
      default: return {ox + 1.0 / 12.0, oy + 0.25};
    }
  }
};

// (R, U, D, A, O) positional predicates evaluated on the tile centroid:
// right half, upper half, below the main diagonal, below the
// anti-diagonal, outside the inner rotated square.
inline std::array<int, 5> tile_features(const Tile& t) {
  if (t.index < 0 || t.index > 15)
    throw std::invalid_argument("tile index out of range");
  auto [x, y] = t.centroid();
  int R = x > 0.5;
  int U = y > 0.5;
  int D = y < x;
  int A = y < 1.0 - x;
  int O = std::fabs(x - 0.5) + std::fabs(y - 0.5) > 0.5;
  return {R, U, D, A, O};
}

struct TilingConfig {
  std::size_t n = 10000;
  // Defaults: two complementary-feature tiles per tiling, so that every
  // single positional feature is exactly balanced between the classes
  // and only interactions can separate them.
  std::set<int> red_left = {Tile::of(Tile::LL, Tile::S).index,
                            Tile::of(Tile::UR, Tile::W).index};
  std::set<int> red_right = {Tile::of(Tile::LL, Tile::W).index,
                             Tile::of(Tile::UR, Tile::S).index};
  double p_tilde = 0.005;  // mislabel prob. when both tiles are red
  double q_tilde = 0.05;   // mislabel prob. otherwise
  std::uint64_t seed = 0;

  void validate() const {
    for (auto s : {&red_left, &red_right})
      for (int i : *s)
        if (i < 0 || i > 15)
          throw std::invalid_argument("red tile index out of range");
    if (!(p_tilde >= 0 && p_tilde < 1) || !(q_tilde >= 0 && q_tilde < 1))
      throw std::invalid_argument("mislabel probabilities must be in [0,1)");
  }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Counter-based per-row stream: rows can be generated in any order or in
// parallel with identical output.
class RowRng {
 public:
  RowRng(std::uint64_t seed, std::uint64_t row)
      : state_(splitmix64(splitmix64(seed) ^ (row + 0x2545f4914f6cdd1dull))) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t x = state_;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  int tile_index() { return static_cast<int>(next() % 16); }

 private:
  std::uint64_t state_;
};

inline std::vector<std::string> tiling_feature_names() {
  return {"R1", "U1", "D1", "A1", "O1", "R2", "U2", "D2", "A2", "O2"};
}

struct RawRow {
  std::array<int, 10> features;
  int label;
};

inline RawRow draw_row(const TilingConfig& cfg, std::uint64_t row_index) {
  RowRng rng(cfg.seed, row_index);
  int left = rng.tile_index();
  int right = rng.tile_index();
  auto fl = tile_features(Tile{left});
  auto fr = tile_features(Tile{right});
  bool left_red = cfg.red_left.count(left) > 0;
  bool right_red = cfg.red_right.count(right) > 0;
  int y = (left_red || right_red) ? 1 : 0;
  double flip = rng.uniform();
  if (left_red && right_red) {
    if (flip < cfg.p_tilde) y = 0;
  } else {
    if (flip < cfg.q_tilde) y = 1 - y;
  }
  RawRow r;
  for (int j = 0; j < 5; ++j) {
    r.features[static_cast<std::size_t>(j)] = fl[static_cast<std::size_t>(j)];
    r.features[static_cast<std::size_t>(j + 5)] =
        fr[static_cast<std::size_t>(j)];
  }
  r.label = y;
  return r;
}

}  // namespace detail

// Draws n independent (left tile, right tile) pairs, derives the ten
// binary positional features and the noisy red-area label.
inline CategoricalDataset generate(const TilingConfig& cfg) {
  cfg.validate();
  CategoricalDataset ds;
  for (const auto& name : detail::tiling_feature_names())
    ds.variables.push_back({name, {"0", "1"}});
  ds.rows.reserve(cfg.n);
  ds.outcome.reserve(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    auto r = detail::draw_row(cfg, i);
    ds.rows.emplace_back(r.features.begin(), r.features.end());
    ds.outcome.push_back(r.label);
  }
  return ds;
}

// Pre-noise and post-noise positive class probabilities, by total
// probability over the four (left red, right red) cells.
inline std::pair<double, double> exact_prior(const TilingConfig& cfg) {
  cfg.validate();
  double rl = static_cast<double>(cfg.red_left.size()) / 16.0;
  double rr = static_cast<double>(cfg.red_right.size()) / 16.0;
  double raw = 1.0 - (1.0 - rl) * (1.0 - rr);
  double noisy = rl * rr * (1.0 - cfg.p_tilde) +
                 (rl * (1.0 - rr) + (1.0 - rl) * rr) * (1.0 - cfg.q_tilde) +
                 (1.0 - rl) * (1.0 - rr) * cfg.q_tilde;
  return {raw, noisy};
}

// Rejection-samples generated rows to hit a target minority fraction at
// fixed n, preserving the within-class feature distribution.
inline CategoricalDataset generate_with_minority_fraction(
    TilingConfig cfg, std::size_t n, double p1) {
  if (!(p1 > 0.0 && p1 < 1.0))
    throw std::invalid_argument("target minority fraction outside (0,1)");
  cfg.validate();
  std::size_t want_pos = static_cast<std::size_t>(
      std::llround(p1 * static_cast<double>(n)));
  if (want_pos == 0 || want_pos >= n)
    throw std::invalid_argument("unattainable minority fraction for this n");
  std::size_t want_neg = n - want_pos;
  CategoricalDataset ds;
  for (const auto& name : detail::tiling_feature_names())
    ds.variables.push_back({name, {"0", "1"}});
  std::size_t have_pos = 0, have_neg = 0;
  std::uint64_t row = 0;
  const std::uint64_t guard = 10000ull * static_cast<std::uint64_t>(n) + 1000000ull;
  while (have_pos < want_pos || have_neg < want_neg) {
    if (row > guard)
      throw std::runtime_error("rejection sampling budget exhausted");
    auto r = detail::draw_row(cfg, row++);
    if (r.label == 1) {
      if (have_pos == want_pos) continue;
      ++have_pos;
    } else {
      if (have_neg == want_neg) continue;
      ++have_neg;
    }
    ds.rows.emplace_back(r.features.begin(), r.features.end());
    ds.outcome.push_back(r.label);
  }
  return ds;
}

}  // namespace lips
