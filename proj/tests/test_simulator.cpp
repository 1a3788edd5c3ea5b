#include <catch2/catch_amalgamated.hpp>
#include <map>

#include "lips/simulator.hpp"

using namespace lips;
using Catch::Matchers::WithinAbs;

TEST_CASE("centroid features of reference tiles") {
  CHECK(tile_features(Tile::of(Tile::UR, Tile::N)) ==
        std::array<int, 5>{1, 1, 0, 0, 1});
  CHECK(tile_features(Tile::of(Tile::LL, Tile::S)) ==
        std::array<int, 5>{0, 0, 1, 1, 1});
  CHECK(tile_features(Tile::of(Tile::LL, Tile::N)) ==
        std::array<int, 5>{0, 0, 0, 1, 0});
  CHECK_THROWS_AS(tile_features(Tile{16}), std::invalid_argument);
  CHECK_THROWS_AS(tile_features(Tile{-1}), std::invalid_argument);
}

TEST_CASE("the sixteen tiles have distinct feature tuples") {
  std::map<std::array<int, 5>, int> seen;
  int outside = 0;
  for (int i = 0; i < 16; ++i) {
    auto f = tile_features(Tile{i});
    CHECK(seen.insert({f, i}).second);
    outside += f[4];
    // upper-right tiles are never below the anti-diagonal
    if (f[0] == 1 && f[1] == 1) CHECK(f[3] == 0);
  }
  // exactly the eight inner triangles touch the rotated square
  CHECK(outside == 8);
}

TEST_CASE("default red tiles balance every marginal feature") {
  TilingConfig cfg;
  // each red set pairs a tile with its feature-complement
  for (const auto* s : {&cfg.red_left, &cfg.red_right}) {
    REQUIRE(s->size() == 2);
    auto it = s->begin();
    auto f1 = tile_features(Tile{*it++});
    auto f2 = tile_features(Tile{*it});
    for (int j = 0; j < 5; ++j)
      CHECK(f1[static_cast<std::size_t>(j)] +
                f2[static_cast<std::size_t>(j)] ==
            1);
  }
}

TEST_CASE("exact priors") {
  TilingConfig cfg;
  auto [raw, noisy] = exact_prior(cfg);
  CHECK_THAT(raw, WithinAbs(1.0 - (14.0 / 16.0) * (14.0 / 16.0), 1e-15));
  CHECK_THAT(raw, WithinAbs(0.234375, 1e-15));
  CHECK_THAT(noisy, WithinAbs(0.261640625, 1e-12));

  // no red tiles: the raw label is constant zero, noise flips q of them
  TilingConfig empty;
  empty.red_left.clear();
  empty.red_right.clear();
  auto [raw0, noisy0] = exact_prior(empty);
  CHECK(raw0 == 0.0);
  CHECK_THAT(noisy0, WithinAbs(empty.q_tilde, 1e-15));

  // no noise: priors agree
  TilingConfig clean;
  clean.p_tilde = 0.0;
  clean.q_tilde = 0.0;
  auto [rawc, noisyc] = exact_prior(clean);
  CHECK_THAT(rawc, WithinAbs(noisyc, 1e-15));
}

TEST_CASE("generate produces the advertised shape") {
  TilingConfig cfg;
  cfg.n = 500;
  cfg.seed = 11;
  auto ds = generate(cfg);
  REQUIRE(ds.n() == 500);
  REQUIRE(ds.p() == 10);
  CHECK(ds.variables[0].name == "R1");
  CHECK(ds.variables[9].name == "O2");
  for (std::size_t i = 0; i < ds.n(); ++i) {
    for (int v : ds.rows[i]) CHECK((v == 0 || v == 1));
    CHECK((ds.outcome[i] == 0 || ds.outcome[i] == 1));
  }
  ds.validate();
}

TEST_CASE("generation is reproducible and row-order independent") {
  TilingConfig cfg;
  cfg.n = 200;
  cfg.seed = 99;
  auto a = generate(cfg);
  auto b = generate(cfg);
  CHECK(a.rows == b.rows);
  CHECK(a.outcome == b.outcome);

  cfg.seed = 100;
  auto c = generate(cfg);
  CHECK(a.rows != c.rows);

  // the first rows of a longer run coincide with the shorter run
  TilingConfig longer = cfg;
  longer.seed = 99;
  longer.n = 300;
  auto d = generate(longer);
  for (std::size_t i = 0; i < 200; ++i) {
    CHECK(d.rows[i] == a.rows[i]);
    CHECK(d.outcome[i] == a.outcome[i]);
  }
}

TEST_CASE("empirical prior matches the exact prior") {
  TilingConfig cfg;
  cfg.n = 60000;
  cfg.seed = 7;
  auto ds = generate(cfg);
  double pos = 0;
  for (int y : ds.outcome) pos += y;
  auto [raw, noisy] = exact_prior(cfg);
  (void)raw;
  // binomial sd at n = 60000 is about 0.0018; allow four sigmas
  CHECK_THAT(pos / static_cast<double>(cfg.n), WithinAbs(noisy, 0.0075));
}

TEST_CASE("labels follow the red regions when noise is off") {
  TilingConfig cfg;
  cfg.n = 2000;
  cfg.seed = 21;
  cfg.p_tilde = 0.0;
  cfg.q_tilde = 0.0;
  auto ds = generate(cfg);
  // reconstruct labels from the feature tuples of the red tiles
  auto tuple_of = [](int idx) { return tile_features(Tile{idx}); };
  std::vector<std::array<int, 5>> left_red, right_red;
  for (int i : cfg.red_left) left_red.push_back(tuple_of(i));
  for (int i : cfg.red_right) right_red.push_back(tuple_of(i));
  for (std::size_t i = 0; i < ds.n(); ++i) {
    std::array<int, 5> fl{}, fr{};
    for (int j = 0; j < 5; ++j) {
      fl[static_cast<std::size_t>(j)] = ds.rows[i][static_cast<std::size_t>(j)];
      fr[static_cast<std::size_t>(j)] =
          ds.rows[i][static_cast<std::size_t>(j) + 5];
    }
    bool red = false;
    for (const auto& t : left_red) red = red || t == fl;
    for (const auto& t : right_red) red = red || t == fr;
    REQUIRE(ds.outcome[i] == (red ? 1 : 0));
  }
}

TEST_CASE("config validation") {
  TilingConfig bad;
  bad.red_left.insert(20);
  CHECK_THROWS_AS(generate(bad), std::invalid_argument);
  TilingConfig badp;
  badp.p_tilde = 1.5;
  CHECK_THROWS_AS(generate(badp), std::invalid_argument);
}

TEST_CASE("generate_with_minority_fraction hits the target exactly") {
  TilingConfig cfg;
  cfg.seed = 31;
  for (double p1 : {0.05, 0.10, 0.20, 0.40}) {
    auto ds = generate_with_minority_fraction(cfg, 1000, p1);
    REQUIRE(ds.n() == 1000);
    double pos = 0;
    for (int y : ds.outcome) pos += y;
    CHECK(pos == std::llround(1000 * p1));
  }
  CHECK_THROWS_AS(generate_with_minority_fraction(cfg, 100, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(generate_with_minority_fraction(cfg, 100, 1.0),
                  std::invalid_argument);
}
