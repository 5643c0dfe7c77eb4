#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

#include "mlvn/dataset.hpp"
#include "mlvn/error.hpp"
#include "mlvn/evalharness.hpp"

using namespace mlvn;

namespace {

const KomiGrid kSmallGrid(-4.5, 4.5, 0.5);

// A short game ending in two passes whose recorded result is simply `n`.
GameRecord synthetic_game(int n, int stones = 0) {
  GameRecord g;
  g.size = 5;
  for (int i = 0; i < stones; ++i) g.moves.push_back(Move::at(i));
  g.moves.push_back(Move::pass());
  g.moves.push_back(Move::pass());
  g.ownership.assign(25, Owner::Neutral);
  g.territory_diff = n;
  return g;
}

class RandomEvaluator final : public Evaluator {
 public:
  RandomEvaluator(KomiGrid grid, int points, std::uint64_t seed) : grid_(grid), points_(points), rng_(seed) {}
  const KomiGrid& grid() const override { return grid_; }
  bool supports_size(int size) const override { return size * size == points_; }
  Evaluation evaluate(const Board&) override {
    std::uniform_real_distribution<float> u(0.0f, 1.0f);
    Evaluation e;
    e.raw_tanh.assign(grid_.count(), 2.0f * u(rng_) - 1.0f);
    e.ownership.resize(points_);
    for (auto& o : e.ownership) o = u(rng_);
    return e;
  }

 private:
  KomiGrid grid_;
  int points_;
  std::mt19937_64 rng_;
};

class ThrowingEvaluator final : public Evaluator {
 public:
  const KomiGrid& grid() const override { return grid_; }
  bool supports_size(int) const override { return true; }
  Evaluation evaluate(const Board&) override { throw Error(ErrorKind::EngineFailure, "evaluator offline"); }

 private:
  KomiGrid grid_ = kSmallGrid;
};

std::unique_ptr<Engine> quick_engine(int playouts, const std::string& name) {
  EngineConfig cfg;
  cfg.name = name;
  cfg.search.playouts = playouts;
  return std::make_unique<Engine>(cfg, std::make_shared<ConstantEvaluator>(kSmallGrid, 0.0f));
}

}  // namespace

TEST_SUITE("evalharness") {
  TEST_CASE("ci95") {
    auto c = ci95(338, 500);
    CHECK(c.p == doctest::Approx(0.676));
    CHECK(c.half_width == doctest::Approx(0.0410).epsilon(1e-3));
    c = ci95(125, 250);
    CHECK(c.half_width * 100 == doctest::Approx(6.21).epsilon(0.002));
    c = ci95(0, 10);
    CHECK(c.p == 0.0);
    CHECK(c.half_width == 0.0);
    CHECK_THROWS_AS(ci95(1, 0), Error);
    CHECK_THROWS_AS(ci95(5, 4), Error);
  }

  TEST_CASE("mse of zero and perfect evaluators") {
    const auto games = generate_games(30, 5, 3, ResolutionMode::FullResolution, 0.5);
    ConstantEvaluator zero(kSmallGrid, 0.0f);
    const auto curve = mse_curve(games, zero, 0.5, 20);
    CHECK(curve.games == 30);
    REQUIRE(curve.mse.size() == 21);
    for (int j = 0; j <= 20; ++j) {
      if (curve.counts[j] > 0) CHECK(curve.mse[j] == 0.5);
    }
    CHECK(curve.counts[0] == 30);
    int total = 0;
    for (int c : curve.counts) total += c;
    int positions = 0;
    for (const auto& g : games) positions += static_cast<int>(g.moves.size()) + 1;
    CHECK(total == positions);

    for (const auto& g : games) {
      OracleEvaluator oracle(kSmallGrid, g.territory_diff, g.ownership);
      const std::span<const GameRecord> one(&g, 1);
      const auto perfect = mse_curve(one, oracle, 0.5, 20);
      for (int j = 0; j <= 20; ++j) {
        if (perfect.counts[j] > 0) CHECK(perfect.mse[j] == 0.0);
      }
    }
    CHECK_THROWS_AS(mse_curve({}, zero, 0.5), Error);
  }

  TEST_CASE("single-output grid uses its only output") {
    Evaluation e{{0.25f}, {}};
    CHECK(raw_value_at(e, KomiGrid::single(7.5), 0.5) == 0.25);
    Evaluation two{{1.0f, 0.0f}, {}};
    CHECK(raw_value_at(two, KomiGrid(0.5, 1.5, 0.5), 1.0) == doctest::Approx(0.5));
    CHECK_THROWS_AS(raw_value_at(two, kSmallGrid, 1.0), Error);
  }

  TEST_CASE("d-prediction with an oracle and a constructed corpus") {
    const std::vector<int> ds{0, 1, 2, 3};
    const auto games = generate_games(40, 5, 8, ResolutionMode::FullResolution, 0.5);
    int used = 0;
    for (const auto& g : games) {
      OracleEvaluator oracle(kSmallGrid, g.territory_diff, g.ownership);
      const std::span<const GameRecord> one(&g, 1);
      if (g.territory_diff < -4 || g.territory_diff > 5) {
        CHECK_THROWS_AS(d_prediction_rates(one, oracle, ds, 40), Error);
        continue;
      }
      ++used;
      const auto report = d_prediction_rates(one, oracle, ds, 40);
      for (const auto& row : report.rates) {
        for (double r : row) CHECK(r == 1.0);
      }
    }
    CHECK(used > 0);

    std::vector<GameRecord> corpus;
    for (int i = 0; i < 5; ++i) corpus.push_back(synthetic_game(3, i));
    OracleEvaluator five(kSmallGrid, 5, Ownership(25, Owner::Neutral));
    const auto report = d_prediction_rates(corpus, five, ds, 10);
    CHECK(report.games_used == 5);
    for (const auto& row : report.rates) {
      CHECK(row[1] == 0.0);
      CHECK(row[2] == 1.0);
    }
    CHECK(report.games_at[0] == 5);
    CHECK(report.games_at.back() == 1);

    std::vector<GameRecord> resigned{synthetic_game(3)};
    resigned[0].resigned = true;
    CHECK_THROWS_AS(d_prediction_rates(resigned, five, ds, 10), Error);
  }

  TEST_CASE("d-prediction rates are nondecreasing in d") {
    const std::vector<int> ds{0, 1, 2, 5};
    const auto games = generate_games(60, 5, 12, ResolutionMode::FullResolution, 0.5);
    RandomEvaluator random(kSmallGrid, 25, 4);
    const auto report = d_prediction_rates(games, random, ds, 30);
    for (const auto& row : report.rates) {
      for (std::size_t k = 1; k < row.size(); ++k) CHECK(row[k] >= row[k - 1]);
    }
  }

  TEST_CASE("correlation scatter") {
    const auto games = generate_games(50, 5, 21, ResolutionMode::FullResolution, 0.5);
    std::vector<Board> finals;
    for (const auto& g : games) finals.push_back(g.position_at(g.moves.size()));
    // Oracle fed final positions: ownership and value agree on who won.
    int discordant = 0;
    for (std::size_t i = 0; i < games.size(); ++i) {
      OracleEvaluator oracle(kSmallGrid, games[i].territory_diff, games[i].ownership);
      const auto s = correlation_scatter(std::span<const Board>(&finals[i], 1), oracle, 0.5);
      discordant += s.discordant() > 0 ? 1 : 0;
      CHECK(s.points.size() == 1);
    }
    CHECK(discordant == 0);

    std::vector<Board> many;
    for (const auto& g : games) {
      for (std::size_t i = 0; i < g.moves.size(); i += 3) many.push_back(g.position_at(i));
    }
    RandomEvaluator random(kSmallGrid, 25, 2);
    const auto s = correlation_scatter(many, random, 0.5);
    CHECK(s.discordant() == doctest::Approx(0.5).epsilon(0.2));
    CHECK(s.upper_left + s.upper_right + s.lower_left + s.lower_right == doctest::Approx(1.0));
    std::ostringstream csv;
    write_scatter_csv(s, csv);
    CHECK(csv.str().rfind("bv_territory,win_rate\n", 0) == 0);
  }

  TEST_CASE("self-play match is balanced and swapping engines complements it") {
    MatchConfig cfg;
    cfg.games = 20;
    cfg.board_size = 5;
    cfg.komi = 0.5;
    cfg.seed = 7;
    const auto a = [] { return quick_engine(16, "a"); };
    const auto b = [] { return quick_engine(48, "b"); };
    const auto ab = run_match(a, b, cfg);
    const auto ba = run_match(b, a, cfg);
    CHECK(ab.games == 20);
    CHECK(ab.wins + ab.losses == ab.games);
    CHECK(ab.wins + ba.wins == 20);
    for (int g = 0; g < 20; ++g) {
      // Game 2p of one run is game 2p+1 of the other with the same players.
      CHECK(ab.outcomes[g].territory_diff == ba.outcomes[g ^ 1].territory_diff);
      CHECK(ab.outcomes[g].a_won != ba.outcomes[g ^ 1].a_won);
      CHECK(ab.outcomes[g].a_color == (g % 2 == 0 ? Color::Black : Color::White));
    }
    CHECK(ab.outcomes[0].seed == ab.outcomes[1].seed);
    CHECK(ab.outcomes[0].seed != ab.outcomes[2].seed);

    const auto self = run_match(a, a, cfg);
    CHECK(std::abs(self.p - 0.5) <= ci95(10, 20).half_width);
    // Identical engines replay each paired game with colours exchanged.
    CHECK(self.p == 0.5);
  }

  TEST_CASE("handicap matches give engine A White and write SGFs") {
    const auto dir = std::filesystem::temp_directory_path() / "mlvn_match_test";
    std::filesystem::remove_all(dir);
    MatchConfig cfg;
    cfg.games = 3;
    cfg.board_size = 5;
    cfg.komi = 0.5;
    cfg.handicap = 2;
    cfg.sgf_dir = dir;
    const auto a = [] { return quick_engine(8, "a"); };
    const auto r = run_match(a, a, cfg);
    for (const auto& o : r.outcomes) {
      CHECK(o.a_color == Color::White);
      CHECK(std::filesystem::exists(o.sgf));
    }
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("an engine that fails loses the game") {
    MatchConfig cfg;
    cfg.games = 2;
    cfg.board_size = 5;
    cfg.komi = 0.5;
    const auto good = [] { return quick_engine(8, "good"); };
    const auto broken = [] {
      EngineConfig ec;
      ec.search.playouts = 8;
      return std::make_unique<Engine>(ec, std::make_shared<ThrowingEvaluator>());
    };
    const auto r = run_match(good, broken, cfg);
    CHECK(r.wins == 2);
    for (const auto& o : r.outcomes) {
      CHECK(o.failure);
      CHECK_FALSE(o.failure_reason.empty());
    }
    CHECK_THROWS_AS(run_match(good, good, MatchConfig{.games = 0}), Error);
  }
}
