#include <doctest.h>

#include <sstream>

#include "gtp_script.hpp"
#include "mlvn/config.hpp"
#include "mlvn/error.hpp"
#include "mlvn/gtp.hpp"
#include "mlvn/sgf.hpp"

using namespace mlvn;

namespace {

EngineConfig fast_config() {
  EngineConfig cfg;
  cfg.search.playouts = 32;
  return cfg;
}

std::string body_of(GtpServer& gtp, const std::string& command) {
  return gtp_script::body(gtp.handle(command));
}

}  // namespace

TEST_SUITE("gtpcli") {
  TEST_CASE("scripted session") {
    Engine engine(fast_config(), std::make_shared<ConstantEvaluator>(KomiGrid(), 0.0f));
    GtpServer gtp(engine);
    const auto report = gtp_script::run(gtp);
    for (const auto& f : report.failures) FAIL_CHECK(f);
    CHECK(report.steps > 40);
  }

  TEST_CASE("responses and errors") {
    Engine engine(fast_config(), std::make_shared<ConstantEvaluator>(KomiGrid(), 0.0f));
    GtpServer gtp(engine);
    CHECK(gtp.handle("protocol_version") == "= 2\n\n");
    CHECK(gtp.handle("7 name") == "=7 mlvn\n\n");
    CHECK(gtp.handle("frobnicate") == "? unknown command\n\n");
    CHECK(gtp.handle("") == "");
    CHECK(gtp.handle("play b E5") == "=\n\n");
    CHECK(gtp.handle("play w E5") == "? illegal move\n\n");
    CHECK(gtp.handle("boardsize 21") == "? unacceptable size\n\n");
    CHECK(gtp.handle("mlvn-dynkomi") == "= method none komi 7.5 real 7.5\n\n");
    CHECK_FALSE(gtp.quit_requested());
  }

  TEST_CASE("handicap final score on an immediate double pass") {
    for (int h = 2; h <= 5; ++h) {
      Engine engine(fast_config(), std::make_shared<ConstantEvaluator>(KomiGrid(), 0.0f));
      GtpServer gtp(engine);
      gtp.handle("komi 0.5");
      gtp.handle("fixed_handicap " + std::to_string(h));
      gtp.handle("play w pass");
      gtp.handle("play b pass");
      CHECK(body_of(gtp, "final_score") == "B+80.5");
    }
  }

  TEST_CASE("score prediction with an oracle evaluator") {
    const auto game = generate_game(light_policy(), 9, 31);
    const int n = std::clamp(game.territory_diff, -20, 21);
    Engine engine(fast_config(), std::make_shared<OracleEvaluator>(KomiGrid(), n, game.ownership));
    GtpServer gtp(engine);
    CHECK(body_of(gtp, "mlvn-score-prediction") == std::to_string(n));
  }

  TEST_CASE("genmove is reproducible with a fixed seed") {
    auto moves = [] {
      Engine engine(fast_config(), std::make_shared<ConstantEvaluator>(KomiGrid(), 0.0f));
      GtpServer gtp(engine);
      std::string out;
      for (int i = 0; i < 6; ++i) out += body_of(gtp, i % 2 ? "genmove w" : "genmove b") + " ";
      return out;
    };
    CHECK(moves() == moves());
  }

  TEST_CASE("replaying the same commands gives the same state") {
    const std::vector<std::string> script{"boardsize 7", "komi 3.5", "play b D4", "play w C3", "genmove b",
                                          "komi 4.5", "play w pass"};
    auto run = [&] {
      Engine engine(fast_config(), std::make_shared<ConstantEvaluator>(KomiGrid(), 0.0f));
      GtpServer gtp(engine);
      for (const auto& c : script) gtp.handle(c);
      return std::make_pair(engine.board().hash(), body_of(gtp, "mlvn-dynkomi"));
    };
    CHECK(run() == run());
  }

  TEST_CASE("serve loop stops at quit") {
    Engine engine(fast_config(), std::make_shared<ConstantEvaluator>(KomiGrid(), 0.0f));
    GtpServer gtp(engine);
    std::istringstream in("name\nbogus\nquit\nname\n");
    std::ostringstream out;
    gtp.serve(in, out);
    CHECK(out.str() == "= mlvn\n\n? unknown command\n\n=\n\n");
  }

  TEST_CASE("config parsing") {
    const RunConfig defaults;
    CHECK(defaults.search.lambda == 0.5);
    CHECK(defaults.search.batch_size == 16);
    CHECK(defaults.dynkomi.c == 8.0);
    CHECK(defaults.dynkomi.s == 0.45);
    CHECK(defaults.dynkomi.l == 0.45);
    CHECK(defaults.dynkomi.u == 0.55);
    const RunConfig back = parse_config(defaults.to_ini());
    CHECK(back.hash() == defaults.hash());
    CHECK(defaults.hash().size() == 16);

    const RunConfig c = parse_config("[search]\nplayouts = 50\n[dynkomi]\nmethod = ml-dk\n[eval]\nds = 0,2,4\n");
    CHECK(c.search.playouts == 50);
    CHECK(c.dynkomi.method == DynKomiMethod::MLDK);
    CHECK(c.eval.ds == std::vector<int>{0, 2, 4});
    CHECK(c.hash() != defaults.hash());

    auto kind = [](const std::string& text) {
      try {
        parse_config(text);
      } catch (const Error& e) {
        return e.kind();
      }
      return ErrorKind::EngineFailure;
    };
    CHECK(kind("[search]\nplayoutz = 3\n") == ErrorKind::InvalidConfig);
    CHECK(kind("[nosuch]\nx = 1\n") == ErrorKind::InvalidConfig);
    CHECK(kind("[search]\nplayouts = many\n") == ErrorKind::InvalidConfig);
    CHECK(kind("[search]\nlambda = 2\n") == ErrorKind::InvalidConfig);
    CHECK(kind("[board]\nsize = 8\n") == ErrorKind::InvalidConfig);
    CHECK_THROWS_AS(load_config("/nonexistent/config.ini"), Error);
  }

  TEST_CASE("sgf round trip") {
    const auto game = generate_game(light_policy(), 9, 77, ResolutionMode::FullResolution, 5, 6.5);
    const std::string text = to_sgf(game, {"alpha", "beta"});
    CHECK(text.find("SZ[9]") != std::string::npos);
    CHECK(text.find("KM[6.5]") != std::string::npos);
    CHECK(text.find("PB[alpha]") != std::string::npos);
    const auto back = from_sgf(text);
    CHECK(back.moves == game.moves);
    CHECK(back.territory_diff == game.territory_diff);
    CHECK(back.ownership == game.ownership);
    CHECK(back.komi == 6.5);

    GameRecord hc;
    hc.size = 9;
    hc.komi = 0.5;
    hc.handicap = 2;
    Board b(9, 0.5);
    b.place_handicap(2);
    for (int v = 0; v < 81; ++v) {
      if (b.at(v) == Color::Black) hc.setup_black.push_back(v);
    }
    hc.moves = {Move::at(40), Move::pass(), Move::pass()};
    b.play(hc.moves[0]);
    b.play(Move::pass());
    b.play(Move::pass());
    hc.ownership = b.final_ownership().first;
    hc.territory_diff = b.final_ownership().second.territory_diff;
    const auto hback = from_sgf(to_sgf(hc));
    CHECK(hback.setup_black == hc.setup_black);
    CHECK(hback.territory_diff == hc.territory_diff);
    CHECK(hback.handicap == 2);

    CHECK_THROWS_AS(from_sgf("(;GM[1]SZ[9];B[zz])"), Error);
    CHECK_THROWS_AS(from_sgf("not an sgf"), Error);
  }
}
