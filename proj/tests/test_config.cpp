#include <catch_amalgamated.hpp>
#include <sstream>

#include "presmet/config.hpp"

using namespace presmet;

static Config parse_str(const std::string& s) {
  std::istringstream is(s);
  return Config::parse(is, "test");
}

TEST_CASE("config: sections, comments, typed lookups") {
  Config cfg = parse_str(
      "top = 1\n"
      "[spectrum]\n"
      "kind = spectral   # trailing comment\n"
      "max_len = 8\n"
      "\n"
      "[suite]\n"
      "genus2_caps = 6, 8, 10\n"
      "scale = -0.25\n");
  CHECK(cfg.get("top") == "1");
  CHECK(cfg.get("spectrum.kind") == "spectral");
  CHECK(cfg.get_int("spectrum.max_len") == 8);
  CHECK(cfg.get_double("suite.scale") == -0.25);
  CHECK(cfg.get_doubles("suite.genus2_caps") ==
        std::vector<double>{6.0, 8.0, 10.0});
  CHECK(cfg.has("suite.scale"));
  CHECK_FALSE(cfg.has("suite.missing"));
  CHECK(cfg.get_or("suite.missing", "dflt") == "dflt");
  CHECK(cfg.get_int_or("suite.missing", 42) == 42);
  CHECK(cfg.get_double_or("suite.missing", 1.5) == 1.5);
}

TEST_CASE("config: errors carry origin, line, and key") {
  CHECK_THROWS_WITH(parse_str("[spectrum\nk = 1\n"),
                    Catch::Matchers::ContainsSubstring("test:1") &&
                        Catch::Matchers::ContainsSubstring("unterminated"));
  CHECK_THROWS_WITH(parse_str("a = 1\nnot a pair\n"),
                    Catch::Matchers::ContainsSubstring("test:2"));
  CHECK_THROWS_WITH(parse_str("a = 1\na = 2\n"),
                    Catch::Matchers::ContainsSubstring("duplicate key \"a\""));
  CHECK_THROWS_WITH(parse_str("[]\n"),
                    Catch::Matchers::ContainsSubstring("empty section"));
  CHECK_THROWS_WITH(parse_str("= 3\n"),
                    Catch::Matchers::ContainsSubstring("empty key"));

  Config cfg = parse_str("[s]\nn = 3x\nv = 1.2.3\nl = ,\n");
  CHECK_THROWS_WITH(cfg.get("s.absent"),
                    Catch::Matchers::ContainsSubstring("s.absent"));
  CHECK_THROWS_WITH(cfg.get_int("s.n"),
                    Catch::Matchers::ContainsSubstring("test:2") &&
                        Catch::Matchers::ContainsSubstring("not an integer"));
  CHECK_THROWS_WITH(cfg.get_double("s.v"),
                    Catch::Matchers::ContainsSubstring("test:3") &&
                        Catch::Matchers::ContainsSubstring("not a number"));
  CHECK_THROWS_AS(cfg.get_doubles("s.l"), ConfigError);
}

TEST_CASE("config: load reports unreadable path") {
  CHECK_THROWS_WITH(Config::load("/nonexistent/nope.cfg"),
                    Catch::Matchers::ContainsSubstring("/nonexistent/nope.cfg"));
}
