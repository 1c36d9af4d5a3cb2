#include <doctest.h>

#include <cmath>

#include "fkdyn/io.hpp"

using namespace fkdyn;
using json = nlohmann::json;

TEST_CASE("words: digit strings and separated numbers") {
  CHECK(io::parse_word("0110\n") == Word{0, 1, 1, 0});
  CHECK(io::parse_word("0.5, 0.25 1") == Word{0.5, 0.25, 1});
  CHECK(io::parse_word("-1 2") == Word{-1, 2});
  CHECK_THROWS_AS(io::parse_word("01a"), Error);
  CHECK(io::format_word({1, 0, 1}) == "101");
  CHECK(io::format_word({0.5, 12}) == "0.5 12");
  const Word w{0.1, 1.0 / 3.0, 2};
  CHECK(io::parse_word(io::format_word(w)) == w);
}

TEST_CASE("numbers round-trip in shortest form") {
  for (double v : {0.1, 1.0 / 3.0, std::log(2.0), 1e-300, 12345.0}) {
    CHECK(std::stod(io::format_number(v)) == v);
  }
  CHECK(io::format_number(0.25) == "0.25");
}

TEST_CASE("orbits, measures and block distributions through json") {
  const auto orbit = io::orbit_from_json(json::parse(R"({"block": "011"})"));
  CHECK(orbit.word() == Word{0, 1, 1});
  CHECK(io::orbit_from_json(io::orbit_to_json(orbit, "full-shift")).word() == orbit.word());
  CHECK_THROWS_AS(io::orbit_from_json(json::parse(R"({"system": "torus", "block": "0"})")), Error);

  const auto sys = MetricSystem::circle_rotation(0.5);
  const auto mu = io::measure_from_json(sys, json::parse(R"({"support": [0.1, 0.6], "weights": [0.25, 0.75]})"));
  CHECK(io::measure_to_json(mu) == json::parse(R"({"support": [0.1, 0.6], "weights": [0.25, 0.75]})"));

  const auto bd = io::blocks_from_json(json::parse(R"({"00": 0.5, "11": 0.5})"));
  CHECK(bd.n == 2);
  CHECK(io::blocks_to_json(bd) == json::parse(R"({"00": 0.5, "11": 0.5})"));
  CHECK_THROWS_AS(io::blocks_from_json(json::parse(R"({"00": 0.5, "1": 0.5})")), Error);
}

TEST_CASE("coupling csv") {
  Coupling c;
  c.n = 1;
  c.mass[{Word{0}, Word{1}}] = 0.5;
  CHECK(io::coupling_csv(c) == "u,w,mass\n0,1,0.5\n");
}

TEST_CASE("gikn settings are read strictly") {
  auto j = json::parse(R"({"alphabet": "01", "seed_word": "0", "levels": 3, "gamma_budget": [1, 0.25],
    "kappa_floor": [0.5, 0.75], "weights": {"0": -1, "1": 1}, "alpha": 0.5})");
  const auto c = io::gikn_config_from_json(j);
  CHECK(c.alphabet == Word{0, 1});
  CHECK(c.levels == 3);
  CHECK(c.weights.at(1) == 1.0);
  j["gama"] = 1;
  CHECK_THROWS_WITH_AS(io::gikn_config_from_json(j), doctest::Contains("'gama' unknown key"), Error);
  j.erase("gama");
  j.erase("alpha");
  CHECK_THROWS_WITH_AS(io::gikn_config_from_json(j), doctest::Contains("'alpha' missing"), Error);
}
