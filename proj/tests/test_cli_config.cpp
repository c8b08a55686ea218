#include <doctest.h>

#include "spernerlab/cli_config.hpp"
#include "spernerlab/errors.hpp"

using namespace sperner;

TEST_CASE("config round trip is the identity") {
  RunConfig cfg;
  cfg.subcommand = "sweep";
  cfg.n = 10;
  cfg.p_values = {0.6, 0.75, 0.9};
  cfg.trials = 1000;
  cfg.seed = 42;
  cfg.threads = 4;
  cfg.out = "main.csv";

  auto j = cfg.to_json();
  RunConfig back = RunConfig::from_json(j);
  CHECK(back == cfg);
  CHECK(back.to_json() == j);
}

TEST_CASE("unknown config keys are rejected") {
  nlohmann::json j{{"subcommand", "width"}, {"no_such_knob", 1}};
  CHECK_THROWS_AS(RunConfig::from_json(j), ConfigError);
}

TEST_CASE("missing keys keep defaults") {
  RunConfig defaults;
  RunConfig cfg = RunConfig::from_json(nlohmann::json{{"n", 7}});
  CHECK(cfg.n == 7);
  CHECK(cfg.trials == defaults.trials);
  CHECK(cfg.format == defaults.format);
  CHECK(!cfg.seed);
}

TEST_CASE("list parsing") {
  CHECK(parse_double_list("0.6,0.75,0.9") ==
        std::vector<double>{0.6, 0.75, 0.9});
  CHECK(parse_double_list("1") == std::vector<double>{1.0});
  CHECK_THROWS_AS(parse_double_list("a,b"), ConfigError);
  CHECK_THROWS_AS(parse_double_list(""), ConfigError);

  CHECK(parse_int_list("4,6,8") == std::vector<int>{4, 6, 8});
  CHECK(parse_int_list("8..11") == std::vector<int>{8, 9, 10, 11});
  CHECK(parse_int_list("3,8..10") == std::vector<int>{3, 8, 9, 10});
  CHECK_THROWS_AS(parse_int_list("5..3"), ConfigError);
}
