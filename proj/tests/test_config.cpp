#include <doctest.h>

#include "specbound/config.hpp"

using namespace specbound;

namespace {

const char* kGood = R"(schema_version = 1

[problem]
family = power_product
d = 2
a = 1.5
c = 0.1
tau = 0.01

[weight]
family = exp_eps_u
eps = 0.25, 0.1

[grid]
radius = 6
n = 101

[commands]
run = bound, eigs, verify, report

[output]
dir = /tmp/specbound-test
csv = true
)";

}  // namespace

TEST_CASE("config parses all sections") {
  config::RunConfig cfg = config::parse_config_text(kGood);
  CHECK(cfg.schema_version == 1);
  CHECK(cfg.problem.family == "power_product");
  CHECK(cfg.problem.dim == 2);
  CHECK(cfg.problem.a == doctest::Approx(1.5));
  CHECK(cfg.problem.c == doctest::Approx(0.1));
  CHECK(cfg.weight.family == "exp_eps_u");
  REQUIRE(cfg.weight.eps.size() == 2);
  CHECK(cfg.weight.eps[1] == doctest::Approx(0.1));
  CHECK(cfg.grid.radius == doctest::Approx(6.0));
  CHECK(cfg.grid.n == 101);
  REQUIRE(cfg.commands.size() == 4);
  CHECK(cfg.commands[0] == config::Command::Bound);
  CHECK(cfg.commands[3] == config::Command::Report);
  CHECK(cfg.output_dir == "/tmp/specbound-test");
  CHECK(cfg.write_csv);
}

TEST_CASE("config defaults by dimension") {
  config::RunConfig cfg = config::parse_config_text(
      "[problem]\nfamily = gaussian\nd = 1\n[commands]\nrun = eigs\n");
  CHECK(cfg.effective_radius() == doctest::Approx(8.0));
  CHECK(cfg.effective_n() == 4001);

  cfg.problem.dim = 2;
  CHECK(cfg.effective_radius() == doctest::Approx(7.0));
  CHECK(cfg.effective_n() == 161);

  cfg.problem.dim = 3;
  CHECK(cfg.effective_radius() == doctest::Approx(5.0));
  CHECK(cfg.effective_n() == 41);

  cfg.grid.radius = 3.5;
  cfg.grid.n = 33;
  CHECK(cfg.effective_radius() == doctest::Approx(3.5));
  CHECK(cfg.effective_n() == 33);
}

TEST_CASE("config fills default commands") {
  config::RunConfig cfg = config::parse_config_text(
      "[problem]\nfamily = gaussian\nd = 1\n");
  REQUIRE(cfg.commands.size() == 3);
  CHECK(cfg.commands[0] == config::Command::Bound);
  CHECK(cfg.commands[1] == config::Command::Eigs);
  CHECK(cfg.commands[2] == config::Command::Report);
}

TEST_CASE("config rejects unknown keys with a line number") {
  try {
    config::parse_config_text(
        "[problem]\nfamily = gaussian\nd = 1\nbogus = 1\n");
    CHECK(false);
  } catch (const config::ConfigError& e) {
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
  CHECK_THROWS_AS(config::parse_config_text("[nosuch]\nx = 1\n"),
                  config::ConfigError);
  CHECK_THROWS_AS(config::parse_config_text("schema_version = 2\n"),
                  config::ConfigError);
  CHECK_THROWS_AS(config::parse_config_text("stray = 1\n"),
                  config::ConfigError);
}

TEST_CASE("config rejects invalid values") {
  CHECK_THROWS_AS(config::parse_config_text(
                      "[problem]\nfamily = nosuch\nd = 1\n"),
                  config::ConfigError);
  CHECK_THROWS_AS(config::parse_config_text(
                      "[problem]\nfamily = gaussian\nd = 0\n"),
                  config::ConfigError);
  CHECK_THROWS_AS(config::parse_config_text(
                      "[problem]\nfamily = gaussian\nd = 1\n"
                      "[commands]\nrun = nosuch\n"),
                  config::ConfigError);
  CHECK_THROWS_AS(config::parse_config_text(
                      "[problem]\nfamily = gaussian\nd = x\n"),
                  config::ConfigError);
  CHECK_THROWS_AS(config::parse_config_text(
                      "[problem]\nfamily = custom\nd = 1\n"),
                  config::ConfigError);  // custom needs expr
  CHECK_THROWS_AS(config::parse_config_text(""), config::ConfigError);
}

TEST_CASE("config missing file") {
  CHECK_THROWS_AS(config::parse_config_file("/nonexistent/path.ini"),
                  config::ConfigError);
}
