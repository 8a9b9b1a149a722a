#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "reachquant/config.hpp"
#include "reachquant/errors.hpp"
#include "test_support.hpp"

using namespace reachquant;

namespace {

// Minimal well-formed experiment; individual cases patch lines in and out.
const char* kBase = R"(
A = [-1 -4; 4 -1]
B = [1; 1]
E = [1; 1]
H = [1 0]
P = [2.0648 0.9237; 0.9237 1.9195]
Q = [-7.7353; -0.0248]
nu1 = 8.2561
nu2 = 7.2571
x_c = [10 -5]
x_b = 1
u_b = 0.5
d_b = 0.05
N = 4
T = 0.1
horizon = 20
scheme = both
)";

std::string with(const std::string& extra) { return std::string(kBase) + extra + "\n"; }

}  // namespace

TEST_CASE("parsing the minimal experiment") {
  const ExperimentConfig cfg = ExperimentConfig::parse_string(kBase);
  CHECK(cfg.plant.A == Mat{{-1.0, -4.0}, {4.0, -1.0}});
  CHECK(cfg.cert.nu1 == 8.2561);
  CHECK(cfg.bounds.x_c == Vec{10.0, -5.0});
  CHECK(cfg.quantizer.levels == 4);
  CHECK(cfg.quantizer.bits == 4);
  CHECK(cfg.T == 0.1);
  CHECK(cfg.horizon == 20.0);
  CHECK(cfg.schemes == std::vector<SchemeKind>{SchemeKind::SetBased, SchemeKind::NormBased});

  // Defaults.
  CHECK(cfg.dt == 1e-3);
  CHECK(cfg.seeds == std::vector<std::uint64_t>{1});
  CHECK(cfg.out_dir == "out");
  CHECK(cfg.growth == GrowthBound::Integral);
  CHECK(cfg.decoder == DecoderRange::Full);
  CHECK(cfg.x0.empty());
  CHECK(cfg.signals.input == SignalSpec::Input::Zero);
  CHECK(cfg.signals.disturbance == SignalSpec::Disturbance::Zero);
}

TEST_CASE("parsing the shipped reference file") {
  const ExperimentConfig cfg = ExperimentConfig::parse_file("configs/reference.cfg");
  CHECK(cfg.plant.A == refsys::plant().A);
  CHECK(cfg.cert.P == refsys::certificate().P);
  CHECK(cfg.x0 == Vec{10.5, -5.5});
  CHECK(cfg.seeds == std::vector<std::uint64_t>{1, 2, 3, 4, 5});
  CHECK(cfg.signals.input == SignalSpec::Input::Sinusoid);
  CHECK(cfg.signals.amplitude == 0.5);
  CHECK(cfg.signals.disturbance == SignalSpec::Disturbance::SeededUniform);
  CHECK(cfg.signals.dist_bound == 0.05);
  CHECK(cfg.sweep_T.size() == 6);
  CHECK(cfg.sweep_N == std::vector<int>{2, 3, 4, 6, 8});
}

TEST_CASE("emit and parse round trip exactly") {
  ExperimentConfig cfg = ExperimentConfig::parse_file("configs/reference.cfg");
  CHECK(ExperimentConfig::parse_string(cfg.emit()) == cfg);

  // Round trip survives awkward values and every signal form. Unemitted
  // sinusoid fields would leak stale values through ==, so start clean.
  cfg.T = 0.30000000000000004;
  cfg.horizon = 1.2000000000000002;
  cfg.dt = 0.1;
  cfg.signals = SignalSpec{};
  cfg.signals.input = SignalSpec::Input::Table;
  cfg.signals.input_table = {{0.0, {0.125}}, {0.6, {-0.25}}};
  cfg.signals.disturbance = SignalSpec::Disturbance::Table;
  cfg.signals.dist_table = {{0.0, {0.01}}};
  cfg.sweep_T.clear();
  cfg.sweep_N.clear();
  CHECK(ExperimentConfig::parse_string(cfg.emit()) == cfg);

  cfg.signals = SignalSpec{};
  cfg.x0.clear();
  CHECK(ExperimentConfig::parse_string(cfg.emit()) == cfg);
}

TEST_CASE("signal forms") {
  const ExperimentConfig sine =
      ExperimentConfig::parse_string(with("input = sin(0.5, 1)\ndisturbance = uniform(0.05, 0.2)"));
  CHECK(sine.signals.input == SignalSpec::Input::Sinusoid);
  CHECK(sine.signals.phase == 0.0);
  CHECK(sine.signals.dist_hold == 0.2);

  const ExperimentConfig tab = ExperimentConfig::parse_string(
      with("input = table [0 0.1; 5 -0.1]\ndisturbance = table [0 0.02; 1 -0.02]"));
  CHECK(tab.signals.input_table.size() == 2);
  CHECK(tab.signals.input_table[1].first == 5.0);
  CHECK(tab.signals.input_table[1].second == Vec{-0.1});
  CHECK(tab.signals.dist_table[0].second == Vec{0.02});

  CHECK_THROWS_AS(ExperimentConfig::parse_string(with("input = ramp(1)")), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse_string(with("input = sin(0.5)")), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse_string(with("disturbance = uniform()")), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse_string(with("input = table [0 1; 0 2]")), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse_string(with("input = sin(0.5, 1")), ConfigError);
}

TEST_CASE("parse errors carry source and line") {
  try {
    ExperimentConfig::parse_string("A = [1 2; 3 4]\nA = [1 0; 0 1]\n", "dup.cfg");
    FAIL("expected a duplicate-key error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("dup.cfg:2") == 0);
    CHECK(std::string(e.what()).find("duplicate key `A`") != std::string::npos);
    CHECK(e.source() == "dup.cfg");
    CHECK(e.line() == 2);
  }

  try {
    std::string text(kBase);
    const auto pos = text.find("x_b = 1");
    text.replace(pos, 7, "x_b = fast");
    ExperimentConfig::parse_string(text, "bad.cfg");
    FAIL("expected a number error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("bad.cfg:") == 0);
    CHECK(std::string(e.what()).find("`fast` is not a number") != std::string::npos);
  }

  CHECK_THROWS_AS(ExperimentConfig::parse_file("configs/does-not-exist.cfg"), ConfigError);
}

TEST_CASE("structural parse errors") {
  CHECK_THROWS_AS(ExperimentConfig::parse_string("just words\n"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse_string("= 3\n"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse_string("A =\n"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse_string(with("mystery = 1")), ConfigError);  // unknown key
  CHECK_THROWS_AS(ExperimentConfig::parse_string(with("A = [1 2; 3]")), ConfigError);  // ragged
  CHECK_THROWS_AS(ExperimentConfig::parse_string(with("x_c = [1 2; 3 4]")), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse_string(with("N = 4.5")), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse_string(with("seeds = 1 -2")), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse_string(with("sweep_N = 2 2.5")), ConfigError);
}

TEST_CASE("quantizer resolution comes from exactly one key") {
  const std::string no_n(kBase);
  std::string via_bits = no_n;
  const auto pos = via_bits.find("N = 4");
  via_bits.replace(pos, 5, "bits = 6");
  const ExperimentConfig cfg = ExperimentConfig::parse_string(via_bits);
  CHECK(cfg.quantizer.levels == 8);
  CHECK(cfg.quantizer.bits == 6);

  CHECK_THROWS_AS(ExperimentConfig::parse_string(with("bits = 4")), ConfigError);  // both
  std::string neither = no_n;
  neither.replace(neither.find("N = 4"), 5, "");
  CHECK_THROWS_AS(ExperimentConfig::parse_string(neither), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse_string(via_bits + "bits = 5\n"), ConfigError);
}

TEST_CASE("cross-field validation") {
  CHECK_THROWS_AS(ExperimentConfig::parse_string(with("x0 = [12 -5]")), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse_string(with("x0 = [10 -5 0]")), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse_string(with("dt = 0.03")), ConfigError);  // T off grid
  CHECK_THROWS_AS(ExperimentConfig::parse_string(with("scheme = fastest")), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse_string(with("growth = cubic")), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse_string(with("decoder = wide")), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse_string(with("sweep_N = 1 4")), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse_string(with("sweep_T = 0.1 -0.2")), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse_string(with("disturbance = uniform(0.05, 0.0007)")),
                  ConfigError);

  std::string short_horizon(kBase);
  short_horizon.replace(short_horizon.find("horizon = 20"), 12, "horizon = 0.05");
  CHECK_THROWS_AS(ExperimentConfig::parse_string(short_horizon), ConfigError);

  std::string bad_q(kBase);
  bad_q.replace(bad_q.find("Q = [-7.7353; -0.0248]"), 22, "Q = [-7.7353 0; 0 -0.0248]");
  CHECK_THROWS_AS(ExperimentConfig::parse_string(bad_q), ConfigError);

  // validate() on a hand-built config reports without source decoration.
  ExperimentConfig cfg = ExperimentConfig::parse_string(kBase);
  cfg.seeds.clear();
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("comments and spacing are tolerated") {
  const ExperimentConfig cfg = ExperimentConfig::parse_string(
      with("  dt   =  0.001   # trailing comment\nseeds = 7, 8, 9"));
  CHECK(cfg.dt == 0.001);
  CHECK(cfg.seeds == std::vector<std::uint64_t>{7, 8, 9});
}
