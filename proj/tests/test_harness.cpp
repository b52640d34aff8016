#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "marinesim/simulation.hpp"
#include "test_util.hpp"

using namespace marinesim;

TEST_CASE("momentum-theory energy model") {
  // Constant hover thrust for 10 s: (m g)^1.5 / sqrt(2 rho A) * t = 672 J.
  const double p = induced_power(1.8 * 9.81, 1.22, 0.5);
  CHECK(p * 10.0 == doctest::Approx(672.0).epsilon(2e-3));
  CHECK(induced_power(0.0, 1.22, 0.5) == 0.0);
}

TEST_CASE("free fall of the decoupled vehicle") {
  // One second of drag-free fall integrated like the harness does.
  Environment env;
  UavParams p;
  p.drag_coefficient = 0.0;
  p.vertical_drag = 0.0;
  auto deriv = [&](double, const Eigen::VectorXd& y) {
    UavState s{0.0, y[0], 0.0, 0.0, y[1], 0.0};
    const auto a = uav_accel_decoupled(s, env, 0.0, 0.0, {0.0, 0.0}, p);
    Eigen::VectorXd dy(2);
    dy << y[1], a.y();
    return dy;
  };
  Eigen::VectorXd y(2);
  y << 0.0, 0.0;
  for (int i = 0; i < 1000; ++i) y = testutil::rk4_step(deriv, i * 1e-3, y, 1e-3);
  CHECK(y[0] == doctest::Approx(-4.905).epsilon(1e-9));
}

TEST_CASE("velocity schedule") {
  VelocitySchedule s;
  s.nodes = {{0.0, 0.0}, {10.0, 5.0}, {20.0, 5.0}};
  CHECK(s.at(-1.0) == 0.0);
  CHECK(s.at(5.0) == doctest::Approx(2.5));
  CHECK(s.at(15.0) == 5.0);
  CHECK(s.at(99.0) == 5.0);
  VelocitySchedule bad;
  bad.nodes = {{0.0, 0.0}, {0.0, 1.0}};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("scenario config") {
  SUBCASE("presets carry the study wave tables") {
    const auto c2 = ScenarioConfig::preset("c2");
    REQUIRE(c2.environment.waves.size() == 2);
    CHECK(c2.environment.waves[0].amplitude == 0.135);
    CHECK(c2.environment.waves[0].period == 3.0);
    CHECK(c2.environment.waves[0].direction == 1.0);
    CHECK(c2.environment.waves[0].phase == doctest::Approx(std::numbers::pi));
    CHECK(c2.environment.waves[1].amplitude == 0.75);
    CHECK(c2.environment.waves[1].period == 5.7);
    CHECK(c2.environment.lumped_current == -0.5);
    CHECK(c2.environment.wind == -3.0);

    const auto c4 = ScenarioConfig::preset("c4");
    REQUIRE(c4.environment.waves.size() == 1);
    CHECK(c4.environment.waves[0].amplitude == 1.65);
    CHECK(c4.environment.waves[0].period == 7.0);
    CHECK(c4.environment.waves[0].direction == -1.0);

    CHECK_THROWS_AS(ScenarioConfig::preset("c9"), std::invalid_argument);
  }

  SUBCASE("round trip through JSON") {
    const auto cfg = ScenarioConfig::preset("c2");
    const auto back = ScenarioConfig::from_json_text(cfg.to_json_text());
    CHECK(back.name == cfg.name);
    CHECK(back.duration == cfg.duration);
    CHECK(back.environment.waves.size() == cfg.environment.waves.size());
    CHECK(back.control.svcs.k1[0] == cfg.control.svcs.k1[0]);
    CHECK(back.setpoint.schedule.nodes.size() == cfg.setpoint.schedule.nodes.size());
  }

  SUBCASE("unknown keys are rejected") {
    CHECK_THROWS_WITH_AS(ScenarioConfig::from_json_text(R"({"schema_version":1,"dt":0.001})"),
                         doctest::Contains("unknown key"), std::invalid_argument);
    CHECK_THROWS_AS(ScenarioConfig::from_json_text(
                        R"({"schema_version":1,"buoy":{"mass":12.5}})"),
                    std::invalid_argument);
  }

  SUBCASE("invalid values are rejected") {
    CHECK_THROWS_AS(ScenarioConfig::from_json_text(R"({"dt_s":-0.1})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(ScenarioConfig::from_json_text(R"({"schema_version":2})"),
                    std::invalid_argument);
  }
}

TEST_CASE("trace CSV round trip and golden determinism" * doctest::timeout(300)) {
  auto cfg = ScenarioConfig::preset("c2");
  cfg.duration = 8.0;
  Simulation a(cfg);
  REQUIRE(a.run() == SimStatus::Ok);

  SUBCASE("round trip is lossless") {
    const std::string text = a.trace().to_csv();
    const Trace back = Trace::from_csv_text(text);
    CHECK(back == a.trace());
    CHECK(back.to_csv() == text);
  }

  SUBCASE("same config and seed give byte-identical traces") {
    Simulation b(cfg);
    REQUIRE(b.run() == SimStatus::Ok);
    CHECK(a.trace().to_csv() == b.trace().to_csv());
  }

  SUBCASE("different noise seed diverges") {
    auto cfg2 = cfg;
    cfg2.seed = cfg.seed + 1;
    Simulation b(cfg2);
    REQUIRE(b.run() == SimStatus::Ok);
    CHECK(a.trace().to_csv() != b.trace().to_csv());
  }
}

TEST_CASE("empty trace writes a header-only CSV") {
  Trace t;
  const std::string text = t.to_csv();
  CHECK(text.find("t_s,mode,configuration") == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 1);
  const Trace back = Trace::from_csv_text(text);
  CHECK(back.size() == 0);
}

TEST_CASE("hybrid consistency over a wavy run" * doctest::timeout(300)) {
  auto cfg = ScenarioConfig::preset("c2");
  cfg.duration = 30.0;
  Simulation sim(cfg);
  REQUIRE(sim.run() == SimStatus::Ok);
  for (const auto& row : sim.trace().rows()) {
    if (row.coupled) {
      CHECK(row.tension > 0.0);
      CHECK(row.r == doctest::Approx(cfg.cable.length).epsilon(1e-12));
    } else {
      CHECK(row.r <= cfg.cable.length + 1e-9);
    }
  }
}

TEST_CASE("scenario initial conditions match the water field") {
  auto cfg = ScenarioConfig::preset("c2");
  Simulation sim(cfg);
  const BuoyState b = sim.buoy();
  const Eigen::Vector2d vw =
      cfg.environment.water_velocity(0.0, std::min(b.z, 0.0), 0.0);
  CHECK(b.vx == doctest::Approx(vw.x()).epsilon(1e-12));
  CHECK(b.vz == doctest::Approx(vw.y()).epsilon(1e-12));
  // Unloaded draft: immersed volume equals the displaced rest volume.
  const double delta_h = cfg.environment.elevation(b.x, 0.0) - b.z;
  CHECK(immersed_volume(delta_h, cfg.buoy) ==
        doctest::Approx(cfg.buoy.mass / 1000.0).epsilon(1e-9));
  CHECK(sim.coupling() == Coupling::Decoupled);
}

TEST_CASE("halt policy aborts on constraint violations" * doctest::timeout(300)) {
  // C4 separates from the water within the run; the halt policy must stop
  // with the constraint status.
  auto cfg = ScenarioConfig::preset("c4");
  cfg.violation_policy = ViolationPolicy::Halt;
  Simulation sim(cfg);
  const SimStatus st = sim.run();
  CHECK(st == SimStatus::ConstraintHalt);
  CHECK(sim.time() < cfg.duration);
}
