#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

#include "cohui/coherent.hpp"
#include "cohui/errors.hpp"

using namespace cohui;
using C = std::complex<double>;

namespace {
bool near(C a, C b, double tol) { return std::abs(a - b) <= tol; }
}  // namespace

TEST_SUITE("coherent") {
  TEST_CASE("beamsplitter map examples") {
    const C a(0.7, -0.3);
    const double s = std::sqrt(0.5);
    auto out = apply_beamsplitter(CoherentRegister({a, a}), BeamsplitterOp(0, 1, 0.5));
    CHECK(near(out[0], std::sqrt(2.0) * a, 1e-15));
    CHECK(out[1] == C(0.0, 0.0));

    const C b(-1.2, 0.4);
    out = apply_beamsplitter(CoherentRegister({a, b}), BeamsplitterOp(0, 1, 1.0));
    CHECK(out[0] == a);
    CHECK(out[1] == b);

    out = apply_beamsplitter(CoherentRegister({1.0, 0.0}), BeamsplitterOp(0, 1, 0.5));
    CHECK(near(out[0], C(s, 0), 1e-15));
    CHECK(near(out[1], C(-s, 0), 1e-15));
  }

  TEST_CASE("beamsplitter leaves other modes alone and validates") {
    const CoherentRegister reg({1.0, 2.0, C(0, 3)});
    const auto out = apply_beamsplitter(reg, BeamsplitterOp(0, 2, 0.3));
    CHECK(out[1] == C(2.0, 0.0));
    CHECK_THROWS_AS(apply_beamsplitter(reg, BeamsplitterOp(0, 3, 0.5)), IndexError);
    CHECK_THROWS(BeamsplitterOp(1, 1, 0.5));
    CHECK_THROWS(BeamsplitterOp(0, 1, 1.5));
    CHECK_THROWS(BeamsplitterOp(0, 1, -0.1));
    CHECK(BeamsplitterOp(0, 1, 0.3).reflectivity() == doctest::Approx(0.7));
  }

  TEST_CASE("energy conservation on random inputs") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(-3, 3), t(0, 1);
    for (int i = 0; i < 1000; ++i) {
      const CoherentRegister reg({C(u(gen), u(gen)), C(u(gen), u(gen))});
      const auto out = apply_beamsplitter(reg, BeamsplitterOp(0, 1, t(gen)));
      CHECK(std::abs(out.energy() - reg.energy()) <= 1e-12 * std::max(1.0, reg.energy()));
    }
  }

  TEST_CASE("no-click and overlap probabilities") {
    CHECK(no_click_probability(0.0) == 1.0);
    CHECK(no_click_probability(std::sqrt(std::log(2.0))) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(no_click_probability(1.0) == doctest::Approx(0.36787944117144233).epsilon(1e-14));
    CHECK(click_probability(0.0) == 0.0);
    CHECK(click_probability(1e-9) == doctest::Approx(1e-18).epsilon(1e-6));
    const C a(0.3, 0.8);
    CHECK(coherent_overlap_sq(a, a) == 1.0);
    CHECK(coherent_overlap_sq(1.0, 0.0) == doctest::Approx(std::exp(-1.0)));
    CHECK(coherent_overlap_sq(1.0, -1.0) == doctest::Approx(std::exp(-4.0)));
  }

  TEST_CASE("run_circuit folds ops and checks shape") {
    const CoherentRegister in({1.0, C(0, 1)});
    CHECK(run_circuit(Circuit(2), in).amplitudes() == in.amplitudes());
    CHECK_THROWS_AS(run_circuit(Circuit(3), in), ShapeError);
    CHECK_THROWS_AS(CoherentRegister({}), std::exception);
  }

  TEST_CASE("two-reference circuit transmittivities") {
    auto t = ui2_transmittivities(0.5);
    CHECK(t.t2 == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(t.t3 == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    t = ui2_transmittivities(1.0 / 3.0);
    CHECK(t.t2 == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(t.t3 == doctest::Approx(0.4).epsilon(1e-15));
    t = ui2_transmittivities(1.0 - 1e-12);
    CHECK(t.t2 == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(std::abs(t.t3) < 1e-9);
    CHECK_THROWS_AS(build_ui2_circuit(0.0), DomainError);
    CHECK_THROWS_AS(build_ui2_circuit(1.0), DomainError);
    const auto c = build_ui2_circuit(0.5);
    CHECK(c.ops().size() == 3);
    REQUIRE(c.monitored().size() == 2);
    CHECK(c.monitored()[0].mode == ui2::kModeA);
    CHECK(c.monitored()[1].mode == ui2::kModeC);
  }

  TEST_CASE("vacuum-guaranteed ports are exactly dark") {
    const auto c = build_ui2_circuit(0.5);
    const C a1(0.4, -1.1), a2(-0.7, 0.2);
    CHECK(run_circuit(c, ui2_input(a1, a1, a2))[ui2::kModeA] == C(0, 0));
    CHECK(std::abs(run_circuit(c, ui2_input(a2, a1, a2))[ui2::kModeC]) <= 1e-15);
  }

  TEST_CASE("monitored amplitudes follow the closed form for any t1") {
    std::mt19937_64 gen(9);
    std::uniform_real_distribution<double> u(-2, 2), t(0.01, 0.99);
    for (int i = 0; i < 200; ++i) {
      const C a1(u(gen), u(gen)), a2(u(gen), u(gen));
      const double t1 = t(gen);
      const auto tr = ui2_transmittivities(t1);
      const auto c = build_ui2_circuit(t1);
      const auto out1 = run_circuit(c, ui2_input(a1, a1, a2));
      const auto out2 = run_circuit(c, ui2_input(a2, a1, a2));
      // No-error property: the dark port is zero to 1e-12 absolute.
      CHECK(std::abs(out1[ui2::kModeA]) <= 1e-12);
      CHECK(std::abs(out2[ui2::kModeC]) <= 1e-12);
      CHECK(std::norm(out1[ui2::kModeC]) == doctest::Approx(tr.t3 * std::norm(a1 - a2)).epsilon(1e-12));
      CHECK(std::norm(out2[ui2::kModeA]) == doctest::Approx((1 - tr.t2) * std::norm(a1 - a2)).epsilon(1e-12));
    }
  }

  TEST_CASE("classification of click patterns") {
    CHECK(classify_ui2({{false, true}}) == Outcome::identified(1));
    CHECK(classify_ui2({{true, false}}) == Outcome::identified(2));
    CHECK(classify_ui2({{false, false}}) == Outcome::inconclusive());
    CHECK(classify_ui2({{true, true}}) == Outcome::error());
    CHECK_THROWS_AS(classify_ui2({{true}}), ShapeError);
    CHECK(to_string(Outcome::identified(2)) == "identified(2)");
    CHECK(to_string(Outcome::inconclusive()) == "inconclusive");
  }

  TEST_CASE("sample_clicks: vacuum never clicks, bright almost always") {
    Circuit c(2);
    c.monitor(0, "bright");
    c.monitor(1, "dark");
    const CoherentRegister out({std::sqrt(50.0), 0.0});
    int no_clicks = 0, joint = 0;
    for (std::uint64_t s = 0; s < 10000; ++s) {
      const auto p = sample_clicks(out, c, 3, s);
      if (!p.clicks[0]) ++no_clicks;
      if (p.clicks[0] && p.clicks[1]) ++joint;
      REQUIRE_FALSE(p.clicks[1]);
    }
    CHECK(no_clicks <= 3);
    CHECK(joint == 0);
  }

  TEST_CASE("sample_clicks is deterministic in (seed, shot)") {
    const auto c = build_ui2_circuit(0.5);
    const auto out = run_circuit(c, ui2_input(0.0, 0.0, 1.0));
    for (std::uint64_t s = 0; s < 100; ++s) CHECK(sample_clicks(out, c, 42, s) == sample_clicks(out, c, 42, s));
  }

  TEST_CASE("Monte Carlo frequencies match closed form within 4 sigma") {
    Ui2Config cfg;
    cfg.alpha1 = 0.0;
    cfg.alpha2 = 1.0;
    cfg.fixed_true = 1;
    const std::uint64_t n = 100000;
    const auto s = simulate_ui2(cfg, n, 2024);
    CHECK(s.error == 0);
    CHECK(s.misidentified == 0);
    const double p = -std::expm1(-1.0 / 3.0);
    const double sigma = std::sqrt(p * (1 - p) / n);
    CHECK(std::abs(double(s.identified_1) / n - p) < 4 * sigma);

    cfg.fixed_true = 2;
    cfg.t1 = 0.3;
    const auto s2 = simulate_ui2(cfg, n, 77);
    const double p2 = -std::expm1(-(1 - ui2_transmittivities(0.3).t2));
    CHECK(s2.misidentified == 0);
    CHECK(std::abs(double(s2.identified_2) / n - p2) < 4 * std::sqrt(p2 * (1 - p2) / n));
  }

  TEST_CASE("simulation with prior-drawn truth and zero shots") {
    Ui2Config cfg;
    cfg.alpha1 = C(0.5, 0.5);
    cfg.alpha2 = C(-0.5, 0.2);
    cfg.priors = Priors(0.3);
    const auto s = simulate_ui2(cfg, 50000, 5);
    CHECK(s.misidentified == 0);
    CHECK(s.error == 0);
    CHECK(s.identified_1 + s.identified_2 + s.inconclusive == 50000);
    const auto z = simulate_ui2(cfg, 0, 5);
    CHECK(z.shots == 0);
    CHECK(z.success_frequency() == 0.0);
  }

  TEST_CASE("JSON round trip and shot CSV") {
    const auto c = build_ui2_circuit(0.25);
    const auto j = circuit_to_json(c);
    CHECK(j["n_modes"] == 4);
    CHECK(j["ops"].size() == 3);
    CHECK(circuit_from_json(j) == c);
    CHECK_THROWS_AS(circuit_from_json(nlohmann::json::parse(R"({"n_modes":2,"ops":[{"a":0,"b":5,"t":0.5}]})")),
                    std::exception);
    CHECK_THROWS_AS(circuit_from_json(nlohmann::json::parse("[1,2]")), ShapeError);

    Ui2Config cfg;
    cfg.alpha1 = 0.0;
    cfg.alpha2 = 2.0;
    std::vector<OutcomeRecord> rec;
    simulate_ui2(cfg, 3, 9, &rec);
    std::ostringstream os;
    write_shot_csv(os, build_ui2_circuit(0.5), rec);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line.rfind("seed,shot,click_", 0) == 0);
    CHECK(line.substr(line.size() - 8) == ",outcome");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 3);
  }
}
