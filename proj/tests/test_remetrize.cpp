#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "orbitkit/gallery.hpp"
#include "orbitkit/remetrize.hpp"

using namespace orbitkit;

namespace {

SetValuedMap<Rat> stationary_map() {
  SetValuedMap<Rat> m;
  m.sample = [](const Rat& x, int, std::uint64_t) { return std::vector<Rat>{x}; };
  m.contains = [](const Rat& x, const Rat& y) { return y == x; };
  return m;
}

SetValuedMap<Rat> shift_map() {
  SetValuedMap<Rat> m;
  m.sample = [](const Rat& x, int, std::uint64_t) { return std::vector<Rat>{Rat(x + 1)}; };
  m.contains = [](const Rat& x, const Rat& y) { return y == Rat(x + 1); };
  return m;
}

}  // namespace

TEST_CASE("discrete carrier topology enumerates every subset") {
  auto sp = discrete_space(3);
  CHECK(sp.n == 3);
  CHECK(sp.opens.size() == 8);
  CHECK(sp.full() == 7);
  sp.validate();
  CHECK_THROWS_AS(discrete_space(0), std::invalid_argument);
  CHECK_THROWS_AS(discrete_space(13), std::invalid_argument);
}

TEST_CASE("contractivity notions agree on pinned discrete instances") {
  // Everything funnels to 0 and sticks there.
  FiniteSetMap funnel{{0b001, 0b001, 0b011}};
  OrbitDescriptor down{{2, 1}, {0}};
  CHECK(discrete_p_contractive(funnel, down));
  CHECK(is_cover_contractive(discrete_space(3), funnel, down).contractive);
  CHECK(tau_p_equivalence_test(3, funnel, down));

  // Full-image map: the orbit never pins down a point.
  FiniteSetMap everything{{0b111, 0b111, 0b111}};
  OrbitDescriptor swing{{}, {0, 1}};
  CHECK_FALSE(discrete_p_contractive(everything, swing));
  CHECK_FALSE(is_cover_contractive(discrete_space(3), everything, swing).contractive);
  CHECK(tau_p_equivalence_test(3, everything, swing));

  // Stationary orbit with a singleton self-image.
  FiniteSetMap selfie{{0b001, 0b010, 0b100}};
  OrbitDescriptor rest{{}, {1}};
  CHECK(discrete_p_contractive(selfie, rest));
  CHECK(tau_p_equivalence_test(3, selfie, rest));
}

TEST_CASE("contractivity notions agree on random discrete instances") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    auto [map, orbit] = random_discrete_instance(3, seed);
    CHECK(tau_p_equivalence_test(3, map, orbit));
  }
  for (std::uint64_t seed = 201; seed <= 400; ++seed) {
    auto [map, orbit] = random_discrete_instance(4, seed);
    CHECK(tau_p_equivalence_test(4, map, orbit));
  }
}

TEST_CASE("random discrete instances are well formed") {
  auto [map, orbit] = random_discrete_instance(4, 7);
  CHECK(map.images.size() == 4);
  for (Mask m : map.images) CHECK(m != 0);
  CHECK_FALSE(orbit.cycle.empty());
  validate_orbit(discrete_space(4), map, orbit);
  CHECK_THROWS_AS(random_discrete_instance(0, 1), std::invalid_argument);
}

TEST_CASE("orbit conditions all pass on the halving dynamics") {
  auto map = halving_interval_map();
  auto d = rational_abs_premetric();
  auto orbit = generate_orbit(map, Rat(1), first_sample_selector<Rat>(), 60, 9, 8);
  REQUIRE(orbit.points.size() == 61);

  auto rep = loev_condition_check(orbit, map, d, std::vector<Rat>{Rat(0)}, 8, 9);
  CHECK(rep.exclusion == Verdict::Supported);
  CHECK(rep.cauchy == Verdict::Supported);
  CHECK(rep.image_width == Verdict::Supported);
  REQUIRE(rep.image_sups.size() == 61);
  for (int i = 0; i <= 60; ++i) CHECK(rep.image_sups[size_t(i)] == std::ldexp(1.0, -i));
  CHECK_FALSE(rep.window_diameters.empty());
  CHECK(rep.window_diameters.front() > rep.window_diameters.back());
}

TEST_CASE("orbit conditions refute self-membership but keep the width") {
  auto map = stationary_map();
  auto d = rational_abs_premetric();
  auto orbit = generate_orbit(map, Rat(5), first_sample_selector<Rat>(), 20, 3, 4);

  auto rep = loev_condition_check(orbit, map, d, std::vector<Rat>{Rat(5)}, 4, 3);
  CHECK(rep.exclusion == Verdict::Refuted);
  CHECK(rep.note == "an orbit point belongs to its own image");
  CHECK(rep.cauchy == Verdict::Supported);       // constant orbit is trivially Cauchy
  CHECK(rep.image_width == Verdict::Supported);  // width is identically zero
}

TEST_CASE("orbit conditions refute a drifting orbit") {
  auto map = shift_map();
  auto d = rational_abs_premetric();
  auto orbit = generate_orbit(map, Rat(0), first_sample_selector<Rat>(), 40, 3, 4);

  auto rep = loev_condition_check(orbit, map, d, std::vector<Rat>{Rat(0)}, 4, 3);
  CHECK(rep.cauchy == Verdict::Refuted);
  CHECK(rep.image_width == Verdict::Refuted);
  CHECK(rep.exclusion == Verdict::Inconclusive);
  CHECK(rep.note == "no accumulation candidate to probe membership persistence");
}

TEST_CASE("joint coverability is decided exactly on finite spaces") {
  auto discrete2 = discrete_space(2);

  auto constant = t_contractive_exact(discrete_space(3), {0, 0, 0});
  CHECK(constant.contractive);

  auto ident = t_contractive_exact(discrete2, {0, 1});
  CHECK_FALSE(ident.contractive);
  CHECK(ident.offending_pair == std::pair<int, int>{0, 1});
  CHECK(ident.failing_cover == std::vector<Mask>{0b01, 0b10});

  auto swap = t_contractive_exact(discrete2, {1, 0});
  CHECK_FALSE(swap.contractive);

  auto project = t_contractive_exact(discrete2, {0, 0});
  CHECK(project.contractive);

  // With the one-sided topology the two points can never be separated by a
  // cover, so even the identity map passes.
  FiniteSpace glued;
  glued.n = 2;
  glued.opens = {0b00, 0b01, 0b11};
  glued.validate();
  CHECK(t_contractive_exact(glued, {0, 1}).contractive);

  CHECK_THROWS_AS(t_contractive_exact(discrete2, {0}), std::invalid_argument);
  CHECK_THROWS_AS(t_contractive_exact(discrete2, {0, 2}), std::invalid_argument);
}

TEST_CASE("pair gap trends separate the halving map from isometries") {
  auto trend = t_contractive_approximate(halving_system(), {{1.0, 0.3}}, 40);
  CHECK(trend.verdict == Verdict::Supported);
  CHECK(trend.max_curve[0] == doctest::Approx(0.7));
  CHECK(trend.max_curve[10] == doctest::Approx(0.7 * std::ldexp(1.0, -10)));

  auto flat = t_contractive_approximate(identity_system(), {{0.0, 1.0}}, 40);
  CHECK(flat.verdict == Verdict::Refuted);
  CHECK(flat.max_curve[5] == 1.0);

  auto rot = rotation_system();
  auto spin = t_contractive_approximate(rot, {{rot.domain_sample[0], rot.domain_sample[2]}}, 40);
  CHECK(spin.verdict == Verdict::Refuted);

  CHECK_THROWS_AS(t_contractive_approximate(halving_system(), {}, 10), std::invalid_argument);
}

TEST_CASE("metric spot-checks reject broken systems") {
  IterationSystem bad = halving_system();
  bad.d = [](double a, double b) { return (a - b) * (a - b); };  // no triangle
  CHECK_THROWS_AS(spot_check_system(bad), std::invalid_argument);

  IterationSystem skew = halving_system();
  skew.d = [](double a, double b) { return a > b ? a - b : 2 * (b - a); };
  CHECK_THROWS_AS(spot_check_system(skew), std::invalid_argument);

  IterationSystem offset = halving_system();
  offset.d = [](double a, double b) { return std::abs(a - b) + 1; };
  CHECK_THROWS_AS(spot_check_system(offset), std::invalid_argument);

  IterationSystem empty = halving_system();
  empty.domain_sample.clear();
  CHECK_THROWS_AS(spot_check_system(empty), std::invalid_argument);

  CHECK_THROWS_AS(uniform_grid(1.0, 1.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(uniform_grid(0.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("attraction hypotheses verified for the halving map") {
  auto rep = a1_a2_check(halving_system(), std::nullopt);
  CHECK(rep.xbar == 0.0);
  CHECK(rep.a1 == Verdict::Supported);
  CHECK(rep.a2 == Verdict::Supported);
  CHECK(rep.continuity == Verdict::Supported);
  CHECK(rep.t_contraction == Verdict::Supported);
  CHECK(rep.uniform_cover == Verdict::Supported);
  CHECK(rep.remetrizable);
  CHECK(rep.cover_semantics == "epsilon_ball_surrogate");
  REQUIRE(rep.sup_curve.size() == 65);
  for (int i = 0; i <= 64; ++i) {
    CHECK(rep.sup_curve[size_t(i)] == std::ldexp(1.0, -i));
    CHECK(rep.diameter_curve[size_t(i)] == std::ldexp(1.0, -i));
  }
}

TEST_CASE("identity map fails every attraction hypothesis but continuity") {
  auto rep = a1_a2_check(identity_system(), std::nullopt);
  CHECK(rep.xbar == 0.0);
  CHECK(rep.a1 == Verdict::Refuted);
  REQUIRE(rep.a1_witness.has_value());
  CHECK(*rep.a1_witness == 0.0625);  // first grid point that refuses to move
  CHECK(rep.a2 == Verdict::Refuted);
  CHECK(rep.t_contraction == Verdict::Refuted);
  CHECK(rep.uniform_cover == Verdict::Refuted);
  CHECK(rep.continuity == Verdict::Supported);
  CHECK_FALSE(rep.remetrizable);
}

TEST_CASE("quadratic map contracts its half-interval with exact sups") {
  auto rep = a1_a2_check(quadratic_system(), std::nullopt);
  CHECK(rep.xbar == 0.0);
  CHECK(rep.remetrizable);
  double expect = 0.5;
  for (int i = 0; i <= 6; ++i) {
    CHECK(rep.sup_curve[size_t(i)] == expect);
    expect *= expect;
  }
}

TEST_CASE("divergence and escape both refute pointwise attraction") {
  auto wide = quadratic_system(0.0, 2.0, 17);
  auto rep = a1_a2_check(wide, 0.0);
  CHECK(rep.a1 == Verdict::Refuted);
  REQUIRE(rep.a1_witness.has_value());
  CHECK(*rep.a1_witness == 1.0);  // parked on the repelling point
  CHECK_FALSE(rep.remetrizable);

  auto runaway = quadratic_system(1.125, 2.0, 8);
  auto rep2 = a1_a2_check(runaway, 0.0);
  CHECK(rep2.a1 == Verdict::Refuted);
  REQUIRE(rep2.a1_witness.has_value());
  CHECK(*rep2.a1_witness == 1.125);
  CHECK(rep2.note == "a sampled trajectory diverged past the configured bound");
}

TEST_CASE("rotation keeps its diameter and fails the cover hypotheses") {
  const double pi = 4 * std::atan(1.0);
  auto rep = a1_a2_check(rotation_system(), 0.0);
  CHECK(rep.a1 == Verdict::Refuted);
  REQUIRE(rep.a1_witness.has_value());
  CHECK(*rep.a1_witness == 0.0);
  CHECK(rep.a2 == Verdict::Refuted);
  CHECK(rep.t_contraction == Verdict::Refuted);
  CHECK(rep.uniform_cover == Verdict::Refuted);
  CHECK(rep.diameter_curve[0] == doctest::Approx(pi));
  CHECK_FALSE(rep.remetrizable);

  auto cover = uniform_cover_condition_check(rotation_system(), 48);
  CHECK(cover.verdict == Verdict::Refuted);
  CHECK(cover.note == "iterated neighborhood keeps its diameter");
}

TEST_CASE("a jump discontinuity is caught by the continuity spot-check") {
  IterationSystem step = halving_system();
  step.name = "step";
  step.f = [](double x) { return x < 0.5 ? 0.0 : 1.0; };
  auto rep = a1_a2_check(step, 0.0);
  CHECK(rep.continuity == Verdict::Refuted);
  CHECK(rep.a1 == Verdict::Refuted);
  REQUIRE(rep.a1_witness.has_value());
  CHECK(*rep.a1_witness == 0.5);
  CHECK_FALSE(rep.remetrizable);
}

TEST_CASE("report invariants hold across the canonical systems") {
  std::vector<IterationSystem> systems{halving_system(), identity_system(),
                                       quadratic_system(), rotation_system()};
  for (const auto& sys : systems) {
    auto rep = a1_a2_check(sys, std::nullopt);
    if (rep.remetrizable) CHECK(rep.t_contraction == Verdict::Supported);
    if (rep.uniform_cover == Verdict::Supported) CHECK(rep.a2 == Verdict::Supported);
  }
}
