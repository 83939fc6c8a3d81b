#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <optional>
#include <vector>

#include "orbitkit/descent.hpp"
#include "orbitkit/rational.hpp"

using namespace orbitkit;

namespace {

Premetric<Rat, Rat> absdist() {
  return [](const Rat& x, const Rat& y) { return scalar_abs(Rat(x - y)); };
}

// dyadic grid on [-2, 2] with spacing 2^-12
ObjectiveFunction<Rat, Rat> grid_objective(std::string name,
                                           std::function<std::optional<Rat>(const Rat&)> f,
                                           std::optional<Rat> lower_bound) {
  ObjectiveFunction<Rat, Rat> obj;
  obj.name = std::move(name);
  obj.f = std::move(f);
  obj.domain = dyadic_interval_sampler(Rat(-2), Rat(2), 14);
  obj.domain_size = (1 << 14) + 1;
  obj.lower_bound = std::move(lower_bound);
  return obj;
}

ObjectiveFunction<Rat, Rat> quadratic() {
  return grid_objective("quadratic",
                        [](const Rat& x) { return std::optional<Rat>(Rat(x * x)); }, Rat(0));
}

DescentConfig base_config() {
  DescentConfig cfg;
  cfg.per_step_budget = 64;
  cfg.max_steps = 16;
  cfg.seed = 1;
  return cfg;
}

}  // namespace

TEST_CASE("travel-discounted descent on the quadratic reaches a stationary point") {
  auto cert = ekeland_descent(quadratic(), absdist(), Rat(1), base_config());
  CHECK(cert.probe == Verdict::Supported);
  CHECK(cert.xbar == rat(1, 64));  // finest admissible sampled point below the threshold
  CHECK(cert.xbar <= rat(1, 2) + pow2(-10));
  CHECK(cert.steps == 1);
  CHECK(cert.sigma_length == rat(63, 64));
  CHECK(cert.sigma_length <= Rat(1));  // total length bounded by the objective drop
  REQUIRE(cert.length_bound_ok.has_value());
  CHECK(*cert.length_bound_ok);
  CHECK(cert.residual == Rat(0));
  CHECK(cert.f_evals > 0);
  bool certified = false;
  for (const auto& n : cert.notes) certified = certified || n.find("certified") != std::string::npos;
  CHECK(certified);
}

TEST_CASE("steepness one: the absolute value admits no discounted descent step") {
  auto obj = grid_objective("abs", [](const Rat& x) { return std::optional<Rat>(scalar_abs(x)); },
                            Rat(0));
  auto cert = ekeland_descent(obj, absdist(), Rat(1), base_config());
  CHECK(cert.steps == 0);
  CHECK(cert.xbar == Rat(1));  // every start is already stationary
  CHECK(cert.f_xbar == Rat(1));
  CHECK(cert.sigma_length == Rat(0));
  CHECK(cert.residual == Rat(0));
  CHECK(cert.probe == Verdict::Supported);
}

TEST_CASE("starting outside the finiteness domain throws") {
  auto obj = grid_objective(
      "half-line",
      [](const Rat& x) {
        return x >= 0 ? std::optional<Rat>(Rat(x * x)) : std::nullopt;
      },
      Rat(0));
  CHECK_THROWS_AS(ekeland_descent(obj, absdist(), Rat(-1), base_config()),
                  std::invalid_argument);
}

TEST_CASE("a violated declared lower bound is a hard error") {
  auto obj = grid_objective("steep-line",
                            [](const Rat& x) { return std::optional<Rat>(Rat(2 * x)); }, Rat(0));
  CHECK_THROWS_AS(ekeland_descent(obj, absdist(), Rat(1), base_config()), std::logic_error);
}

TEST_CASE("descent without a bound aborts once it falls through the floor") {
  ObjectiveFunction<Rat, Rat> obj;
  obj.name = "unbounded-line";
  obj.f = [](const Rat& x) { return std::optional<Rat>(Rat(2 * x)); };
  obj.domain = [](int budget) {  // 0, -1, -2, -4, -8, ...
    std::vector<Rat> out{Rat(0)};
    Rat v(-1);
    while (static_cast<int>(out.size()) < budget) {
      out.push_back(v);
      v *= 2;
    }
    return out;
  };
  auto cfg = base_config();
  cfg.divergence_floor = 100.0;
  CHECK_THROWS_AS(ekeland_descent(obj, absdist(), Rat(0), cfg), std::runtime_error);
}

TEST_CASE("sublevel descent certifies the quadratic minimum as strong") {
  auto cert = strong_min_descent(quadratic(), absdist(), rat(3, 2), base_config());
  CHECK(cert.xbar == Rat(0));
  CHECK(cert.f_xbar == Rat(0));
  CHECK(cert.residual == Rat(0));
  CHECK(cert.steps == 1);  // greedy choice jumps straight to the sampled minimum
  CHECK(cert.probe == Verdict::Supported);
  CHECK_FALSE(cert.length_bound_ok.has_value());
}

TEST_CASE("the double well reaches a minimum that is not strong") {
  auto obj = grid_objective("double-well",
                            [](const Rat& x) {
                              Rat t = x * x - 1;
                              return std::optional<Rat>(Rat(t * t));
                            },
                            Rat(0));
  auto cert = strong_min_descent(obj, absdist(), rat(3, 2), base_config());
  CHECK(cert.xbar * cert.xbar == Rat(1));  // lands in one of the two valleys
  CHECK(cert.residual == Rat(0));          // it *is* a global sampled minimum
  CHECK(cert.probe == Verdict::Refuted);   // ... but the other valley survives
  bool noted = false;
  for (const auto& n : cert.notes) noted = noted || n.find("far point") != std::string::npos;
  CHECK(noted);
}

TEST_CASE("an exhausted step budget leaves the probe inconclusive") {
  auto cfg = base_config();
  cfg.max_steps = 0;
  auto cert = strong_min_descent(quadratic(), absdist(), Rat(1), cfg);
  CHECK(cert.steps == 0);
  CHECK(cert.probe == Verdict::Inconclusive);
}

TEST_CASE("self-map with a descent certificate ends at an unmoved point") {
  auto obj = grid_objective("double-abs",
                            [](const Rat& x) { return std::optional<Rat>(Rat(2 * scalar_abs(x))); },
                            Rat(0));
  std::function<Rat(const Rat&)> halve = [](const Rat& x) { return Rat(x / 2); };
  auto rep = caristi_check(halve, obj, absdist(), Rat(1), base_config());
  CHECK(rep.premise_holds);
  REQUIRE(rep.certificate.has_value());
  CHECK(rep.certificate->xbar == Rat(0));
  REQUIRE(rep.fixed_point_gap.has_value());
  CHECK(*rep.fixed_point_gap == Rat(0));
  CHECK(rep.conclusion == Verdict::Supported);

  SUBCASE("a map that climbs violates the premise, with a witness") {
    std::function<Rat(const Rat&)> shift = [](const Rat& x) { return Rat(x + 1); };
    auto bad = caristi_check(shift, obj, absdist(), Rat(1), base_config());
    CHECK_FALSE(bad.premise_holds);
    REQUIRE(bad.premise_witness.has_value());
    CHECK(*bad.premise_witness == Rat(2));  // first sampled climber in domain order
    CHECK(bad.conclusion == Verdict::Inconclusive);
    CHECK_FALSE(bad.certificate.has_value());
  }
}

TEST_CASE("nested singleton family: membership certified to the depth cap") {
  NestedFamily<Rat> fam;
  fam.name = "singleton";
  fam.contains = [](int, const Rat& x) { return x == Rat(0); };
  fam.sample_set = [](int, int, std::uint64_t) { return std::vector<Rat>{Rat(0)}; };
  IntersectConfig cfg;
  auto rep = cantor_intersect(fam, absdist(), cfg);
  CHECK(rep.status == IntersectStatus::Found);
  REQUIRE(rep.xbar.has_value());
  CHECK(*rep.xbar == Rat(0));
  REQUIRE(rep.depths.size() == 1);
  CHECK(rep.depths[0] == cfg.depth_cap);
  CHECK(rep.note.find("depth cap") != std::string::npos);
}

TEST_CASE("shrinking intervals hit the cap when the sampler leads with the core") {
  NestedFamily<Rat> fam;
  fam.name = "shrinking-interval";
  fam.contains = [](int level, const Rat& x) { return x >= 0 && x * Rat(level) <= Rat(1); };
  fam.sample_set = [](int level, int, std::uint64_t) {
    return std::vector<Rat>{Rat(0), rat(1, level)};
  };
  auto rep = cantor_intersect(fam, absdist(), IntersectConfig{});
  CHECK(rep.status == IntersectStatus::Found);
  CHECK(*rep.xbar == Rat(0));
}

TEST_CASE("escaping family: no accumulation point within budget") {
  NestedFamily<Rat> fam;
  fam.name = "escaping-tail";
  fam.contains = [](int level, const Rat& x) { return x >= Rat(level); };
  fam.sample_set = [](int level, int, std::uint64_t) {
    return std::vector<Rat>{Rat(level)};
  };
  auto rep = cantor_intersect(fam, absdist(), IntersectConfig{});
  CHECK(rep.status == IntersectStatus::NoAccumulation);
  CHECK_FALSE(rep.xbar.has_value());
  CHECK(rep.note.find("within budget") != std::string::npos);
  REQUIRE(rep.depths.size() == 10);
  for (int i = 0; i < 10; ++i) CHECK(rep.depths[i] == i + 1);
}

TEST_CASE("a family that is not nested is rejected") {
  NestedFamily<Rat> fam;
  fam.name = "disjoint";
  fam.contains = [](int level, const Rat& x) {
    return level == 1 ? (x >= 0 && x <= 1) : (x >= 5 && x <= 6);
  };
  fam.sample_set = [](int level, int, std::uint64_t) {
    return std::vector<Rat>{level == 1 ? Rat(0) : Rat(5)};
  };
  CHECK_THROWS_AS(cantor_intersect(fam, absdist(), IntersectConfig{}), std::invalid_argument);
}

TEST_CASE("a level with no exhibited point stops the walk") {
  NestedFamily<Rat> fam;
  fam.name = "vanishing-witnesses";
  fam.contains = [](int level, const Rat& x) { return x == Rat(0) && level <= 5; };
  fam.sample_set = [](int level, int, std::uint64_t) {
    return level <= 2 ? std::vector<Rat>{Rat(0)} : std::vector<Rat>{};
  };
  auto rep = cantor_intersect(fam, absdist(), IntersectConfig{});
  CHECK(rep.status == IntersectStatus::CannotWitnessNonempty);
  CHECK(rep.note.find("level 3") != std::string::npos);
}
