// Acceptance gate: every release-blocking behavior of the library and tool,
// one [PASS]/[FAIL] line each.  Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <optional>
#include <string>

#include "orbitkit/descent.hpp"
#include "orbitkit/gallery.hpp"
#include "orbitkit/remetrize.hpp"
#include "orbitkit/runner.hpp"

using namespace orbitkit;

namespace {

int failures = 0;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void criterion(int num, const char* name, const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = e.what();
    ok = false;
  }
  std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", num, name);
  if (!ok) {
    if (!detail.empty()) std::printf("       detail: %s\n", detail.c_str());
    ++failures;
  }
}

// Records the first failing condition so the FAIL line can explain itself.
bool check(bool cond, const char* msg, std::string& detail) {
  if (!cond && detail.empty()) detail = msg;
  return cond;
}

}  // namespace

int main() {
  // -------------------------------------------------------------------- 1
  criterion(1, "finite topology census matches the brute-force oracle", [](std::string& d) {
    const long expected[] = {1, 4, 29, 355};
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    for (int n = 1; n <= 4; ++n) {
      auto out = run_command("verify-finite", Json{{"n", n}, {"sweep", false}});
      const Json& res = out.report["results"];
      ok = check(res["topology_count"].get<long>() == expected[n - 1],
                 "census count off the frozen value", d) &&
           ok;
      ok = check(res["counts_agree"] == true, "filter and brute-force enumerators disagree",
                 d) &&
           ok;
    }
    ok = check(seconds_since(t0) < 10.0, "census exceeded the 10 s budget", d) && ok;
    return ok;
  });

  // ------------------------------------------------------------------ 2, 3
  Json sweep;  // shared by the two sweep criteria
  criterion(2, "cover reduction agrees with exhaustive search over the full three-point sweep",
            [&sweep](std::string& d) {
              const auto t0 = std::chrono::steady_clock::now();
              auto out = run_command("verify-finite",
                                     Json{{"n", 3}, {"max_tail", 4}, {"max_cycle", 6}});
              const double dt = seconds_since(t0);
              sweep = out.report["results"];
              const Json& ms = sweep["map_sweep"];
              bool ok = check(sweep["topology_count"].get<long>() == 29,
                              "expected 29 three-point spaces", d);
              ok = check(ms["maps_per_space"].get<long>() == 512,
                         "expected 512 set-valued maps per space", d) &&
                   ok;
              ok = check(ms["orbits_checked"].get<long>() > 1000000,
                         "sweep covered suspiciously few orbits", d) &&
                   ok;
              ok = check(ms["reduction_mismatches"].get<long>() == 0,
                         "reduction disagreed with exhaustive search", d) &&
                   ok;
              ok = check(dt < 300.0, "sweep exceeded the 5 min budget", d) && ok;
              return ok;
            });

  criterion(3, "closed graph plus cover condition always yields a fixed point in the sweep",
            [&sweep](std::string& d) {
              bool ok = check(!sweep.is_null(), "sweep results unavailable", d);
              return ok &&
                     check(sweep["map_sweep"]["fixed_point_gaps"].get<long>() == 0,
                           "an orbit met both premises without a fixed point", d);
            });

  // -------------------------------------------------------------------- 4
  criterion(4, "halving dynamics on the rationals collapse to the strict fixed point at zero",
            [](std::string& d) {
              auto sc = rationals_halving_scenario();
              auto orbit =
                  generate_orbit(sc.map, sc.start, first_sample_selector<Rat>(), 40, 7, 8);
              bool ok = check(orbit.points.size() == 41, "orbit ended early", d);
              for (int k = 0; k <= 40 && ok; ++k)
                ok = check(orbit.points[static_cast<std::size_t>(k)] == pow2(-k),
                           "orbit point is not the exact power of two", d);
              auto mon = monitor_p_contractive(orbit, sc.space.p, sc.map, 8, 7);
              ok = check(mon.verdict == Verdict::Supported,
                         "contraction monitor did not certify the collapse", d) &&
                   ok;
              auto found = find_accumulation_point(orbit, sc.space.p, sc.pool, 1e-9);
              ok = check(found.size() == 1 && found[0].point == Rat(0),
                         "accumulation set is not exactly {0}", d) &&
                   ok;
              auto cls = classify_fixed_point(sc.map, Rat(0), sc.space.p, 1e-9, 8, 7);
              return check(cls.kind == FixedPointKind::Strict,
                           "zero is not classified as a strict fixed point", d) &&
                     ok;
            });

  // -------------------------------------------------------------------- 5
  criterion(5, "doubled-origin chain accumulates at both origins and refutes fixed points there",
            [](std::string& d) {
              auto sc = two_origins_scenario(RadiusSchedule::Dyadic, 40);
              const auto a = TwoOriginPoint::origin_a(), b = TwoOriginPoint::origin_b();
              auto orbit = generate_orbit(sc.map, sc.start,
                                          first_sample_selector<TwoOriginPoint>(), 38, 5, 8);
              bool ok = check(to_double(sc.space.p(a, orbit.points.back())) < 1e-6,
                              "tail gap to the first origin is not below 1e-6", d);
              ok = check(to_double(sc.space.p(b, orbit.points.back())) < 1e-6,
                         "tail gap to the second origin is not below 1e-6", d) &&
                   ok;
              auto found = find_accumulation_point(orbit, sc.space.p, sc.pool, 1e-9);
              ok = check(found.size() == 2, "expected exactly the two origins", d) && ok;
              if (found.size() == 2) {
                ok = check((found[0].point == a && found[1].point == b) ||
                               (found[0].point == b && found[1].point == a),
                           "accumulation points are not the two origins", d) &&
                     ok;
              }
              auto ca = classify_fixed_point(sc.map, a, sc.space.p, 1e-9, 8, 5);
              auto cb = classify_fixed_point(sc.map, b, sc.space.p, 1e-9, 8, 5);
              ok = check(ca.kind == FixedPointKind::Violation,
                         "first origin is not a fixed-point violation", d) &&
                   ok;
              return check(cb.kind == FixedPointKind::Violation,
                           "second origin is not a fixed-point violation", d) &&
                     ok;
            });

  // -------------------------------------------------------------------- 6
  criterion(6, "variational descent certificate bounds travel by the objective drop",
            [](std::string& d) {
              ObjectiveFunction<Rat, Rat> obj;
              obj.name = "quadratic";
              obj.f = [](const Rat& x) { return std::optional<Rat>(Rat(x * x)); };
              obj.domain = dyadic_interval_sampler(Rat(-2), Rat(2), 14);  // spacing 2^-12
              obj.domain_size = (1 << 14) + 1;
              obj.lower_bound = Rat(0);
              DescentConfig cfg;
              cfg.per_step_budget = 64;
              cfg.max_steps = 16;
              cfg.seed = 1;
              auto cert = ekeland_descent(obj, rational_abs_premetric(), Rat(1), cfg);
              bool ok = check(cert.xbar <= Rat(rat(1, 2) + pow2(-10)),
                              "stationary point exceeds 1/2 + 2^-10", d);
              ok = check(cert.sigma_length <= Rat(1), "total travel exceeds the drop bound", d) &&
                   ok;
              return check(cert.length_bound_ok.has_value() && *cert.length_bound_ok,
                           "exact telescoping prefix check did not come back clean", d) &&
                     ok;
            });

  // -------------------------------------------------------------------- 7
  criterion(7, "steepness-one objective terminates immediately at the start point",
            [](std::string& d) {
              ObjectiveFunction<Rat, Rat> obj;
              obj.name = "abs";
              obj.f = [](const Rat& x) { return std::optional<Rat>(scalar_abs(x)); };
              obj.domain = dyadic_interval_sampler(Rat(-2), Rat(2), 14);
              obj.domain_size = (1 << 14) + 1;
              obj.lower_bound = Rat(0);
              DescentConfig cfg;
              cfg.per_step_budget = 64;
              cfg.max_steps = 16;
              cfg.seed = 1;
              auto cert = ekeland_descent(obj, rational_abs_premetric(), Rat(1), cfg);
              bool ok = check(cert.steps == 0, "descent took a step it should refuse", d);
              ok = check(cert.xbar == Rat(1), "start point was not returned", d) && ok;
              return check(cert.residual == Rat(0), "residual is nonzero", d) && ok;
            });

  // -------------------------------------------------------------------- 8
  criterion(8, "tangent-disk premetric brackets the diagonal approach and isolates the axis",
            [](std::string& d) {
              auto p = moore_premetric();
              const MoorePoint corner(Rat(0), Rat(0));
              bool ok = true;
              Rat last(1);
              for (int k = 1; k <= 40; ++k) {
                last = p(corner, MoorePoint(pow2(-k), pow2(-k)));
                ok = check(pow2(-k) <= last && last <= pow2(-(k - 1)),
                           "diagonal value escapes the dyadic bracket", d) &&
                     ok;
              }
              ok = check(last <= pow2(-39), "diagonal values do not vanish", d) && ok;
              ok = check(p(corner, MoorePoint(Rat(1), Rat(0))) == Rat(1),
                         "axis neighbor is not at unit gap", d) &&
                   ok;
              ok = check(p(corner, MoorePoint(rat(1, 2), Rat(0))) == Rat(1),
                         "nearer axis neighbor is not at unit gap", d) &&
                   ok;
              auto cls = classify_fixed_point(moore_dance_map(), corner, p, 1e-9, 4, 2);
              return check(cls.kind == FixedPointKind::Strict,
                           "corner is not a strict fixed point of the dance", d) &&
                     ok;
            });

  // -------------------------------------------------------------------- 9
  criterion(9, "topological and premetric contraction checks agree on random discrete systems",
            [](std::string& d) {
              int agreements = 0;
              for (std::uint64_t seed = 1; seed <= 500; ++seed) {
                auto [map, orbit] = random_discrete_instance(3, seed);
                agreements += tau_p_equivalence_test(3, map, orbit) ? 1 : 0;
              }
              for (std::uint64_t seed = 501; seed <= 1000; ++seed) {
                auto [map, orbit] = random_discrete_instance(4, seed);
                agreements += tau_p_equivalence_test(4, map, orbit) ? 1 : 0;
              }
              return check(agreements == 1000, "a sampled instance split the two checks", d);
            });

  // ------------------------------------------------------------------- 10
  criterion(10, "attraction hypotheses certify the halving map and reject the identity",
            [](std::string& d) {
              auto h = a1_a2_check(halving_system(), std::nullopt);
              bool ok = check(h.a1 == Verdict::Supported, "halving attraction not supported", d);
              ok = check(h.a2 == Verdict::Supported, "halving uniform attraction not supported",
                         d) &&
                   ok;
              ok = check(h.uniform_cover == Verdict::Supported,
                         "halving neighborhood diameters not vanishing", d) &&
                   ok;
              ok = check(h.remetrizable, "halving map not certified", d) && ok;
              for (std::size_t i = 0; i < h.sup_curve.size() && ok; ++i)
                ok = check(std::fabs(h.sup_curve[i] - std::ldexp(1.0, -static_cast<int>(i))) <=
                               1e-12,
                           "iterate sups drift from the exact halving curve", d);

              auto id = a1_a2_check(identity_system(), std::nullopt);
              ok = check(id.a1 == Verdict::Refuted, "identity attraction not refuted", d) && ok;
              ok = check(id.a1_witness.has_value(), "identity refutation carries no witness",
                         d) &&
                   ok;
              return check(!id.remetrizable, "identity must not be certified", d) && ok;
            });

  // ------------------------------------------------------------------- 11
  criterion(11, "nested irrational shells expose the missing accumulation point",
            [](std::string& d) {
              IntersectConfig cfg;
              cfg.max_steps = 10;
              cfg.budget = 16;
              cfg.seed = 11;
              auto rep = cantor_intersect(sqrt2_shell_family(), rational_abs_premetric(), cfg);
              bool ok = check(rep.status == IntersectStatus::NoAccumulation,
                              "search did not end in the no-accumulation state", d);
              return check(rep.note == "no accumulation point within budget",
                           "report note is not the documented message", d) &&
                     ok;
            });

  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures ? 1 : 0;
}
