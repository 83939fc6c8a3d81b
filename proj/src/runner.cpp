#include "orbitkit/runner.hpp"

#include <chrono>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "orbitkit/descent.hpp"
#include "orbitkit/gallery.hpp"
#include "orbitkit/remetrize.hpp"
#include "orbitkit/serialize.hpp"

namespace orbitkit {

namespace {

// ---------------------------------------------------------------------------
// Typed config access
// ---------------------------------------------------------------------------

void check_keys(const Json& cfg, std::initializer_list<const char*> allowed) {
  if (!cfg.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& item : cfg.items()) {
    bool known = false;
    for (const char* k : allowed) known = known || item.key() == k;
    if (!known) throw ConfigError("unknown config key '" + item.key() + "'");
  }
}

long get_int(const Json& cfg, const char* key, std::optional<long> fallback = {}) {
  if (!cfg.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(std::string("missing required config key '") + key + "'");
  }
  const Json& v = cfg.at(key);
  if (!v.is_number_integer())
    throw ConfigError(std::string("config key '") + key + "' must be an integer");
  return v.get<long>();
}

double get_double(const Json& cfg, const char* key, std::optional<double> fallback = {}) {
  if (!cfg.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(std::string("missing required config key '") + key + "'");
  }
  const Json& v = cfg.at(key);
  if (!v.is_number())
    throw ConfigError(std::string("config key '") + key + "' must be a number");
  return v.get<double>();
}

bool get_bool(const Json& cfg, const char* key, bool fallback) {
  if (!cfg.contains(key)) return fallback;
  const Json& v = cfg.at(key);
  if (!v.is_boolean())
    throw ConfigError(std::string("config key '") + key + "' must be a boolean");
  return v.get<bool>();
}

std::string get_string(const Json& cfg, const char* key,
                       std::optional<std::string> fallback = {}) {
  if (!cfg.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(std::string("missing required config key '") + key + "'");
  }
  const Json& v = cfg.at(key);
  if (!v.is_string())
    throw ConfigError(std::string("config key '") + key + "' must be a string");
  return v.get<std::string>();
}

std::uint64_t get_seed(const Json& cfg) {
  if (!cfg.contains("seed"))
    throw ConfigError("sampled runs require a 'seed' key (or --seed)");
  const Json& v = cfg.at("seed");
  if (!v.is_number_integer() || (v.is_number_integer() && v.get<long long>() < 0))
    throw ConfigError("config key 'seed' must be a nonnegative integer");
  return v.get<std::uint64_t>();
}

std::vector<double> get_double_list(const Json& cfg, const char* key,
                                    std::vector<double> fallback) {
  if (!cfg.contains(key)) return fallback;
  const Json& v = cfg.at(key);
  if (!v.is_array())
    throw ConfigError(std::string("config key '") + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number())
      throw ConfigError(std::string("config key '") + key + "' must be an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

Rat config_rational(const Json& cfg, const char* key, const char* fallback) {
  std::string s =
      cfg.contains(key) ? get_string(cfg, key) : std::string(fallback);
  Rat q;
  if (q.set_str(s, 10) != 0 || q.get_den() == 0)
    throw ConfigError("config key '" + std::string(key) + "': bad rational '" + s + "'");
  q.canonicalize();
  return q;
}

// ---------------------------------------------------------------------------
// Report fragments
// ---------------------------------------------------------------------------

Json rat_json(const Rat& q) {
  return Json{{"value", q.get_str()}, {"approx", to_double(q)}};
}

Json check_json(const CheckResult& c) {
  return Json{{"verdict", to_string(c.verdict)},
              {"witness", c.witness},
              {"triggers", c.triggers}};
}

Json axioms_json(const AxiomReport& rep) {
  return Json{{"zero_dichotomy", check_json(rep.zero_dichotomy)},
              {"null_implies_converges", check_json(rep.null_implies_converges)},
              {"step_vanishing", check_json(rep.step_vanishing)},
              {"step_vanishing_reversed", check_json(rep.step_vanishing_reversed)},
              {"null_equivalence", check_json(rep.null_equivalence)},
              {"all_supported", rep.all_supported()}};
}

void collect_axiom_violations(const AxiomReport& rep, std::vector<std::string>& violations) {
  auto scan = [&](const char* name, const CheckResult& c) {
    if (c.verdict == Verdict::Refuted)
      violations.push_back(std::string("axiom '") + name + "' refuted: " + c.witness);
  };
  scan("zero_dichotomy", rep.zero_dichotomy);
  scan("null_implies_converges", rep.null_implies_converges);
  scan("step_vanishing", rep.step_vanishing);
  scan("step_vanishing_reversed", rep.step_vanishing_reversed);
  scan("null_equivalence", rep.null_equivalence);
}

Json certificate_json(const MinimizationCertificate<Rat, Rat>& c) {
  Json j{{"xbar", c.xbar.get_str()},
         {"xbar_approx", to_double(c.xbar)},
         {"f_xbar", c.f_xbar.get_str()},
         {"sigma_length", c.sigma_length.get_str()},
         {"sigma_length_approx", to_double(c.sigma_length)},
         {"residual", c.residual.get_str()},
         {"probe", to_string(c.probe)},
         {"steps", c.steps},
         {"f_evals", c.f_evals},
         {"notes", c.notes}};
  if (c.length_bound_ok) j["length_bound_ok"] = *c.length_bound_ok;
  return j;
}

// ---------------------------------------------------------------------------
// verify-finite
// ---------------------------------------------------------------------------

Json separation_json(const SeparationClass& s) {
  return Json{{"t0", s.t0}, {"t1", s.t1}, {"hausdorff", s.hausdorff},
              {"discrete", s.discrete}};
}

Json verify_single_instance(const std::string& path, std::vector<std::string>& violations) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open instance file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  FiniteInstance inst;
  try {
    inst = read_instance(text);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("instance file " + path + ": " + e.what());
  }

  Json res{{"n", inst.space.n},
           {"open_count", inst.space.opens.size()},
           {"separation", separation_json(separation_class(inst.space))}};
  if (inst.map) {
    const bool closed = is_closed_graph(inst.space, *inst.map);
    res["closed_graph"] = closed;
    if (closed != is_closed_graph_via_complement(inst.space, *inst.map))
      violations.push_back("closed-graph criterion disagrees with the complement oracle");
    Json fixed = Json::array();
    for (int x = 0; x < inst.space.n; ++x)
      if (mask_contains(inst.map->images[static_cast<std::size_t>(x)], x)) fixed.push_back(x);
    res["fixed_points"] = fixed;
  }
  if (inst.orbit) {
    auto red = is_cover_contractive(inst.space, *inst.map, *inst.orbit);
    res["cover_contractive"] = red.contractive;
    if (red.contractive != is_cover_contractive_exhaustive(inst.space, *inst.map, *inst.orbit))
      violations.push_back("cover reduction disagrees with the exhaustive oracle");
    res["strong_accumulation_points"] =
        strong_accumulation_points(inst.space, *inst.map, *inst.orbit);
    auto au = audit_closed_graph_fixed_point(inst.space, *inst.map, *inst.orbit);
    res["fixed_point_audit"] = Json{{"closed_graph", au.closed_graph},
                                    {"cover_condition", au.cover_condition},
                                    {"consistent", au.consistent}};
    if (!au.consistent)
      violations.push_back("closed graph and cover condition hold but no fixed point exists");
  }
  return res;
}

Json cmd_verify_finite(const Json& cfg, std::vector<std::string>& violations) {
  check_keys(cfg, {"n", "instance", "sweep", "max_tail", "max_cycle", "seed"});
  const bool has_n = cfg.contains("n"), has_inst = cfg.contains("instance");
  if (has_n == has_inst)
    throw ConfigError("provide exactly one of 'n' or 'instance'");
  if (has_inst) return verify_single_instance(get_string(cfg, "instance"), violations);

  const long n = get_int(cfg, "n");
  if (n < 1 || n > 4)
    throw ConfigError("n=" + std::to_string(n) + " exceeds the verification cap (1..4)");
  auto spaces = enumerate_topologies(static_cast<int>(n));
  auto oracle = enumerate_topologies_brute_force(static_cast<int>(n));
  Json res{{"n", n},
           {"topology_count", spaces.size()},
           {"oracle_count", oracle.size()},
           {"counts_agree", spaces.size() == oracle.size()}};
  if (spaces.size() != oracle.size())
    violations.push_back("topology enumerator disagrees with the closure-filter oracle");

  int t0 = 0, t1 = 0, hd = 0, disc = 0;
  for (const auto& s : spaces) {
    auto c = separation_class(s);
    t0 += c.t0;
    t1 += c.t1;
    hd += c.hausdorff;
    disc += c.discrete;
  }
  res["separation_tally"] =
      Json{{"t0", t0}, {"t1", t1}, {"hausdorff", hd}, {"discrete", disc}};

  const bool sweep = get_bool(cfg, "sweep", n <= 3);
  if (sweep) {
    if (n > 3) throw ConfigError("the exhaustive map sweep is capped at n = 3");
    const int max_tail = static_cast<int>(get_int(cfg, "max_tail", 3));
    const int max_cycle = static_cast<int>(get_int(cfg, "max_cycle", 4));
    long orbits = 0, mismatches = 0, gaps = 0;
    for (const auto& s : spaces) {
      for (std::uint64_t code = 0; code < set_map_count(static_cast<int>(n)); ++code) {
        auto map = decode_set_map(static_cast<int>(n), code);
        for (int start = 0; start < n; ++start) {
          enumerate_orbits(s, map, start, max_tail, max_cycle, [&](const OrbitDescriptor& o) {
            ++orbits;
            if (is_cover_contractive(s, map, o).contractive !=
                is_cover_contractive_exhaustive(s, map, o))
              ++mismatches;
            if (!audit_closed_graph_fixed_point(s, map, o).consistent) ++gaps;
          });
        }
      }
    }
    if (mismatches)
      violations.push_back(std::to_string(mismatches) +
                           " cover-reduction mismatches against the exhaustive oracle");
    if (gaps)
      violations.push_back(std::to_string(gaps) +
                           " orbits satisfy the fixed-point premises without a fixed point");
    res["map_sweep"] = Json{{"maps_per_space", set_map_count(static_cast<int>(n))},
                            {"orbits_checked", orbits},
                            {"reduction_mismatches", mismatches},
                            {"fixed_point_gaps", gaps}};
  }
  return res;
}

// ---------------------------------------------------------------------------
// descend
// ---------------------------------------------------------------------------

ObjectiveFunction<Rat, Rat> named_objective(const std::string& name, int grid_depth) {
  ObjectiveFunction<Rat, Rat> obj;
  obj.name = name;
  obj.domain = dyadic_interval_sampler(Rat(-2), Rat(2), grid_depth);
  obj.domain_size = (1 << grid_depth) + 1;
  obj.lower_bound = Rat(0);
  if (name == "quadratic") {
    obj.f = [](const Rat& x) { return std::optional<Rat>(Rat(x * x)); };
  } else if (name == "abs") {
    obj.f = [](const Rat& x) { return std::optional<Rat>(scalar_abs(x)); };
  } else if (name == "double-well") {
    obj.f = [](const Rat& x) {
      Rat t = x * x - 1;
      return std::optional<Rat>(Rat(t * t));
    };
  } else {
    throw ConfigError("unknown objective '" + name + "'");
  }
  return obj;
}

NestedFamily<Rat> named_family(const std::string& name) {
  if (name == "sqrt2-shells") return sqrt2_shell_family();
  if (name == "shrinking-intervals") {
    NestedFamily<Rat> fam;
    fam.name = "shrinking-intervals";
    fam.contains = [](int level, const Rat& x) { return x >= 0 && Rat(x * level) <= 1; };
    fam.sample_set = [](int level, int, std::uint64_t) {
      return std::vector<Rat>{Rat(0), rat(1, level)};
    };
    return fam;
  }
  throw ConfigError("unknown family '" + name + "'");
}

Json cmd_descend(const Json& cfg, std::vector<std::string>& violations) {
  check_keys(cfg, {"solver", "objective", "family", "start", "max_steps", "budget",
                   "grid_depth", "tol", "seed"});
  const std::string solver = get_string(cfg, "solver");
  Json res{{"solver", solver}};

  if (solver == "ekeland" || solver == "strong-min") {
    auto obj = named_objective(get_string(cfg, "objective"),
                               static_cast<int>(get_int(cfg, "grid_depth", 14)));
    const Rat start = config_rational(cfg, "start", "1");
    DescentConfig dc;
    dc.max_steps = static_cast<int>(get_int(cfg, "max_steps", 16));
    dc.per_step_budget = static_cast<int>(get_int(cfg, "budget", 64));
    dc.tol = get_double(cfg, "tol", 1e-9);
    dc.seed = get_seed(cfg);
    auto p = rational_abs_premetric();
    auto cert = solver == "ekeland" ? ekeland_descent(obj, p, start, dc)
                                    : strong_min_descent(obj, p, start, dc);
    res["objective"] = obj.name;
    res["certificate"] = certificate_json(cert);
    if (cert.length_bound_ok && !*cert.length_bound_ok)
      violations.push_back("telescoping length bound violated");
  } else if (solver == "cantor") {
    auto fam = named_family(get_string(cfg, "family"));
    IntersectConfig ic;
    ic.max_steps = static_cast<int>(get_int(cfg, "max_steps", 10));
    ic.budget = static_cast<int>(get_int(cfg, "budget", 32));
    ic.tol = get_double(cfg, "tol", 1e-9);
    ic.seed = get_seed(cfg);
    auto rep = cantor_intersect(fam, rational_abs_premetric(), ic);
    Json inter{{"status", to_string(rep.status)},
               {"note", rep.note},
               {"depths", rep.depths},
               {"depth_cap", rep.depth_cap}};
    if (rep.xbar) inter["xbar"] = rat_json(*rep.xbar);
    res["family"] = fam.name;
    res["intersection"] = inter;
  } else {
    throw ConfigError("unknown solver '" + solver + "'");
  }
  return res;
}

// ---------------------------------------------------------------------------
// gallery
// ---------------------------------------------------------------------------

Json classification_json(const FixedPointReport<TwoOriginPoint>& rep) {
  Json j{{"kind", to_string(rep.kind)}};
  if (rep.witness) j["witness"] = to_string(*rep.witness);
  return j;
}

Json cmd_gallery(const Json& cfg, std::vector<std::string>& violations) {
  check_keys(cfg, {"scenario", "schedule", "levels", "max_steps", "budget", "tol", "seed"});
  const std::string scenario = get_string(cfg, "scenario");
  const std::uint64_t seed = get_seed(cfg);
  const double tol = get_double(cfg, "tol", 1e-9);
  const int budget = static_cast<int>(get_int(cfg, "budget", 8));
  Json res{{"scenario", scenario}};

  if (scenario == "rationals-halving") {
    auto sc = rationals_halving_scenario();
    ProbeSequence<Rat> pr{"geometric", {}, Rat(0)};
    for (int k = 1; k <= 40; ++k) pr.points.push_back(pow2(-k));
    auto audit = audit_axioms(sc.space, {pr}, 6, seed);
    res["axioms"] = axioms_json(audit);
    collect_axiom_violations(audit, violations);

    const int steps = static_cast<int>(get_int(cfg, "max_steps", 40));
    auto orbit = generate_orbit(sc.map, sc.start, first_sample_selector<Rat>(), steps,
                                seed, budget);
    auto mon = monitor_p_contractive(orbit, sc.space.p, sc.map, budget, seed);
    res["monitor"] = to_string(mon.verdict);
    if (mon.verdict != Verdict::Supported)
      violations.push_back("contraction monitor did not certify the halving collapse");

    auto found = find_accumulation_point(orbit, sc.space.p, sc.pool, tol);
    Json acc = Json::array();
    for (const auto& c : found) acc.push_back(c.point.get_str());
    res["accumulation_points"] = acc;
    if (found.size() != 1 || !(found[0].point == Rat(0))) {
      violations.push_back("expected the halving orbit to accumulate exactly at 0");
    } else {
      auto cls = classify_fixed_point(sc.map, found[0].point, sc.space.p, tol, budget, seed);
      res["classification"] = Json{{"point", "0"}, {"kind", to_string(cls.kind)}};
      if (cls.kind != FixedPointKind::Strict)
        violations.push_back("expected a strict fixed point at 0");
    }
  } else if (scenario == "two-origins") {
    const std::string schedule = get_string(cfg, "schedule", "dyadic");
    RadiusSchedule sched;
    if (schedule == "dyadic")
      sched = RadiusSchedule::Dyadic;
    else if (schedule == "harmonic")
      sched = RadiusSchedule::Harmonic;
    else
      throw ConfigError("unknown schedule '" + schedule + "'");
    const int chain =
        static_cast<int>(get_int(cfg, "max_steps", schedule == "dyadic" ? 40 : 12));
    res["schedule"] = schedule;

    auto sc = two_origins_scenario(sched, chain);
    const auto a = TwoOriginPoint::origin_a(), b = TwoOriginPoint::origin_b();
    ProbeSequence<TwoOriginPoint> pr{"vanishing-reals", {}, a};
    for (int k = 1; k <= 40; ++k) pr.points.push_back(TwoOriginPoint::real(pow2(-k)));
    auto audit = audit_axioms(sc.space, {pr}, 6, seed);
    res["axioms"] = axioms_json(audit);
    collect_axiom_violations(audit, violations);

    auto orbit = generate_orbit(sc.map, sc.start, first_sample_selector<TwoOriginPoint>(),
                                chain - 2, seed, budget);
    auto mon = monitor_p_contractive(orbit, sc.space.p, sc.map, budget, seed);
    res["monitor"] = to_string(mon.verdict);
    res["tail_gap_origin_a"] = scalar_to_double(sc.space.p(a, orbit.points.back()));
    res["tail_gap_origin_b"] = scalar_to_double(sc.space.p(b, orbit.points.back()));

    auto found = find_accumulation_point(orbit, sc.space.p, sc.pool, tol);
    Json acc = Json::array();
    for (const auto& c : found) acc.push_back(to_string(c.point));
    res["accumulation_points"] = acc;
    if (found.size() == 2) {
      res["witness_pair"] = Json::array({to_string(found[0].point), to_string(found[1].point)});
    } else {
      violations.push_back("expected both origins to accumulate on the chain");
    }
    Json classes = Json::object();
    for (const auto& q : {a, b}) {
      auto cls = classify_fixed_point(sc.map, q, sc.space.p, tol, budget, seed);
      classes[to_string(q)] = classification_json(cls);
      if (cls.kind != FixedPointKind::Violation)
        violations.push_back("expected a fixed-point violation at " + to_string(q));
    }
    res["classification"] = classes;
  } else if (scenario == "half-plane") {
    auto inst = moore_plane_instance();
    const MoorePoint corner(Rat(0), Rat(0));
    ProbeSequence<MoorePoint> diag{"diagonal", {}, corner};
    ProbeSequence<MoorePoint> vert{"vertical", {}, corner};
    ProbeSequence<MoorePoint> inner{"interior", {}, MoorePoint(rat(1, 2), rat(1, 2))};
    for (int k = 1; k <= 40; ++k) {
      diag.points.push_back(MoorePoint(pow2(-k), pow2(-k)));
      vert.points.push_back(MoorePoint(Rat(0), pow2(-k)));
      inner.points.push_back(MoorePoint(Rat(rat(1, 2) + pow2(-k)), rat(1, 2)));
    }
    auto audit = audit_axioms(inst, {diag, vert, inner}, 6, seed);
    res["axioms"] = axioms_json(audit);
    collect_axiom_violations(audit, violations);

    auto sc = moore_plane_scenario();
    const int steps = static_cast<int>(get_int(cfg, "max_steps", 80));
    auto orbit = generate_orbit(sc.map, sc.start, first_sample_selector<MoorePoint>(),
                                steps, seed, 4);
    auto found = find_accumulation_point(orbit, inst.p, sc.pool, tol);
    Json acc = Json::array();
    for (const auto& c : found) acc.push_back(to_string(c.point));
    res["accumulation_points"] = acc;
    if (found.empty() || !(found[0].point == corner))
      violations.push_back("expected the dance orbit to accumulate at the corner first");
    for (const auto& c : found)
      if (!(c.point.y == Rat(0)))
        violations.push_back("off-axis accumulation candidate " + to_string(c.point));
    auto cls = classify_fixed_point(sc.map, corner, inst.p, tol, 4, seed);
    res["classification"] = Json{{"point", to_string(corner)}, {"kind", to_string(cls.kind)}};
    if (cls.kind != FixedPointKind::Strict)
      violations.push_back("expected a strict fixed point at the corner");
  } else if (scenario == "ordinal") {
    const long levels = get_int(cfg, "levels", 1);
    if (levels < 1 || levels > 8) throw ConfigError("'levels' must be in 1..8");
    auto sc = ordinal_scenario(static_cast<int>(levels));
    res["levels"] = levels;
    res["top"] = to_string(sc.top);

    auto stopped = generate_orbit(sc.next, sc.top, first_sample_selector<OrdinalPoint>(),
                                  10, seed, budget);
    res["top_orbit_ended"] = stopped.ended;
    res["top_orbit_end_reason"] = stopped.end_reason;
    if (!stopped.ended || stopped.end_reason != "image certified empty")
      violations.push_back("expected a certified empty image at the top point");

    auto loop = generate_orbit(sc.self, sc.top, first_sample_selector<OrdinalPoint>(), 5,
                               seed, budget);
    bool pinned = !loop.ended;
    for (const auto& q : loop.points) pinned = pinned && q == sc.top;
    res["self_variant_loops"] = pinned;
    if (!pinned) violations.push_back("self variant failed to pin the top point");

    std::vector<OrdinalPoint> ground;
    for (int m = 1; m <= 40; ++m) ground.push_back({0, m});
    const bool ground_reaches_top = sc.converges(ground, sc.top);
    res["ground_tail_reaches_top"] = ground_reaches_top;
    if (ground_reaches_top != (levels == 1))
      violations.push_back("order-topology oracle disagrees with the level structure");
    std::vector<OrdinalPoint> upper;
    for (int m = 1; m <= 40; ++m) upper.push_back({static_cast<int>(levels) - 1, m});
    if (!sc.converges(upper, sc.top))
      violations.push_back("highest-level tail fails to reach the top point");
  } else {
    throw ConfigError("unknown scenario '" + scenario + "'");
  }
  return res;
}

// ---------------------------------------------------------------------------
// audit
// ---------------------------------------------------------------------------

Json cmd_audit(const Json& cfg, std::vector<std::string>& violations) {
  check_keys(cfg, {"space", "pair_budget", "tol", "seed"});
  const std::string space = get_string(cfg, "space");
  const std::uint64_t seed = get_seed(cfg);
  const int pair_budget = static_cast<int>(get_int(cfg, "pair_budget", 6));
  const double tol = get_double(cfg, "tol", 1e-9);
  Json res{{"space", space}};

  AxiomReport rep;
  if (space == "rationals") {
    auto inst = rationals_halving_scenario().space;
    ProbeSequence<Rat> pr{"geometric", {}, Rat(0)};
    for (int k = 1; k <= 40; ++k) pr.points.push_back(pow2(-k));
    rep = audit_axioms(inst, {pr}, pair_budget, seed, tol);
  } else if (space == "two-origins-dyadic" || space == "two-origins-harmonic") {
    auto inst = two_origins_instance(space == "two-origins-dyadic"
                                         ? RadiusSchedule::Dyadic
                                         : RadiusSchedule::Harmonic);
    ProbeSequence<TwoOriginPoint> toa{"vanishing-reals-to-a", {}, TwoOriginPoint::origin_a()};
    ProbeSequence<TwoOriginPoint> tob{"vanishing-reals-to-b", {}, TwoOriginPoint::origin_b()};
    for (int k = 1; k <= 40; ++k) {
      toa.points.push_back(TwoOriginPoint::real(pow2(-k)));
      tob.points.push_back(TwoOriginPoint::real(pow2(-k)));
    }
    rep = audit_axioms(inst, {toa, tob}, pair_budget, seed, tol);
  } else if (space == "half-plane") {
    auto inst = moore_plane_instance();
    const MoorePoint corner(Rat(0), Rat(0));
    ProbeSequence<MoorePoint> diag{"diagonal", {}, corner};
    ProbeSequence<MoorePoint> vert{"vertical", {}, corner};
    for (int k = 1; k <= 40; ++k) {
      diag.points.push_back(MoorePoint(pow2(-k), pow2(-k)));
      vert.points.push_back(MoorePoint(Rat(0), pow2(-k)));
    }
    rep = audit_axioms(inst, {diag, vert}, pair_budget, seed, tol);
  } else if (space == "zero") {
    // Degenerate control: the identically-zero premetric on the dyadics.
    PSpaceInstance<Rat, Rat> inst;
    inst.name = "degenerate-zero";
    inst.p = [](const Rat&, const Rat&) { return Rat(0); };
    inst.carrier_sample = [](int budget, std::uint64_t) {
      std::vector<Rat> out{Rat(0)};
      for (int k = 1; static_cast<int>(out.size()) < budget; ++k)
        out.push_back(pow2(-k));
      return out;
    };
    inst.converges = [](const std::vector<Rat>&, const Rat&) { return true; };
    ProbeSequence<Rat> pr{"geometric", {}, Rat(0)};
    for (int k = 1; k <= 12; ++k) pr.points.push_back(pow2(-k));
    rep = audit_axioms(inst, {pr}, pair_budget, seed, tol);
  } else {
    throw ConfigError("unknown space '" + space + "'");
  }
  res["axioms"] = axioms_json(rep);
  collect_axiom_violations(rep, violations);
  return res;
}

// ---------------------------------------------------------------------------
// remetrize
// ---------------------------------------------------------------------------

Json cmd_remetrize(const Json& cfg, std::vector<std::string>& violations) {
  check_keys(cfg, {"map", "o_lo", "o_hi", "samples", "horizon", "max_steps", "epsilons",
                   "xbar", "tol", "refute_floor", "seed"});
  if (cfg.contains("horizon") && cfg.contains("max_steps"))
    throw ConfigError("'horizon' and 'max_steps' are aliases: provide one");
  const std::string name = get_string(cfg, "map");
  const int samples = static_cast<int>(get_int(cfg, "samples", 17));

  IterationSystem sys;
  if (name == "halving") {
    sys = halving_system(get_double(cfg, "o_lo", 0.0), get_double(cfg, "o_hi", 1.0), samples);
  } else if (name == "identity") {
    sys = identity_system(get_double(cfg, "o_lo", 0.0), get_double(cfg, "o_hi", 1.0), samples);
  } else if (name == "quadratic") {
    sys = quadratic_system(get_double(cfg, "o_lo", 0.0), get_double(cfg, "o_hi", 0.5), samples);
  } else if (name == "rotation") {
    sys = rotation_system(std::max(samples, 4));  // lives on the circle; o_lo/o_hi unused
  } else if (name == "step") {
    sys = halving_system(get_double(cfg, "o_lo", 0.0), get_double(cfg, "o_hi", 1.0), samples);
    sys.name = "step";
    sys.f = [](double x) { return x < 0.5 ? 0.0 : 1.0; };
  } else {
    throw ConfigError("unknown map '" + name + "'");
  }

  RemetrizeConfig rc;
  rc.horizon = static_cast<int>(cfg.contains("max_steps") ? get_int(cfg, "max_steps")
                                                          : get_int(cfg, "horizon", 64));
  rc.epsilon_schedule = get_double_list(cfg, "epsilons", {1e-1, 1e-3, 1e-6});
  rc.tol = get_double(cfg, "tol", 1e-9);
  rc.refute_floor = get_double(cfg, "refute_floor", 1e-3);
  std::optional<double> xbar;
  if (cfg.contains("xbar")) xbar = get_double(cfg, "xbar");

  auto rep = a1_a2_check(sys, xbar, rc);
  Json res{{"system", sys.name},
           {"xbar", rep.xbar},
           {"a1", to_string(rep.a1)},
           {"a2", to_string(rep.a2)},
           {"continuity", to_string(rep.continuity)},
           {"t_contraction", to_string(rep.t_contraction)},
           {"uniform_cover", to_string(rep.uniform_cover)},
           {"remetrizable", rep.remetrizable},
           {"cover_semantics", rep.cover_semantics},
           {"sup_curve", rep.sup_curve},
           {"diameter_curve", rep.diameter_curve},
           {"note", rep.note}};
  if (rep.a1_witness) res["a1_witness"] = *rep.a1_witness;

  if (rep.remetrizable && rep.t_contraction != Verdict::Supported)
    violations.push_back("hypotheses verified but the contraction trend is not supported");
  if (rep.uniform_cover == Verdict::Supported && rep.a2 == Verdict::Refuted)
    violations.push_back("vanishing diameters cannot coexist with a refuted uniform attraction");
  return res;
}

}  // namespace

Json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  try {
    return Json::parse(in, nullptr, /*allow_exceptions=*/true, /*ignore_comments=*/true);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config file " + path + ": " + e.what());
  }
}

RunOutcome run_command(const std::string& command, const Json& config) {
  const auto t0 = std::chrono::steady_clock::now();
  Json results;
  std::vector<std::string> violations;

  try {
    if (command == "verify-finite")
      results = cmd_verify_finite(config, violations);
    else if (command == "descend")
      results = cmd_descend(config, violations);
    else if (command == "gallery")
      results = cmd_gallery(config, violations);
    else if (command == "audit")
      results = cmd_audit(config, violations);
    else if (command == "remetrize")
      results = cmd_remetrize(config, violations);
    else
      throw ConfigError("unknown command '" + command + "'");
  } catch (const ConfigError&) {
    throw;  // bad configuration, not a refuted invariant
  } catch (const std::exception& e) {
    violations.push_back(std::string("invariant violation: ") + e.what());
  }

  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
  RunOutcome out;
  out.report = Json{{"schema_version", 1},
                    {"tool", "orbitkit"},
                    {"version", "0.1.0"},
                    {"command", command},
                    {"config", config},
                    {"seed", config.contains("seed") ? config.at("seed") : Json()},
                    {"results", results},
                    {"violations", violations},
                    {"wall_time_ms", ms}};
  out.exit_code = violations.empty() ? 0 : 1;
  return out;
}

}  // namespace orbitkit
