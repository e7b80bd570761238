// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "bcs/associated.hpp"
#include "bcs/oracle.hpp"
#include "support.hpp"

using namespace bcs;
using namespace support;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Point parse_point(const std::string& s) {
  Point p;
  std::string body = s.substr(s.find('(') + 1);
  body = body.substr(0, body.find(')'));
  std::stringstream in(body);
  std::string item;
  while (std::getline(in, item, ',')) p.push_back(std::stoll(item));
  return p;
}

Point field(const std::string& s, const char* key) { return parse_point(s.substr(s.find(key))); }

bool mutually_cofinal(const CoarseStructure& a, const CoarseStructure& b, const Budget& budget) {
  return structure_leq(a, b, budget).holds() && structure_leq(b, a, budget).holds();
}

const Budget kDefault{8, 64};

Outcome classification_matrix() {
  Outcome out;
  const auto timed = [&](const ActionPtr& a) {
    const auto t0 = Clock::now();
    Classification c = classify(*a, kDefault);
    const double s = seconds_since(t0);
    out.require(s < 5.0, a->name() + " took " + std::to_string(s) + " s");
    return c;
  };
  const auto s = timed(shift());
  out.require(s.b_proper.holds() && s.weakly.holds() && s.bi.holds(), "shift is not proper in every sense");

  const auto h = timed(hyperbola());
  out.require(h.b_proper.fails() && h.weakly.holds() && h.bi.holds(), "hyperbola classification");
  // replay the escaping direction through the transporter itself
  const Transporter t = transporter(*hyperbola(), quadrant(0), quadrant(0));
  const auto brute = oracle::transporter(*hyperbola(), quadrant(0), quadrant(0), 20, 64);
  for (Int n = 0; n <= 9; ++n) out.require(t.contains(Point{n}), "hyperbola transporter misses " + std::to_string(n));
  out.require(brute.elements.size() == 41, "brute-force hyperbola transporter is not the whole window");

  out.require(timed(trivial()).bi.fails(), "trivial action has bounded stabilizers");

  const auto sm = timed(shift_maximal_space());
  out.require(sm.weakly.fails(), "shift with maximal space bornology is weakly proper");
  out.require(orbit_bornologies_agree(*shift_maximal_space(), {0}, kDefault).fails(),
              "orbit bornologies agree for the maximal space bornology");

  std::vector<ActionPtr> maximal_group{trivial_maximal_group(),
                                       lattice_action("shift_all_maximal", 1, {{1}}, maximal_z(), maximal_z())};
  for (std::uint64_t seed = 1; seed <= 200 && maximal_group.size() < 12; ++seed) {
    const auto a = oracle::random_instance(seed, oracle::Profile::LatticeK1);
    if (a->group_bornology().is_maximal()) maximal_group.push_back(a);
  }
  for (const auto& a : maximal_group) out.require(timed(a).b_proper.holds(), a->name() + " with maximal group bornology");
  if (out.ok) out.detail = std::to_string(5 + maximal_group.size() - 1) + " instances classified";
  return out;
}

Outcome theorem_consistency() {
  Outcome out;
  std::vector<ActionPtr> all = flagships();
  for (std::uint64_t seed = 1; seed <= 100; ++seed) all.push_back(oracle::random_instance(seed, oracle::Profile::LatticeK1));
  std::size_t confirmed = 0;
  for (const auto& a : all) {
    const auto w = verify_theorem_weak(a, kDefault);
    const auto m = verify_theorem_main(a, {metric_structure(a->dim())}, kDefault);
    out.require(w.consistent, a->name() + " weak: " + w.note);
    out.require(m.consistent, a->name() + " main: " + m.note);
    confirmed += (w.status == Status::Confirmed) + (m.status == Status::Confirmed);
  }
  if (out.ok) out.detail = std::to_string(all.size()) + " instances, " + std::to_string(confirmed) + " confirmed theorems";
  return out;
}

Outcome base_property_refutation() {
  Outcome out;
  const auto h = hyperbola();
  const auto r = base_property_check(h, kDefault);
  out.require(r.fails(), "base property holds on the hyperbola");
  if (!out.ok) return out;
  const SetDescriptor s0 = quadrant(0);
  for (Int m = 0; m <= 8; ++m) {
    const auto w = r.find("witness." + std::to_string(m));
    out.require(w.has_value(), "no witness at level " + std::to_string(m));
    if (!w) return out;
    const Point x = field(*w, "x="), y = field(*w, "y="), z = field(*w, "z=");
    const std::string lvl = " at level " + std::to_string(m);
    out.require(x == Point{2 * m + 1, -2 * m - 1}, "x" + lvl);
    out.require(z == Point{0, 0}, "z" + lvl);
    // the reported middle point and the alternative (0, -4m-2) both work
    for (const Point& mid : {y, Point{0, -4 * m - 2}}) {
      const auto e0 = orbit_pair_entourage(h, s0);
      out.require(entourage_membership(e0, x, mid).yes(), "(x, y) not in E_0" + lvl);
      out.require(entourage_membership(e0, mid, z).yes(), "(y, z) not in E_0" + lvl);
      out.require(oracle::orbit_pair(*h, s0, x, mid, 64).found, "oracle misses (x, y)" + lvl);
      out.require(oracle::orbit_pair(*h, s0, mid, z, 64).found, "oracle misses (y, z)" + lvl);
    }
    out.require(entourage_membership(orbit_pair_entourage(h, quadrant(m)), x, z).no(), "(x, z) in E_m" + lvl);
    const auto o = oracle::orbit_pair(*h, quadrant(m), x, z, 64);
    out.require(!o.found && o.certified, "oracle places (x, z) in E_m" + lvl);
  }
  if (out.ok) out.detail = "9 witness families replayed";
  return out;
}

Outcome structure_identities() {
  Outcome out;
  const auto as = associated_structure(shift(), kDefault);
  out.require(mutually_cofinal(as, metric_structure(1), kDefault), "E(Z, cubes) vs metric balls");
  out.require(mutually_cofinal(as, group_right_structure(GroupSpec::lattice(1, cubes())), kDefault),
              "E(Z, cubes) vs right group structure");
  out.require(mutually_cofinal(associated_structure(trivial_maximal_group(), kDefault),
                               associated_connected_structure(cubes()), kDefault),
              "trivial action with maximal group bornology vs E_B");

  const auto s = verify_theorem_transitive(shift(), metric_structure(1), kDefault);
  out.require(s.find("part_1")->holds() && s.find("part_2")->holds(), "transitive theorem on shift");
  const auto f = first_coordinate();
  const auto ft = verify_theorem_transitive(f, metric_structure(2), kDefault);
  out.require(ft.find("part_1")->holds(), "part 1 on the first-coordinate shift");
  const Verdict* p2 = ft.find("part_2");
  out.require(p2->status == Status::NotApplicable, "part 2 on the first-coordinate shift is applicable");
  const auto lvl = p2->find("witness.level");
  const auto pt = p2->find("witness.point");
  out.require(lvl && pt, "part 2 carries no covering witness");
  if (lvl && pt) {
    // no translate of the level reaches the point
    const SetDescriptor b = oracle::level(f->space_bornology(), std::stoll(*lvl));
    const Point p = parse_point(*pt);
    for (const Point& l : oracle::group_window(f->group(), 64))
      out.require(!oracle::member(b, f->act(Point{-l[0]}, p)), "covering witness is covered");
  }
  if (out.ok) out.detail = "3 identities, 2 transitive checks";
  return out;
}

Outcome recovery() {
  Outcome out;
  std::size_t n = 0;
  for (const auto& a : flagships()) {
    if (!classify(*a, kDefault).b_proper.holds()) continue;
    ++n;
    const auto as = associated_structure(a, kDefault);
    out.require(recover_bornology(a, as, kDefault).holds(), a->name() + " does not recover its bornology");
    // replay on the window: each level of B_X sits in E_v[A], and E_n[a] stays in B_X
    const auto pts = oracle::window(a->space(), 12);
    for (Int j = 0; j <= 4; ++j) {
      const SetDescriptor bj = a->space_bornology().level(j);
      const BoundVerdict v = coarsely_bounded(as, bj, kDefault);
      out.require(v.is_bounded() && !v.anchors.empty(), a->name() + " level " + std::to_string(j) + " not coarsely bounded");
      if (!v.is_bounded()) continue;
      for (const Point& y : pts) {
        if (!oracle::member(bj, y)) continue;
        bool covered = false;
        for (const Point& x : v.anchors) covered = covered || entourage_membership(as.level(v.index), x, y).yes();
        out.require(covered, a->name() + " level " + std::to_string(j) + " escapes its anchors");
      }
      std::vector<Point> hood;
      for (const Point& y : pts)
        if (entourage_membership(as.level(j), Point(a->dim(), 0), y).yes()) hood.push_back(y);
      out.require(is_bounded(a->space_bornology(), SetDescriptor::points(a->dim(), hood), kDefault).is_bounded(),
                  a->name() + " neighborhood " + std::to_string(j) + " is not bounded");
    }
  }
  out.require(n >= 2, "fewer than two B-proper flagships");
  if (out.ok) out.detail = std::to_string(n) + " B-proper flagships";
  return out;
}

Outcome oracle_agreement() {
  Outcome out;
  std::vector<ActionPtr> all = flagships();
  const oracle::Profile profiles[] = {oracle::Profile::Finite, oracle::Profile::LatticeK1, oracle::Profile::LatticeK2};
  for (std::uint64_t seed = 1; seed <= 100; ++seed) all.push_back(oracle::random_instance(seed, profiles[seed % 3]));
  std::size_t checked = 0, advisories = 0;
  for (const auto& r : oracle::cross_check(all, oracle::primitives(), 32)) {
    checked += r.checked;
    advisories += r.advisories.size();
    out.require(r.passed(), r.instance + " " + r.primitive + ": " + (r.mismatches.empty() ? "" : r.mismatches.front()));
  }
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    fault::Scope scope(fault::seeded_plan(seed));
    std::size_t bad = 0;
    for (const auto& r : oracle::cross_check(flagships(), oracle::primitives(), 32)) bad += r.mismatches.size();
    out.require(bad >= 1, "fault seed " + std::to_string(seed) + " went unnoticed");
  }
  if (out.ok)
    out.detail = std::to_string(all.size()) + " instances, " + std::to_string(checked) + " comparisons, " +
                 std::to_string(advisories) + " advisories; 3 faults caught";
  return out;
}

Outcome finite_algebra() {
  Outcome out;
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng() % 4;
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
    const auto g = GroundSpace::finite(labels);
    std::vector<Relation> base(1 + rng() % 3, Relation::empty(n));
    std::vector<oracle::Rows> rows;
    for (auto& r : base) {
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
          if (rng() % 3 == 0) r.set(x, y);
      rows.emplace_back(r.rows.begin(), r.rows.end());
    }
    const auto f = close_finite_base(g, base);
    const auto naive = oracle::naive_closure(n, rows);
    for (const auto& m : naive) out.require(f.contains(Relation{n, {m.begin(), m.end()}}), "closure misses a relation");
    for (const auto& r : f.antichain)
      out.require(oracle::in_family(naive, {r.rows.begin(), r.rows.end()}), "closure has an extra relation");
  }
  std::size_t families = 0;
  for (std::size_t n = 1; n <= 6; ++n) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
    const auto g = GroundSpace::finite(labels);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<LabelSet> base;
      LabelSet covered = 0;
      while (covered != full_label_set(n)) {
        const LabelSet s = rng() & full_label_set(n);
        base.push_back(s);
        covered |= s;
      }
      ++families;
      const auto b = smallest_bornology(g, base);
      out.require(b.members().size() == (std::size_t{1} << n), "covering base does not give the power set");
    }
  }
  if (out.ok) out.detail = "50 closures, " + std::to_string(families) + " generated bornologies";
  return out;
}

Outcome lemma_suite() {
  Outcome out;
  const Budget budget{8, 32};
  std::mt19937_64 rng(11);
  std::vector<ActionPtr> pool{shift(), trivial(), first_coordinate(), trivial_maximal_group(), hyperbola()};
  for (std::uint64_t seed = 1; seed <= 10; ++seed) pool.push_back(oracle::random_instance(seed, oracle::Profile::LatticeK1));
  for (int trial = 0; trial < 50; ++trial) {
    const auto& a = pool[rng() % pool.size()];
    const Int m = static_cast<Int>(rng() % 4);
    const SetDescriptor b = a->space_bornology().is_maximal() ? SetDescriptor(random_box(rng, a->dim(), 3))
                                                              : a->space_bornology().level(m);
    const SetDescriptor b2(random_box(rng, a->dim(), 3));
    Point x(a->dim());
    for (auto& c : x) c = static_cast<Int>(rng() % 9) - 4;
    const std::string tag = a->name() + " trial " + std::to_string(trial);
    out.require(verify_lemma_neighborhood(a, b, x, budget).holds(), tag + ": neighborhood lemma");
    out.require(verify_lemma_algebra(a, b, b2, budget).holds(), tag + ": algebra lemma");
  }
  if (out.ok) out.detail = "50 triples";
  return out;
}

}  // namespace

int main() {
  const std::vector<std::tuple<int, const char*, double, std::function<Outcome()>>> criteria = {
      {1, "classification matrix", 0, classification_matrix},
      {2, "theorem consistency", 120, theorem_consistency},
      {3, "base property refutation", 0, base_property_refutation},
      {4, "structure identities", 0, structure_identities},
      {5, "bornology recovery", 0, recovery},
      {6, "oracle agreement", 0, oracle_agreement},
      {7, "finite algebra", 0, finite_algebra},
      {8, "lemma suite", 60, lemma_suite}};
  int failed = 0;
  for (const auto& [n, name, limit, run] : criteria) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("threw: ") + e.what();
    }
    const double s = seconds_since(t0);
    if (limit > 0 && s >= limit) {
      o.ok = false;
      o.detail = "over the " + std::to_string(static_cast<int>(limit)) + " s limit";
    }
    failed += !o.ok;
    std::printf("criterion %d %-26s %s  %.2f s  %s\n", n, name, o.ok ? "PASS" : "FAIL", s, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
