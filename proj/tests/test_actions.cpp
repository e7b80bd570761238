#include <random>

#include "bcs/oracle.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bcs;
using namespace support;

static const CheckLine* line_named(const CheckReport& r, const std::string& part) {
  for (const auto& l : r.lines)
    if (l.name.find(part) != std::string::npos) return &l;
  return nullptr;
}

TEST_CASE("bornological groups") {
  CHECK(group_bornological_check(GroupSpec::lattice(1, cubes())).passed());
  CHECK(group_bornological_check(GroupSpec::lattice(1, maximal_z())).passed());
  ChainShape s;
  s.lower = {ChainEnd::inf(), ChainEnd::affine(-1, 0)};
  s.upper = {ChainEnd::affine(1, 0), ChainEnd::affine(1, 0)};
  const auto r = group_bornological_check(GroupSpec::lattice(2, BornologySpec::chain(s)));
  CHECK_FALSE(r.passed());
  const CheckLine* inv = line_named(r, "inversion");
  REQUIRE(inv);
  CHECK_FALSE(inv->passed);
  // -(x, y) for x <= 0 escapes along (+1, 0)
  for (Int m = 0; m <= 8; ++m) CHECK_FALSE(BornologySpec::chain(s).level_box(m).contains(Point{m + 1, 0}));
}

TEST_CASE("bornological actions") {
  CHECK(action_bornological_check(*shift()).passed());
  CHECK(action_bornological_check(*hyperbola()).passed());
  CHECK(action_bornological_check(*trivial()).passed());
  // S_j + M [-i, i] inside S_{i+j}
  for (Int i = 0; i <= 3; ++i)
    for (Int j = 0; j <= 3; ++j)
      for (const auto& x : grid(2, 6))
        for (Int l = -i; l <= i; ++l)
          if (quadrant(j).contains(x)) REQUIRE(quadrant(i + j).contains(Point{x[0] + l, x[1] - l}));
}

TEST_CASE("transporters of the flagship actions") {
  const auto s = shift();
  const auto t = transporter(*s, interval(0, 1), interval(5, 6));
  const auto o = oracle::transporter(*s, interval(0, 1), interval(5, 6), 20, 20);
  CHECK(o.elements == std::vector<Point>{{4}, {5}, {6}});
  for (Int n = -20; n <= 20; ++n) REQUIRE(t.contains(Point{n}) == (n >= 4 && n <= 6));
  const auto tb = transporter_bounded(*s, t);
  REQUIRE(tb.is_bounded());
  CHECK(tb.index == 6);

  const auto h = hyperbola();
  const auto th = transporter(*h, quadrant(0), quadrant(0));
  const auto oh = oracle::transporter(*h, quadrant(0), quadrant(0), 20, 64);
  CHECK(oh.elements.size() == 41);
  for (Int n = -20; n <= 20; ++n) REQUIRE(th.contains(Point{n}));
  const auto hb = transporter_bounded(*h, th);
  REQUIRE(hb.is_unbounded());
  CHECK((*hb.direction == Point{1} || *hb.direction == Point{-1}));

  const auto tr = trivial();
  const auto tt = transporter(*tr, SetDescriptor::points(1, {{0}}), SetDescriptor::points(1, {{0}}));
  for (Int n = -20; n <= 20; ++n) REQUIRE(tt.contains(Point{n}));

  const auto f = first_coordinate();
  const auto tf = transporter(*f, Box::cube(2, 1), Box::cube(2, 1));
  const auto of = oracle::transporter(*f, Box::cube(2, 1), Box::cube(2, 1), 20, 20);
  CHECK(of.elements == std::vector<Point>{{0}, {-1}, {1}, {-2}, {2}});
  const auto fb = transporter_bounded(*f, tf);
  REQUIRE(fb.is_bounded());
  CHECK(fb.index == 2);

  CHECK(transporter(*s, SetDescriptor::empty(1), interval(0, 3)).is_empty());
}

TEST_CASE("classification of the flagship actions") {
  const auto cs = classify(*shift());
  CHECK(cs.b_proper.holds());
  CHECK(cs.weakly.holds());
  CHECK(cs.bi.holds());
  const auto ch = classify(*hyperbola());
  CHECK(ch.b_proper.fails());
  CHECK(ch.b_proper.find("witness.levels") == "(0,0)");
  CHECK(ch.weakly.holds());
  CHECK(ch.bi.holds());
  const auto ct = classify(*trivial());
  CHECK(ct.b_proper.fails());
  CHECK(ct.weakly.fails());
  CHECK(ct.bi.fails());
  CHECK(classify(*shift_maximal_space()).weakly.fails());
  CHECK(classify(*trivial_maximal_group()).b_proper.holds());
}

TEST_CASE("equi-controlled and coarsely transitive") {
  const auto s = shift();
  const auto h = hyperbola();
  CHECK(equi_controlled_check(s, metric_structure(1)).holds());
  CHECK(equi_controlled_check(h, metric_structure(2)).holds());
  const auto eb = equi_controlled_check(h, associated_connected_structure(cubes(2)));
  CHECK(eb.fails());
  CHECK_FALSE(eb.certificate.empty());

  CHECK(coarsely_transitive_check(*s, metric_structure(1)).holds());
  const auto ht = coarsely_transitive_check(*h, metric_structure(2));
  REQUIRE(ht.fails());
  const auto ft = coarsely_transitive_check(*first_coordinate(), metric_structure(2));
  REQUIRE(ft.fails());
}

TEST_CASE("orbit bornologies") {
  const auto h = hyperbola();
  const auto ob = orbit_bornologies(*h, {0, 0});
  for (Int m = 0; m <= 8; ++m) {
    CHECK(ob.pullback.level_box(m) == interval(-m, m));
    CHECK(ob.pushforward.level_box(m) == interval(-m, m));
  }
  CHECK(orbit_bornologies_agree(*h, {0, 0}).holds());
  const auto sm = shift_maximal_space();
  const auto obm = orbit_bornologies(*sm, {0});
  CHECK(obm.pullback.is_maximal());
  CHECK(obm.pushforward.level_box(3) == interval(-3, 3));
  CHECK(orbit_bornologies_agree(*sm, {0}).fails());
}

TEST_CASE("group right structure") {
  const auto z = group_right_structure(GroupSpec::lattice(1, cubes()));
  for (Int k = 0; k <= 4; ++k)
    for (Int x = -16; x <= 16; ++x)
      for (Int y = -16; y <= 16; ++y)
        REQUIRE(entourage_membership(z.level(k), {x}, {y}).yes() ==
                entourage_membership(Entourage::metric_ball(1, k), {x}, {y}).yes());
  const auto zmax = group_right_structure(GroupSpec::lattice(1, maximal_z()));
  CHECK(entourage_membership(zmax.level(0), {-40}, {40}).yes());

  const auto c3 = GroundSpace::finite({"e", "g", "h"});
  const auto g = GroupSpec::finite({"e", "g", "h"}, {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}}, BornologySpec::maximal(c3));
  const auto fin = group_right_structure(g);
  REQUIRE(fin.is_finite());
  CHECK(fin.closure().antichain == std::vector<Relation>{Relation::full(3)});
}

TEST_CASE("transporter laws on random boxes") {
  std::mt19937_64 rng(51);
  std::size_t cases = 0;
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const auto a = oracle::random_instance(seed, oracle::Profile::LatticeK1);
    for (int trial = 0; trial < 20; ++trial) {
      const Box b = random_box(rng, a->dim(), 4);
      const Box b2 = random_box(rng, a->dim(), 4);
      if (b.is_empty() || b2.is_empty()) continue;
      const auto t = transporter(*a, b, b2);
      const auto back = transporter(*a, b2, b);
      for (Int l = -10; l <= 10; ++l) REQUIRE(t.contains(Point{l}) == back.contains(Point{-l}));
      REQUIRE(t.contains(Point{0}) == !box_intersect(b, b2).is_empty());
      // oracle agreement inside the window when the truncation is certified
      const auto o = oracle::transporter(*a, b, b2, 10, 40);
      if (o.certified) {
        std::vector<Point> sym;
        for (const auto& l : oracle::group_window(a->group(), 10))
          if (t.contains(l)) sym.push_back(l);
        std::sort(sym.begin(), sym.end());
        auto ora = o.elements;
        std::sort(ora.begin(), ora.end());
        REQUIRE(sym == ora);
        ++cases;
      }
    }
  }
  CHECK(cases >= 1000);
}

TEST_CASE("properness implications and orbit bornology inclusion") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto a = oracle::random_instance(seed, oracle::Profile::LatticeK1);
    const auto c = classify(*a);
    if (c.b_proper.holds()) REQUIRE(c.weakly.holds());
    if (c.weakly.holds()) REQUIRE(c.bi.holds());
    if (!c.bi.holds()) continue;
    // pushforward level i lies in some pullback level
    const auto ob = orbit_bornologies(*a, Point(a->dim(), 0));
    for (Int i = 0; i <= 8; ++i) REQUIRE(is_bounded(ob.pullback, ob.pushforward.level_box(i)).is_bounded());
  }
}

TEST_CASE("point transporters bounded iff orbit bornologies agree and stabilizer bounded") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto a = oracle::random_instance(seed, oracle::Profile::LatticeK1);
    if (!coarsely_transitive_check(*a, metric_structure(a->dim())).holds()) continue;
    if (!column_hnf(a->matrix()).kernel().empty()) continue;
    const Point x(a->dim(), 0);
    bool all_bounded = true;
    for (Int j = 0; j <= 8; ++j)
      all_bounded = all_bounded &&
                    transporter_bounded(*a, transporter(*a, SetDescriptor::points(a->dim(), {x}),
                                                        a->space_bornology().level(j)))
                        .is_bounded();
    const bool stab = transporter_bounded(*a, transporter(*a, SetDescriptor::points(a->dim(), {x}),
                                                          SetDescriptor::points(a->dim(), {x})))
                          .is_bounded();
    REQUIRE(all_bounded == (orbit_bornologies_agree(*a, x).holds() && stab));
  }
}
