#include <random>

#include "bcs/oracle.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bcs;
using namespace support;

static oracle::Rows rows_of(const Relation& r) { return {r.rows.begin(), r.rows.end()}; }

// Every relation of the closure family, as row masks, by the oracle's fixpoint.
static bool same_family(const FiniteClosure& f, const std::vector<Relation>& base) {
  const std::size_t n = f.ground.size();
  std::vector<oracle::Rows> b;
  for (const auto& r : base) b.push_back(rows_of(r));
  const auto naive = oracle::naive_closure(n, b);
  std::vector<oracle::Rows> ours;
  for (const auto& r : f.antichain) ours.push_back(rows_of(r));
  for (const auto& g : naive)
    if (!f.contains(Relation{n, {g.begin(), g.end()}})) return false;
  for (const auto& r : ours)
    if (!oracle::in_family(naive, r)) return false;
  return true;
}

TEST_CASE("finite closures") {
  const auto ab = GroundSpace::finite({"a", "b"});
  auto f = close_finite_base(ab, {});
  REQUIRE(f.antichain.size() == 1);
  CHECK(f.antichain[0] == Relation::diag(2));
  f = close_finite_base(ab, {Relation::full(2)});
  REQUIRE(f.antichain.size() == 1);
  CHECK(f.antichain[0] == Relation::full(2));

  const auto abc = GroundSpace::finite({"a", "b", "c"});
  Relation ab_pair = Relation::empty(3);
  ab_pair.set(0, 1);
  f = close_finite_base(abc, {ab_pair});
  REQUIRE(f.antichain.size() == 1);
  Relation expect = Relation::diag(3) | Relation::square(3, 0b011);
  CHECK(f.antichain[0] == expect);
  CHECK(same_family(f, {ab_pair}));
  CHECK(coarse_axiom_check(f).passed());
}

TEST_CASE("closure laws on random bases") {
  std::mt19937_64 rng(41);
  for (std::size_t n = 1; n <= 4; ++n) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
    const auto g = GroundSpace::finite(labels);
    for (int trial = 0; trial < 25; ++trial) {
      std::vector<Relation> base(1 + rng() % 3, Relation::empty(n));
      for (auto& r : base)
        for (std::size_t x = 0; x < n; ++x)
          for (std::size_t y = 0; y < n; ++y)
            if (rng() % 4 == 0) r.set(x, y);
      const auto f = close_finite_base(g, base);
      REQUIRE(coarse_axiom_check(f).passed());
      REQUIRE(close_finite_base(g, f.antichain).antichain == f.antichain);
      REQUIRE(same_family(f, base));
    }
  }
}

TEST_CASE("membership of basic entourages") {
  CHECK(entourage_membership(Entourage::metric_ball(1, 3), {0}, {3}).yes());
  CHECK(entourage_membership(Entourage::metric_ball(1, 3), {0}, {4}).no());

  const auto h = hyperbola();
  const auto e = Entourage::orbit_pair(h, quadrant(0));
  const auto m = entourage_membership(e, {5, -5}, {0, -10});
  REQUIRE(m.yes());
  REQUIRE(m.witness);
  CHECK(*m.witness == Point{5});
  std::vector<Int> witnesses;
  for (Int l = -20; l <= 20; ++l)
    if (quadrant(0).contains(Point{5 - l, -5 + l}) && quadrant(0).contains(Point{-l, -10 + l})) witnesses.push_back(l);
  CHECK(witnesses == std::vector<Int>{5});

  auto z = std::make_shared<const GroupSpec>(GroupSpec::lattice(1, cubes()));
  CHECK(entourage_membership(Entourage::group_right(z, interval(-2, 2)), {10}, {13}).no());
  CHECK(entourage_membership(Entourage::group_right(z, interval(-2, 2)), {10}, {12}).yes());
}

TEST_CASE("ball of radius zero is the diagonal") {
  const auto ball = Entourage::metric_ball(2, 0);
  const auto diag = Entourage::diag(GroundSpace::lattice(2));
  const auto pts = grid(2, 3);
  for (const auto& x : pts)
    for (const auto& y : pts) REQUIRE(entourage_membership(ball, x, y).truth == entourage_membership(diag, x, y).truth);
}

TEST_CASE("rewrites") {
  const auto sum = entourage_rewrite(Entourage::compose(Entourage::metric_ball(1, 2), Entourage::metric_ball(1, 3)));
  REQUIRE(sum.kind() == Entourage::Kind::MetricBall);
  CHECK(sum.radius() == 5);
  // composition of balls, enumerated through middle points
  for (Int x = -16; x <= 16; ++x)
    for (Int y = -16; y <= 16; ++y) {
      bool via = false;
      for (Int m = -16; m <= 16 && !via; ++m) via = std::abs(m - x) <= 2 && std::abs(y - m) <= 3;
      REQUIRE(via == (std::abs(y - x) <= 5));
    }

  const auto s = shift();
  const auto t = entourage_rewrite(Entourage::transpose(Entourage::orbit_pair(s, interval(0, 1))));
  CHECK(t.kind() == Entourage::Kind::OrbitPair);
  CHECK(entourage_rewrite(Entourage::transpose(Entourage::metric_ball(1, 4))).radius() == 4);

  const auto c = entourage_rewrite(
      Entourage::compose(Entourage::orbit_pair(s, interval(0, 1)), Entourage::orbit_pair(s, interval(5, 6))));
  REQUIRE(c.kind() == Entourage::Kind::OrbitPair);
  CHECK(c.approximate());
  CHECK(hull(c.set()) == interval(0, 7));
}

TEST_CASE("neighborhoods") {
  const auto n = neighborhood(Entourage::metric_ball(1, 2), SetDescriptor::points(1, {{0}}));
  CHECK(hull(n.set) == interval(-2, 2));
  CHECK(n.exact);
  const auto d = neighborhood(Entourage::diag(GroundSpace::lattice(2)), SetDescriptor::points(2, {{1, 1}}));
  CHECK(d.set == SetDescriptor::points(2, {{1, 1}}));

  // (0,0) and y share a translate of S_0 only for l = 0, so E[(0,0)] = S_0.
  const auto h = hyperbola();
  const auto nb = neighborhood(Entourage::orbit_pair(h, quadrant(0)), SetDescriptor::points(2, {{0, 0}}));
  for (const auto& p : grid(2, 12)) {
    bool in = p == Point{0, 0};
    for (Int l = -40; l <= 40 && !in; ++l)
      in = quadrant(0).contains(Point{-l, l}) && quadrant(0).contains(Point{p[0] - l, p[1] + l});
    REQUIRE(in == quadrant(0).contains(p));
    REQUIRE(set_membership(nb.set, p) == in);
  }
}

TEST_CASE("coarse boundedness") {
  const auto metric = metric_structure(1);
  const auto v = coarsely_bounded(metric, interval(4, 6));
  REQUIRE(v.is_bounded());
  // least level: [4,6] is the ball of radius 1 around 5
  CHECK(v.index == 1);
  CHECK(v.anchors == std::vector<Point>{{5}});
  for (Int y = 4; y <= 6; ++y) CHECK(entourage_membership(metric.level(v.index), {5}, {y}).yes());
  CHECK(entourage_membership(metric.level(0), {5}, {4}).no());
  const auto u = coarsely_bounded(metric, Box({{End::neg_inf(), End::at(0)}}));
  REQUIRE(u.is_unbounded());
  CHECK(*u.direction == Point{-1});

  const auto abc = GroundSpace::finite({"a", "b", "c"});
  const CoarseStructure fin("finite", close_finite_base(abc, {}));
  const auto all = coarsely_bounded(fin, from_label_set(0b111));
  REQUIRE(all.is_bounded());
  CHECK(all.index == 0);
  CHECK(all.anchors.size() == 3);
}

TEST_CASE("associated connected structures") {
  const auto eb = associated_connected_structure(cubes());
  for (Int n = 0; n <= 3; ++n)
    for (Int x = -6; x <= 6; ++x)
      for (Int y = -6; y <= 6; ++y) {
        const bool expect = x == y || (std::abs(x) <= n && std::abs(y) <= n);
        REQUIRE(entourage_membership(eb.level(n), {x}, {y}).yes() == expect);
      }
  const auto ab = GroundSpace::finite({"a", "b"});
  const auto fin = associated_connected_structure(BornologySpec::maximal(ab));
  REQUIRE(fin.is_finite());
  CHECK(fin.closure().antichain == std::vector<Relation>{Relation::full(2)});
  const auto hb = associated_connected_structure(quadrant_chain());
  CHECK(entourage_membership(hb.level(5), {5, -5}, {0, 0}).yes());
  CHECK(entourage_membership(hb.level(4), {5, -5}, {0, 0}).no());
}

TEST_CASE("structure comparisons") {
  const auto metric = metric_structure(1);
  const auto eb = associated_connected_structure(cubes());
  CHECK(structure_leq(metric, metric).holds());
  CHECK(structure_leq(eb, metric).holds());
  // diag u [-n,n]^2 sits in the ball of radius 2n
  for (Int n = 0; n <= 4; ++n) CHECK(entourage_leq(eb.level(n), Entourage::metric_ball(1, 2 * n)).truth == Truth::True);
  CHECK(entourage_leq(eb.level(2), Entourage::metric_ball(1, 3)).truth == Truth::False);
  const auto back = structure_leq(metric, eb);
  REQUIRE(back.fails());
  CHECK_FALSE(back.certificate.empty());

  // transitivity on a small chain of structures
  const auto assoc = associated_structure(shift());
  CHECK(structure_leq(eb, assoc).holds());
  CHECK(structure_leq(assoc, metric).holds());
  CHECK(structure_leq(eb, metric).holds());
}

TEST_CASE("neighborhoods of bounded sets stay bounded") {
  const auto metric = metric_structure(1);
  const auto eb = associated_connected_structure(cubes());
  for (const auto* cs : {&metric, &eb})
    for (Int n = 0; n <= 3; ++n)
      for (const Box& s : {interval(0, 2), interval(-3, 5)}) {
        REQUIRE(coarsely_bounded(*cs, s).is_bounded());
        std::vector<Point> pts;
        for (Int x = hull(s)[0].lo.value; x <= hull(s)[0].hi.value; ++x) pts.push_back({x});
        const auto nb = neighborhood(cs->level(n), SetDescriptor::points(1, pts));
        CHECK(coarsely_bounded(*cs, nb.set).is_bounded());
      }
}
