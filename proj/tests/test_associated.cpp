#include <random>
#include <sstream>

#include "bcs/oracle.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bcs;
using namespace support;

static Point parse_point(const std::string& s) {
  Point p;
  std::string body = s.substr(s.find('(') + 1);
  body = body.substr(0, body.find(')'));
  std::stringstream in(body);
  std::string item;
  while (std::getline(in, item, ',')) p.push_back(std::stoll(item));
  return p;
}

// "x=(..) y=(..) z=(..) l=(..)" -> the four points
static std::vector<Point> parse_witness(const std::string& s) {
  std::vector<Point> out;
  for (const char* key : {"x=", "y=", "z=", "l="}) out.push_back(parse_point(s.substr(s.find(key))));
  return out;
}

static std::vector<std::vector<Int>> parse_table(const std::string& s) {
  std::vector<std::vector<Int>> t;
  std::stringstream rows(s);
  std::string row;
  while (std::getline(rows, row, ';')) {
    t.emplace_back();
    std::stringstream cells(row);
    std::string c;
    while (std::getline(cells, c, ',')) t.back().push_back(std::stoll(c));
  }
  return t;
}

TEST_CASE("orbit pair entourage") {
  const auto s = shift();
  const auto e = orbit_pair_entourage(s, interval(0, 1));
  const auto m = entourage_membership(e, {3}, {4});
  REQUIRE(m.yes());
  CHECK(*m.witness == Point{3});
  CHECK(oracle::orbit_pair(*s, interval(0, 1), {3}, {4}, 20).witness == Point{3});
  CHECK(entourage_membership(e, {7}, {7}).yes());
  CHECK(entourage_membership(orbit_pair_entourage(hyperbola(), quadrant(0)), {9, 2}, {9, 2}).yes());
  CHECK(entourage_membership(e, {0}, {2}).no());
  CHECK_FALSE(oracle::orbit_pair(*s, interval(0, 1), {0}, {2}, 20).found);
}

TEST_CASE("neighborhood lemma") {
  const auto s = shift();
  CHECK(verify_lemma_neighborhood(s, interval(0, 2), {0}).holds());
  const auto nb = neighborhood(orbit_pair_entourage(s, interval(0, 2)), SetDescriptor::points(1, {{0}}));
  CHECK(hull(nb.set) == interval(-2, 2));
  CHECK(verify_lemma_neighborhood(hyperbola(), quadrant(0), {0, 0}).holds());
  CHECK(verify_lemma_neighborhood(hyperbola(), quadrant(2), {3, -7}).holds());
  for (const auto& a : flagships())
    CHECK(verify_lemma_neighborhood(a, SetDescriptor::empty(a->dim()), Point(a->dim(), 1)).holds());
}

TEST_CASE("algebra lemma") {
  const auto s = shift();
  const auto v = verify_lemma_algebra(s, interval(0, 1), interval(5, 6));
  CHECK(v.holds());
  CHECK(v.find("transporter").value_or("").find("[4,6]") != std::string::npos);
  for (const auto& a : flagships())
    CHECK(verify_lemma_algebra(a, SetDescriptor::empty(a->dim()), SetDescriptor::empty(a->dim())).holds());
  CHECK(verify_lemma_algebra(hyperbola(), quadrant(0), quadrant(0)).holds());
}

TEST_CASE("base property") {
  const auto s = shift();
  const auto v = base_property_check(s);
  REQUIRE(v.holds());
  const auto k = parse_table(*v.find("k_table"));
  REQUIRE(k.size() == 9);
  // (L_{B_1,B_1} B_1) u B_1 = [-3, 3]
  CHECK(k[1][1] == 3);

  const auto h = hyperbola();
  const auto r = base_property_check(h);
  REQUIRE(r.fails());
  for (Int m = 0; m <= 8; ++m) {
    const auto w = parse_witness(*r.find("witness." + std::to_string(m)));
    CHECK(w[0] == Point{2 * m + 1, -2 * m - 1});
    CHECK(w[2] == Point{0, 0});
  }
  CHECK(base_property_check(trivial_maximal_group()).holds());
}

TEST_CASE("refutation witnesses replay") {
  const auto h = hyperbola();
  const auto r = base_property_check(h);
  REQUIRE(r.fails());
  const SetDescriptor s0 = quadrant(0);
  for (Int m = 0; m <= 8; ++m) {
    const auto w = parse_witness(*r.find("witness." + std::to_string(m)));
    const Point &x = w[0], &y = w[1], &z = w[2], &l = w[3];
    CHECK(oracle::orbit_pair_witness(*h, s0, x, y, l));
    CHECK(oracle::orbit_pair_witness(*h, s0, y, z, Point{0}));
    CHECK(entourage_membership(orbit_pair_entourage(h, s0), x, y).yes());
    CHECK(entourage_membership(orbit_pair_entourage(h, quadrant(m)), x, z).no());
    const auto o = oracle::orbit_pair(*h, quadrant(m), x, z, 64);
    CHECK_FALSE(o.found);
    CHECK(o.certified);
  }
  // the B-properness witness replays as an escaping transporter
  const auto c = classify(*h);
  const auto t = transporter(*h, quadrant(0), quadrant(0));
  for (Int n = 0; n <= 9; ++n) CHECK(t.contains(Point{n}));
  CHECK(c.b_proper.find("witness.direction") == "(1)");
}

TEST_CASE("composition bound index is sound") {
  std::vector<ActionPtr> cases{shift()};
  for (std::uint64_t seed = 1; seed <= 30 && cases.size() < 5; ++seed) {
    const auto a = oracle::random_instance(seed, oracle::Profile::LatticeK1);
    if (a->dim() == 1 && classify(*a).b_proper.holds()) cases.push_back(a);
  }
  REQUIRE(cases.size() >= 3);
  for (const auto& a : cases) {
    const auto v = base_property_check(a);
    REQUIRE(v.holds());
    const auto k = parse_table(*v.find("k_table"));
    const auto& bx = a->space_bornology();
    for (Int i = 0; i <= 3; ++i)
      for (Int j = 0; j <= 3; ++j) {
        const auto e1 = orbit_pair_entourage(a, bx.level(i));
        const auto e2 = orbit_pair_entourage(a, bx.level(j));
        const auto ek = orbit_pair_entourage(a, bx.level(k[i][j]));
        for (Int x = -10; x <= 10; ++x)
          for (Int y = -10; y <= 10; ++y) {
            if (!entourage_membership(e1, {x}, {y}).yes()) continue;
            for (Int z = -10; z <= 10; ++z)
              if (entourage_membership(e2, {y}, {z}).yes()) REQUIRE(entourage_membership(ek, {x}, {z}).yes());
          }
      }
  }
}

TEST_CASE("associated structures") {
  const auto s = shift();
  const auto as = associated_structure(s);
  for (Int m = 0; m <= 3; ++m)
    for (Int x = -12; x <= 12; ++x)
      for (Int y = -12; y <= 12; ++y)
        REQUIRE(entourage_membership(as.level(m), {x}, {y}).yes() == (std::abs(x - y) <= 2 * m));

  const auto t = trivial_maximal_group();
  const auto at = associated_structure(t);
  const auto eb = associated_connected_structure(cubes());
  for (Int m = 0; m <= 3; ++m)
    for (Int x = -8; x <= 8; ++x)
      for (Int y = -8; y <= 8; ++y)
        REQUIRE(entourage_membership(at.level(m), {x}, {y}).yes() == entourage_membership(eb.level(m), {x}, {y}).yes());

  try {
    associated_structure(hyperbola());
    FAIL("expected a refutation");
  } catch (const Error& e) {
    CHECK(e.code() == Error::Code::Refuted);
    CHECK(std::string(e.what()).find("x=(1,-1)") != std::string::npos);
  }
}

TEST_CASE("orbit pair equivariance, symmetry and diagonal") {
  for (const auto& a : {shift(), hyperbola(), trivial(), first_coordinate()}) {
    const auto e = orbit_pair_entourage(a, a->space_bornology().level(1));
    const auto pts = grid(a->dim(), a->dim() == 1 ? 8 : 3);
    for (const auto& x : pts)
      for (const auto& y : pts) {
        const bool in = entourage_membership(e, x, y).yes();
        REQUIRE(in == entourage_membership(e, y, x).yes());
        if (x == y) REQUIRE(in);
        for (Int l : {-5, 2, 7}) REQUIRE(in == entourage_membership(e, a->act(Point{l}, x), a->act(Point{l}, y)).yes());
      }
  }
}

TEST_CASE("weak properness theorem") {
  const auto h = verify_theorem_weak(hyperbola());
  CHECK(h.status == Status::Confirmed);
  CHECK(h.consistent);
  CHECK(h.find("orbit_bornologies")->holds());
  const auto m = verify_theorem_weak(shift_maximal_space());
  CHECK(m.status == Status::Refuted);
  CHECK(m.consistent);
  CHECK(m.find("orbit_bornologies")->fails());
  const auto t = verify_theorem_weak(trivial());
  CHECK(t.status == Status::Refuted);
  CHECK(t.find("bi")->fails());
}

TEST_CASE("main theorem") {
  const auto s = verify_theorem_main(shift(), {metric_structure(1)});
  CHECK(s.status == Status::Confirmed);
  CHECK(s.consistent);
  CHECK(s.find("minimality.metric")->holds());
  CHECK(structure_leq(metric_structure(1), associated_structure(shift())).holds());

  const auto h = verify_theorem_main(hyperbola(), {metric_structure(2)});
  CHECK(h.status == Status::Refuted);
  CHECK(h.consistent);
  CHECK(h.find("condition_1")->fails());
  CHECK(h.find("condition_2")->fails());
  CHECK(h.find("condition_3")->fails());

  const auto t = verify_theorem_main(trivial_maximal_group(), {associated_connected_structure(cubes())});
  CHECK(t.status == Status::Confirmed);
  CHECK(t.find("recovery")->holds());
}

TEST_CASE("transitive theorem") {
  const auto s = verify_theorem_transitive(shift(), metric_structure(1));
  CHECK(s.status == Status::Confirmed);
  CHECK(s.find("part_1")->holds());
  CHECK(s.find("part_2")->holds());

  const auto g = verify_theorem_transitive(shift(), group_right_structure(GroupSpec::lattice(1, cubes())));
  CHECK(g.find("part_1")->holds());
  CHECK(g.find("part_2")->holds());

  const auto f = verify_theorem_transitive(first_coordinate(), metric_structure(2));
  CHECK(f.find("part_1")->holds());
  CHECK(f.find("part_2")->status == Status::NotApplicable);
  const auto back = structure_leq(metric_structure(2), associated_structure(first_coordinate()));
  REQUIRE(back.fails());
}

TEST_CASE("theorem conditions agree on random instances") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const auto a = oracle::random_instance(seed, oracle::Profile::LatticeK1);
    const auto w = verify_theorem_weak(a);
    const auto m = verify_theorem_main(a, {metric_structure(a->dim())});
    INFO(a->name());
    REQUIRE(w.consistent);
    REQUIRE(m.consistent);
  }
}
