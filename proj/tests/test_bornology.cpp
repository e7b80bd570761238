#include <random>

#include "doctest.h"
#include "support.hpp"

using namespace bcs;
using namespace support;

static BornologySpec chain1(ChainEnd lo, ChainEnd hi) {
  ChainShape s;
  s.lower = {lo};
  s.upper = {hi};
  return BornologySpec::chain(s);
}

static const AxiomCheck& check_named(const AxiomReport& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.axiom == name) return c;
  FAIL("no axiom " << name);
  return r.checks.front();
}

TEST_CASE("bornology axioms") {
  CHECK(bornology_axiom_check(cubes()).passed());
  const auto half = bornology_axiom_check(chain1(ChainEnd::affine(0, 0), ChainEnd::affine(1, 0)));
  CHECK_FALSE(half.passed());
  CHECK_FALSE(check_named(half, "covering").passed);
  CHECK(check_named(half, "covering").witness.find("(-1)") != std::string::npos);

  const auto abc = GroundSpace::finite({"a", "b", "c"});
  const auto uncovered = bornology_axiom_check(BornologySpec::finite_base(abc, {0b001, 0b010}));
  CHECK_FALSE(check_named(uncovered, "covering").passed);
  CHECK(check_named(uncovered, "covering").witness.find("label c") != std::string::npos);
  CHECK(bornology_axiom_check(maximal_z(3)).passed());

  // level 0 of [0, m-1] is empty
  const auto empty0 = bornology_axiom_check(chain1(ChainEnd::affine(0, 0), ChainEnd::affine(1, -1)));
  CHECK_FALSE(check_named(empty0, "monotone-nonempty").passed);
  CHECK(check_named(empty0, "monotone-nonempty").witness == "level 0 is empty");
}

TEST_CASE("generated families") {
  const auto ab = GroundSpace::finite({"a", "b"});
  CHECK(generate_from_base(ab, {0b11}).members() == std::vector<LabelSet>{0, 1, 2, 3});
  const auto abc = GroundSpace::finite({"a", "b", "c"});
  CHECK(generate_from_base(abc, {0b001, 0b110}).members() == std::vector<LabelSet>{0, 1, 2, 4, 6});
  CHECK(smallest_bornology(abc, {0b001, 0b110}).members().size() == 8);
}

TEST_CASE("families on small sets: axioms and the power-set degeneracy") {
  std::mt19937_64 rng(31);
  for (std::size_t n = 1; n <= 6; ++n) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
    const auto g = GroundSpace::finite(labels);
    const LabelSet full = full_label_set(n);
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<LabelSet> base;
      LabelSet cover = 0;
      while (cover != full) {
        const LabelSet s = rng() & full;
        base.push_back(s);
        cover |= s;
      }
      const auto fam = generate_from_base(g, base);
      // downward closed: every subset of a member is a member
      for (LabelSet s : fam.members())
        for (LabelSet t = s;; t = (t - 1) & s) {
          REQUIRE(fam.contains(t));
          if (t == 0) break;
        }
      const auto top = smallest_bornology(g, base);
      REQUIRE(top.members().size() == (std::size_t{1} << n));
      REQUIRE(family_axiom_check(top).passed());
    }
  }
}

TEST_CASE("boundedness in chains") {
  const auto v = is_bounded(cubes(), interval(4, 6));
  REQUIRE(v.is_bounded());
  CHECK(v.index == 6);
  const auto u = is_bounded(cubes(), Box({{End::neg_inf(), End::at(0)}}));
  REQUIRE(u.is_unbounded());
  CHECK(*u.direction == Point{-1});
  const Box s({{End::neg_inf(), End::at(3)}, {End::neg_inf(), End::at(-1)}});
  const auto q = is_bounded(quadrant_chain(), s);
  REQUIRE(q.is_bounded());
  CHECK(q.index == 3);
  // level 2 misses (3, -1)
  CHECK(s.contains(Point{3, -1}));
  CHECK_FALSE(quadrant(2).contains(Point{3, -1}));
  CHECK(is_bounded(maximal_z(), Box::full(1)).index == 0);
}

TEST_CASE("boundedness is monotone and escape directions stay in the set") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 200; ++trial) {
    const Box big = random_box(rng, 2, 9);
    const Box small = box_intersect(big, random_box(rng, 2, 9));
    if (big.is_empty()) continue;
    for (const auto& b : {cubes(2), quadrant_chain()}) {
      const auto vb = is_bounded(b, big);
      REQUIRE(vb.outcome != BoundVerdict::Outcome::Inconclusive);
      if (vb.is_bounded()) {
        REQUIRE(box_subset(big, b.level_box(vb.index)));
        if (!small.is_empty()) {
          const auto vs = is_bounded(b, small);
          REQUIRE(vs.is_bounded());
          REQUIRE(vs.index <= vb.index);
        }
      } else {
        REQUIRE(vb.base_point);
        REQUIRE(vb.direction);
        for (Int t = 0; t <= 20; ++t) {
          Point p = *vb.base_point;
          for (std::size_t i = 0; i < p.size(); ++i) p[i] += t * (*vb.direction)[i];
          REQUIRE(big.contains(p));
        }
      }
    }
  }
}

TEST_CASE("product bornologies") {
  const auto p = product_bornology(cubes(), cubes());
  CHECK(p.is_chain());
  CHECK(p.level_box(3) == Box::cube(2, 3));
  CHECK(product_bornology(maximal_z(), maximal_z()).is_maximal());
  const auto a = GroundSpace::finite({"a"}), xy = GroundSpace::finite({"x", "y"});
  const auto f = product_bornology(BornologySpec::finite_base(a, {0b1}), BornologySpec::finite_base(xy, {0b11}));
  REQUIRE(f.base().size() == 1);
  CHECK(f.base()[0] == 0b11);
  CHECK(f.space().labels() == std::vector<std::string>{"(a,x)", "(a,y)"});
}

TEST_CASE("inverse images and images") {
  const auto orbit = MapDescriptor::orbit({0, 0}, IntMatrix::from_columns(2, {{1, -1}}));
  const auto pull = inverse_image_bornology(orbit, quadrant_chain());
  for (Int m = 0; m <= 8; ++m) {
    CHECK(pull.level_box(m) == interval(-m, m));
    // n <= m and -n <= m, enumerated
    for (Int n = -20; n <= 20; ++n) REQUIRE(pull.level_box(m).contains(Point{n}) == quadrant(m).contains(orbit.apply(Point{n})));
  }
  const auto same = inverse_image_bornology(MapDescriptor::identity(GroundSpace::lattice(2)), quadrant_chain());
  CHECK(same.level_box(4) == quadrant(4));

  const auto ab = GroundSpace::finite({"a", "b"}), x = GroundSpace::finite({"x"});
  const auto fold = MapDescriptor::finite(ab, x, {0, 0});
  CHECK(inverse_image_bornology(fold, BornologySpec::finite_base(x, {0b1})).base() == std::vector<LabelSet>{0b11});

  const auto push = image_bornology(orbit, cubes());
  for (Int k = 0; k <= 8; ++k) CHECK(push.level_box(k) == interval(-k, k));
  CHECK(image_bornology(MapDescriptor::identity(GroundSpace::lattice(1)), cubes()).level_box(2) == interval(-2, 2));
  CHECK(image_bornology(fold, BornologySpec::finite_base(ab, {0b01, 0b11})).base().back() == 0b1);

  const auto xy = GroundSpace::finite({"x", "y"});
  CHECK_THROWS_AS(image_bornology(MapDescriptor::finite(ab, xy, {0, 0}), BornologySpec::maximal(ab)), Error);
}

TEST_CASE("bornology inclusion") {
  CHECK(bornology_leq(cubes(), maximal_z()).holds());
  CHECK(bornology_leq(maximal_z(), cubes()).fails());
  CHECK(bornology_leq(cubes(2), quadrant_chain()).holds());
  CHECK(bornology_leq(quadrant_chain(), cubes(2)).fails());
}
