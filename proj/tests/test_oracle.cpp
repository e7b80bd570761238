#include <random>

#include "bcs/instance_io.hpp"
#include "bcs/oracle.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bcs;
using namespace support;

TEST_CASE("windows") {
  for (std::size_t d = 1; d <= 3; ++d)
    for (Int w : {0, 1, 3}) {
      const auto pts = oracle::window(GroundSpace::lattice(d), w);
      std::size_t expect = 1;
      for (std::size_t i = 0; i < d; ++i) expect *= static_cast<std::size_t>(2 * w + 1);
      CHECK(pts.size() == expect);
    }
  CHECK(oracle::window(GroundSpace::finite({"a", "b", "c"}), 9).size() == 3);
}

TEST_CASE("brute-force transporters") {
  const auto s = oracle::transporter(*shift(), interval(0, 1), interval(5, 6), 20, 30);
  REQUIRE(s.sufficient);
  CHECK(*s.sufficient == 26);
  CHECK_FALSE(oracle::transporter(*shift(), interval(0, 1), interval(5, 6), 20, 20).certified);
  CHECK(s.elements == std::vector<Point>{{4}, {5}, {6}});
  CHECK(s.certified);
  const auto t = oracle::transporter(*trivial(), SetDescriptor::points(1, {{0}}), SetDescriptor::points(1, {{0}}), 20, 20);
  CHECK(t.elements.size() == 41);
  const auto h = oracle::transporter(*hyperbola(), quadrant(0), quadrant(0), 20, 64);
  CHECK(h.elements.size() == 41);
  REQUIRE(h.sufficient);
  CHECK(*h.sufficient <= 64);
  CHECK(h.certified);
}

TEST_CASE("enlarging windows never loses transporter elements") {
  std::mt19937_64 rng(61);
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto a = oracle::random_instance(seed, oracle::Profile::LatticeK1);
    for (int trial = 0; trial < 5; ++trial) {
      const Box b = random_box(rng, a->dim(), 3), b2 = random_box(rng, a->dim(), 3);
      const auto small = oracle::transporter(*a, b, b2, 4, 6);
      const auto big = oracle::transporter(*a, b, b2, 8, 12);
      for (const auto& l : small.elements)
        REQUIRE(std::find(big.elements.begin(), big.elements.end(), l) != big.elements.end());
    }
  }
}

TEST_CASE("random instances are deterministic and valid") {
  for (auto p : {oracle::Profile::Finite, oracle::Profile::LatticeK1, oracle::Profile::LatticeK2}) {
    InstanceFile a, b;
    a.action = oracle::random_instance(0, p);
    b.action = oracle::random_instance(0, p);
    CHECK(serialize_instance(a) == serialize_instance(b));
    CHECK(oracle::parse_profile(oracle::to_string(p)) == p);
  }
  CHECK_FALSE(oracle::parse_profile("lattice-k3"));
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto a = oracle::random_instance(seed, oracle::Profile::LatticeK1);
    REQUIRE(bornology_axiom_check(a->space_bornology()).passed());
    REQUIRE(validate_instance(*a).passed());
  }
  const auto f = oracle::random_instance(0, oracle::Profile::Finite);
  const auto& t = f->group().table();
  for (std::size_t x = 0; x < t.order(); ++x)
    for (std::size_t y = 0; y < t.order(); ++y)
      for (std::size_t z = 0; z < t.order(); ++z)
        REQUIRE(t.mul[t.mul[x][y]][z] == t.mul[x][t.mul[y][z]]);
  for (std::size_t x = 0; x < t.order(); ++x) {
    CHECK(t.mul[t.identity][x] == static_cast<Int>(x));
    CHECK(t.mul[x][t.inv[x]] == t.identity);
  }
}

TEST_CASE("cross check on the flagship instances") {
  const auto reports = oracle::cross_check(flagships(), oracle::primitives(), 16);
  CHECK(reports.size() == flagships().size() * oracle::primitives().size());
  for (const auto& r : reports) {
    INFO(r.instance << " " << r.primitive << " " << (r.mismatches.empty() ? "" : r.mismatches.front()));
    CHECK(r.passed());
  }
  // identical inputs give identical reports
  const auto again = oracle::cross_check(flagships(), {"transporter", "membership"}, 16);
  const auto first = oracle::cross_check(flagships(), {"transporter", "membership"}, 16);
  REQUIRE(again.size() == first.size());
  for (std::size_t i = 0; i < again.size(); ++i) {
    CHECK(again[i].checked == first[i].checked);
    CHECK(again[i].advisories == first[i].advisories);
  }
  CHECK_THROWS_AS(oracle::cross_check(flagships(), {"nonsense"}, 8), Error);
}

TEST_CASE("cross check on finite instances") {
  std::vector<ActionPtr> fin;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) fin.push_back(oracle::random_instance(seed, oracle::Profile::Finite));
  for (const auto& r : oracle::cross_check(fin, oracle::primitives(), 8)) {
    INFO(r.instance << " " << r.primitive);
    CHECK(r.passed());
  }
}

TEST_CASE("a corrupted box primitive is caught") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    fault::Scope scope(fault::seeded_plan(seed));
    std::size_t bad = 0;
    for (const auto& r : oracle::cross_check(flagships(), oracle::primitives(), 16)) bad += r.passed() ? 0 : 1;
    CHECK(bad >= 1);
  }
  CHECK(fault::active().op == fault::Op::None);
}
