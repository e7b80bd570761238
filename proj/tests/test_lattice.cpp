#include <random>

#include "bcs/lattice.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bcs;
using namespace support;

static IntMatrix random_matrix(std::mt19937_64& rng, std::size_t d, std::size_t k) {
  IntMatrix m(d, k);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < k; ++c) m(r, c) = static_cast<Int>(rng() % 5) - 2;
  return m;
}

TEST_CASE("column Hermite form") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 1 + rng() % 3, k = 1 + rng() % 3;
    const IntMatrix m = random_matrix(rng, d, k);
    const ColumnHnf h = column_hnf(m);
    // M U = [H | 0]
    for (std::size_t c = 0; c < k; ++c) {
      Point col(k, 0);
      for (std::size_t r = 0; r < k; ++r) col[r] = h.u(r, c);
      const Point image = m.apply(col);
      for (std::size_t r = 0; r < d; ++r) REQUIRE(image[r] == (c < h.rank ? h.h(r, c) : 0));
    }
    for (std::size_t j = 0; j < h.rank; ++j) {
      REQUIRE(h.h(h.pivot_rows[j], j) > 0);
      if (j) REQUIRE(h.pivot_rows[j] > h.pivot_rows[j - 1]);
    }
    for (const auto& v : h.kernel()) REQUIRE(m.apply(v) == Point(d, 0));
    CHECK(h.kernel().size() == k - h.rank);
  }
  CHECK(column_hnf(IntMatrix::from_columns(2, {{2, 0}, {0, 3}})).index() == 6);
  CHECK(column_hnf(IntMatrix::from_columns(2, {{1, -1}})).index() == 0);
}

TEST_CASE("preimage of a box: feasibility, recession and bounding box") {
  const IntMatrix diag = IntMatrix::from_columns(2, {{1, -1}});
  CHECK(recession_direction(diag, Box::full(2)).has_value());
  CHECK_FALSE(recession_direction(diag, quadrant(0)).has_value());
  const Box bb = *integer_bounding_box(diag, Box::cube(2, 3));
  CHECK(bb == interval(-3, 3));
  // 2 l in [1, 1] has no integer solution
  CHECK_FALSE(lattice_point_in(IntMatrix::from_columns(1, {{2}}), interval(1, 1)).has_value());
  CHECK(integer_bounding_box(IntMatrix::from_columns(1, {{2}}), interval(1, 1))->is_empty());
}

TEST_CASE("integer feasibility agrees with enumeration") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t d = 1 + rng() % 3, k = 1 + rng() % 2;
    const IntMatrix m = random_matrix(rng, d, k);
    const Box c = random_box(rng, d, 4);
    if (c.is_empty()) continue;
    bool brute = false;
    for (const auto& l : grid(k, 12))
      if (c.contains(m.apply(l))) brute = true;
    const auto sym = lattice_point_in(m, c);
    if (sym) REQUIRE(c.contains(m.apply(*sym)));
    // a solution inside the window must be found symbolically
    if (brute) REQUIRE(sym.has_value());
    const auto bb = integer_bounding_box(m, c);
    if (bb && !bb->is_empty()) {
      for (const auto& l : grid(k, 12))
        if (c.contains(m.apply(l))) REQUIRE(bb->contains(l));
    }
    if (!bb) REQUIRE(recession_direction(m, c).has_value());
  }
}

TEST_CASE("Fourier-Motzkin range of a functional") {
  // l1 + l2 over {(l1, l2) : 0 <= l1 <= 2, 0 <= l2 <= 3}
  const IntMatrix id = IntMatrix::identity(2);
  const auto r = functional_range(id, Box::closed({0, 0}, {2, 3}), Point{1, 1});
  REQUIRE(r);
  CHECK(*r->lo == Rational(0));
  CHECK(*r->hi == Rational(5));
  const auto open = functional_range(id, Box({{End::at(0), End::pos_inf()}, {End::at(0), End::at(1)}}), Point{1, 0});
  CHECK_FALSE(open->hi.has_value());
}
