#include <random>

#include "doctest.h"
#include "support.hpp"

using namespace bcs;
using namespace support;

TEST_CASE("membership in boxes, points and unions") {
  CHECK(set_membership(Box::cube(2, 1), Point{0, 0}));
  CHECK_FALSE(set_membership(quadrant(0), Point{1, 0}));
  const auto u = SetDescriptor::union_of(1, {SetDescriptor::points(1, {{5}}), interval(0, 2)});
  CHECK(set_membership(u, Point{5}));
  CHECK(set_membership(u, Point{1}));
  CHECK_FALSE(set_membership(u, Point{4}));
  CHECK_THROWS_AS(set_membership(Box::cube(2, 1), Point{0}), Error);
}

TEST_CASE("box intersection") {
  CHECK(box_intersect(interval(0, 3), interval(2, 5)) == interval(2, 3));
  CHECK(box_intersect(interval(0, 1), interval(3, 4)).is_empty());
  const Box left({{End::neg_inf(), End::at(0)}});
  const Box right({{End::at(-2), End::pos_inf()}});
  CHECK(box_intersect(left, right) == interval(-2, 0));
  CHECK_THROWS_AS(box_intersect(interval(0, 1), Box::cube(2, 1)), Error);
}

// {v : (v + source) meets target}, enumerated.
static std::vector<Int> brute_difference(const Box& target, const Box& source, Int w) {
  std::vector<Int> out;
  for (Int v = -w; v <= w; ++v) {
    bool hit = false;
    for (Int x = -3 * w; x <= 3 * w && !hit; ++x)
      if (source.contains(Point{x}) && target.contains(Point{x + v})) hit = true;
    if (hit) out.push_back(v);
  }
  return out;
}

TEST_CASE("difference box") {
  CHECK(difference_box(interval(5, 6), interval(0, 1)) == interval(4, 6));
  CHECK(brute_difference(interval(5, 6), interval(0, 1), 20) == std::vector<Int>{4, 5, 6});
  CHECK(difference_box(interval(0, 0), interval(0, 0)) == interval(0, 0));
  const Box half({{End::neg_inf(), End::at(0)}});
  CHECK(difference_box(half, half) == Box::full(1));
  CHECK(brute_difference(half, half, 20).size() == 41);
  CHECK_THROWS_AS(difference_box(Box::empty(1), interval(0, 1)), Error);
}

TEST_CASE("translation and self differences") {
  CHECK(set_translate(interval(0, 1), Point{3}) == SetDescriptor(interval(3, 4)));
  CHECK(set_translate(SetDescriptor::points(2, {{0, 0}, {1, 1}}), Point{1, -1}) ==
        SetDescriptor::points(2, {{1, -1}, {2, 0}}));
  const Int m = 2;
  CHECK(set_translate(quadrant(0), Point{m + 1, -m - 1}) ==
        SetDescriptor(Box({{End::neg_inf(), End::at(3)}, {End::neg_inf(), End::at(-3)}})));
  CHECK(self_difference_set(interval(-1, 1)) == SetDescriptor(interval(-2, 2)));
  CHECK(self_difference_set(SetDescriptor::points(1, {{0}, {5}})) == SetDescriptor::points(1, {{-5}, {0}, {5}}));
  CHECK(self_difference_set(interval(0, 0)) == SetDescriptor(interval(0, 0)));
  const auto u = SetDescriptor::union_of(1, {interval(0, 0), interval(9, 9)});
  CHECK_THROWS_AS(self_difference_set(u), Error);
}

TEST_CASE("intersection agrees with pointwise conjunction") {
  std::mt19937_64 rng(11);
  for (std::size_t d = 1; d <= 2; ++d) {
    const auto pts = grid(d, d == 1 ? 32 : 12);
    for (int trial = 0; trial < 60; ++trial) {
      const Box a = random_box(rng, d, 10), b = random_box(rng, d, 10);
      const Box c = box_intersect(a, b);
      for (const auto& p : pts) REQUIRE(c.contains(p) == (a.contains(p) && b.contains(p)));
      if (!c.is_empty()) CHECK(c.contains(nearest_point(c)));
    }
  }
}

TEST_CASE("difference box agrees with enumeration") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 80; ++trial) {
    const Box t = random_box(rng, 1, 6), s = random_box(rng, 1, 6);
    const auto brute = brute_difference(t, s, 12);
    const Box d = difference_box(t, s);
    std::vector<Int> symbolic;
    for (Int v = -12; v <= 12; ++v)
      if (d.contains(Point{v})) symbolic.push_back(v);
    REQUIRE(brute == symbolic);
  }
}

TEST_CASE("translate round trip and zero difference") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const Box b = random_box(rng, 2, 8);
    const Point v{static_cast<Int>(rng() % 21) - 10, static_cast<Int>(rng() % 21) - 10};
    const Point minus{-v[0], -v[1]};
    const auto back = set_translate(set_translate(b, v), minus);
    for (const auto& p : grid(2, 10)) REQUIRE(set_membership(back, p) == b.contains(p));
    if (!b.is_empty()) CHECK(set_membership(self_difference_set(b), Point{0, 0}));
  }
  const auto pts = SetDescriptor::points(2, {{3, 1}, {-2, 4}});
  CHECK(set_membership(self_difference_set(pts), Point{0, 0}));
}
