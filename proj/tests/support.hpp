#pragma once

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "bcs/associated.hpp"

namespace support {

using namespace bcs;

inline ActionPtr lattice_action(const std::string& name, std::size_t d, std::vector<Point> cols, BornologySpec bx,
                                BornologySpec bl) {
  const std::size_t k = cols.size();
  TranslationRule r{IntMatrix::from_columns(d, cols), std::nullopt};
  return std::make_shared<ActionInstance>(name, GroupSpec::lattice(k, std::move(bl)), GroundSpace::lattice(d), r,
                                          std::move(bx));
}

/// S_m = (-inf, m] x (-inf, m].
inline BornologySpec quadrant_chain() {
  ChainShape s;
  s.lower = {ChainEnd::inf(), ChainEnd::inf()};
  s.upper = {ChainEnd::affine(1, 0), ChainEnd::affine(1, 0)};
  return BornologySpec::chain(s);
}

inline BornologySpec cubes(std::size_t d = 1) { return BornologySpec::cubes(d); }
inline BornologySpec maximal_z(std::size_t d = 1) { return BornologySpec::maximal(GroundSpace::lattice(d)); }

inline ActionPtr shift() { return lattice_action("shift", 1, {{1}}, cubes(), cubes()); }
inline ActionPtr hyperbola() { return lattice_action("hyperbola", 2, {{1, -1}}, quadrant_chain(), cubes()); }
inline ActionPtr trivial() { return lattice_action("trivial", 1, {{0}}, cubes(), cubes()); }
inline ActionPtr shift_maximal_space() { return lattice_action("shift_maximal_space", 1, {{1}}, maximal_z(), cubes()); }
inline ActionPtr trivial_maximal_group() {
  return lattice_action("trivial_maximal_group", 1, {{0}}, cubes(), maximal_z());
}
inline ActionPtr first_coordinate() { return lattice_action("first_coordinate", 2, {{1, 0}}, cubes(2), cubes()); }

inline std::vector<ActionPtr> flagships() {
  return {shift(), hyperbola(), trivial(), shift_maximal_space(), trivial_maximal_group()};
}

inline Box interval(Int lo, Int hi) { return Box::closed({lo}, {hi}); }

inline Box quadrant(Int m) { return Box({{End::neg_inf(), End::at(m)}, {End::neg_inf(), End::at(m)}}); }

/// Random box in [-r, r]^d whose ends are infinite with probability 1/5.
inline Box random_box(std::mt19937_64& rng, std::size_t d, Int r) {
  std::uniform_int_distribution<Int> v(-r, r);
  std::uniform_int_distribution<int> inf(0, 4);
  std::vector<Interval> dims;
  for (std::size_t i = 0; i < d; ++i) {
    Int a = v(rng), b = v(rng);
    if (a > b) std::swap(a, b);
    dims.push_back({inf(rng) == 0 ? End::neg_inf() : End::at(a), inf(rng) == 0 ? End::pos_inf() : End::at(b)});
  }
  return Box(dims);
}

inline std::vector<Point> grid(std::size_t d, Int r) {
  std::vector<Point> out;
  Point p(d, -r);
  while (true) {
    out.push_back(p);
    std::size_t i = 0;
    while (i < d && p[i] == r) p[i++] = -r;
    if (i == d) break;
    ++p[i];
  }
  return out;
}

}  // namespace support
