#pragma once

// Brute-force counterpart of the symbolic engine. Everything here enumerates
// finite windows and reads the instance model directly; none of the box
// calculus, lattice or coarse code is called, so a fault injected there shows
// up as a disagreement.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bcs/instance.hpp"
#include "bcs/verdict.hpp"

namespace bcs::oracle {

/// Lattice points with |x|_inf <= radius sorted by norm then lexicographically,
/// or every label of a finite space.
std::vector<Point> window(const GroundSpace& space, Int radius);
std::vector<Point> group_window(const GroupSpec& g, Int radius);

bool member(const SetDescriptor& s, const Point& x);
/// Level m of a bornology, evaluated from the chain ends.
SetDescriptor level(const BornologySpec& b, Int m);

struct TransporterSearch {
  std::vector<Point> elements;  // {l in gw : exists x in b, |x| <= xw, rho(l) x in b2}
  Int group_window = 0;
  Int space_window = 0;
  std::optional<Int> sufficient;  // space radius that makes the truncation harmless
  bool certified = false;
};

TransporterSearch transporter(const ActionInstance& a, const SetDescriptor& b, const SetDescriptor& b2, Int gw,
                              Int xw);

struct PairSearch {
  bool found = false;
  std::optional<Point> witness;
  bool certified = false;  // a miss proves non-membership
};

/// (x, y) in E(L, B): x == y, or l^-1 x and l^-1 y in B for some l in the window.
PairSearch orbit_pair(const ActionInstance& a, const SetDescriptor& b, const Point& x, const Point& y, Int gw);
/// Checks a claimed witness l for (x, y) in E(L, B) directly.
bool orbit_pair_witness(const ActionInstance& a, const SetDescriptor& b, const Point& x, const Point& y,
                        const Point& l);

/// Relation on n labels as one bit mask per row.
using Rows = std::vector<std::uint64_t>;

Rows orbit_pair_rows(const ActionInstance& a, const SetDescriptor& b);
/// Maximal relations of the smallest coarse structure containing the base,
/// closed under union, composition and transpose.
std::vector<Rows> naive_closure(std::size_t n, const std::vector<Rows>& base);
bool in_family(const std::vector<Rows>& generators, const Rows& r);

struct CrossCheckReport {
  std::string primitive;
  std::string instance;
  Int window = 0;
  std::vector<std::string> mismatches;
  std::vector<std::string> advisories;  // disagreements the window cannot settle
  std::size_t checked = 0;

  bool passed() const { return mismatches.empty(); }
};

const std::vector<std::string>& primitives();

std::vector<CrossCheckReport> cross_check(const std::vector<ActionPtr>& instances,
                                          const std::vector<std::string>& selected, Int window,
                                          const Budget& budget = {});

enum class Profile { Finite, LatticeK1, LatticeK2 };

std::optional<Profile> parse_profile(const std::string& s);
const char* to_string(Profile p);

/// Deterministic in (seed, profile).
ActionPtr random_instance(std::uint64_t seed, Profile profile);

}  // namespace bcs::oracle
