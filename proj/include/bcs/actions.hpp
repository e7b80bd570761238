#pragma once

// Transporters L_{B,B'} = {l : lB meets B'}, their boundedness, properness
// classification, equi-control, coarse transitivity and orbit bornologies.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bcs/coarse.hpp"
#include "bcs/instance.hpp"
#include "bcs/verdict.hpp"

namespace bcs {

struct Transporter {
  enum class Kind { Lattice, Explicit };

  Kind kind = Kind::Lattice;
  IntMatrix m;
  std::vector<Box> constraints;  // Lattice: union over C of {l : M l in C}
  std::vector<Point> elements;   // Explicit, sorted
  bool exact = true;             // false: Explicit lists only the elements inside `window`
  Int window = 0;

  bool contains(std::span<const Int> l) const;
  bool is_empty() const;
};

std::string describe(const Transporter& t);

Transporter transporter(const ActionInstance& a, const SetDescriptor& b, const SetDescriptor& b2,
                        const Budget& budget = {});

/// Boundedness of a transporter in the group bornology. Unbounded verdicts
/// carry l0 and r with l0 + t r in the transporter for all t >= 0.
BoundVerdict transporter_bounded(const ActionInstance& a, const Transporter& t, const Budget& budget = {});

/// Origin plus distinct cosets of the column lattice near it, at most 32.
std::vector<Point> sample_points(const ActionInstance& a, const Budget& budget = {});

struct Classification {
  Verdict b_proper;
  Verdict weakly;
  Verdict bi;
  std::vector<Point> samples;
  std::vector<std::vector<Int>> k_table;  // k(i, j): level bounding L_{B_i, B_j}; -1 when unbounded
};

Classification classify(const ActionInstance& a, const Budget& budget = {});

/// Every swept level E_L(level n) lies in some level m.
Verdict equi_controlled_check(const ActionPtr& a, const CoarseStructure& cs, const Budget& budget = {});

/// Some coarsely bounded B has L B = X.
Verdict coarsely_transitive_check(const ActionInstance& a, const CoarseStructure& cs, const Budget& budget = {});

struct OrbitBornologies {
  BornologySpec pullback;     // iota_x^* B_X on the parameter lattice
  BornologySpec pushforward;  // T^x_* B_L on the parameter lattice
};

OrbitBornologies orbit_bornologies(const ActionInstance& a, const Point& x);

/// Mutual inclusion of the two orbit bornologies at x.
Verdict orbit_bornologies_agree(const ActionInstance& a, const Point& x, const Budget& budget = {});

CoarseStructure group_right_structure(const GroupSpec& g);

}  // namespace bcs
