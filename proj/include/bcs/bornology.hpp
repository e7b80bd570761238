#pragma once

// Bornologies: the maximal one, finite bases over label sets, and monotone
// exhaustion chains of boxes over Z^d whose ends are affine in the level.

#include <cstdint>
#include <string>
#include <vector>

#include "bcs/lattice.hpp"
#include "bcs/sets.hpp"
#include "bcs/verdict.hpp"

namespace bcs {

/// (slope * m + offset) / divisor, divisor > 0. A user-facing affine index
/// expression `a*m+b` is a term with divisor 1.
struct AffineTerm {
  Int slope = 0;
  Int offset = 0;
  Int divisor = 1;

  bool operator==(const AffineTerm&) const = default;
};

/// One end of a chain coordinate. A lower end evaluates to the max of the
/// ceilings of its terms, an upper end to the min of the floors. Derived
/// chains (preimages) need several terms; parsed chains have one.
struct ChainEnd {
  bool infinite = false;
  std::vector<AffineTerm> terms;

  static ChainEnd inf() { return {true, {}}; }
  static ChainEnd affine(Int slope, Int offset) { return {false, {{slope, offset, 1}}}; }

  End eval_lower(Int m) const;
  End eval_upper(Int m) const;
  bool is_affine() const { return infinite || (terms.size() == 1 && terms.front().divisor == 1); }

  bool operator==(const ChainEnd&) const = default;
};

std::string to_string(const ChainEnd& e);

struct ChainShape {
  std::vector<ChainEnd> lower;
  std::vector<ChainEnd> upper;
  Int empty_below = 0;          // levels m < empty_below are empty
  bool levelwise_exact = true;  // false for rational-hull preimage chains

  std::size_t dim() const { return lower.size(); }
  Box level(Int m) const;

  static ChainShape cubes(std::size_t dim);
  bool operator==(const ChainShape&) const = default;
};

using LabelSet = std::uint64_t;

LabelSet full_label_set(std::size_t n);
LabelSet to_label_set(const GroundSpace& space, const SetDescriptor& s);
SetDescriptor from_label_set(LabelSet s);

class BornologySpec {
 public:
  enum class Kind { Maximal, FiniteBase, Chain };

  static BornologySpec maximal(GroundSpace space);
  static BornologySpec finite_base(GroundSpace space, std::vector<LabelSet> base);
  static BornologySpec chain(ChainShape shape);
  /// Chain of cubes [-m, m]^d.
  static BornologySpec cubes(std::size_t dim) { return chain(ChainShape::cubes(dim)); }

  Kind kind() const { return kind_; }
  bool is_maximal() const { return kind_ == Kind::Maximal; }
  bool is_chain() const { return kind_ == Kind::Chain; }
  bool is_finite_base() const { return kind_ == Kind::FiniteBase; }
  const GroundSpace& space() const { return space_; }
  const std::vector<LabelSet>& base() const { return base_; }
  const ChainShape& shape() const { return shape_; }
  std::size_t dim() const { return space_.dim(); }

  /// Level m of the cofinal chain: chain boxes, the full space for the
  /// maximal bornology, the union of the base on finite spaces.
  SetDescriptor level(Int m) const;
  Box level_box(Int m) const;

  bool operator==(const BornologySpec&) const = default;

 private:
  Kind kind_ = Kind::Maximal;
  GroundSpace space_ = GroundSpace::lattice(1);
  std::vector<LabelSet> base_;
  ChainShape shape_;
};

std::string describe(const BornologySpec& b);

struct AxiomCheck {
  std::string axiom;
  bool passed = true;
  std::string witness;
};

struct AxiomReport {
  std::string subject;
  std::vector<AxiomCheck> checks;

  bool passed() const;
  const AxiomCheck* first_failure() const;
};

AxiomReport bornology_axiom_check(const BornologySpec& b);

/// A downward-closed family of subsets of a finite label set, stored by its
/// maximal elements.
struct ExplicitFamily {
  std::size_t ground_size = 0;
  std::vector<LabelSet> antichain;

  bool contains(LabelSet s) const;
  std::vector<LabelSet> members() const;  // every subset, ascending
};

/// Downward closure of a base.
ExplicitFamily generate_from_base(const GroundSpace& ground, const std::vector<LabelSet>& base);
/// Smallest bornology containing the base: union closure then downward closure.
ExplicitFamily smallest_bornology(const GroundSpace& ground, const std::vector<LabelSet>& base);
/// Exhaustive check of covering, union closure and downward closure.
AxiomReport family_axiom_check(const ExplicitFamily& f);

BoundVerdict is_bounded(const BornologySpec& b, const SetDescriptor& s, const Budget& budget = {});

BornologySpec product_bornology(const BornologySpec& b1, const BornologySpec& b2);

/// Maps between ground spaces with closed-form preimages and images.
struct MapDescriptor {
  enum class Kind { Identity, Finite, Orbit };

  Kind kind = Kind::Identity;
  GroundSpace domain = GroundSpace::lattice(1);
  GroundSpace codomain = GroundSpace::lattice(1);
  std::vector<Int> table;  // Finite: codomain index of each domain label
  Point base_point;        // Orbit: l -> base_point + matrix * l
  IntMatrix matrix;

  static MapDescriptor identity(GroundSpace space);
  static MapDescriptor finite(GroundSpace domain, GroundSpace codomain, std::vector<Int> table);
  /// The orbit parameterization Z^k -> Z^d, l -> x + M l.
  static MapDescriptor orbit(Point base_point, IntMatrix matrix);

  Point apply(std::span<const Int> x) const;
};

/// Bornology generated by the preimages of b's levels. For orbit maps the
/// result lives on the parameter lattice; it is levelwise exact for one
/// parameter and the rational hull (same bornology) for more.
BornologySpec inverse_image_bornology(const MapDescriptor& f, const BornologySpec& b);

/// Image bornology under a surjection. Orbit maps must have a trivial kernel;
/// the image is expressed on the parameter lattice.
BornologySpec image_bornology(const MapDescriptor& pi, const BornologySpec& b);

/// Inclusion of bornologies on the same space: every set bounded in `a` is
/// bounded in `b`. Decided on all levels through the end slopes.
Verdict bornology_leq(const BornologySpec& a, const BornologySpec& b, const Budget& budget = {});

}  // namespace bcs
