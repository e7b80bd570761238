#pragma once

// Entourages (subsets of X x X), coarse structures generated by finite bases
// on finite sets, and cofinal chains of entourages on Z^d.

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bcs/bornology.hpp"
#include "bcs/instance.hpp"
#include "bcs/verdict.hpp"

namespace bcs {

using PointPair = std::pair<Point, Point>;

// ---- relations on a finite set ------------------------------------------------

/// Relation on {0..n-1}; rows[x] has bit y set when (x, y) is in it.
struct Relation {
  std::size_t n = 0;
  std::vector<LabelSet> rows;

  static Relation empty(std::size_t n);
  static Relation diag(std::size_t n);
  static Relation full(std::size_t n);
  /// B x B.
  static Relation square(std::size_t n, LabelSet b);

  bool has(std::size_t x, std::size_t y) const { return rows[x] >> y & 1; }
  void set(std::size_t x, std::size_t y) { rows[x] |= LabelSet{1} << y; }
  Relation transpose() const;
  /// {(x, z) : exists y, (x, y) in this and (y, z) in other}.
  Relation compose(const Relation& other) const;
  Relation operator|(const Relation& o) const;
  bool subset_of(const Relation& o) const;
  std::size_t count() const;

  bool operator==(const Relation&) const = default;
  auto operator<=>(const Relation& o) const { return rows <=> o.rows; }
};

// ---- entourage descriptors ------------------------------------------------------

enum class Truth { False, True, Unknown };

const char* to_string(Truth t);

class Entourage {
 public:
  enum class Kind { Diag, FiniteRel, MetricBall, Product, OrbitPair, GroupRight, Transpose, Union, Compose };

  static Entourage diag(GroundSpace space);
  static Entourage finite_rel(GroundSpace space, std::vector<PointPair> pairs);
  /// {(x, y) : |x - y|_inf <= r} on Z^d.
  static Entourage metric_ball(std::size_t dim, Int radius);
  /// B x B.
  static Entourage product(GroundSpace space, SetDescriptor b);
  /// E(L, B) = (B x B)_L union diag.
  static Entourage orbit_pair(ActionPtr action, SetDescriptor b);
  /// {(l, h) : l^-1 h in D} on the group itself.
  static Entourage group_right(std::shared_ptr<const GroupSpec> group, SetDescriptor d);
  static Entourage transpose(Entourage e);
  static Entourage union_of(Entourage a, Entourage b);
  static Entourage compose(Entourage a, Entourage b);

  Kind kind() const { return node_->kind; }
  const GroundSpace& space() const { return node_->space; }
  Int radius() const { return node_->radius; }
  const SetDescriptor& set() const { return node_->set; }
  const std::vector<PointPair>& pairs() const { return node_->pairs; }
  const ActionPtr& action() const { return node_->action; }
  const std::shared_ptr<const GroupSpec>& group() const { return node_->group; }
  const Entourage& left() const { return node_->children.at(0); }
  const Entourage& right() const { return node_->children.at(1); }
  /// Set by rewrites that replace the relation by a superset.
  bool approximate() const { return node_->approximate; }
  Entourage mark_approximate() const;

 private:
  struct Node {
    Kind kind = Kind::Diag;
    GroundSpace space = GroundSpace::lattice(1);
    Int radius = 0;
    SetDescriptor set;
    std::vector<PointPair> pairs;
    ActionPtr action;
    std::shared_ptr<const GroupSpec> group;
    std::vector<Entourage> children;
    bool approximate = false;
  };
  explicit Entourage(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

std::string describe(const Entourage& e);

struct Membership {
  Truth truth = Truth::Unknown;
  std::optional<Point> witness;  // group element (orbit pairs) or middle point (compositions)

  bool yes() const { return truth == Truth::True; }
  bool no() const { return truth == Truth::False; }
};

Membership entourage_membership(const Entourage& e, const Point& x, const Point& y, const Budget& budget = {});

/// Sound simplifications; an over-approximating rewrite is marked approximate.
Entourage entourage_rewrite(const Entourage& e);

struct Neighborhood {
  SetDescriptor set;
  bool exact = true;        // false: only the points inside `window` are listed
  Int window = 0;
};

/// E[A] = {y : exists x in A, (x, y) in E}.
Neighborhood neighborhood(const Entourage& e, const SetDescriptor& a, const Budget& budget = {});

// ---- coarse structures ----------------------------------------------------------------

struct FiniteClosure {
  GroundSpace ground = GroundSpace::lattice(1);
  std::vector<Relation> antichain;

  bool contains(const Relation& r) const;
};

/// Chain of entourages indexed by n on Z^d.
struct CoarseChain {
  enum class Kind { Metric, Connected, OrbitPair, GroupRight };

  Kind kind = Kind::Metric;
  GroundSpace space = GroundSpace::lattice(1);
  BornologySpec bornology = BornologySpec::cubes(1);  // Connected, OrbitPair, GroupRight
  ActionPtr action;                                   // OrbitPair
  std::shared_ptr<const GroupSpec> group;             // GroupRight

  Entourage level(Int n) const;
};

class CoarseStructure {
 public:
  CoarseStructure(std::string name, FiniteClosure f) : name_(std::move(name)), v_(std::move(f)) {}
  CoarseStructure(std::string name, CoarseChain c) : name_(std::move(name)), v_(std::move(c)) {}

  const std::string& name() const { return name_; }
  bool is_finite() const { return std::holds_alternative<FiniteClosure>(v_); }
  const FiniteClosure& closure() const { return std::get<FiniteClosure>(v_); }
  const CoarseChain& chain() const { return std::get<CoarseChain>(v_); }
  const GroundSpace& space() const { return is_finite() ? closure().ground : chain().space; }
  /// Level n as an entourage (the maximal relation on finite spaces).
  Entourage level(Int n) const;

 private:
  std::string name_;
  std::variant<FiniteClosure, CoarseChain> v_;
};

CoarseStructure metric_structure(std::size_t dim);

/// Relation of an entourage on a finite space, by enumeration.
Relation to_relation(const Entourage& e, const Budget& budget = {});

/// Smallest coarse structure containing the base (n <= 12 labels).
FiniteClosure close_finite_base(const GroundSpace& ground, const std::vector<Relation>& base);

/// The five coarse-structure conditions, checked on the antichain.
AxiomReport coarse_axiom_check(const FiniteClosure& f);

/// E_B = <(B x B) union diag>.
CoarseStructure associated_connected_structure(const BornologySpec& b);

BoundVerdict coarsely_bounded(const CoarseStructure& cs, const SetDescriptor& s, const Budget& budget = {});

/// Containment of one entourage in another with a witness pair on failure.
struct Containment {
  Truth truth = Truth::Unknown;
  std::optional<PointPair> witness;  // in the first relation, not in the second
  std::string rule;
};

/// Whether C + (column lattice of M) is all of Z^d; an uncovered point on failure.
/// Unknown when C has a one-sided infinite coordinate or the index exceeds 4096.
std::pair<Truth, std::optional<Point>> lattice_cover(const Box& c, const IntMatrix& m);

Containment entourage_leq(const Entourage& e1, const Entourage& e2, const Budget& budget = {});

/// For every level n <= max_index some level m of cs2 contains level n of cs1.
Verdict structure_leq(const CoarseStructure& cs1, const CoarseStructure& cs2, const Budget& budget = {});

/// Bornology of the coarsely bounded sets as a chain, when it has a closed form.
std::optional<BornologySpec> induced_bornology(const CoarseStructure& cs);

/// (x, y) in E_L(e) = union over l of (l x l)(e), as the orbit-pair closure when
/// it has one; nullopt otherwise.
std::optional<Entourage> swept_entourage(const ActionPtr& a, const Entourage& e);

}  // namespace bcs
