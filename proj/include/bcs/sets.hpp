#pragma once

// Exact calculus of finitely describable subsets of a finite label set or of
// the integer lattice Z^d: integer boxes with independent infinite ends,
// explicit point lists, and flat unions of the two.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace bcs {

using Int = std::int64_t;
using Point = std::vector<Int>;

class Error : public std::runtime_error {
 public:
  enum class Code {
    DimensionMismatch,
    EmptyInput,
    Unsupported,
    Validation,
    Parse,
    BudgetExceeded,
    NotSurjective,
    Refuted,
  };

  Error(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

const char* to_string(Error::Code code);

/// The set X on which everything lives: either finitely many labels (points
/// are one-coordinate label indices) or the lattice Z^d.
class GroundSpace {
 public:
  static GroundSpace finite(std::vector<std::string> labels);
  static GroundSpace lattice(std::size_t dim);

  bool is_finite() const { return finite_; }
  bool is_lattice() const { return !finite_; }
  /// Number of coordinates of a point (1 for finite spaces).
  std::size_t dim() const { return finite_ ? 1 : dim_; }
  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<Int> label_index(const std::string& label) const;

  bool operator==(const GroundSpace&) const = default;

 private:
  bool finite_ = false;
  std::size_t dim_ = 1;
  std::vector<std::string> labels_;
};

/// An interval end: an integer or one of the symbolic infinities.
struct End {
  enum class Kind : std::uint8_t { NegInf, Finite, PosInf };
  Kind kind = Kind::Finite;
  Int value = 0;

  static constexpr End at(Int v) { return {Kind::Finite, v}; }
  static constexpr End neg_inf() { return {Kind::NegInf, 0}; }
  static constexpr End pos_inf() { return {Kind::PosInf, 0}; }

  constexpr bool finite() const { return kind == Kind::Finite; }
  constexpr bool is_neg_inf() const { return kind == Kind::NegInf; }
  constexpr bool is_pos_inf() const { return kind == Kind::PosInf; }

  friend constexpr bool operator==(End a, End b) {
    return a.kind == b.kind && (a.kind != Kind::Finite || a.value == b.value);
  }
  friend constexpr bool operator<(End a, End b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.kind == Kind::Finite && a.value < b.value;
  }
  friend constexpr bool operator<=(End a, End b) { return !(b < a); }
};

std::string to_string(End e);

/// `lo + delta` where an infinite end absorbs any finite shift.
End shift(End e, Int delta);

struct Interval {
  End lo = End::at(0);
  End hi = End::at(0);

  bool empty() const { return hi < lo || lo.is_pos_inf() || hi.is_neg_inf(); }
  bool contains(Int v) const { return lo <= End::at(v) && End::at(v) <= hi; }
  bool bounded() const { return lo.finite() && hi.finite(); }
  bool operator==(const Interval&) const = default;
};

/// Product of integer intervals. A box is either flagged empty or contains
/// at least one lattice point.
class Box {
 public:
  Box() = default;
  explicit Box(std::vector<Interval> dims);

  static Box empty(std::size_t dim);
  static Box full(std::size_t dim);
  static Box point(const Point& p);
  static Box cube(std::size_t dim, Int radius);
  /// Finite box from per-coordinate [lo, hi] pairs.
  static Box closed(const Point& lo, const Point& hi);

  std::size_t dim() const { return dims_.size(); }
  bool is_empty() const { return empty_; }
  bool is_bounded() const;
  bool is_full() const;
  const Interval& operator[](std::size_t i) const { return dims_[i]; }
  const std::vector<Interval>& intervals() const { return dims_; }

  bool contains(std::span<const Int> p) const;
  bool operator==(const Box& o) const;

 private:
  std::vector<Interval> dims_;
  bool empty_ = true;
};

std::string to_string(const Box& b);

class SetDescriptor;

struct FinitePoints {
  std::vector<Point> points;  // sorted, deduplicated
};

struct UnionOf {
  std::vector<SetDescriptor> members;  // flat: no member is itself a union
};

/// A decidable subset of the ground space.
class SetDescriptor {
 public:
  static constexpr std::size_t kMaxUnionMembers = 64;

  SetDescriptor() : dim_(1), v_(Box::empty(1)) {}
  SetDescriptor(Box b);  // NOLINT(google-explicit-constructor)
  static SetDescriptor points(std::size_t dim, std::vector<Point> pts);
  static SetDescriptor empty(std::size_t dim) { return SetDescriptor(Box::empty(dim)); }
  /// Flattens, drops empty members, merges overlapping boxes in dimension 1.
  static SetDescriptor union_of(std::size_t dim, std::vector<SetDescriptor> members);

  std::size_t dim() const { return dim_; }
  bool is_box() const { return std::holds_alternative<Box>(v_); }
  bool is_points() const { return std::holds_alternative<FinitePoints>(v_); }
  bool is_union() const { return std::holds_alternative<UnionOf>(v_); }
  const Box& box() const { return std::get<Box>(v_); }
  const std::vector<Point>& point_list() const { return std::get<FinitePoints>(v_).points; }
  const std::vector<SetDescriptor>& members() const { return std::get<UnionOf>(v_).members; }

  bool is_empty() const;
  /// True when the described set is finite.
  bool is_bounded() const;

  bool operator==(const SetDescriptor& o) const;

 private:
  std::size_t dim_;
  std::variant<FinitePoints, Box, UnionOf> v_;
};

std::string to_string(const SetDescriptor& s);

// ---- operations -----------------------------------------------------------

bool set_membership(const SetDescriptor& s, std::span<const Int> x);
Box box_intersect(const Box& b1, const Box& b2);
/// {v : (v + source) meets target}, coordinatewise [lo_t - hi_s, hi_t - lo_s].
Box difference_box(const Box& target, const Box& source);
SetDescriptor set_translate(const SetDescriptor& s, std::span<const Int> v);
Box box_translate(const Box& b, std::span<const Int> v);
/// {y - x : x, y in s}.
SetDescriptor self_difference_set(const SetDescriptor& s);

// ---- helpers used across modules -----------------------------------------

/// Smallest box containing the set.
Box hull(const SetDescriptor& s);
bool box_subset(const Box& inner, const Box& outer);
Box minkowski_sum(const Box& a, const Box& b);
Box inflate(const Box& b, Int r);
Box negate(const Box& b);
/// Exact test that `b` is covered by the union of `cover`.
bool box_covered_by(const Box& b, std::span<const Box> cover);
/// A point of `b` outside every box of `cover`, if one exists.
std::optional<Point> uncovered_point(const Box& b, std::span<const Box> cover);
/// Some lattice point of a non-empty box, as close to the origin as possible.
Point nearest_point(const Box& b);
/// Some point of a non-empty set.
Point any_point(const SetDescriptor& s);
/// Decomposes a set into boxes (points become degenerate boxes).
std::vector<Box> as_boxes(const SetDescriptor& s);
/// ℓ∞ diameter of a bounded set; nullopt when unbounded.
std::optional<Int> linf_diameter(const Box& b);

void check_dim(std::size_t a, std::size_t b, const char* where);

// ---- fault injection (test harness only) ---------------------------------

namespace fault {

enum class Op : std::uint8_t { None, Intersect, Difference, Translate };

/// Flips `bit` of the finite end selected by (coord, lower) in the result of
/// `op`. Used by the oracle agreement tests to show that a corrupted box
/// primitive is detected.
struct Plan {
  Op op = Op::None;
  std::size_t coord = 0;
  bool lower = true;
  unsigned bit = 0;
};

Plan seeded_plan(std::uint64_t seed);

class Scope {
 public:
  explicit Scope(Plan p);
  ~Scope();
  Scope(const Scope&) = delete;
  Scope& operator=(const Scope&) = delete;

 private:
  Plan saved_;
};

const Plan& active();

}  // namespace fault

}  // namespace bcs
