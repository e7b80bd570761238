#pragma once

// Integer matrices, column Hermite normal form, and small exact polyhedral
// routines (Fourier-Motzkin projection over the rationals, recession cones,
// integer feasibility of box preimages {l : M l in C}).

#include <boost/rational.hpp>

#include <optional>
#include <span>
#include <vector>

#include "bcs/sets.hpp"

namespace bcs {

using Rational = boost::rational<Int>;

Int floor_div(Int a, Int b);
Int ceil_div(Int a, Int b);
Int floor_of(const Rational& q);
Int ceil_of(const Rational& q);

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0) {}
  /// Builds a d x k matrix from its k columns.
  static IntMatrix from_columns(std::size_t rows, const std::vector<Point>& columns);
  static IntMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Int& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  Int operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  Point apply(std::span<const Int> v) const;
  Point column(std::size_t c) const;
  std::vector<Point> columns() const;
  IntMatrix transpose() const;
  bool is_zero() const;
  bool operator==(const IntMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Int> a_;
};

/// M * U = [H | 0] with U unimodular and H in column echelon form: column j
/// has its first non-zero entry (positive) at pivot_rows[j], strictly
/// increasing in j, and entries to the left of a pivot reduced modulo it.
struct ColumnHnf {
  IntMatrix h;                          // d x rank
  IntMatrix u;                          // k x k
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_rows;  // size rank

  /// Basis of the integer kernel {l : M l = 0}.
  std::vector<Point> kernel() const;
  /// l = U[:, :rank] z.
  Point lift(std::span<const Int> z) const;
  /// |det| of the lattice when rank equals the row count, else 0.
  Int index() const;
};

ColumnHnf column_hnf(const IntMatrix& m);

// ---- rational inequality systems --------------------------------------------

/// Right-hand side `slope * m + offset`, parameterized by a chain index m.
struct ParamRhs {
  Rational slope{0};
  Rational offset{0};

  Rational at(Int m) const { return slope * m + offset; }
};

/// coef . x <= rhs
struct Inequality {
  std::vector<Rational> coef;
  ParamRhs rhs;
};

using System = std::vector<Inequality>;

/// Bounds on one variable after eliminating all others.
struct VarProjection {
  std::vector<ParamRhs> lower;        // x >= each
  std::vector<ParamRhs> upper;        // x <= each
  std::vector<ParamRhs> conditions;   // 0 <= each (feasibility side conditions)
};

/// Fourier-Motzkin projection of `sys` onto variable `var`.
VarProjection project_onto(const System& sys, std::size_t var);

/// Constant-rhs rational interval for `var`; nullopt when infeasible.
struct RationalRange {
  std::optional<Rational> lo;
  std::optional<Rational> hi;
};
std::optional<RationalRange> rational_range(const System& sys, std::size_t var);

/// A rational solution of a constant-rhs system, or nullopt if infeasible.
std::optional<std::vector<Rational>> rational_point(const System& sys, std::size_t nvars);

/// An integer solution of a constant-rhs system. Exact for any bounded
/// system and for unbounded systems in at most two variables.
std::optional<Point> integer_point(const System& sys, std::size_t nvars);

/// Inequalities on l for M l in C.
System box_preimage_system(const IntMatrix& m, const Box& c, std::span<const Int> offset = {});

// ---- box preimages -----------------------------------------------------------

/// Some integer l with M l in C.
std::optional<Point> lattice_point_in(const IntMatrix& m, const Box& c);

/// A non-zero integer direction r with M r in the recession cone of C, i.e.
/// the rational polyhedron {l : M l in C} (assumed non-empty) is unbounded
/// along r. nullopt when the cone is trivial.
std::optional<Point> recession_direction(const IntMatrix& m, const Box& c);

/// Like recession_direction, with the extra requirement w . r >= 1.
std::optional<Point> recession_along(const IntMatrix& m, const Box& c, std::span<const Int> w);

/// Range of w . l over the rational polyhedron {l : M l in C}; nullopt when empty.
std::optional<RationalRange> functional_range(const IntMatrix& m, const Box& c, std::span<const Int> w);

/// Exact bounding box of the integer points of {l : M l in C}: empty box when
/// there are none, nullopt when they are unbounded.
std::optional<Box> integer_bounding_box(const IntMatrix& m, const Box& c);

/// A non-zero integer vector orthogonal to every column of M, if any.
std::optional<Point> orthogonal_direction(const IntMatrix& m);

}  // namespace bcs
