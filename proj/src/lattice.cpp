#include "bcs/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

namespace bcs {

Int floor_div(Int a, Int b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

Int ceil_div(Int a, Int b) { return -floor_div(-a, b); }

Int floor_of(const Rational& q) { return floor_div(q.numerator(), q.denominator()); }
Int ceil_of(const Rational& q) { return ceil_div(q.numerator(), q.denominator()); }

// ---- IntMatrix ---------------------------------------------------------------

IntMatrix IntMatrix::from_columns(std::size_t rows, const std::vector<Point>& columns) {
  IntMatrix m(rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    check_dim(columns[c].size(), rows, "IntMatrix::from_columns");
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = columns[c][r];
  }
  return m;
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Point IntMatrix::apply(std::span<const Int> v) const {
  check_dim(v.size(), cols_, "IntMatrix::apply");
  Point out(rows_, 0);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out[r] += (*this)(r, c) * v[c];
  return out;
}

Point IntMatrix::column(std::size_t c) const {
  Point out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

std::vector<Point> IntMatrix::columns() const {
  std::vector<Point> out;
  for (std::size_t c = 0; c < cols_; ++c) out.push_back(column(c));
  return out;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

bool IntMatrix::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](Int v) { return v == 0; });
}

// ---- column HNF --------------------------------------------------------------

namespace {

struct Egcd {
  Int g, s, t;
};

Egcd egcd(Int a, Int b) {
  Int old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    Int q = old_r / r;
    Int tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

// (col_p, col_j) <- (s col_p + t col_j, -b/g col_p + a/g col_j)
void combine_columns(IntMatrix& m, std::size_t p, std::size_t j, Int s, Int t, Int x, Int y) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Int cp = m(r, p), cj = m(r, j);
    m(r, p) = s * cp + t * cj;
    m(r, j) = x * cp + y * cj;
  }
}

void add_column_multiple(IntMatrix& m, std::size_t dst, std::size_t src, Int factor) {
  for (std::size_t r = 0; r < m.rows(); ++r) m(r, dst) += factor * m(r, src);
}

void negate_column(IntMatrix& m, std::size_t c) {
  for (std::size_t r = 0; r < m.rows(); ++r) m(r, c) = -m(r, c);
}

}  // namespace

ColumnHnf column_hnf(const IntMatrix& m) {
  IntMatrix a = m;
  IntMatrix u = IntMatrix::identity(m.cols());
  std::size_t p = 0;
  ColumnHnf out;
  for (std::size_t r = 0; r < a.rows() && p < a.cols(); ++r) {
    for (std::size_t j = p + 1; j < a.cols(); ++j) {
      Int x = a(r, p), y = a(r, j);
      if (y == 0) continue;
      auto [g, s, t] = egcd(x, y);
      combine_columns(a, p, j, s, t, -y / g, x / g);
      combine_columns(u, p, j, s, t, -y / g, x / g);
    }
    if (a(r, p) == 0) continue;
    if (a(r, p) < 0) {
      negate_column(a, p);
      negate_column(u, p);
    }
    for (std::size_t j = 0; j < p; ++j) {
      Int q = floor_div(a(r, j), a(r, p));
      if (q != 0) {
        add_column_multiple(a, j, p, -q);
        add_column_multiple(u, j, p, -q);
      }
    }
    out.pivot_rows.push_back(r);
    ++p;
  }
  out.rank = p;
  out.h = IntMatrix(a.rows(), p);
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < p; ++c) out.h(r, c) = a(r, c);
  out.u = u;
  return out;
}

std::vector<Point> ColumnHnf::kernel() const {
  std::vector<Point> out;
  for (std::size_t c = rank; c < u.cols(); ++c) out.push_back(u.column(c));
  return out;
}

Point ColumnHnf::lift(std::span<const Int> z) const {
  check_dim(z.size(), rank, "ColumnHnf::lift");
  Point l(u.rows(), 0);
  for (std::size_t c = 0; c < rank; ++c)
    for (std::size_t r = 0; r < u.rows(); ++r) l[r] += u(r, c) * z[c];
  return l;
}

Int ColumnHnf::index() const {
  if (rank != h.rows()) return 0;
  Int det = 1;
  for (std::size_t c = 0; c < rank; ++c) det *= h(pivot_rows[c], c);
  return det;
}

// ---- Fourier-Motzkin -----------------------------------------------------------

namespace {

System eliminate(const System& sys, std::size_t var) {
  System out, pos, neg;
  for (const auto& row : sys) {
    if (row.coef[var] > 0) pos.push_back(row);
    else if (row.coef[var] < 0) neg.push_back(row);
    else out.push_back(row);
  }
  for (const auto& p : pos)
    for (const auto& n : neg) {
      Rational wp = -n.coef[var];  // > 0
      Rational wn = p.coef[var];   // > 0
      Inequality c;
      c.coef.resize(p.coef.size());
      for (std::size_t i = 0; i < p.coef.size(); ++i) c.coef[i] = wp * p.coef[i] + wn * n.coef[i];
      c.coef[var] = 0;
      c.rhs.slope = wp * p.rhs.slope + wn * n.rhs.slope;
      c.rhs.offset = wp * p.rhs.offset + wn * n.rhs.offset;
      out.push_back(std::move(c));
    }
  return out;
}

System substitute(const System& sys, std::size_t var, const Rational& value) {
  System out = sys;
  for (auto& row : out) {
    row.rhs.offset -= row.coef[var] * value;
    row.coef[var] = 0;
  }
  return out;
}

}  // namespace

VarProjection project_onto(const System& sys, std::size_t var) {
  System cur = sys;
  const std::size_t n = sys.empty() ? 0 : sys.front().coef.size();
  for (std::size_t v = 0; v < n; ++v)
    if (v != var) cur = eliminate(cur, v);
  VarProjection out;
  for (const auto& row : cur) {
    const Rational c = n ? row.coef[var] : Rational(0);
    if (c > 0) out.upper.push_back({row.rhs.slope / c, row.rhs.offset / c});
    else if (c < 0) out.lower.push_back({row.rhs.slope / c, row.rhs.offset / c});
    else out.conditions.push_back(row.rhs);
  }
  return out;
}

std::optional<RationalRange> rational_range(const System& sys, std::size_t var) {
  VarProjection p = project_onto(sys, var);
  for (const auto& c : p.conditions)
    if (c.at(0) < 0) return std::nullopt;
  RationalRange r;
  for (const auto& l : p.lower)
    if (!r.lo || *r.lo < l.at(0)) r.lo = l.at(0);
  for (const auto& u : p.upper)
    if (!r.hi || u.at(0) < *r.hi) r.hi = u.at(0);
  if (r.lo && r.hi && *r.hi < *r.lo) return std::nullopt;
  return r;
}

namespace {

bool trivially_feasible(const System& sys) {
  return std::all_of(sys.begin(), sys.end(), [](const Inequality& row) { return row.rhs.at(0) >= 0; });
}

Rational pick_in(const RationalRange& r) {
  if ((!r.lo || *r.lo <= 0) && (!r.hi || *r.hi >= 0)) return Rational(0);
  if (r.lo && *r.lo > 0) return *r.lo;
  return *r.hi;
}

// Integers of [lo, hi] ordered by distance from zero.
std::vector<Int> ordered_integers(Int lo, Int hi) {
  std::vector<Int> out;
  if (lo > hi) return out;
  out.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (Int v = lo; v <= hi; ++v) out.push_back(v);
  std::stable_sort(out.begin(), out.end(), [](Int a, Int b) {
    Int aa = a < 0 ? -a : a, bb = b < 0 ? -b : b;
    return aa != bb ? aa < bb : a > b;
  });
  return out;
}

Rational abs_q(const Rational& q) { return q < 0 ? -q : q; }

// For a two-variable system with var 0 unbounded: beyond the returned radius
// the integer feasibility of var 1 is periodic or monotone in var 0.
Int stabilization_radius(const System& sys) {
  struct Line {
    Rational base, rate;  // y boundary = base - rate * t
  };
  std::vector<Line> lines;
  Int period = 1;
  for (const auto& row : sys) {
    if (row.coef[1].numerator() == 0) continue;
    Line l{row.rhs.offset / row.coef[1], row.coef[0] / row.coef[1]};
    period = std::lcm(period, l.rate.denominator());
    lines.push_back(l);
  }
  Rational radius(0);
  for (std::size_t a = 0; a < lines.size(); ++a)
    for (std::size_t b = a + 1; b < lines.size(); ++b) {
      Rational slope = lines[a].rate - lines[b].rate;
      if (slope.numerator() == 0) continue;
      Rational k = lines[a].base - lines[b].base;
      for (int delta = -1; delta <= 1; ++delta) {
        Rational t = (k - delta) / slope;
        radius = std::max(radius, abs_q(t));
      }
    }
  return ceil_of(radius) + 2 * period + 2;
}

}  // namespace

std::optional<std::vector<Rational>> rational_point(const System& sys, std::size_t nvars) {
  System cur = sys;
  std::vector<Rational> x(nvars);
  for (std::size_t v = 0; v < nvars; ++v) {
    auto r = rational_range(cur, v);
    if (!r) return std::nullopt;
    x[v] = pick_in(*r);
    cur = substitute(cur, v, x[v]);
  }
  if (!trivially_feasible(cur)) return std::nullopt;
  return x;
}

namespace {

std::optional<Point> integer_point_from(const System& sys, std::size_t first, std::size_t nvars) {
  if (first == nvars) {
    if (trivially_feasible(sys)) return Point{};
    return std::nullopt;
  }
  auto r = rational_range(sys, first);
  if (!r) return std::nullopt;
  const std::size_t remaining = nvars - first;
  Int lo, hi;
  if (r->lo && r->hi) {
    lo = ceil_of(*r->lo);
    hi = floor_of(*r->hi);
  } else if (remaining == 1) {
    Rational q = pick_in(*r);
    Int v = r->lo ? ceil_of(q) : floor_of(q);
    auto rest = integer_point_from(substitute(sys, first, Rational(v)), first + 1, nvars);
    if (!rest) return std::nullopt;
    rest->insert(rest->begin(), v);
    return rest;
  } else if (remaining == 2) {
    // Re-index the two live variables as (0, 1) for the radius computation.
    System two;
    for (const auto& row : sys) two.push_back({{row.coef[first], row.coef[first + 1]}, row.rhs});
    // Past the radius, measured from the finite end when there is one, the
    // pattern repeats, so one radius more is enough.
    Int radius = stabilization_radius(two);
    if (r->lo) {
      lo = ceil_of(*r->lo);
      hi = std::max(lo, radius) + radius;
    } else if (r->hi) {
      hi = floor_of(*r->hi);
      lo = std::min(hi, -radius) - radius;
    } else {
      lo = -radius;
      hi = radius;
    }
  } else {
    throw Error(Error::Code::Unsupported, "integer_point: unbounded system in more than two variables");
  }
  for (Int v : ordered_integers(lo, hi)) {
    auto rest = integer_point_from(substitute(sys, first, Rational(v)), first + 1, nvars);
    if (rest) {
      rest->insert(rest->begin(), v);
      return rest;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Point> integer_point(const System& sys, std::size_t nvars) {
  return integer_point_from(sys, 0, nvars);
}

System box_preimage_system(const IntMatrix& m, const Box& c, std::span<const Int> offset) {
  check_dim(c.dim(), m.rows(), "box_preimage_system");
  System sys;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const Int x0 = offset.empty() ? 0 : offset[r];
    std::vector<Rational> row(m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j) row[j] = m(r, j);
    if (c[r].hi.finite()) sys.push_back({row, {0, Rational(c[r].hi.value - x0)}});
    if (c[r].lo.finite()) {
      auto neg = row;
      for (auto& v : neg) v = -v;
      sys.push_back({neg, {0, Rational(x0 - c[r].lo.value)}});
    }
  }
  return sys;
}

namespace {

// Integer l with M l in C and `extra` (inequalities on l) satisfied.
std::optional<Point> lattice_point_with(const IntMatrix& m, const Box& c, const System& extra) {
  if (c.is_empty()) return std::nullopt;
  ColumnHnf hnf = column_hnf(m);
  System sys = box_preimage_system(hnf.h, c);
  for (const auto& row : extra) {
    Inequality z;
    z.coef.assign(hnf.rank, Rational(0));
    for (std::size_t j = 0; j < hnf.rank; ++j)
      for (std::size_t i = 0; i < m.cols(); ++i) z.coef[j] += row.coef[i] * hnf.u(i, j);
    z.rhs = row.rhs;
    sys.push_back(std::move(z));
  }
  auto z = integer_point(sys, hnf.rank);
  if (!z) return std::nullopt;
  return hnf.lift(*z);
}

}  // namespace

std::optional<Point> lattice_point_in(const IntMatrix& m, const Box& c) {
  return lattice_point_with(m, c, {});
}

namespace {

System recession_cone(const IntMatrix& m, const Box& c) {
  const std::size_t k = m.cols();
  System cone;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    std::vector<Rational> row(k);
    for (std::size_t j = 0; j < k; ++j) row[j] = m(r, j);
    if (c[r].hi.finite()) cone.push_back({row, {}});
    if (c[r].lo.finite()) {
      for (auto& v : row) v = -v;
      cone.push_back({row, {}});
    }
  }
  return cone;
}

// Primitive integer multiple of a rational cone point.
Point primitive(const std::vector<Rational>& x) {
  Int den = 1;
  for (const auto& q : x) den = std::lcm(den, q.denominator());
  Point r(x.size());
  Int g = 0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    r[j] = x[j].numerator() * (den / x[j].denominator());
    g = std::gcd(g, r[j] < 0 ? -r[j] : r[j]);
  }
  if (g > 1)
    for (auto& v : r) v /= g;
  return r;
}

std::optional<Point> cone_point_with(const System& cone, std::span<const Rational> w) {
  System sys = cone;
  std::vector<Rational> row(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) row[j] = -w[j];
  sys.push_back({row, {0, Rational(-1)}});
  auto x = rational_point(sys, w.size());
  if (!x) return std::nullopt;
  return primitive(*x);
}

}  // namespace

std::optional<Point> recession_direction(const IntMatrix& m, const Box& c) {
  check_dim(c.dim(), m.rows(), "recession_direction");
  const std::size_t k = m.cols();
  const System cone = recession_cone(m, c);
  for (std::size_t i = 0; i < k; ++i)
    for (int sign : {1, -1}) {
      std::vector<Rational> w(k, Rational(0));
      w[i] = sign;
      if (auto r = cone_point_with(cone, w)) return r;
    }
  return std::nullopt;
}

std::optional<Point> recession_along(const IntMatrix& m, const Box& c, std::span<const Int> w) {
  check_dim(c.dim(), m.rows(), "recession_along");
  std::vector<Rational> wq(w.begin(), w.end());
  return cone_point_with(recession_cone(m, c), wq);
}

std::optional<RationalRange> functional_range(const IntMatrix& m, const Box& c, std::span<const Int> w) {
  const std::size_t k = m.cols();
  System sys = box_preimage_system(m, c);
  for (auto& row : sys) row.coef.push_back(Rational(0));
  // s = w . l as an extra variable
  std::vector<Rational> a(k + 1), b(k + 1);
  for (std::size_t j = 0; j < k; ++j) {
    a[j] = -w[j];
    b[j] = w[j];
  }
  a[k] = 1;
  b[k] = -1;
  sys.push_back({a, {}});
  sys.push_back({b, {}});
  return rational_range(sys, k);
}

std::optional<Box> integer_bounding_box(const IntMatrix& m, const Box& c) {
  const std::size_t k = m.cols();
  if (!lattice_point_in(m, c)) return Box::empty(k);
  if (recession_direction(m, c)) return std::nullopt;
  System base = box_preimage_system(m, c);
  Point lo(k), hi(k);
  for (std::size_t i = 0; i < k; ++i) {
    auto r = rational_range(base, i);
    Int a = ceil_of(*r->lo), b = floor_of(*r->hi);
    auto fixed = [&](Int v) {
      System extra;
      std::vector<Rational> row(k, Rational(0));
      row[i] = 1;
      extra.push_back({row, {0, Rational(v)}});
      row[i] = -1;
      extra.push_back({row, {0, Rational(-v)}});
      return lattice_point_with(m, c, extra).has_value();
    };
    while (a <= b && !fixed(a)) ++a;
    while (b >= a && !fixed(b)) --b;
    lo[i] = a;
    hi[i] = b;
  }
  return Box::closed(lo, hi);
}

std::optional<Point> orthogonal_direction(const IntMatrix& m) {
  auto ker = column_hnf(m.transpose()).kernel();
  if (ker.empty()) return std::nullopt;
  return ker.front();
}

}  // namespace bcs
