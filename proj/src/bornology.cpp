#include "bcs/bornology.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>
#include <sstream>

namespace bcs {

namespace {

constexpr Int kNeverNonEmpty = Int{1} << 40;

bool all_slopes(const ChainEnd& e, bool (*pred)(Int)) {
  return std::all_of(e.terms.begin(), e.terms.end(), [&](const AffineTerm& t) { return pred(t.slope); });
}
bool negative(Int a) { return a < 0; }
bool positive(Int a) { return a > 0; }
bool non_positive(Int a) { return a <= 0; }
bool non_negative(Int a) { return a >= 0; }

// Eventual value of an end whose terms do not all diverge.
Int eventual_lower(const ChainEnd& e) {
  Int v = std::numeric_limits<Int>::min();
  for (const auto& t : e.terms)
    if (t.slope == 0) v = std::max(v, ceil_div(t.offset, t.divisor));
  return v;
}
Int eventual_upper(const ChainEnd& e) {
  Int v = std::numeric_limits<Int>::max();
  for (const auto& t : e.terms)
    if (t.slope == 0) v = std::min(v, floor_div(t.offset, t.divisor));
  return v;
}

// Least m >= 0 with lower(m) <= v, or nullopt when no level reaches v.
std::optional<Int> lower_reaches(const ChainEnd& e, Int v) {
  Int need = 0;
  for (const auto& t : e.terms) {
    // ceil((a m + b) / c) <= v  <=>  a m + b <= c v
    const Int rhs = t.divisor * v - t.offset;
    if (t.slope < 0) {
      need = std::max(need, ceil_div(-rhs, -t.slope));
    } else if (t.slope == 0) {
      if (rhs < 0) return std::nullopt;
    } else {
      throw Error(Error::Code::Validation, "chain lower end increases with the level");
    }
  }
  return need;
}

std::optional<Int> upper_reaches(const ChainEnd& e, Int v) {
  Int need = 0;
  for (const auto& t : e.terms) {
    // floor((a m + b) / c) >= v  <=>  a m + b >= c v
    const Int rhs = t.divisor * v - t.offset;
    if (t.slope > 0) {
      need = std::max(need, ceil_div(rhs, t.slope));
    } else if (t.slope == 0) {
      if (rhs > 0) return std::nullopt;
    } else {
      throw Error(Error::Code::Validation, "chain upper end decreases with the level");
    }
  }
  return need;
}

std::string label_set_string(const GroundSpace& space, LabelSet s) {
  std::string out = "{";
  bool first = true;
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (!(s >> i & 1)) continue;
    out += (first ? "" : ",") + space.labels()[i];
    first = false;
  }
  return out + "}";
}

ChainShape full_shape(std::size_t dim) {
  ChainShape sh;
  sh.lower.assign(dim, ChainEnd::inf());
  sh.upper.assign(dim, ChainEnd::inf());
  return sh;
}

AffineTerm to_term(const ParamRhs& p) {
  const Int d = std::lcm(p.slope.denominator(), p.offset.denominator());
  return {p.slope.numerator() * (d / p.slope.denominator()),
          p.offset.numerator() * (d / p.offset.denominator()), d};
}

void add_term(ChainEnd& e, AffineTerm t) {
  const Int g = std::gcd(std::gcd(t.slope, t.offset), t.divisor);
  if (g > 1) t = {t.slope / g, t.offset / g, t.divisor / g};
  if (std::find(e.terms.begin(), e.terms.end(), t) == e.terms.end()) e.terms.push_back(t);
}

}  // namespace

// ---- chain ends -------------------------------------------------------------

End ChainEnd::eval_lower(Int m) const {
  if (infinite) return End::neg_inf();
  Int v = std::numeric_limits<Int>::min();
  for (const auto& t : terms) v = std::max(v, ceil_div(t.slope * m + t.offset, t.divisor));
  return End::at(v);
}

End ChainEnd::eval_upper(Int m) const {
  if (infinite) return End::pos_inf();
  Int v = std::numeric_limits<Int>::max();
  for (const auto& t : terms) v = std::min(v, floor_div(t.slope * m + t.offset, t.divisor));
  return End::at(v);
}

std::string to_string(const ChainEnd& e) {
  if (e.infinite) return "inf";
  std::ostringstream out;
  if (e.terms.size() > 1) out << "[";
  for (std::size_t i = 0; i < e.terms.size(); ++i) {
    const auto& t = e.terms[i];
    if (i) out << "; ";
    if (t.divisor != 1) out << "(";
    out << t.slope << "*m" << (t.offset < 0 ? "" : "+") << t.offset;
    if (t.divisor != 1) out << ")/" << t.divisor;
  }
  if (e.terms.size() > 1) out << "]";
  return out.str();
}

Box ChainShape::level(Int m) const {
  if (m < empty_below) return Box::empty(dim());
  std::vector<Interval> iv(dim());
  for (std::size_t i = 0; i < dim(); ++i) iv[i] = {lower[i].eval_lower(m), upper[i].eval_upper(m)};
  return Box(std::move(iv));
}

ChainShape ChainShape::cubes(std::size_t dim) {
  ChainShape sh;
  sh.lower.assign(dim, ChainEnd::affine(-1, 0));
  sh.upper.assign(dim, ChainEnd::affine(1, 0));
  return sh;
}

// ---- label sets ---------------------------------------------------------------

LabelSet full_label_set(std::size_t n) { return n >= 64 ? ~LabelSet{0} : (LabelSet{1} << n) - 1; }

LabelSet to_label_set(const GroundSpace& space, const SetDescriptor& s) {
  if (!space.is_finite()) throw Error(Error::Code::Unsupported, "label sets need a finite space");
  LabelSet out = 0;
  for (std::size_t i = 0; i < space.size(); ++i) {
    const Point p{static_cast<Int>(i)};
    if (set_membership(s, p)) out |= LabelSet{1} << i;
  }
  return out;
}

SetDescriptor from_label_set(LabelSet s) {
  std::vector<Point> pts;
  for (int i = 0; i < 64; ++i)
    if (s >> i & 1) pts.push_back({i});
  return SetDescriptor::points(1, std::move(pts));
}

// ---- specs ------------------------------------------------------------------------

BornologySpec BornologySpec::maximal(GroundSpace space) {
  BornologySpec b;
  b.kind_ = Kind::Maximal;
  b.space_ = std::move(space);
  return b;
}

BornologySpec BornologySpec::finite_base(GroundSpace space, std::vector<LabelSet> base) {
  if (!space.is_finite()) throw Error(Error::Code::Unsupported, "a finite base needs a finite space");
  const LabelSet full = full_label_set(space.size());
  for (LabelSet s : base)
    if (s & ~full) throw Error(Error::Code::Validation, "base element uses an unknown label");
  BornologySpec b;
  b.kind_ = Kind::FiniteBase;
  b.space_ = std::move(space);
  b.base_ = std::move(base);
  return b;
}

BornologySpec BornologySpec::chain(ChainShape shape) {
  if (shape.lower.empty() || shape.lower.size() != shape.upper.size())
    throw Error(Error::Code::DimensionMismatch, "chain needs matching lower and upper ends");
  for (const auto* ends : {&shape.lower, &shape.upper})
    for (const auto& e : *ends)
      for (const auto& t : e.terms)
        if (t.divisor <= 0) throw Error(Error::Code::Validation, "chain term divisor must be positive");
  BornologySpec b;
  b.kind_ = Kind::Chain;
  b.space_ = GroundSpace::lattice(shape.dim());
  b.shape_ = std::move(shape);
  return b;
}

SetDescriptor BornologySpec::level(Int m) const {
  switch (kind_) {
    case Kind::Chain: return shape_.level(m);
    case Kind::Maximal:
      if (space_.is_finite()) return from_label_set(full_label_set(space_.size()));
      return Box::full(space_.dim());
    case Kind::FiniteBase: {
      LabelSet u = 0;
      for (LabelSet s : base_) u |= s;
      return from_label_set(u);
    }
  }
  return SetDescriptor::empty(dim());
}

Box BornologySpec::level_box(Int m) const { return hull(level(m)); }

std::string describe(const BornologySpec& b) {
  std::ostringstream out;
  switch (b.kind()) {
    case BornologySpec::Kind::Maximal:
      out << "maximal";
      break;
    case BornologySpec::Kind::FiniteBase:
      out << "base";
      for (LabelSet s : b.base()) out << ' ' << label_set_string(b.space(), s);
      break;
    case BornologySpec::Kind::Chain: {
      const auto& sh = b.shape();
      out << "chain";
      for (std::size_t i = 0; i < sh.dim(); ++i)
        out << " [" << (sh.lower[i].infinite ? "-inf" : to_string(sh.lower[i])) << ", "
            << to_string(sh.upper[i]) << "]";
      if (sh.empty_below > 0) out << " empty below " << sh.empty_below;
      break;
    }
  }
  return out.str();
}

// ---- axioms -----------------------------------------------------------------------

bool AxiomReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const AxiomCheck& c) { return c.passed; });
}

const AxiomCheck* AxiomReport::first_failure() const {
  for (const auto& c : checks)
    if (!c.passed) return &c;
  return nullptr;
}

AxiomReport bornology_axiom_check(const BornologySpec& b) {
  AxiomReport r;
  r.subject = describe(b);
  switch (b.kind()) {
    case BornologySpec::Kind::Maximal:
      r.checks = {{"covering", true, ""}, {"union-closed", true, ""}, {"downward-closed", true, ""}};
      break;
    case BornologySpec::Kind::FiniteBase: {
      const auto& base = b.base();
      AxiomCheck cover{"covering", true, ""};
      LabelSet u = 0;
      for (LabelSet s : base) u |= s;
      const LabelSet missing = full_label_set(b.space().size()) & ~u;
      if (missing) {
        cover.passed = false;
        cover.witness = "label " + b.space().labels()[std::countr_zero(missing)] + " lies in no base element";
      }
      AxiomCheck unions{"union-closed", true, ""};
      for (std::size_t i = 0; i < base.size() && unions.passed; ++i)
        for (std::size_t j = i + 1; j < base.size() && unions.passed; ++j) {
          const LabelSet need = base[i] | base[j];
          const bool ok = std::any_of(base.begin(), base.end(), [&](LabelSet s) { return (need & ~s) == 0; });
          if (!ok) {
            unions.passed = false;
            unions.witness = "no base element contains " + label_set_string(b.space(), base[i]) + " and " +
                             label_set_string(b.space(), base[j]);
          }
        }
      r.checks = {cover, unions, {"downward-closed", true, "generated family"}};
      break;
    }
    case BornologySpec::Kind::Chain: {
      const auto& sh = b.shape();
      AxiomCheck mono{"monotone-nonempty", true, ""};
      AxiomCheck cover{"covering", true, ""};
      for (std::size_t i = 0; i < sh.dim(); ++i) {
        if (mono.passed && !(all_slopes(sh.lower[i], non_positive) && all_slopes(sh.upper[i], non_negative))) {
          mono.passed = false;
          mono.witness = "coordinate " + std::to_string(i) + " shrinks as the level grows";
        }
      }
      const Int first = std::max<Int>(sh.empty_below, 0);
      if (mono.passed && first < kNeverNonEmpty && sh.level(first).is_empty()) {
        mono.passed = false;
        mono.witness = "level " + std::to_string(first) + " is empty";
      }
      for (std::size_t i = 0; i < sh.dim() && cover.passed; ++i) {
        Point w(sh.dim(), 0);
        if (!sh.lower[i].infinite && !all_slopes(sh.lower[i], negative)) {
          w[i] = eventual_lower(sh.lower[i]) - 1;
        } else if (!sh.upper[i].infinite && !all_slopes(sh.upper[i], positive)) {
          w[i] = eventual_upper(sh.upper[i]) + 1;
        } else {
          continue;
        }
        cover.passed = false;
        cover.witness = "point " + point_to_string(w) + " lies in no level";
      }
      if (sh.empty_below >= kNeverNonEmpty) {
        cover.passed = false;
        cover.witness = "every level is empty";
      }
      r.checks = {mono, cover, {"union-closed", true, "nested levels"}, {"downward-closed", true, "generated family"}};
      break;
    }
  }
  return r;
}

// ---- explicit families -----------------------------------------------------------

bool ExplicitFamily::contains(LabelSet s) const {
  return std::any_of(antichain.begin(), antichain.end(), [&](LabelSet a) { return (s & ~a) == 0; });
}

std::vector<LabelSet> ExplicitFamily::members() const {
  if (ground_size > 20) throw Error(Error::Code::BudgetExceeded, "too many labels to enumerate subsets");
  std::set<LabelSet> out;
  for (LabelSet a : antichain) {
    for (LabelSet s = a;; s = (s - 1) & a) {
      out.insert(s);
      if (s == 0) break;
    }
  }
  return {out.begin(), out.end()};
}

namespace {

ExplicitFamily maximal_elements(std::size_t n, std::vector<LabelSet> sets) {
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  ExplicitFamily f{n, {}};
  for (LabelSet s : sets) {
    const bool dominated =
        std::any_of(sets.begin(), sets.end(), [&](LabelSet t) { return t != s && (s & ~t) == 0; });
    if (!dominated) f.antichain.push_back(s);
  }
  return f;
}

void check_base(const GroundSpace& ground, const std::vector<LabelSet>& base) {
  if (!ground.is_finite()) throw Error(Error::Code::Unsupported, "explicit families need a finite space");
  const LabelSet full = full_label_set(ground.size());
  for (LabelSet s : base)
    if (s & ~full) throw Error(Error::Code::Validation, "base element uses an unknown label");
}

}  // namespace

ExplicitFamily generate_from_base(const GroundSpace& ground, const std::vector<LabelSet>& base) {
  check_base(ground, base);
  return maximal_elements(ground.size(), base);
}

ExplicitFamily smallest_bornology(const GroundSpace& ground, const std::vector<LabelSet>& base) {
  check_base(ground, base);
  // Singletons are bounded in any bornology on a finite set, and the union
  // closure of the base together with them is one set.
  LabelSet u = full_label_set(ground.size());
  for (LabelSet s : base) u |= s;
  return {ground.size(), {u}};
}

AxiomReport family_axiom_check(const ExplicitFamily& f) {
  AxiomReport r;
  r.subject = "explicit family";
  AxiomCheck cover{"covering", true, ""};
  for (std::size_t i = 0; i < f.ground_size && cover.passed; ++i)
    if (!f.contains(LabelSet{1} << i)) {
      cover.passed = false;
      cover.witness = "singleton " + std::to_string(i) + " is missing";
    }
  AxiomCheck unions{"union-closed", true, ""};
  for (std::size_t i = 0; i < f.antichain.size() && unions.passed; ++i)
    for (std::size_t j = i + 1; j < f.antichain.size() && unions.passed; ++j)
      if (!f.contains(f.antichain[i] | f.antichain[j])) {
        unions.passed = false;
        unions.witness = "union of maximal members " + std::to_string(i) + " and " + std::to_string(j);
      }
  r.checks = {cover, unions, {"downward-closed", true, "stored by maximal members"}};
  return r;
}

// ---- boundedness --------------------------------------------------------------------

namespace {

BoundVerdict unbounded_ray(const ChainShape& sh, const Box& member, std::size_t coord, bool down,
                           const Budget& budget) {
  BoundVerdict v;
  v.outcome = BoundVerdict::Outcome::Unbounded;
  Point x0 = nearest_point(member);
  Point r(sh.dim(), 0);
  r[coord] = down ? -1 : 1;
  for (Int k = 0; k <= budget.max_index; ++k) {
    const Box lev = sh.level(k);
    Int t = 0;
    if (!lev.is_empty()) {
      const End e = down ? lev[coord].lo : lev[coord].hi;
      t = down ? std::max<Int>(0, x0[coord] - e.value + 1) : std::max<Int>(0, e.value - x0[coord] + 1);
    }
    Point p = x0;
    p[coord] += r[coord] * t;
    v.escape.push_back(std::move(p));
  }
  v.base_point = std::move(x0);
  v.direction = std::move(r);
  v.note = "coordinate " + std::to_string(coord) + " is unbounded";
  return v;
}

BoundVerdict chain_bounded(const ChainShape& sh, const SetDescriptor& s, const Budget& budget) {
  Int k = std::max<Int>(0, sh.empty_below);
  for (const Box& member : as_boxes(s)) {
    if (member.is_empty()) continue;
    for (std::size_t i = 0; i < sh.dim(); ++i) {
      const Interval& iv = member[i];
      std::optional<Int> need;
      if (iv.lo.is_neg_inf()) {
        if (!sh.lower[i].infinite) return unbounded_ray(sh, member, i, true, budget);
      } else if (!sh.lower[i].infinite) {
        need = lower_reaches(sh.lower[i], iv.lo.value);
        if (!need) {
          BoundVerdict v;
          v.outcome = BoundVerdict::Outcome::Unbounded;
          Point p = nearest_point(member);
          p[i] = iv.lo.value;
          v.base_point = p;
          v.escape = {p};
          v.note = "point lies below every level in coordinate " + std::to_string(i);
          return v;
        }
        k = std::max(k, *need);
      }
      if (iv.hi.is_pos_inf()) {
        if (!sh.upper[i].infinite) return unbounded_ray(sh, member, i, false, budget);
      } else if (!sh.upper[i].infinite) {
        need = upper_reaches(sh.upper[i], iv.hi.value);
        if (!need) {
          BoundVerdict v;
          v.outcome = BoundVerdict::Outcome::Unbounded;
          Point p = nearest_point(member);
          p[i] = iv.hi.value;
          v.base_point = p;
          v.escape = {p};
          v.note = "point lies above every level in coordinate " + std::to_string(i);
          return v;
        }
        k = std::max(k, *need);
      }
    }
  }
  return BoundVerdict::bounded(k);
}

}  // namespace

BoundVerdict is_bounded(const BornologySpec& b, const SetDescriptor& s, const Budget& budget) {
  check_dim(b.dim(), s.dim(), "is_bounded");
  if (s.is_empty()) return BoundVerdict::bounded(0, "empty set");
  switch (b.kind()) {
    case BornologySpec::Kind::Maximal: return BoundVerdict::bounded(0);
    case BornologySpec::Kind::Chain: return chain_bounded(b.shape(), s, budget);
    case BornologySpec::Kind::FiniteBase: {
      const LabelSet ls = to_label_set(b.space(), s);
      for (std::size_t i = 0; i < b.base().size(); ++i)
        if ((ls & ~b.base()[i]) == 0) return BoundVerdict::bounded(static_cast<Int>(i), "base element");
      BoundVerdict v;
      v.outcome = BoundVerdict::Outcome::Unbounded;
      v.escape = from_label_set(ls).point_list();
      v.note = "no base element contains the set";
      return v;
    }
  }
  return BoundVerdict::inconclusive("unknown bornology kind");
}

// ---- constructions -----------------------------------------------------------------

BornologySpec product_bornology(const BornologySpec& b1, const BornologySpec& b2) {
  const bool fin1 = b1.space().is_finite(), fin2 = b2.space().is_finite();
  if (fin1 != fin2) throw Error(Error::Code::Unsupported, "product of a finite and a lattice space");
  if (!fin1) {
    if (b1.is_maximal() && b2.is_maximal()) return BornologySpec::maximal(GroundSpace::lattice(b1.dim() + b2.dim()));
    ChainShape s1 = b1.is_maximal() ? full_shape(b1.dim()) : b1.shape();
    const ChainShape s2 = b2.is_maximal() ? full_shape(b2.dim()) : b2.shape();
    s1.lower.insert(s1.lower.end(), s2.lower.begin(), s2.lower.end());
    s1.upper.insert(s1.upper.end(), s2.upper.begin(), s2.upper.end());
    s1.empty_below = std::max(s1.empty_below, s2.empty_below);
    s1.levelwise_exact = s1.levelwise_exact && s2.levelwise_exact;
    return BornologySpec::chain(std::move(s1));
  }
  const std::size_t n1 = b1.space().size(), n2 = b2.space().size();
  if (n1 * n2 > 64) throw Error(Error::Code::Unsupported, "product space has more than 64 labels");
  std::vector<std::string> labels;
  for (const auto& a : b1.space().labels())
    for (const auto& x : b2.space().labels()) labels.push_back("(" + a + "," + x + ")");
  GroundSpace space = GroundSpace::finite(std::move(labels));
  if (b1.is_maximal() && b2.is_maximal()) return BornologySpec::maximal(std::move(space));
  const auto base_of = [](const BornologySpec& b) {
    return b.is_maximal() ? std::vector<LabelSet>{full_label_set(b.space().size())} : b.base();
  };
  std::vector<LabelSet> base;
  for (LabelSet s : base_of(b1))
    for (LabelSet t : base_of(b2)) {
      LabelSet p = 0;
      for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j)
          if ((s >> i & 1) && (t >> j & 1)) p |= LabelSet{1} << (i * n2 + j);
      base.push_back(p);
    }
  return BornologySpec::finite_base(std::move(space), std::move(base));
}

MapDescriptor MapDescriptor::identity(GroundSpace space) {
  MapDescriptor f;
  f.kind = Kind::Identity;
  f.domain = space;
  f.codomain = std::move(space);
  return f;
}

MapDescriptor MapDescriptor::finite(GroundSpace domain, GroundSpace codomain, std::vector<Int> table) {
  if (!domain.is_finite() || !codomain.is_finite())
    throw Error(Error::Code::Unsupported, "finite maps need finite spaces");
  if (table.size() != domain.size()) throw Error(Error::Code::DimensionMismatch, "map table size");
  for (Int v : table)
    if (v < 0 || v >= static_cast<Int>(codomain.size()))
      throw Error(Error::Code::Validation, "map value outside the codomain");
  MapDescriptor f;
  f.kind = Kind::Finite;
  f.domain = std::move(domain);
  f.codomain = std::move(codomain);
  f.table = std::move(table);
  return f;
}

MapDescriptor MapDescriptor::orbit(Point base_point, IntMatrix matrix) {
  if (base_point.size() != matrix.rows()) throw Error(Error::Code::DimensionMismatch, "orbit base point");
  MapDescriptor f;
  f.kind = Kind::Orbit;
  f.domain = GroundSpace::lattice(matrix.cols());
  f.codomain = GroundSpace::lattice(matrix.rows());
  f.base_point = std::move(base_point);
  f.matrix = std::move(matrix);
  return f;
}

Point MapDescriptor::apply(std::span<const Int> x) const {
  switch (kind) {
    case Kind::Identity: return Point(x.begin(), x.end());
    case Kind::Finite: return {table.at(static_cast<std::size_t>(x[0]))};
    case Kind::Orbit: {
      Point y = matrix.apply(x);
      for (std::size_t i = 0; i < y.size(); ++i) y[i] += base_point[i];
      return y;
    }
  }
  return {};
}

namespace {

BornologySpec orbit_preimage(const MapDescriptor& f, const BornologySpec& b) {
  const std::size_t d = f.matrix.rows(), k = f.matrix.cols();
  check_dim(b.dim(), d, "inverse_image_bornology");
  if (b.is_maximal()) return BornologySpec::maximal(GroundSpace::lattice(k));
  const ChainShape& sh = b.shape();
  System sys;
  for (std::size_t r = 0; r < d; ++r) {
    std::vector<Rational> row(k);
    for (std::size_t j = 0; j < k; ++j) row[j] = Rational(f.matrix(r, j));
    const Rational x0(f.base_point[r]);
    if (!sh.lower[r].infinite)
      for (const auto& t : sh.lower[r].terms) {
        // x0 + M_r l >= (a m + b) / c
        std::vector<Rational> neg(k);
        for (std::size_t j = 0; j < k; ++j) neg[j] = -row[j];
        sys.push_back({neg, {Rational(-t.slope, t.divisor), x0 - Rational(t.offset, t.divisor)}});
      }
    if (!sh.upper[r].infinite)
      for (const auto& t : sh.upper[r].terms)
        sys.push_back({row, {Rational(t.slope, t.divisor), Rational(t.offset, t.divisor) - x0}});
  }
  ChainShape out;
  out.lower.assign(k, ChainEnd{});
  out.upper.assign(k, ChainEnd{});
  out.empty_below = std::max<Int>(0, sh.empty_below);
  out.levelwise_exact = k == 1 && sh.levelwise_exact;
  for (std::size_t j = 0; j < k; ++j) {
    const VarProjection p = project_onto(sys, j);
    if (p.lower.empty()) out.lower[j] = ChainEnd::inf();
    for (const auto& lo : p.lower) add_term(out.lower[j], to_term(lo));
    if (p.upper.empty()) out.upper[j] = ChainEnd::inf();
    for (const auto& hi : p.upper) add_term(out.upper[j], to_term(hi));
    for (const auto& c : p.conditions) {
      // 0 <= alpha m + beta
      if (c.slope > 0) {
        out.empty_below = std::max(out.empty_below, ceil_of(-c.offset / c.slope));
      } else if (c.slope == 0) {
        if (c.offset < 0) out.empty_below = kNeverNonEmpty;
      } else if (c.offset >= 0) {
        throw Error(Error::Code::Unsupported, "preimage levels are not nested");
      } else {
        out.empty_below = kNeverNonEmpty;
      }
    }
  }
  return BornologySpec::chain(std::move(out));
}

}  // namespace

BornologySpec inverse_image_bornology(const MapDescriptor& f, const BornologySpec& b) {
  switch (f.kind) {
    case MapDescriptor::Kind::Identity: return b;
    case MapDescriptor::Kind::Orbit: return orbit_preimage(f, b);
    case MapDescriptor::Kind::Finite: {
      if (!(b.space() == f.codomain)) throw Error(Error::Code::DimensionMismatch, "bornology is not on the codomain");
      if (b.is_maximal()) return BornologySpec::maximal(f.domain);
      std::vector<LabelSet> base;
      for (LabelSet s : b.base()) {
        LabelSet pre = 0;
        for (std::size_t i = 0; i < f.table.size(); ++i)
          if (s >> f.table[i] & 1) pre |= LabelSet{1} << i;
        if (std::find(base.begin(), base.end(), pre) == base.end()) base.push_back(pre);
      }
      return BornologySpec::finite_base(f.domain, std::move(base));
    }
  }
  return b;
}

BornologySpec image_bornology(const MapDescriptor& pi, const BornologySpec& b) {
  switch (pi.kind) {
    case MapDescriptor::Kind::Identity: return b;
    case MapDescriptor::Kind::Orbit: {
      check_dim(b.dim(), pi.matrix.cols(), "image_bornology");
      if (column_hnf(pi.matrix).rank != pi.matrix.cols())
        throw Error(Error::Code::Unsupported, "orbit map with a non-trivial kernel");
      return b;
    }
    case MapDescriptor::Kind::Finite: {
      if (!(b.space() == pi.domain)) throw Error(Error::Code::DimensionMismatch, "bornology is not on the domain");
      LabelSet hit = 0;
      for (Int v : pi.table) hit |= LabelSet{1} << v;
      const LabelSet missed = full_label_set(pi.codomain.size()) & ~hit;
      if (missed)
        throw Error(Error::Code::NotSurjective,
                    "label " + pi.codomain.labels()[std::countr_zero(missed)] + " has no preimage");
      if (b.is_maximal()) return BornologySpec::maximal(pi.codomain);
      std::vector<LabelSet> base;
      for (LabelSet s : b.base()) {
        LabelSet img = 0;
        for (std::size_t i = 0; i < pi.table.size(); ++i)
          if (s >> i & 1) img |= LabelSet{1} << pi.table[i];
        if (std::find(base.begin(), base.end(), img) == base.end()) base.push_back(img);
      }
      return BornologySpec::finite_base(pi.codomain, std::move(base));
    }
  }
  return b;
}

// ---- comparison ------------------------------------------------------------------------

Verdict bornology_leq(const BornologySpec& a, const BornologySpec& b, const Budget& budget) {
  if (!(a.space() == b.space())) throw Error(Error::Code::DimensionMismatch, "bornologies on different spaces");
  const auto refute_at = [&](Int m, const BoundVerdict& v) {
    Verdict r = Verdict::refuted("level " + std::to_string(m) + " is not bounded");
    r.add("level", std::to_string(m)).add("bound", to_string(v));
    return r;
  };
  if (b.is_maximal()) return Verdict::confirmed("target is maximal");
  if (a.space().is_finite() || a.is_maximal()) {
    std::vector<SetDescriptor> sets;
    if (a.is_finite_base())
      for (LabelSet s : a.base()) sets.push_back(from_label_set(s));
    else
      sets.push_back(a.level(0));
    for (std::size_t i = 0; i < sets.size(); ++i) {
      const BoundVerdict v = is_bounded(b, sets[i], budget);
      if (!v.is_bounded()) return refute_at(static_cast<Int>(i), v);
    }
    return Verdict::confirmed("every generator is bounded");
  }
  const ChainShape& sa = a.shape();
  const ChainShape& sb = b.shape();
  for (Int m = 0; m <= budget.max_index; ++m) {
    const BoundVerdict v = is_bounded(b, sa.level(m), budget);
    if (!v.is_bounded()) return refute_at(m, v);
  }
  // Beyond the checked levels only the asymptotics of the ends matter.
  for (std::size_t i = 0; i < sa.dim(); ++i) {
    for (int side = 0; side < 2; ++side) {
      const bool low = side == 0;
      const ChainEnd& ea = low ? sa.lower[i] : sa.upper[i];
      const ChainEnd& eb = low ? sb.lower[i] : sb.upper[i];
      if (ea.infinite || eb.infinite) continue;  // infinite in a was caught at level 0
      const bool a_diverges = all_slopes(ea, low ? negative : positive);
      const bool b_diverges = all_slopes(eb, low ? negative : positive);
      if (b_diverges) continue;
      const Int cb = low ? eventual_lower(eb) : eventual_upper(eb);
      if (!a_diverges) {
        const Int ca = low ? eventual_lower(ea) : eventual_upper(ea);
        if (low ? ca >= cb : ca <= cb) continue;
      }
      for (Int m = std::max<Int>(1, sa.empty_below);; m *= 2) {
        if (m >= kNeverNonEmpty) break;
        const Box lev = sa.level(m);
        if (lev.is_empty()) continue;
        const bool escapes = low ? lev[i].lo.value < cb : lev[i].hi.value > cb;
        if (escapes) return refute_at(m, is_bounded(b, lev, budget));
      }
    }
  }
  return Verdict::confirmed("every level is bounded");
}

}  // namespace bcs
