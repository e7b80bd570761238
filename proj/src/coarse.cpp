#include "bcs/coarse.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <set>
#include <sstream>

namespace bcs {

// ---- relations ----------------------------------------------------------------

Relation Relation::empty(std::size_t n) {
  if (n > 64) throw Error(Error::Code::Unsupported, "relations are limited to 64 labels");
  return {n, std::vector<LabelSet>(n, 0)};
}

Relation Relation::diag(std::size_t n) {
  Relation r = empty(n);
  for (std::size_t i = 0; i < n; ++i) r.set(i, i);
  return r;
}

Relation Relation::full(std::size_t n) {
  Relation r = empty(n);
  for (auto& row : r.rows) row = full_label_set(n);
  return r;
}

Relation Relation::square(std::size_t n, LabelSet b) {
  Relation r = empty(n);
  for (std::size_t i = 0; i < n; ++i)
    if (b >> i & 1) r.rows[i] = b;
  return r;
}

Relation Relation::transpose() const {
  Relation t = empty(n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (has(x, y)) t.set(y, x);
  return t;
}

Relation Relation::compose(const Relation& other) const {
  Relation c = empty(n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (has(x, y)) c.rows[x] |= other.rows[y];
  return c;
}

Relation Relation::operator|(const Relation& o) const {
  Relation u = *this;
  for (std::size_t x = 0; x < n; ++x) u.rows[x] |= o.rows[x];
  return u;
}

bool Relation::subset_of(const Relation& o) const {
  for (std::size_t x = 0; x < n; ++x)
    if (rows[x] & ~o.rows[x]) return false;
  return true;
}

std::size_t Relation::count() const {
  std::size_t c = 0;
  for (LabelSet r : rows) c += static_cast<std::size_t>(std::popcount(r));
  return c;
}

const char* to_string(Truth t) {
  switch (t) {
    case Truth::False: return "false";
    case Truth::True: return "true";
    case Truth::Unknown: return "unknown";
  }
  return "?";
}

// ---- descriptors ----------------------------------------------------------------------

Entourage Entourage::diag(GroundSpace space) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Diag;
  n->space = std::move(space);
  return Entourage(std::move(n));
}

Entourage Entourage::finite_rel(GroundSpace space, std::vector<PointPair> pairs) {
  for (const auto& [x, y] : pairs) {
    check_dim(x.size(), space.dim(), "finite_rel");
    check_dim(y.size(), space.dim(), "finite_rel");
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  auto n = std::make_shared<Node>();
  n->kind = Kind::FiniteRel;
  n->space = std::move(space);
  n->pairs = std::move(pairs);
  return Entourage(std::move(n));
}

Entourage Entourage::metric_ball(std::size_t dim, Int radius) {
  if (radius < 0) throw Error(Error::Code::Validation, "metric ball radius must be non-negative");
  auto n = std::make_shared<Node>();
  n->kind = Kind::MetricBall;
  n->space = GroundSpace::lattice(dim);
  n->radius = radius;
  return Entourage(std::move(n));
}

Entourage Entourage::product(GroundSpace space, SetDescriptor b) {
  check_dim(b.dim(), space.dim(), "product entourage");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Product;
  n->space = std::move(space);
  n->set = std::move(b);
  return Entourage(std::move(n));
}

Entourage Entourage::orbit_pair(ActionPtr action, SetDescriptor b) {
  check_dim(b.dim(), action->dim(), "orbit_pair");
  auto n = std::make_shared<Node>();
  n->kind = Kind::OrbitPair;
  n->space = action->space();
  n->set = std::move(b);
  n->action = std::move(action);
  return Entourage(std::move(n));
}

Entourage Entourage::group_right(std::shared_ptr<const GroupSpec> group, SetDescriptor d) {
  check_dim(d.dim(), group->space().dim(), "group_right");
  auto n = std::make_shared<Node>();
  n->kind = Kind::GroupRight;
  n->space = group->space();
  n->set = std::move(d);
  n->group = std::move(group);
  return Entourage(std::move(n));
}

Entourage Entourage::transpose(Entourage e) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Transpose;
  n->space = e.space();
  n->approximate = e.approximate();
  n->children = {std::move(e)};
  return Entourage(std::move(n));
}

Entourage Entourage::union_of(Entourage a, Entourage b) {
  if (!(a.space() == b.space())) throw Error(Error::Code::DimensionMismatch, "union of entourages on different spaces");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Union;
  n->space = a.space();
  n->approximate = a.approximate() || b.approximate();
  n->children = {std::move(a), std::move(b)};
  return Entourage(std::move(n));
}

Entourage Entourage::compose(Entourage a, Entourage b) {
  if (!(a.space() == b.space())) throw Error(Error::Code::DimensionMismatch, "composition on different spaces");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Compose;
  n->space = a.space();
  n->approximate = a.approximate() || b.approximate();
  n->children = {std::move(a), std::move(b)};
  return Entourage(std::move(n));
}

Entourage Entourage::mark_approximate() const {
  auto n = std::make_shared<Node>(*node_);
  n->approximate = true;
  return Entourage(std::move(n));
}

std::string describe(const Entourage& e) {
  std::ostringstream out;
  switch (e.kind()) {
    case Entourage::Kind::Diag: out << "Diag"; break;
    case Entourage::Kind::FiniteRel: out << "FiniteRel(" << e.pairs().size() << " pairs)"; break;
    case Entourage::Kind::MetricBall: out << "MetricBall(" << e.radius() << ")"; break;
    case Entourage::Kind::Product: out << "Product(" << to_string(e.set()) << ")"; break;
    case Entourage::Kind::OrbitPair: out << "OrbitPair(" << to_string(e.set()) << ")"; break;
    case Entourage::Kind::GroupRight: out << "GroupRight(" << to_string(e.set()) << ")"; break;
    case Entourage::Kind::Transpose: out << "Transpose(" << describe(e.left()) << ")"; break;
    case Entourage::Kind::Union: out << "Union(" << describe(e.left()) << ", " << describe(e.right()) << ")"; break;
    case Entourage::Kind::Compose:
      out << "Compose(" << describe(e.left()) << ", " << describe(e.right()) << ")";
      break;
  }
  if (e.approximate()) out << "~";
  return out.str();
}

// ---- shared helpers ------------------------------------------------------------------

namespace {

Int linf(const Point& x, const Point& y) {
  Int d = 0;
  for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, x[i] > y[i] ? x[i] - y[i] : y[i] - x[i]);
  return d;
}

Point add(const Point& x, const Point& y) {
  Point z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] + y[i];
  return z;
}

Point neg(const Point& x) {
  Point z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = -x[i];
  return z;
}

// Visits the lattice points of a bounded box in lexicographic order; stops
// early when fn returns false.
bool each_point(const Box& b, const std::function<bool(const Point&)>& fn) {
  if (b.is_empty()) return true;
  Point p(b.dim());
  for (std::size_t i = 0; i < b.dim(); ++i) p[i] = b[i].lo.value;
  while (true) {
    if (!fn(p)) return false;
    std::size_t i = b.dim();
    while (i > 0) {
      --i;
      if (p[i] < b[i].hi.value) {
        ++p[i];
        for (std::size_t j = i + 1; j < b.dim(); ++j) p[j] = b[j].lo.value;
        break;
      }
      if (i == 0) return true;
    }
  }
}

std::optional<Int> point_count(const Box& b, Int cap) {
  if (b.is_empty()) return 0;
  if (!b.is_bounded()) return std::nullopt;
  Int c = 1;
  for (const auto& iv : b.intervals()) {
    c *= iv.hi.value - iv.lo.value + 1;
    if (c > cap) return std::nullopt;
  }
  return c;
}

bool at_most_one_point(const Box& b) {
  auto c = point_count(b, 1);
  return c.has_value();
}

// A point of b other than p (b has at least two points).
Point second_point(const Box& b, const Point& p) {
  for (std::size_t i = 0; i < b.dim(); ++i) {
    Point q = p;
    q[i] = p[i] + 1;
    if (b.contains(q)) return q;
    q[i] = p[i] - 1;
    if (b.contains(q)) return q;
  }
  throw Error(Error::Code::EmptyInput, "second_point: box has one point");
}

// Pair (x, x + v) inside B x B for v in B - B.
PointPair pair_with_difference(const Box& b, const Point& v) {
  const Box both = box_intersect(b, box_translate(b, neg(v)));
  const Point x = nearest_point(both);
  return {x, add(x, v)};
}

Point point_outside(const Box& b) {
  Point x = b.is_empty() ? Point(b.dim(), 0) : nearest_point(b);
  if (b.is_empty()) return x;
  for (std::size_t i = 0; i < b.dim(); ++i) {
    if (b[i].hi.finite()) {
      x[i] = b[i].hi.value + 1;
      return x;
    }
    if (b[i].lo.finite()) {
      x[i] = b[i].lo.value - 1;
      return x;
    }
  }
  throw Error(Error::Code::Unsupported, "point_outside: box is the whole lattice");
}

Truth truth_of(bool b) { return b ? Truth::True : Truth::False; }

Int window_radius(std::size_t dim, Int window) {
  if (dim <= 1) return window;
  if (dim == 2) return std::min<Int>(window, 32);
  return std::min<Int>(window, 8);
}

bool same_rule(const ActionInstance& a, const ActionInstance& b) {
  if (!a.is_exact_lattice() || !b.is_exact_lattice()) return &a == &b;
  return a.matrix() == b.matrix();
}

}  // namespace

// ---- membership ----------------------------------------------------------------------------

namespace {

Membership orbit_membership(const Entourage& e, const Point& x, const Point& y, const Budget& budget) {
  if (x == y) return {Truth::True, std::nullopt};
  const ActionInstance& a = *e.action();
  const SetDescriptor& b = e.set();
  if (a.is_exact_lattice()) {
    const auto boxes = as_boxes(b);
    for (const Box& bi : boxes)
      for (const Box& bj : boxes) {
        // x - M l in B_i and y - M l in B_j
        const Box c = box_intersect(box_translate(negate(bi), x), box_translate(negate(bj), y));
        if (c.is_empty()) continue;
        if (auto l = lattice_point_in(a.matrix(), c)) return {Truth::True, l};
      }
    return {Truth::False, std::nullopt};
  }
  if (a.is_permutation()) {
    const auto& g = a.group();
    for (std::size_t l = 0; l < g.table().order(); ++l) {
      const Point li = g.inverse(Point{static_cast<Int>(l)});
      if (set_membership(b, a.act(li, x)) && set_membership(b, a.act(li, y)))
        return {Truth::True, Point{static_cast<Int>(l)}};
    }
    return {Truth::False, std::nullopt};
  }
  for (Int n = 0; n <= budget.window; ++n)
    for (Int s : {n, -n}) {
      const Point li{-s};
      if (set_membership(b, a.act(li, x)) && set_membership(b, a.act(li, y))) return {Truth::True, Point{s}};
    }
  return {Truth::Unknown, std::nullopt};
}

Membership group_right_membership(const Entourage& e, const Point& l, const Point& h) {
  const GroupSpec& g = *e.group();
  return {truth_of(set_membership(e.set(), g.multiply(g.inverse(l), h))), std::nullopt};
}

}  // namespace

Membership entourage_membership(const Entourage& e, const Point& x, const Point& y, const Budget& budget) {
  check_dim(x.size(), e.space().dim(), "entourage_membership");
  check_dim(y.size(), e.space().dim(), "entourage_membership");
  switch (e.kind()) {
    case Entourage::Kind::Diag: return {truth_of(x == y), std::nullopt};
    case Entourage::Kind::FiniteRel:
      return {truth_of(std::binary_search(e.pairs().begin(), e.pairs().end(), PointPair{x, y})), std::nullopt};
    case Entourage::Kind::MetricBall: return {truth_of(linf(x, y) <= e.radius()), std::nullopt};
    case Entourage::Kind::Product:
      return {truth_of(set_membership(e.set(), x) && set_membership(e.set(), y)), std::nullopt};
    case Entourage::Kind::OrbitPair: return orbit_membership(e, x, y, budget);
    case Entourage::Kind::GroupRight: return group_right_membership(e, x, y);
    case Entourage::Kind::Transpose: return entourage_membership(e.left(), y, x, budget);
    case Entourage::Kind::Union: {
      const Membership a = entourage_membership(e.left(), x, y, budget);
      if (a.yes()) return a;
      const Membership b = entourage_membership(e.right(), x, y, budget);
      if (b.yes()) return b;
      return {a.no() && b.no() ? Truth::False : Truth::Unknown, std::nullopt};
    }
    case Entourage::Kind::Compose: {
      const Entourage r = entourage_rewrite(e);
      if (r.kind() != Entourage::Kind::Compose && !r.approximate()) return entourage_membership(r, x, y, budget);
      // A superset that excludes the pair settles it.
      if (r.kind() != Entourage::Kind::Compose && entourage_membership(r, x, y, budget).no())
        return {Truth::False, std::nullopt};
      for (const Point& m : {x, y})
        if (entourage_membership(e.left(), x, m, budget).yes() && entourage_membership(e.right(), m, y, budget).yes())
          return {Truth::True, m};
      // Middle points: all of a finite space, or E1[x] when it is listed exactly.
      const Neighborhood mid = neighborhood(e.left(), SetDescriptor::points(x.size(), {x}), budget);
      std::vector<Point> candidates;
      if (mid.set.is_points()) {
        candidates = mid.set.point_list();
      } else {
        for (const Box& b : as_boxes(mid.set)) {
          if (!point_count(b, 1 << 14)) return {Truth::Unknown, std::nullopt};
          each_point(b, [&](const Point& p) {
            candidates.push_back(p);
            return true;
          });
        }
      }
      for (const Point& m : candidates) {
        const Membership second = entourage_membership(e.right(), m, y, budget);
        if (second.yes()) return {Truth::True, m};
      }
      if (!mid.exact) return {Truth::Unknown, std::nullopt};
      return {Truth::False, std::nullopt};
    }
  }
  return {Truth::Unknown, std::nullopt};
}

// ---- rewrites ------------------------------------------------------------------------------

namespace {

bool symmetric_kind(Entourage::Kind k) {
  return k == Entourage::Kind::Diag || k == Entourage::Kind::MetricBall || k == Entourage::Kind::OrbitPair ||
         k == Entourage::Kind::Product;
}

// Hull of (L_{B1,B2} . B1) u B1 u B2 when the transporter is bounded.
std::optional<Box> composition_bound(const ActionInstance& a, const Box& b1, const Box& b2) {
  if (b1.is_empty() || b2.is_empty()) return Box::empty(a.dim());
  const Box c = difference_box(b2, b1);
  const auto t = integer_bounding_box(a.matrix(), c);
  if (!t) return std::nullopt;
  Box h = hull(SetDescriptor::union_of(a.dim(), {b1, b2}));
  if (!t->is_empty()) h = hull(SetDescriptor::union_of(a.dim(), {h, minkowski_sum(image_hull(a.matrix(), *t), b1)}));
  return h;
}

}  // namespace

Entourage entourage_rewrite(const Entourage& e) {
  using K = Entourage::Kind;
  switch (e.kind()) {
    case K::Transpose: {
      const Entourage inner = entourage_rewrite(e.left());
      if (symmetric_kind(inner.kind())) return inner;
      if (inner.kind() == K::Transpose) return inner.left();
      if (inner.kind() == K::GroupRight && !inner.group()->is_finite() && inner.set().is_box())
        return Entourage::group_right(inner.group(), negate(inner.set().box()));
      return Entourage::transpose(inner);
    }
    case K::Union: return Entourage::union_of(entourage_rewrite(e.left()), entourage_rewrite(e.right()));
    case K::Compose: {
      const Entourage l = entourage_rewrite(e.left());
      const Entourage r = entourage_rewrite(e.right());
      if (l.kind() == K::Diag) return r;
      if (r.kind() == K::Diag) return l;
      if (l.kind() == K::MetricBall && r.kind() == K::MetricBall)
        return Entourage::metric_ball(l.space().dim(), l.radius() + r.radius());
      if (l.kind() == K::OrbitPair && r.kind() == K::OrbitPair && l.action()->is_exact_lattice() &&
          same_rule(*l.action(), *r.action()) && l.set().is_box() && r.set().is_box()) {
        if (auto h = composition_bound(*l.action(), l.set().box(), r.set().box()))
          return Entourage::orbit_pair(l.action(), *h).mark_approximate();
      }
      return Entourage::compose(l, r);
    }
    default: return e;
  }
}

// ---- neighborhoods -----------------------------------------------------------------------------

namespace {

Neighborhood by_window(const Entourage& e, const SetDescriptor& a, const Budget& budget) {
  const std::size_t d = e.space().dim();
  std::vector<Point> anchors;
  if (e.space().is_finite()) {
    for (std::size_t i = 0; i < e.space().size(); ++i)
      if (set_membership(a, Point{static_cast<Int>(i)})) anchors.push_back({static_cast<Int>(i)});
  } else if (a.is_points()) {
    anchors = a.point_list();
  } else {
    for (const Box& b : as_boxes(a)) {
      if (!point_count(b, 1 << 12)) throw Error(Error::Code::Unsupported, "neighborhood of an infinite set");
      each_point(b, [&](const Point& p) {
        anchors.push_back(p);
        return true;
      });
    }
  }
  std::vector<Point> out;
  bool exact = true;
  const auto test = [&](const Point& y) {
    for (const Point& x : anchors) {
      const Membership m = entourage_membership(e, x, y, budget);
      if (m.truth == Truth::Unknown) exact = false;
      if (m.yes()) {
        out.push_back(y);
        return true;
      }
    }
    return true;
  };
  if (e.space().is_finite()) {
    for (std::size_t i = 0; i < e.space().size(); ++i) test(Point{static_cast<Int>(i)});
    return {SetDescriptor::points(1, std::move(out)), exact, 0};
  }
  const Int w = window_radius(d, budget.window);
  each_point(Box::cube(d, w), test);
  return {SetDescriptor::points(d, std::move(out)), false, w};
}

Neighborhood orbit_neighborhood(const Entourage& e, const SetDescriptor& a, const Budget& budget) {
  const ActionInstance& act = *e.action();
  if (!act.is_exact_lattice() || !a.is_points()) return by_window(e, a, budget);
  const auto members = as_boxes(e.set());
  std::vector<SetDescriptor> parts;
  for (const Point& x : a.point_list()) {
    parts.push_back(SetDescriptor::points(x.size(), {x}));
    std::set<Point> shifts;
    for (const Box& bi : members) {
      const Box c = box_translate(negate(bi), x);
      const auto t = integer_bounding_box(act.matrix(), c);
      if (!t) return by_window(e, a, budget);
      if (!point_count(*t, 4096)) return by_window(e, a, budget);
      each_point(*t, [&](const Point& l) {
        Point v = act.matrix().apply(l);
        if (c.contains(v)) shifts.insert(std::move(v));
        return true;
      });
    }
    if (shifts.size() * members.size() > SetDescriptor::kMaxUnionMembers) return by_window(e, a, budget);
    for (const Point& v : shifts)
      for (const Box& bj : members) parts.push_back(box_translate(bj, v));
  }
  if (parts.size() > SetDescriptor::kMaxUnionMembers) return by_window(e, a, budget);
  return {SetDescriptor::union_of(act.dim(), std::move(parts)), true, 0};
}

}  // namespace

Neighborhood neighborhood(const Entourage& e, const SetDescriptor& a, const Budget& budget) {
  check_dim(a.dim(), e.space().dim(), "neighborhood");
  const std::size_t d = e.space().dim();
  using K = Entourage::Kind;
  switch (e.kind()) {
    case K::Diag: return {a, true, 0};
    case K::MetricBall: {
      std::vector<SetDescriptor> parts;
      for (const Box& b : as_boxes(a)) parts.push_back(inflate(b, e.radius()));
      return {SetDescriptor::union_of(d, std::move(parts)), true, 0};
    }
    case K::Product: {
      bool meets = false;
      for (const Box& b : as_boxes(a))
        for (const Box& c : as_boxes(e.set())) meets = meets || !box_intersect(b, c).is_empty();
      if (!meets) return {SetDescriptor::empty(d), true, 0};
      return {e.set(), true, 0};
    }
    case K::FiniteRel: {
      std::vector<Point> out;
      for (const auto& [x, y] : e.pairs())
        if (set_membership(a, x)) out.push_back(y);
      return {SetDescriptor::points(d, std::move(out)), true, 0};
    }
    case K::GroupRight: {
      if (e.group()->is_finite()) return by_window(e, a, budget);
      std::vector<SetDescriptor> parts;
      for (const Box& b : as_boxes(a))
        for (const Box& c : as_boxes(e.set())) parts.push_back(minkowski_sum(b, c));
      return {SetDescriptor::union_of(d, std::move(parts)), true, 0};
    }
    case K::OrbitPair: return orbit_neighborhood(e, a, budget);
    case K::Transpose: {
      const Entourage r = entourage_rewrite(e);
      if (r.kind() != K::Transpose) return neighborhood(r, a, budget);
      return by_window(e, a, budget);
    }
    case K::Union: {
      const Neighborhood l = neighborhood(e.left(), a, budget);
      const Neighborhood r = neighborhood(e.right(), a, budget);
      return {SetDescriptor::union_of(d, {l.set, r.set}), l.exact && r.exact, std::max(l.window, r.window)};
    }
    case K::Compose: {
      const Entourage r = entourage_rewrite(e);
      if (r.kind() != K::Compose && !r.approximate()) return neighborhood(r, a, budget);
      const Neighborhood first = neighborhood(e.left(), a, budget);
      if (first.exact) {
        std::vector<Point> mids;
        bool small = true;
        for (const Box& b : as_boxes(first.set)) {
          if (!point_count(b, 4096)) {
            small = false;
            break;
          }
          each_point(b, [&](const Point& p) {
            mids.push_back(p);
            return true;
          });
        }
        if (small) {
          const Neighborhood second = neighborhood(e.right(), SetDescriptor::points(d, std::move(mids)), budget);
          return second;
        }
      }
      return by_window(e, a, budget);
    }
  }
  return by_window(e, a, budget);
}

// ---- finite closures ---------------------------------------------------------------------------

bool FiniteClosure::contains(const Relation& r) const {
  return std::any_of(antichain.begin(), antichain.end(), [&](const Relation& m) { return r.subset_of(m); });
}

namespace {

std::vector<Relation> maximal_relations(std::vector<Relation> rels) {
  std::sort(rels.begin(), rels.end());
  rels.erase(std::unique(rels.begin(), rels.end()), rels.end());
  std::vector<Relation> out;
  for (const auto& r : rels) {
    const bool dominated =
        std::any_of(rels.begin(), rels.end(), [&](const Relation& s) { return !(s == r) && r.subset_of(s); });
    if (!dominated) out.push_back(r);
  }
  return out;
}

}  // namespace

FiniteClosure close_finite_base(const GroundSpace& ground, const std::vector<Relation>& base) {
  if (!ground.is_finite()) throw Error(Error::Code::Unsupported, "finite closures need a finite space");
  const std::size_t n = ground.size();
  if (n > 12) throw Error(Error::Code::BudgetExceeded, "finite closure is limited to 12 labels");
  for (const auto& r : base)
    if (r.n != n) throw Error(Error::Code::DimensionMismatch, "relation on a different ground set");
  std::vector<Relation> current = base;
  current.push_back(Relation::diag(n));
  current = maximal_relations(std::move(current));
  while (true) {
    std::vector<Relation> next = current;
    for (const auto& a : current) {
      next.push_back(a.transpose());
      for (const auto& b : current) {
        next.push_back(a | b);
        next.push_back(a.compose(b));
      }
    }
    next = maximal_relations(std::move(next));
    if (next == current) break;
    current = std::move(next);
  }
  return {ground, std::move(current)};
}

AxiomReport coarse_axiom_check(const FiniteClosure& f) {
  AxiomReport r;
  r.subject = "finite closure";
  const std::size_t n = f.ground.size();
  const auto label = [&](std::size_t i) { return f.ground.labels()[i]; };
  r.checks.push_back({"diagonal", f.contains(Relation::diag(n)), ""});
  AxiomCheck t{"transpose", true, ""}, u{"union", true, ""}, c{"composition", true, ""};
  for (std::size_t i = 0; i < f.antichain.size(); ++i) {
    const auto& a = f.antichain[i];
    if (t.passed && !f.contains(a.transpose())) {
      t.passed = false;
      t.witness = "transpose of maximal relation " + std::to_string(i);
    }
    for (std::size_t j = 0; j < f.antichain.size(); ++j) {
      const auto& b = f.antichain[j];
      if (u.passed && !f.contains(a | b)) {
        u.passed = false;
        u.witness = "union of maximal relations " + std::to_string(i) + ", " + std::to_string(j);
      }
      if (c.passed && !f.contains(a.compose(b))) {
        c.passed = false;
        c.witness = "composition of maximal relations " + std::to_string(i) + ", " + std::to_string(j);
      }
    }
  }
  if (!r.checks[0].passed) r.checks[0].witness = "(" + label(0) + "," + label(0) + ") missing";
  r.checks.push_back(t);
  r.checks.push_back(u);
  r.checks.push_back(c);
  r.checks.push_back({"subsets", true, "stored by maximal relations"});
  return r;
}

Relation to_relation(const Entourage& e, const Budget& budget) {
  if (!e.space().is_finite()) throw Error(Error::Code::Unsupported, "to_relation needs a finite space");
  const std::size_t n = e.space().size();
  Relation r = Relation::empty(n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      const Membership m = entourage_membership(e, {static_cast<Int>(x)}, {static_cast<Int>(y)}, budget);
      if (m.truth == Truth::Unknown) throw Error(Error::Code::BudgetExceeded, "membership undecided");
      if (m.yes()) r.set(x, y);
    }
  return r;
}

// ---- structures -----------------------------------------------------------------------------------

Entourage CoarseChain::level(Int n) const {
  switch (kind) {
    case Kind::Metric: return Entourage::metric_ball(space.dim(), n);
    case Kind::Connected:
      return Entourage::union_of(Entourage::diag(space), Entourage::product(space, bornology.level(n)));
    case Kind::OrbitPair: return Entourage::orbit_pair(action, bornology.level(n));
    case Kind::GroupRight: return Entourage::group_right(group, bornology.level(n));
  }
  return Entourage::diag(space);
}

Entourage CoarseStructure::level(Int n) const {
  if (!is_finite()) return chain().level(n);
  const auto& f = closure();
  std::vector<PointPair> pairs;
  for (const auto& r : f.antichain)
    for (std::size_t x = 0; x < r.n; ++x)
      for (std::size_t y = 0; y < r.n; ++y)
        if (r.has(x, y)) pairs.push_back({{static_cast<Int>(x)}, {static_cast<Int>(y)}});
  return Entourage::finite_rel(f.ground, std::move(pairs));
}

CoarseStructure metric_structure(std::size_t dim) {
  CoarseChain c;
  c.kind = CoarseChain::Kind::Metric;
  c.space = GroundSpace::lattice(dim);
  c.bornology = BornologySpec::cubes(dim);
  return CoarseStructure("metric", std::move(c));
}

CoarseStructure associated_connected_structure(const BornologySpec& b) {
  if (b.space().is_finite()) {
    const std::size_t n = b.space().size();
    std::vector<Relation> base;
    if (b.is_maximal()) {
      base.push_back(Relation::full(n));
    } else {
      for (LabelSet s : b.base()) base.push_back(Relation::square(n, s) | Relation::diag(n));
    }
    return CoarseStructure("connected", close_finite_base(b.space(), base));
  }
  CoarseChain c;
  c.kind = CoarseChain::Kind::Connected;
  c.space = b.space();
  c.bornology = b;
  return CoarseStructure("connected", std::move(c));
}

// ---- coarse boundedness --------------------------------------------------------------------------

namespace {

constexpr Int kSearchLimit = Int{1} << 30;

// Least n in [0, limit] with fits(n), for a predicate monotone in n.
template <class F>
std::optional<std::pair<Int, Point>> least_fit(F fits, Int limit) {
  if (auto p = fits(0)) return std::make_pair(Int{0}, *p);
  Int lo = 0, hi = 1;
  std::optional<Point> at_hi;
  while (true) {
    at_hi = fits(hi);
    if (at_hi) break;
    if (hi >= limit) return std::nullopt;
    lo = hi;
    hi = std::min(limit, hi * 2);
  }
  while (hi - lo > 1) {
    const Int mid = lo + (hi - lo) / 2;
    if (auto p = fits(mid)) {
      hi = mid;
      at_hi = p;
    } else {
      lo = mid;
    }
  }
  return std::make_pair(hi, *at_hi);
}

BoundVerdict ray_in(const SetDescriptor& s) {
  for (const Box& b : as_boxes(s)) {
    for (std::size_t i = 0; i < b.dim(); ++i) {
      if (b[i].bounded()) continue;
      BoundVerdict v;
      v.outcome = BoundVerdict::Outcome::Unbounded;
      v.base_point = nearest_point(b);
      Point r(b.dim(), 0);
      r[i] = b[i].lo.finite() ? 1 : -1;
      v.direction = r;
      v.note = "infinite set";
      return v;
    }
  }
  return BoundVerdict::inconclusive("no ray found");
}

// {v : H - v inside D}, coordinatewise.
Box containment_box(const Box& h, const Box& d) {
  std::vector<Interval> iv(h.dim());
  for (std::size_t i = 0; i < h.dim(); ++i) {
    // v + lo_d <= lo_h and hi_h <= v + hi_d
    End lo = End::neg_inf(), hi = End::pos_inf();
    if (d[i].hi.finite()) {
      if (!h[i].hi.finite()) return Box::empty(h.dim());
      lo = End::at(h[i].hi.value - d[i].hi.value);
    } else if (d[i].hi.is_neg_inf()) {
      return Box::empty(h.dim());
    }
    if (d[i].lo.finite()) {
      if (!h[i].lo.finite()) return Box::empty(h.dim());
      hi = End::at(h[i].lo.value - d[i].lo.value);
    } else if (d[i].lo.is_pos_inf()) {
      return Box::empty(h.dim());
    }
    iv[i] = {lo, hi};
  }
  return Box(std::move(iv));
}

BoundVerdict from_fit(const std::optional<std::pair<Int, Point>>& fit, std::string note) {
  BoundVerdict v = BoundVerdict::bounded(fit->first, std::move(note));
  v.anchors = {fit->second};
  return v;
}

}  // namespace

BoundVerdict coarsely_bounded(const CoarseStructure& cs, const SetDescriptor& s, const Budget& budget) {
  check_dim(s.dim(), cs.space().dim(), "coarsely_bounded");
  if (cs.is_finite()) {
    BoundVerdict v = BoundVerdict::bounded(0, "finite space: A = X");
    for (std::size_t i = 0; i < cs.space().size(); ++i) v.anchors.push_back({static_cast<Int>(i)});
    return v;
  }
  if (s.is_empty()) return BoundVerdict::bounded(0, "empty set");
  const CoarseChain& c = cs.chain();
  const Box h = hull(s);
  if (h.is_bounded() && at_most_one_point(h)) {
    // The diagonal lies in level 0 for every chain kind except group-right
    // levels that miss the identity.
    const Point p = nearest_point(h);
    if (c.kind != CoarseChain::Kind::GroupRight) {
      BoundVerdict v = BoundVerdict::bounded(0, "singleton");
      v.anchors = {p};
      return v;
    }
  }
  switch (c.kind) {
    case CoarseChain::Kind::Metric: {
      if (!h.is_bounded()) return ray_in(s);
      Point a(h.dim());
      Int r = 0;
      for (std::size_t i = 0; i < h.dim(); ++i) {
        a[i] = floor_div(h[i].lo.value + h[i].hi.value, 2);
        r = std::max({r, h[i].hi.value - a[i], a[i] - h[i].lo.value});
      }
      BoundVerdict v = BoundVerdict::bounded(r, "ball around one point");
      v.anchors = {a};
      return v;
    }
    case CoarseChain::Kind::Connected: {
      const BoundVerdict inner = is_bounded(c.bornology, s, budget);
      if (!inner.is_bounded()) return inner;
      BoundVerdict v = BoundVerdict::bounded(inner.index, "inside one level of the bornology");
      v.anchors = {any_point(s)};
      return v;
    }
    case CoarseChain::Kind::GroupRight: {
      if (c.group->is_finite()) break;
      const auto fits = [&](Int n) -> std::optional<Point> {
        const Box d = c.bornology.level_box(n);
        if (d.is_empty()) return std::nullopt;
        const Box k = containment_box(h, d);
        if (k.is_empty()) return std::nullopt;
        return nearest_point(k);
      };
      if (auto fit = least_fit(fits, kSearchLimit)) return from_fit(fit, "translate of one level");
      if (!h.is_bounded()) return ray_in(s);
      return BoundVerdict::inconclusive("no level fits below the search limit");
    }
    case CoarseChain::Kind::OrbitPair: {
      const ActionInstance& a = *c.action;
      if (!a.is_exact_lattice()) break;
      const auto fits = [&](Int n) -> std::optional<Point> {
        const Box d = c.bornology.level_box(n);
        if (d.is_empty()) return std::nullopt;
        const Box k = containment_box(h, d);
        if (k.is_empty() || !lattice_point_in(a.matrix(), k)) return std::nullopt;
        return any_point(s);
      };
      const Int limit = is_bounded(c.bornology, h, budget).is_bounded() ? kSearchLimit : budget.cofinal_cap();
      if (auto fit = least_fit(fits, limit)) return from_fit(fit, "inside one translate of a level");
      return BoundVerdict::inconclusive("no translate of a level up to index " + std::to_string(limit) +
                                        " contains the set");
    }
  }
  return BoundVerdict::inconclusive("no closed form for this structure");
}

// ---- lattice covers ----------------------------------------------------------------------------

std::pair<Truth, std::optional<Point>> lattice_cover(const Box& c, const IntMatrix& m) {
  const std::size_t d = c.dim();
  if (c.is_empty()) return {Truth::False, Point(d, 0)};
  // Coordinates where C is the whole line join the lattice.
  std::vector<Point> cols = m.columns();
  std::vector<Interval> iv = c.intervals();
  for (std::size_t i = 0; i < d; ++i) {
    if (iv[i].lo.is_neg_inf() && iv[i].hi.is_pos_inf()) {
      Point e(d, 0);
      e[i] = 1;
      cols.push_back(e);
      iv[i] = {End::at(0), End::at(0)};
    } else if (!iv[i].bounded()) {
      return {Truth::Unknown, std::nullopt};
    }
  }
  const Box cb(iv);
  const IntMatrix mm = IntMatrix::from_columns(d, cols);
  const ColumnHnf h = column_hnf(mm);
  if (h.rank < d) {
    const Point w = *orthogonal_direction(mm);
    Int top = 0, norm = 0;
    for (std::size_t i = 0; i < d; ++i) {
      norm += w[i] * w[i];
      top += w[i] >= 0 ? w[i] * cb[i].hi.value : w[i] * cb[i].lo.value;
    }
    const Int t = std::max<Int>(1, floor_div(top, norm) + 1);
    Point u(d);
    for (std::size_t i = 0; i < d; ++i) u[i] = t * w[i];
    return {Truth::False, u};
  }
  if (h.index() > 4096) return {Truth::Unknown, std::nullopt};
  // Coset representatives 0 <= r_i < h_ii of the triangular basis.
  Point hi(d);
  for (std::size_t i = 0; i < d; ++i) hi[i] = h.h(h.pivot_rows[i], i) - 1;
  std::optional<Point> missing;
  each_point(Box::closed(Point(d, 0), hi), [&](const Point& r) {
    if (!lattice_point_in(mm, box_translate(cb, neg(r)))) {
      missing = r;
      return false;
    }
    return true;
  });
  if (missing) return {Truth::False, missing};
  return {Truth::True, std::nullopt};
}

// ---- containment ---------------------------------------------------------------------------------

namespace {

// Normal forms of chain levels on Z^d:
//   DI(S)    {(x, y) : y - x in S} union diag, S a box
//   Conn(B)  (B x B) union diag
//   Orbit(B) E(L, B) for an untwisted translation rule
struct Form {
  enum class Kind { DI, Conn, Orbit, Other } kind = Kind::Other;
  Box set;
  ActionPtr action;
};

bool full_index(const IntMatrix& m) {
  const ColumnHnf h = column_hnf(m);
  return h.rank == m.rows() && h.index() == 1;
}

Form form_of(const Entourage& e) {
  using K = Entourage::Kind;
  const std::size_t d = e.space().dim();
  if (e.space().is_finite()) return {};
  switch (e.kind()) {
    case K::Diag: return {Form::Kind::DI, Box::point(Point(d, 0)), nullptr};
    case K::MetricBall: return {Form::Kind::DI, Box::cube(d, e.radius()), nullptr};
    case K::GroupRight:
      if (!e.group()->is_finite() && e.set().is_box() && e.set().box().contains(Point(d, 0)))
        return {Form::Kind::DI, e.set().box(), nullptr};
      return {};
    case K::OrbitPair: {
      if (!e.action()->is_exact_lattice() || !e.set().is_box()) return {};
      const Box& b = e.set().box();
      if (b.is_empty()) return {Form::Kind::DI, Box::point(Point(d, 0)), nullptr};
      if (full_index(e.action()->matrix())) return {Form::Kind::DI, difference_box(b, b), nullptr};
      return {Form::Kind::Orbit, b, e.action()};
    }
    case K::Union:
      if (e.left().kind() == K::Diag && e.right().kind() == K::Product && e.right().set().is_box())
        return {Form::Kind::Conn, e.right().set().box(), nullptr};
      return {};
    default: return {};
  }
}

Containment yes(std::string rule) { return {Truth::True, std::nullopt, std::move(rule)}; }
Containment no(PointPair w, std::string rule) { return {Truth::False, std::move(w), std::move(rule)}; }
Containment unknown(std::string rule) { return {Truth::Unknown, std::nullopt, std::move(rule)}; }

Containment di_in_di(const Box& s, const Box& t) {
  const std::size_t d = s.dim();
  const Box zero = Box::point(Point(d, 0));
  const std::vector<Box> cover{t, zero};
  if (auto v = uncovered_point(s, cover)) return no({Point(d, 0), *v}, "difference sets");
  return yes("difference sets");
}

// B x B inside DI(T).
Containment pairs_in_di(const Box& b, const Box& t) {
  if (at_most_one_point(b)) return yes("at most one point");
  const std::size_t d = b.dim();
  const Box diff = difference_box(b, b);
  const std::vector<Box> cover{t, Box::point(Point(d, 0))};
  if (auto v = uncovered_point(diff, cover)) return no(pair_with_difference(b, *v), "self-difference");
  return yes("self-difference");
}

Containment di_in_conn(const Box& s, const Box& b) {
  const std::size_t d = s.dim();
  const Box zero = Box::point(Point(d, 0));
  const std::vector<Box> cover{zero};
  const auto v = uncovered_point(s, cover);
  if (!v) return yes("difference set is {0}");
  if (b.is_full()) return yes("full square");
  const Point x = point_outside(b);
  return no({x, add(x, *v)}, "translation-invariant vs square");
}

Containment conn_in_conn(const Box& b1, const Box& b2) {
  if (at_most_one_point(b1) || box_subset(b1, b2)) return yes("squares");
  const std::vector<Box> cover{b2};
  const Point p = *uncovered_point(b1, cover);
  return no({p, second_point(b1, p)}, "squares");
}

Containment di_in_orbit(const Box& s, const Box& b, const ActionInstance& a) {
  const std::size_t d = s.dim();
  const Box zero = Box::point(Point(d, 0));
  if (!uncovered_point(s, std::vector<Box>{zero})) return yes("difference set is {0}");
  if (b.is_empty()) return no({Point(d, 0), *uncovered_point(s, std::vector<Box>{zero})}, "empty orbit pair");
  const Box diff = difference_box(b, b);
  if (auto v = uncovered_point(s, std::vector<Box>{diff, zero})) return no({Point(d, 0), *v}, "outside B - B");
  if (!point_count(s, 4096)) return unknown("difference set too large");
  Containment out = yes("coset cover");
  each_point(s, [&](const Point& v) {
    if (v == Point(d, 0)) return true;
    const Box c = box_intersect(b, box_translate(b, neg(v)));
    const auto [t, u] = lattice_cover(c, a.matrix());
    if (t == Truth::True) return true;
    if (t == Truth::False) {
      out = no({*u, add(*u, v)}, "coset cover");
      return false;
    }
    out = unknown("coset cover undecided");
    return true;
  });
  return out;
}

// B x B inside E(L, B2).
Containment pairs_in_orbit(const Box& b, const Box& b2, const ActionInstance& a) {
  if (at_most_one_point(b)) return yes("at most one point");
  const std::size_t d = b.dim();
  if (b2.is_empty()) {
    const Point p = nearest_point(b);
    return no({p, second_point(b, p)}, "empty orbit pair");
  }
  const Box diff = difference_box(b, b);
  const std::vector<Box> cover{difference_box(b2, b2), Box::point(Point(d, 0))};
  if (auto v = uncovered_point(diff, cover)) return no(pair_with_difference(b, *v), "outside B2 - B2");
  const Box k = containment_box(b, b2);
  if (!k.is_empty() && lattice_point_in(a.matrix(), k)) return yes("one translate");
  if (!point_count(b, 64)) return unknown("no single translate; set too large to enumerate");
  std::vector<Point> pts;
  each_point(b, [&](const Point& p) {
    pts.push_back(p);
    return true;
  });
  const Entourage e2 = Entourage::orbit_pair(std::make_shared<ActionInstance>(a), b2);
  for (const Point& x : pts)
    for (const Point& y : pts)
      if (x < y && entourage_membership(e2, x, y).no()) return no({x, y}, "pair enumeration");
  return yes("pair enumeration");
}

// E(L, B) inside (B2 x B2) union diag.
Containment orbit_in_conn(const Box& b, const ActionInstance& a, const Box& b2) {
  if (at_most_one_point(b)) return yes("at most one point");
  const IntMatrix& m = a.matrix();
  const Point p = nearest_point(b);
  const Point q = second_point(b, p);
  for (std::size_t i = 0; i < b.dim(); ++i) {
    std::optional<std::size_t> col;
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0) col = j;
    if (!col) {
      if (b2[i].lo <= b[i].lo && b[i].hi <= b2[i].hi) continue;
      Point x = p;
      if (b[i].lo < b2[i].lo) x[i] = b[i].lo.finite() ? b[i].lo.value : b2[i].lo.value - 1;
      else x[i] = b[i].hi.finite() ? b[i].hi.value : b2[i].hi.value + 1;
      return no({x, second_point(b, x)}, "orbit leaves the square");
    }
    if (b2[i].lo.is_neg_inf() && b2[i].hi.is_pos_inf()) continue;
    const Int c = m(i, *col);
    const Int ac = c < 0 ? -c : c;
    Int target, step;
    if (b2[i].hi.finite()) {
      target = b2[i].hi.value + 1 - p[i];
      step = c > 0 ? 1 : -1;
    } else {
      target = p[i] - (b2[i].lo.value - 1);
      step = c > 0 ? -1 : 1;
    }
    Point l(m.cols(), 0);
    l[*col] = step * std::max<Int>(0, ceil_div(target, ac));
    const Point v = m.apply(l);
    return no({add(p, v), add(q, v)}, "orbit leaves the square");
  }
  return yes("orbit stays in the square");
}

Containment window_leq(const Entourage& e1, const Entourage& e2, const Budget& budget) {
  const std::size_t d = e1.space().dim();
  if (e1.space().is_finite()) {
    const std::size_t n = e1.space().size();
    bool undecided = false;
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) {
        const Point px{static_cast<Int>(x)}, py{static_cast<Int>(y)};
        const Membership a = entourage_membership(e1, px, py, budget);
        if (!a.yes()) {
          undecided = undecided || a.truth == Truth::Unknown;
          continue;
        }
        const Membership b = entourage_membership(e2, px, py, budget);
        if (b.no()) return no({px, py}, "enumeration");
        undecided = undecided || b.truth == Truth::Unknown;
      }
    return undecided ? unknown("enumeration") : yes("enumeration");
  }
  const Int r1 = d == 1 ? 8 : d == 2 ? 3 : 1;
  const Int r2 = d == 1 ? 16 : d == 2 ? 6 : 3;
  std::optional<PointPair> found;
  each_point(Box::cube(d, r1), [&](const Point& x) {
    each_point(Box::cube(d, r2), [&](const Point& dv) {
      const Point y = add(x, dv);
      if (!entourage_membership(e1, x, y, budget).yes()) return true;
      if (entourage_membership(e2, x, y, budget).no()) {
        found = PointPair{x, y};
        return false;
      }
      return true;
    });
    return !found;
  });
  if (found) return no(*found, "window search");
  return unknown("window search found no separating pair");
}

}  // namespace

Containment entourage_leq(const Entourage& e1, const Entourage& e2, const Budget& budget) {
  if (!(e1.space() == e2.space())) throw Error(Error::Code::DimensionMismatch, "entourages on different spaces");
  if (e1.space().is_finite()) return window_leq(e1, e2, budget);
  const Form f1 = form_of(e1), f2 = form_of(e2);
  using K = Form::Kind;
  switch (f1.kind) {
    case K::DI:
      if (f2.kind == K::DI) return di_in_di(f1.set, f2.set);
      if (f2.kind == K::Conn) return di_in_conn(f1.set, f2.set);
      if (f2.kind == K::Orbit) return di_in_orbit(f1.set, f2.set, *f2.action);
      break;
    case K::Conn:
      if (f2.kind == K::DI) return pairs_in_di(f1.set, f2.set);
      if (f2.kind == K::Conn) return conn_in_conn(f1.set, f2.set);
      if (f2.kind == K::Orbit) return pairs_in_orbit(f1.set, f2.set, *f2.action);
      break;
    case K::Orbit:
      if (f2.kind == K::DI) return pairs_in_di(f1.set, f2.set);
      if (f2.kind == K::Orbit && same_rule(*f1.action, *f2.action))
        return pairs_in_orbit(f1.set, f2.set, *f2.action);
      if (f2.kind == K::Conn) return orbit_in_conn(f1.set, *f1.action, f2.set);
      break;
    case K::Other: break;
  }
  return window_leq(e1, e2, budget);
}

Verdict structure_leq(const CoarseStructure& cs1, const CoarseStructure& cs2, const Budget& budget) {
  if (!(cs1.space() == cs2.space())) throw Error(Error::Code::DimensionMismatch, "structures on different spaces");
  if (cs1.is_finite() != cs2.is_finite()) throw Error(Error::Code::Unsupported, "mixed structure kinds");
  const std::string title = cs1.name() + " <= " + cs2.name();
  if (cs1.is_finite()) {
    for (const auto& r : cs1.closure().antichain)
      if (!cs2.closure().contains(r)) {
        Verdict v = Verdict::refuted(title + ": a maximal relation is not controlled");
        for (std::size_t x = 0; x < r.n; ++x)
          for (std::size_t y = 0; y < r.n; ++y)
            if (r.has(x, y) && !cs2.closure().contains([&] {
                  Relation s = Relation::empty(r.n);
                  s.set(x, y);
                  return s;
                }())) {
              v.add("witness", "(" + cs1.space().labels()[x] + "," + cs1.space().labels()[y] + ")");
              return v;
            }
        return v;
      }
    return Verdict::confirmed(title + ": maximal relations contained");
  }
  const Int cap = budget.cofinal_cap();
  std::ostringstream map;
  bool undecided = false;
  Int start = 0;
  for (Int n = 0; n <= budget.max_index; ++n) {
    const Entourage e1 = cs1.level(n);
    std::optional<Int> found;
    Containment last;
    for (Int m = start; m <= cap; ++m) {
      last = entourage_leq(e1, cs2.level(m), budget);
      if (last.truth == Truth::True) {
        found = m;
        break;
      }
      if (last.truth == Truth::Unknown) undecided = true;
    }
    // Levels are nested, so probe far levels geometrically and then bisect
    // back to the least one that works.
    Int reach = cap;
    if (!found && !undecided) {
      Int lo = std::max(cap, start), hi = lo;
      for (int step = 0; step < 6 && !found; ++step) {
        hi *= 2;
        const Containment c = entourage_leq(e1, cs2.level(hi), budget);
        if (c.truth == Truth::True) found = hi;
        else if (c.truth == Truth::Unknown) undecided = true;
        else lo = hi, last = c;
        reach = hi;
        if (undecided) break;
      }
      while (found && *found - lo > 1) {
        const Int mid = lo + (*found - lo) / 2;
        if (entourage_leq(e1, cs2.level(mid), budget).truth == Truth::True) found = mid;
        else lo = mid;
      }
    }
    if (!found) {
      if (last.truth == Truth::False && !undecided) {
        // Only levels up to `reach` were examined, so this is evidence, not proof.
        Verdict v = Verdict::refuted(title + ": level " + std::to_string(n) + " escapes every level up to " +
                                         std::to_string(reach),
                                     false);
        v.add("level", std::to_string(n)).add("searched", std::to_string(reach));
        v.add("witness", point_to_string(last.witness->first) + "-" + point_to_string(last.witness->second));
        v.add("rule", last.rule);
        return v;
      }
      Verdict v = Verdict::inconclusive(title + ": level " + std::to_string(n) + " undecided");
      v.add("level", std::to_string(n)).add("rule", last.rule);
      return v;
    }
    map << (n ? " " : "") << n << "->" << *found;
    start = *found;
  }
  Verdict v = Verdict::confirmed(title);
  v.add("levels", map.str());
  return v;
}

std::optional<BornologySpec> induced_bornology(const CoarseStructure& cs) {
  if (cs.is_finite()) return BornologySpec::maximal(cs.space());
  const CoarseChain& c = cs.chain();
  switch (c.kind) {
    case CoarseChain::Kind::Metric: return BornologySpec::cubes(c.space.dim());
    case CoarseChain::Kind::Connected: return c.bornology;
    case CoarseChain::Kind::GroupRight: {
      if (c.bornology.is_maximal()) return c.bornology;
      ChainShape sh;
      for (std::size_t i = 0; i < c.space.dim(); ++i) {
        sh.lower.push_back(c.bornology.shape().lower[i].infinite ? ChainEnd::inf() : ChainEnd::affine(-1, 0));
        sh.upper.push_back(c.bornology.shape().upper[i].infinite ? ChainEnd::inf() : ChainEnd::affine(1, 0));
      }
      return BornologySpec::chain(std::move(sh));
    }
    case CoarseChain::Kind::OrbitPair: return std::nullopt;
  }
  return std::nullopt;
}

std::optional<Entourage> swept_entourage(const ActionPtr& a, const Entourage& e) {
  if (a->is_permutation()) {
    const Relation r = to_relation(e);
    std::vector<PointPair> pairs;
    for (std::size_t g = 0; g < a->group().table().order(); ++g)
      for (std::size_t x = 0; x < r.n; ++x)
        for (std::size_t y = 0; y < r.n; ++y)
          if (r.has(x, y)) {
            const Point gi{static_cast<Int>(g)};
            pairs.push_back({a->act(gi, Point{static_cast<Int>(x)}), a->act(gi, Point{static_cast<Int>(y)})});
          }
    return Entourage::finite_rel(a->space(), std::move(pairs));
  }
  if (!a->is_exact_lattice()) return std::nullopt;
  const Form f = form_of(e);
  switch (f.kind) {
    case Form::Kind::DI: return e;
    case Form::Kind::Orbit:
      if (same_rule(*f.action, *a)) return e;
      return std::nullopt;
    case Form::Kind::Conn: return Entourage::orbit_pair(a, f.set);
    case Form::Kind::Other: return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace bcs
