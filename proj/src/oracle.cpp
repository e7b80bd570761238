#include "bcs/oracle.hpp"

#include <algorithm>
#include <array>
#include <random>
#include <set>
#include <sstream>

#include "bcs/actions.hpp"
#include "bcs/coarse.hpp"

namespace bcs::oracle {

namespace {

Int abs_of(Int v) { return v < 0 ? -v : v; }

Int norm(const Point& p) {
  Int n = 0;
  for (Int v : p) n = std::max(n, abs_of(v));
  return n;
}

std::string str(const Point& p) { return point_to_string(p); }

std::vector<Point> cube(std::size_t d, Int r) {
  std::vector<Point> out;
  Point p(d, -r);
  while (true) {
    out.push_back(p);
    std::size_t i = d;
    while (i > 0 && p[i - 1] == r) p[--i] = -r;
    if (i == 0) break;
    ++p[i - 1];
  }
  std::stable_sort(out.begin(), out.end(), [](const Point& a, const Point& b) { return norm(a) < norm(b); });
  return out;
}

bool end_le(End a, Int v) { return a.is_neg_inf() || (a.finite() && a.value <= v); }
bool end_ge(End a, Int v) { return a.is_pos_inf() || (a.finite() && a.value >= v); }

bool in_interval(const Interval& iv, Int v) { return end_le(iv.lo, v) && end_ge(iv.hi, v); }

void collect_boxes(const SetDescriptor& s, std::vector<Box>& out) {
  if (s.is_box()) {
    if (!s.box().is_empty()) out.push_back(s.box());
  } else if (s.is_points()) {
    for (const Point& p : s.point_list()) {
      std::vector<Interval> iv;
      for (Int v : p) iv.push_back({End::at(v), End::at(v)});
      out.emplace_back(std::move(iv));
    }
  } else {
    for (const auto& m : s.members()) collect_boxes(m, out);
  }
}

std::vector<Box> boxes_of(const SetDescriptor& s) {
  std::vector<Box> out;
  collect_boxes(s, out);
  return out;
}

// Largest absolute finite end or point coordinate.
Int extent(const SetDescriptor& s) {
  Int e = 0;
  for (const Box& b : boxes_of(s))
    for (const auto& iv : b.intervals()) {
      if (iv.lo.finite()) e = std::max(e, abs_of(iv.lo.value));
      if (iv.hi.finite()) e = std::max(e, abs_of(iv.hi.value));
    }
  return e;
}

Int floor_q(Int a, Int b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}
Int ceil_q(Int a, Int b) { return -floor_q(-a, b); }

Point translate(const IntMatrix& m, const Point& x, const Point& l, Int sign) {
  Point y = x;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) y[i] += sign * m(i, j) * l[j];
  return y;
}

Int row_weight(const IntMatrix& m) {
  Int w = 0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Int s = 0;
    for (std::size_t j = 0; j < m.cols(); ++j) s += abs_of(m(i, j));
    w = std::max(w, s);
  }
  return w;
}

Point inverse_element(const ActionInstance& a, const Point& l) {
  if (a.is_permutation()) return {a.group().table().inv[static_cast<std::size_t>(l[0])]};
  Point r(l.size());
  for (std::size_t i = 0; i < l.size(); ++i) r[i] = -l[i];
  return r;
}

Point apply(const ActionInstance& a, const Point& l, const Point& x) {
  if (a.is_permutation()) return {a.permutation().perm[static_cast<std::size_t>(l[0])][static_cast<std::size_t>(x[0])]};
  if (a.is_exact_lattice()) return translate(a.matrix(), x, l, 1);
  return a.act(l, x);
}

}  // namespace

std::vector<Point> window(const GroundSpace& space, Int radius) {
  if (space.is_finite()) {
    std::vector<Point> out;
    for (std::size_t i = 0; i < space.size(); ++i) out.push_back({static_cast<Int>(i)});
    return out;
  }
  return cube(space.dim(), radius);
}

std::vector<Point> group_window(const GroupSpec& g, Int radius) {
  if (g.is_finite()) {
    std::vector<Point> out;
    for (std::size_t i = 0; i < g.table().order(); ++i) out.push_back({static_cast<Int>(i)});
    return out;
  }
  return cube(g.rank(), radius);
}

bool member(const SetDescriptor& s, const Point& x) {
  for (const Box& b : boxes_of(s)) {
    bool in = b.dim() == x.size();
    for (std::size_t i = 0; in && i < x.size(); ++i) in = in_interval(b[i], x[i]);
    if (in) return true;
  }
  return false;
}

SetDescriptor level(const BornologySpec& b, Int m) {
  const GroundSpace& space = b.space();
  if (b.is_maximal()) {
    if (space.is_finite()) return SetDescriptor::points(1, window(space, 0));
    return SetDescriptor(Box(std::vector<Interval>(space.dim(), Interval{End::neg_inf(), End::pos_inf()})));
  }
  if (b.is_finite_base()) {
    std::vector<Point> pts;
    for (LabelSet s : b.base())
      for (std::size_t i = 0; i < space.size(); ++i)
        if (s >> i & 1) pts.push_back({static_cast<Int>(i)});
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return SetDescriptor::points(1, pts);
  }
  const ChainShape& sh = b.shape();
  if (m < sh.empty_below) return SetDescriptor::empty(sh.dim());
  std::vector<Interval> iv(sh.dim());
  for (std::size_t i = 0; i < sh.dim(); ++i) {
    const ChainEnd& lo = sh.lower[i];
    const ChainEnd& hi = sh.upper[i];
    if (lo.infinite) {
      iv[i].lo = End::neg_inf();
    } else {
      Int v = ceil_q(lo.terms[0].slope * m + lo.terms[0].offset, lo.terms[0].divisor);
      for (const auto& t : lo.terms) v = std::max(v, ceil_q(t.slope * m + t.offset, t.divisor));
      iv[i].lo = End::at(v);
    }
    if (hi.infinite) {
      iv[i].hi = End::pos_inf();
    } else {
      Int v = floor_q(hi.terms[0].slope * m + hi.terms[0].offset, hi.terms[0].divisor);
      for (const auto& t : hi.terms) v = std::min(v, floor_q(t.slope * m + t.offset, t.divisor));
      iv[i].hi = End::at(v);
    }
    if (iv[i].lo.finite() && iv[i].hi.finite() && iv[i].hi.value < iv[i].lo.value)
      return SetDescriptor::empty(sh.dim());
  }
  return SetDescriptor(Box(std::move(iv)));
}

// ---- transporters ------------------------------------------------------------------------

TransporterSearch transporter(const ActionInstance& a, const SetDescriptor& b, const SetDescriptor& b2, Int gw,
                              Int xw) {
  TransporterSearch out;
  out.group_window = gw;
  out.space_window = xw;
  if (a.is_permutation()) {
    out.certified = true;
    for (const Point& g : group_window(a.group(), 0))
      for (const Point& x : window(a.space(), 0))
        if (member(b, x) && member(b2, apply(a, g, x))) {
          out.elements.push_back(g);
          break;
        }
    return out;
  }
  if (a.is_exact_lattice()) {
    // The point of b n (b2 - M l) nearest the origin has norm at most the
    // largest finite end plus |M l|.
    out.sufficient = std::max(extent(b), extent(b2)) + gw * row_weight(a.matrix());
    out.certified = xw >= *out.sufficient;
    const auto src = boxes_of(b), dst = boxes_of(b2);
    for (const Point& l : group_window(a.group(), gw)) {
      const Point v = translate(a.matrix(), Point(a.dim(), 0), l, 1);
      bool hit = false;
      for (std::size_t p = 0; p < src.size() && !hit; ++p)
        for (std::size_t q = 0; q < dst.size() && !hit; ++q) {
          bool all = true;
          for (std::size_t i = 0; i < a.dim() && all; ++i) {
            bool some = false;
            for (Int t = -xw; t <= xw && !some; ++t) some = in_interval(src[p][i], t) && in_interval(dst[q][i], t + v[i]);
            all = some;
          }
          hit = all;
        }
      if (hit) out.elements.push_back(l);
    }
    return out;
  }
  std::vector<Point> xs;
  for (const Point& x : window(a.space(), xw))
    if (member(b, x)) xs.push_back(x);
  for (const Point& l : group_window(a.group(), gw))
    for (const Point& x : xs)
      if (member(b2, a.act(l, x))) {
        out.elements.push_back(l);
        break;
      }
  std::sort(out.elements.begin(), out.elements.end());
  return out;
}

// ---- orbit pairs ----------------------------------------------------------------------------

bool orbit_pair_witness(const ActionInstance& a, const SetDescriptor& b, const Point& x, const Point& y,
                        const Point& l) {
  const Point li = inverse_element(a, l);
  return member(b, apply(a, li, x)) && member(b, apply(a, li, y));
}

PairSearch orbit_pair(const ActionInstance& a, const SetDescriptor& b, const Point& x, const Point& y, Int gw) {
  PairSearch out;
  if (x == y) {
    out.found = out.certified = true;
    return out;
  }
  // Rank one: the admissible n form an interval whose finite ends are within
  // extent + |x| + |y| of zero.
  out.certified = a.is_permutation() ||
                  (a.is_exact_lattice() && a.rank() == 1 && gw >= extent(b) + std::max(norm(x), norm(y)) + 1);
  for (const Point& l : group_window(a.group(), gw))
    if (orbit_pair_witness(a, b, x, y, l)) {
      out.found = true;
      out.witness = l;
      return out;
    }
  return out;
}

Rows orbit_pair_rows(const ActionInstance& a, const SetDescriptor& b) {
  const std::size_t n = a.space().size();
  Rows r(n, 0);
  for (std::size_t x = 0; x < n; ++x) r[x] |= std::uint64_t{1} << x;
  std::vector<Int> in;
  for (std::size_t x = 0; x < n; ++x)
    if (member(b, {static_cast<Int>(x)})) in.push_back(static_cast<Int>(x));
  for (const Point& g : group_window(a.group(), 0))
    for (Int x : in)
      for (Int y : in) r[static_cast<std::size_t>(apply(a, g, {x})[0])] |= std::uint64_t{1} << apply(a, g, {y})[0];
  return r;
}

namespace {

Rows rows_union(const Rows& a, const Rows& b) {
  Rows r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] | b[i];
  return r;
}

Rows rows_compose(const Rows& a, const Rows& b) {
  Rows r(a.size(), 0);
  for (std::size_t x = 0; x < a.size(); ++x)
    for (std::size_t y = 0; y < a.size(); ++y)
      if (a[x] >> y & 1) r[x] |= b[y];
  return r;
}

Rows rows_transpose(const Rows& a) {
  Rows r(a.size(), 0);
  for (std::size_t x = 0; x < a.size(); ++x)
    for (std::size_t y = 0; y < a.size(); ++y)
      if (a[x] >> y & 1) r[y] |= std::uint64_t{1} << x;
  return r;
}

bool rows_subset(const Rows& a, const Rows& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] & ~b[i]) return false;
  return true;
}

}  // namespace

std::vector<Rows> naive_closure(std::size_t n, const std::vector<Rows>& base) {
  // The family is closed under subsets, so a relation below another member
  // adds nothing and is dropped after each round.
  std::set<Rows> family;
  Rows diag(n, 0);
  for (std::size_t i = 0; i < n; ++i) diag[i] = std::uint64_t{1} << i;
  family.insert(diag);
  for (const Rows& b : base) family.insert(b);
  const auto prune = [&] {
    std::set<Rows> kept;
    for (const Rows& r : family) {
      bool dominated = false;
      for (const Rows& o : family)
        if (o != r && rows_subset(r, o)) dominated = true;
      if (!dominated) kept.insert(r);
    }
    family.swap(kept);
  };
  prune();
  bool grew = true;
  while (grew) {
    grew = false;
    const std::vector<Rows> cur(family.begin(), family.end());
    for (const Rows& p : cur) {
      grew |= family.insert(rows_transpose(p)).second;
      for (const Rows& q : cur) {
        grew |= family.insert(rows_union(p, q)).second;
        grew |= family.insert(rows_compose(p, q)).second;
      }
    }
    if (family.size() > 20000) throw Error(Error::Code::BudgetExceeded, "naive closure grew past 20000 relations");
    prune();
    grew = grew && family != std::set<Rows>(cur.begin(), cur.end());
  }
  return {family.begin(), family.end()};
}

bool in_family(const std::vector<Rows>& generators, const Rows& r) {
  return std::any_of(generators.begin(), generators.end(), [&](const Rows& g) { return rows_subset(r, g); });
}

// ---- cross checks -----------------------------------------------------------------------------

const std::vector<std::string>& primitives() {
  static const std::vector<std::string> names{"transporter", "membership", "neighborhood",
                                              "composition", "bounded",    "closure"};
  return names;
}

namespace {

struct Run {
  const ActionPtr& ptr;
  const ActionInstance& a;
  Int w;
  Budget budget;
  CrossCheckReport& report;

  void mismatch(const std::string& s) {
    if (report.mismatches.size() < 8) report.mismatches.push_back(s);
  }
  void advisory(const std::string& s) {
    if (report.advisories.size() < 8) report.advisories.push_back(s);
  }
};

std::vector<SetDescriptor> test_sets(const ActionInstance& a) {
  std::vector<SetDescriptor> out;
  const BornologySpec& b = a.space_bornology();
  if (a.space().is_finite()) {
    const std::size_t n = a.space().size();
    std::vector<LabelSet> sets = b.is_finite_base() ? b.base() : std::vector<LabelSet>{};
    sets.push_back(full_label_set(n));
    for (LabelSet s : sets) {
      std::vector<Point> pts;
      for (std::size_t i = 0; i < n; ++i)
        if (s >> i & 1) pts.push_back({static_cast<Int>(i)});
      out.push_back(SetDescriptor::points(1, pts));
    }
    return out;
  }
  for (Int m = 0; m <= 2; ++m) out.push_back(level(b, m));
  return out;
}

Int dim_window(std::size_t d, Int w, Int r1, Int r2, Int r3) {
  return std::min(w, d == 1 ? r1 : d == 2 ? r2 : r3);
}

Int group_radius(const ActionInstance& a, Int w) { return std::min(w, a.rank() == 1 ? Int{16} : Int{5}); }

void check_transporter(Run& run) {
  const auto sets = test_sets(run.a);
  const Int gw = group_radius(run.a, run.w);
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (std::size_t j = 0; j < sets.size(); ++j) {
      const Transporter t = bcs::transporter(run.a, sets[i], sets[j], run.budget);
      Int xw = run.w;
      if (run.a.is_exact_lattice())
        xw = std::max(xw, std::max(extent(sets[i]), extent(sets[j])) + gw * row_weight(run.a.matrix()));
      const TransporterSearch o = transporter(run.a, sets[i], sets[j], gw, std::min<Int>(xw, 4096));
      for (const Point& l : group_window(run.a.group(), gw)) {
        if (t.kind == Transporter::Kind::Explicit && !t.exact && norm(l) > t.window) continue;
        const bool sym = t.contains(l);
        const bool ora = std::find(o.elements.begin(), o.elements.end(), l) != o.elements.end();
        ++run.report.checked;
        if (sym == ora) continue;
        const std::string msg = "L(" + to_string(sets[i]) + "," + to_string(sets[j]) + ") at l=" + str(l) +
                                ": symbolic " + (sym ? "in" : "out") + ", oracle " + (ora ? "in" : "out");
        if (!ora && !o.certified) run.advisory(msg);
        else run.mismatch(msg);
      }
    }
}

// Brute-force membership for the entourage kinds the structures produce.
std::optional<bool> entourage_member(const ActionInstance& a, const Entourage& e, const Point& x, const Point& y,
                                     Int gw) {
  switch (e.kind()) {
    case Entourage::Kind::Diag: return x == y;
    case Entourage::Kind::MetricBall: {
      Int d = 0;
      for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, abs_of(x[i] - y[i]));
      return d <= e.radius();
    }
    case Entourage::Kind::Product: return member(e.set(), x) && member(e.set(), y);
    case Entourage::Kind::OrbitPair: {
      const PairSearch p = orbit_pair(a, e.set(), x, y, gw);
      if (p.found) return true;
      if (p.certified) return false;
      return std::nullopt;
    }
    case Entourage::Kind::Union: {
      const auto l = entourage_member(a, e.left(), x, y, gw);
      const auto r = entourage_member(a, e.right(), x, y, gw);
      if ((l && *l) || (r && *r)) return true;
      if (l && r) return false;
      return std::nullopt;
    }
    default: return std::nullopt;
  }
}

void check_membership(Run& run) {
  const auto sets = test_sets(run.a);
  const std::size_t d = run.a.dim();
  const Int wm = dim_window(d, run.w, 12, 3, 1);
  const auto pts = window(run.a.space(), wm);
  const Int gw = std::min<Int>(run.a.rank() == 1 ? 64 : 12, 4 * run.w);
  for (std::size_t s = 0; s < sets.size() && s < 2; ++s) {
    const Entourage e = Entourage::orbit_pair(run.ptr, sets[s]);
    for (const Point& x : pts)
      for (const Point& y : pts) {
        const Membership m = entourage_membership(e, x, y, run.budget);
        ++run.report.checked;
        const std::string at = "E(L," + to_string(sets[s]) + ") at " + str(x) + "," + str(y);
        if (m.yes()) {
          const bool ok = x == y || (m.witness && orbit_pair_witness(run.a, sets[s], x, y, *m.witness));
          if (!ok) run.mismatch(at + ": symbolic witness does not replay");
        } else if (m.no()) {
          const PairSearch o = orbit_pair(run.a, sets[s], x, y, gw);
          if (o.found) run.mismatch(at + ": symbolic out, oracle witness l=" + str(*o.witness));
        } else {
          run.advisory(at + ": symbolic undecided");
        }
      }
  }
  if (run.a.space().is_finite()) {
    for (const auto& s : sets) {
      const Relation rel = to_relation(Entourage::orbit_pair(run.ptr, s), run.budget);
      const Rows o = orbit_pair_rows(run.a, s);
      for (std::size_t x = 0; x < o.size(); ++x)
        if (rel.rows[x] != o[x]) run.mismatch("relation of E(L," + to_string(s) + ") differs in row " + std::to_string(x));
    }
    return;
  }
  for (Int r : {0, 1, 3}) {
    const Entourage ball = Entourage::metric_ball(d, r);
    for (const Point& x : pts)
      for (const Point& y : pts) {
        ++run.report.checked;
        if (entourage_membership(ball, x, y, run.budget).yes() != *entourage_member(run.a, ball, x, y, 0))
          run.mismatch("ball " + std::to_string(r) + " at " + str(x) + "," + str(y));
      }
  }
}

void check_neighborhood(Run& run) {
  const auto sets = test_sets(run.a);
  const std::size_t d = run.a.dim();
  const Int wn = dim_window(d, run.w, 32, 8, 3);
  const auto ys = window(run.a.space(), wn);
  std::vector<Point> anchors{run.a.space().is_finite() ? Point{0} : Point(d, 0)};
  if (run.a.space().is_finite()) {
    for (std::size_t i = 1; i < run.a.space().size(); ++i) anchors.push_back({static_cast<Int>(i)});
  } else {
    Point p(d, 0);
    p[0] = 3;
    anchors.push_back(p);
    anchors.push_back(Point(d, -2));
  }
  for (std::size_t s = 0; s < sets.size() && s < 2; ++s)
    for (const Point& x : anchors) {
      const Entourage e = Entourage::orbit_pair(run.ptr, sets[s]);
      const Neighborhood nb = neighborhood(e, SetDescriptor::points(x.size(), {x}), run.budget);
      for (const Point& y : ys) {
        if (!nb.exact && norm(y) > nb.window) continue;
        const Int gw = std::min<Int>(extent(sets[s]) + std::max(norm(x), norm(y)) + 1, run.a.rank() == 1 ? 4096 : 12);
        const PairSearch o = orbit_pair(run.a, sets[s], x, y, gw);
        const bool sym = member(nb.set, y);
        ++run.report.checked;
        if (sym == o.found) continue;
        if (sym && !o.certified) {
          // Out of the oracle's reach: replay the symbolic witness instead.
          const Membership m = entourage_membership(e, x, y, run.budget);
          if (m.witness && orbit_pair_witness(run.a, sets[s], x, y, *m.witness)) continue;
        }
        const std::string msg = "E(L," + to_string(sets[s]) + ")[" + str(x) + "] at " + str(y) + ": symbolic " +
                                (sym ? "in" : "out") + ", oracle " + (o.found ? "in" : "out");
        if (sym && !o.certified) run.advisory(msg);
        else run.mismatch(msg);
      }
    }
}

void check_composition(Run& run) {
  const auto sets = test_sets(run.a);
  const std::size_t d = run.a.dim();
  const Int wc = dim_window(d, run.w, 6, 2, 1);
  const auto pts = window(run.a.space(), wc);
  const std::size_t n = pts.size();
  const Int gw = run.a.rank() == 1 ? 64 : 12;
  const std::size_t s2 = std::min<std::size_t>(1, sets.size() - 1);
  const Entourage e1 = Entourage::orbit_pair(run.ptr, sets[0]), e2 = Entourage::orbit_pair(run.ptr, sets[s2]);
  std::vector<std::vector<bool>> r1(n, std::vector<bool>(n)), r2 = r1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      r1[i][j] = orbit_pair(run.a, sets[0], pts[i], pts[j], gw).found;
      r2[i][j] = orbit_pair(run.a, sets[s2], pts[i], pts[j], gw).found;
    }
  const Entourage comp = Entourage::compose(e1, e2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      std::optional<std::size_t> mid;
      for (std::size_t j = 0; j < n && !mid; ++j)
        if (r1[i][j] && r2[j][k]) mid = j;
      if (!mid) continue;
      ++run.report.checked;
      const Membership m = entourage_membership(comp, pts[i], pts[k], run.budget);
      if (m.no())
        run.mismatch("composition at " + str(pts[i]) + "," + str(pts[k]) + " via " + str(pts[*mid]) +
                     ": symbolic out");
      else if (!m.yes())
        run.advisory("composition at " + str(pts[i]) + "," + str(pts[k]) + ": symbolic undecided");
    }
  if (run.a.space().is_finite()) return;
  const Entourage balls = Entourage::compose(Entourage::metric_ball(d, 1), Entourage::metric_ball(d, 2));
  for (const Point& x : pts)
    for (const Point& z : pts) {
      ++run.report.checked;
      const bool o = norm(translate(IntMatrix::identity(d), x, z, -1)) <= 3;
      if (entourage_membership(balls, x, z, run.budget).yes() != o)
        run.mismatch("ball composition at " + str(x) + "," + str(z));
    }
}

void check_bounded(Run& run) {
  if (run.a.space().is_finite()) return;
  const std::size_t d = run.a.dim();
  const Int wb = dim_window(d, run.w, 24, 6, 2);
  CoarseChain orbit;
  orbit.kind = CoarseChain::Kind::OrbitPair;
  orbit.space = run.a.space();
  orbit.bornology = run.a.space_bornology();
  orbit.action = run.ptr;
  const std::vector<CoarseStructure> structures{metric_structure(d),
                                                associated_connected_structure(run.a.space_bornology()),
                                                CoarseStructure("orbit", orbit)};
  std::vector<SetDescriptor> sets{level(run.a.space_bornology(), 0), level(run.a.space_bornology(), 1)};
  Point lo(d, 3), hi(d, 5);
  sets.push_back(Box::closed(lo, hi));
  for (const auto& cs : structures)
    for (const auto& s : sets) {
      BoundVerdict v;
      try {
        v = coarsely_bounded(cs, s, run.budget);
      } catch (const Error& e) {
        run.advisory(cs.name() + " on " + to_string(s) + ": " + e.what());
        continue;
      }
      const std::string at = cs.name() + " on " + to_string(s);
      if (v.is_bounded()) {
        std::vector<Point> in;
        for (const Point& y : window(run.a.space(), wb))
          if (member(s, y)) in.push_back(y);
        if (in.empty()) continue;
        std::vector<Point> anchors = v.anchors;
        if (anchors.empty()) anchors.push_back(in.front());
        const Entourage lvl = cs.level(v.index);
        for (const Point& y : in) {
          ++run.report.checked;
          bool hit = false, open = false;
          for (const Point& p : anchors) {
            const Int gw = std::min<Int>(extent(s) + extent(lvl.kind() == Entourage::Kind::OrbitPair ? lvl.set() : s) +
                                             std::max(norm(p), norm(y)) + 1,
                                         run.a.rank() == 1 ? 4096 : 12);
            const auto m = entourage_member(run.a, lvl, p, y, gw);
            hit = hit || (m && *m);
            open = open || !m;
          }
          if (!hit) {
            const std::string msg = at + ": bounded at " + std::to_string(v.index) + " but " + str(y) + " is outside";
            if (open) run.advisory(msg);
            else run.mismatch(msg);
            break;
          }
        }
      } else if (v.is_unbounded()) {
        ++run.report.checked;
        bool ok = true;
        if (v.base_point && v.direction)
          for (Int t = 0; t <= 8 && ok; ++t) {
            Point p = *v.base_point;
            for (std::size_t i = 0; i < p.size(); ++i) p[i] += t * (*v.direction)[i];
            ok = member(s, p);
          }
        for (const Point& p : v.escape) ok = ok && member(s, p);
        if (!ok) run.mismatch(at + ": escape ray leaves the set");
      }
    }
}

void check_closure(Run& run) {
  if (!run.a.space().is_finite()) return;
  const std::size_t n = run.a.space().size();
  std::vector<Rows> base;
  for (const auto& s : test_sets(run.a)) base.push_back(orbit_pair_rows(run.a, s));
  std::vector<Relation> rel;
  for (const Rows& r : base) {
    Relation x = Relation::empty(n);
    for (std::size_t i = 0; i < n; ++i) x.rows[i] = r[i];
    rel.push_back(x);
  }
  const FiniteClosure sym = close_finite_base(run.a.space(), rel);
  const auto gens = naive_closure(n, base);
  const auto to_rel = [&](const Rows& r) {
    Relation x = Relation::empty(n);
    for (std::size_t i = 0; i < n; ++i) x.rows[i] = r[i];
    return x;
  };
  if (n * n <= 16) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n * n)); ++mask) {
      Rows r(n, 0);
      for (std::size_t i = 0; i < n; ++i) r[i] = mask >> (i * n) & ((std::uint64_t{1} << n) - 1);
      ++run.report.checked;
      if (in_family(gens, r) != sym.contains(to_rel(r))) {
        run.mismatch("closure membership differs at relation mask " + std::to_string(mask));
        return;
      }
    }
    return;
  }
  for (const Rows& g : gens) {
    ++run.report.checked;
    if (!sym.contains(to_rel(g))) run.mismatch("naive closure member missing from the antichain");
  }
  for (const Relation& r : sym.antichain) {
    ++run.report.checked;
    Rows x(r.rows.begin(), r.rows.end());
    if (!in_family(gens, x)) run.mismatch("antichain element outside the naive closure");
  }
}

}  // namespace

std::vector<CrossCheckReport> cross_check(const std::vector<ActionPtr>& instances,
                                          const std::vector<std::string>& selected, Int window_radius,
                                          const Budget& budget) {
  std::vector<CrossCheckReport> out;
  Budget b = budget;
  b.window = window_radius;
  for (const ActionPtr& a : instances)
    for (const std::string& p : selected.empty() ? primitives() : selected) {
      CrossCheckReport r;
      r.primitive = p;
      r.instance = a->name();
      r.window = window_radius;
      Run run{a, *a, window_radius, b, r};
      try {
        if (p == "transporter") check_transporter(run);
        else if (p == "membership") check_membership(run);
        else if (p == "neighborhood") check_neighborhood(run);
        else if (p == "composition") check_composition(run);
        else if (p == "bounded") check_bounded(run);
        else if (p == "closure") check_closure(run);
        else throw Error(Error::Code::Validation, "unknown primitive " + p);
      } catch (const Error& e) {
        if (e.code() == Error::Code::Validation) throw;
        r.advisories.push_back(std::string("skipped: ") + e.what());
      }
      out.push_back(std::move(r));
    }
  return out;
}

// ---- random instances --------------------------------------------------------------------------

std::optional<Profile> parse_profile(const std::string& s) {
  if (s == "finite") return Profile::Finite;
  if (s == "lattice-k1") return Profile::LatticeK1;
  if (s == "lattice-k2") return Profile::LatticeK2;
  return std::nullopt;
}

const char* to_string(Profile p) {
  switch (p) {
    case Profile::Finite: return "finite";
    case Profile::LatticeK1: return "lattice-k1";
    case Profile::LatticeK2: return "lattice-k2";
  }
  return "?";
}

namespace {

using Table = std::vector<std::vector<Int>>;

Table cyclic(std::size_t n) {
  Table t(n, std::vector<Int>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) t[a][b] = static_cast<Int>((a + b) % n);
  return t;
}

Table klein() {
  Table t(4, std::vector<Int>(4));
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b) t[a][b] = static_cast<Int>(a ^ b);
  return t;
}

// Permutations of three letters, composed right to left.
Table symmetric3() {
  std::vector<std::array<int, 3>> perms;
  std::array<int, 3> p{0, 1, 2};
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  Table t(6, std::vector<Int>(6));
  for (std::size_t a = 0; a < 6; ++a)
    for (std::size_t b = 0; b < 6; ++b) {
      std::array<int, 3> c{};
      for (int i = 0; i < 3; ++i) c[i] = perms[a][perms[b][i]];
      t[a][b] = std::find(perms.begin(), perms.end(), c) - perms.begin();
    }
  return t;
}

std::vector<std::vector<Int>> subgroups(const Table& t) {
  const std::size_t n = t.size();
  std::vector<std::vector<Int>> out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    if (!(mask & 1)) continue;  // identity is element 0 in every table here
    bool closed = true;
    for (std::size_t a = 0; a < n && closed; ++a)
      for (std::size_t b = 0; b < n && closed; ++b)
        if ((mask >> a & 1) && (mask >> b & 1)) closed = mask >> t[a][b] & 1;
    if (!closed) continue;
    std::vector<Int> h;
    for (std::size_t a = 0; a < n; ++a)
      if (mask >> a & 1) h.push_back(static_cast<Int>(a));
    out.push_back(h);
  }
  return out;
}

ActionPtr random_finite(std::mt19937_64& rng, std::uint64_t seed) {
  const auto pick = [&](Int lo, Int hi) { return std::uniform_int_distribution<Int>(lo, hi)(rng); };
  Table t;
  switch (pick(0, 2)) {
    case 0: t = cyclic(static_cast<std::size_t>(pick(1, 6))); break;
    case 1: t = klein(); break;
    default: t = symmetric3(); break;
  }
  const std::size_t order = t.size();
  const auto subs = subgroups(t);
  // Labels are left cosets g H of randomly chosen subgroups; block[c] names
  // the subgroup draw, since the same subgroup may be drawn twice.
  std::vector<std::vector<Int>> cosets;
  std::vector<int> block;
  const std::size_t budget = static_cast<std::size_t>(pick(1, 5));
  for (int attempt = 0; attempt < 8 && cosets.size() < budget; ++attempt) {
    const auto& h = subs[static_cast<std::size_t>(pick(0, static_cast<Int>(subs.size()) - 1))];
    if (cosets.size() + order / h.size() > budget) continue;
    std::set<std::vector<Int>> seen;
    for (std::size_t g = 0; g < order; ++g) {
      std::vector<Int> c;
      for (Int x : h) c.push_back(t[g][static_cast<std::size_t>(x)]);
      std::sort(c.begin(), c.end());
      if (seen.insert(c).second) {
        cosets.push_back(c);
        block.push_back(attempt);
      }
    }
  }
  if (cosets.empty()) {
    // Only the whole group fits: one fixed point.
    std::vector<Int> all(order);
    for (std::size_t g = 0; g < order; ++g) all[g] = static_cast<Int>(g);
    cosets.push_back(all);
    block.push_back(0);
  }
  const std::size_t n = cosets.size();
  std::vector<std::vector<Int>> perm(order, std::vector<Int>(n));
  for (std::size_t g = 0; g < order; ++g)
    for (std::size_t c = 0; c < n; ++c) {
      std::vector<Int> img;
      for (Int x : cosets[c]) img.push_back(t[g][static_cast<std::size_t>(x)]);
      std::sort(img.begin(), img.end());
      for (std::size_t e = 0; e < n; ++e)
        if (block[e] == block[c] && cosets[e] == img) perm[g][c] = static_cast<Int>(e);
    }
  std::vector<std::string> elements, labels;
  for (std::size_t g = 0; g < order; ++g) elements.push_back(g == 0 ? "e" : "g" + std::to_string(g));
  for (std::size_t c = 0; c < n; ++c) labels.push_back("p" + std::to_string(c));
  const GroundSpace gs = GroundSpace::finite(elements), space = GroundSpace::finite(labels);
  BornologySpec bx = BornologySpec::maximal(space);
  if (pick(0, 1) == 1) {
    std::vector<LabelSet> base;
    LabelSet covered = 0;
    for (Int k = pick(1, 3); k > 0; --k) {
      const LabelSet s = static_cast<LabelSet>(pick(1, (Int{1} << n) - 1));
      base.push_back(s);
      covered |= s;
    }
    for (std::size_t i = 0; i < n; ++i)
      if (!(covered >> i & 1)) base.push_back(LabelSet{1} << i);
    // A base must be directed: close it under pairwise unions.
    for (std::size_t i = 0; i < base.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (std::find(base.begin(), base.end(), base[i] | base[j]) == base.end()) base.push_back(base[i] | base[j]);
    bx = BornologySpec::finite_base(space, base);
  }
  GroupSpec g = GroupSpec::finite(elements, t, BornologySpec::maximal(gs));
  return std::make_shared<ActionInstance>("random-finite-" + std::to_string(seed), std::move(g), space,
                                          PermutationRule{std::move(perm)}, bx);
}

ActionPtr random_lattice(std::mt19937_64& rng, std::uint64_t seed, std::size_t k, Profile p) {
  const auto pick = [&](Int lo, Int hi) { return std::uniform_int_distribution<Int>(lo, hi)(rng); };
  const std::size_t d = static_cast<std::size_t>(pick(1, 3));
  std::vector<Point> cols(k, Point(d));
  for (auto& c : cols)
    for (Int& v : c) v = pick(-2, 2);
  ChainShape s;
  for (std::size_t i = 0; i < d; ++i) {
    s.lower.push_back(pick(0, 3) == 0 ? ChainEnd::inf() : ChainEnd::affine(-pick(1, 2), -pick(0, 2)));
    s.upper.push_back(pick(0, 3) == 0 ? ChainEnd::inf() : ChainEnd::affine(pick(1, 2), pick(0, 2)));
  }
  const BornologySpec bl = pick(0, 6) == 0 ? BornologySpec::maximal(GroundSpace::lattice(k)) : BornologySpec::cubes(k);
  // Under the maximal group bornology whole orbits must be bounded, so the
  // coordinates the action moves are left unconstrained.
  if (bl.is_maximal())
    for (std::size_t i = 0; i < d; ++i)
      if (std::any_of(cols.begin(), cols.end(), [&](const Point& c) { return c[i] != 0; }))
        s.lower[i] = s.upper[i] = ChainEnd::inf();
  TranslationRule rule{IntMatrix::from_columns(d, cols), std::nullopt};
  return std::make_shared<ActionInstance>(std::string("random-") + to_string(p) + "-" + std::to_string(seed),
                                          GroupSpec::lattice(k, bl), GroundSpace::lattice(d), rule,
                                          BornologySpec::chain(s));
}

}  // namespace

ActionPtr random_instance(std::uint64_t seed, Profile profile) {
  std::mt19937_64 rng(seed);
  switch (profile) {
    case Profile::Finite: return random_finite(rng, seed);
    case Profile::LatticeK1: return random_lattice(rng, seed, 1, profile);
    case Profile::LatticeK2: return random_lattice(rng, seed, 2, profile);
  }
  throw Error(Error::Code::Validation, "unknown profile");
}

}  // namespace bcs::oracle
