#include "bcs/actions.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace bcs {

namespace {

Int twisted_window(const Budget& budget) { return std::min<Int>(budget.window, 32); }

Int twisted_space_window(std::size_t dim) { return dim == 1 ? 32 : dim == 2 ? 12 : 5; }

Point unit(std::size_t k, std::size_t i, Int s) {
  Point e(k, 0);
  e[i] = s;
  return e;
}

std::string list_points(const std::vector<Point>& pts, std::size_t cap = 16) {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < pts.size() && i < cap; ++i) out << (i ? "," : "") << point_to_string(pts[i]);
  if (pts.size() > cap) out << ",...";
  out << '}';
  return out.str();
}

// Points of s inside the cube of radius r (s may be infinite).
std::vector<Point> points_near(const SetDescriptor& s, Int r) {
  std::vector<Point> out;
  const Box w = Box::cube(s.dim(), r);
  for (const Box& b : as_boxes(s)) {
    const Box c = box_intersect(b, w);
    if (c.is_empty()) continue;
    Point p(c.dim());
    for (std::size_t i = 0; i < c.dim(); ++i) p[i] = c[i].lo.value;
    while (true) {
      out.push_back(p);
      std::size_t i = c.dim();
      bool done = true;
      while (i-- > 0) {
        if (p[i] < c[i].hi.value) {
          ++p[i];
          for (std::size_t j = i + 1; j < c.dim(); ++j) p[j] = c[j].lo.value;
          done = false;
          break;
        }
      }
      if (done) break;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

// ---- transporters ---------------------------------------------------------------

bool Transporter::contains(std::span<const Int> l) const {
  if (kind == Kind::Explicit) return std::binary_search(elements.begin(), elements.end(), Point(l.begin(), l.end()));
  const Point v = m.apply(l);
  return std::any_of(constraints.begin(), constraints.end(), [&](const Box& c) { return c.contains(v); });
}

bool Transporter::is_empty() const {
  if (kind == Kind::Explicit) return elements.empty();
  return std::none_of(constraints.begin(), constraints.end(),
                      [&](const Box& c) { return !c.is_empty() && lattice_point_in(m, c); });
}

std::string describe(const Transporter& t) {
  std::ostringstream out;
  if (t.kind == Transporter::Kind::Explicit) {
    out << list_points(t.elements);
    if (!t.exact) out << " within window " << t.window;
    return out.str();
  }
  out << "{l : M l in ";
  for (std::size_t i = 0; i < t.constraints.size(); ++i) out << (i ? " u " : "") << to_string(t.constraints[i]);
  if (t.constraints.empty()) out << "{}";
  out << "}";
  return out.str();
}

Transporter transporter(const ActionInstance& a, const SetDescriptor& b, const SetDescriptor& b2,
                        const Budget& budget) {
  check_dim(b.dim(), a.dim(), "transporter");
  check_dim(b2.dim(), a.dim(), "transporter");
  Transporter t;
  if (a.is_exact_lattice()) {
    t.m = a.matrix();
    if (b.is_empty() || b2.is_empty()) return t;
    for (const Box& src : as_boxes(b))
      for (const Box& dst : as_boxes(b2))
        if (!src.is_empty() && !dst.is_empty()) t.constraints.push_back(difference_box(dst, src));
    return t;
  }
  t.kind = Transporter::Kind::Explicit;
  if (b.is_empty() || b2.is_empty()) return t;
  if (a.is_permutation()) {
    const std::size_t n = a.space().size();
    for (std::size_t g = 0; g < a.group().table().order(); ++g) {
      const Point l{static_cast<Int>(g)};
      for (std::size_t x = 0; x < n; ++x)
        if (set_membership(b, Point{static_cast<Int>(x)}) && set_membership(b2, a.act(l, Point{static_cast<Int>(x)}))) {
          t.elements.push_back(l);
          break;
        }
    }
    return t;
  }
  // Twisted rule: window evidence only.
  t.exact = false;
  t.window = twisted_window(budget);
  const auto xs = points_near(b, twisted_space_window(a.dim()));
  for (Int n = -t.window; n <= t.window; ++n) {
    const Point l{n};
    for (const Point& x : xs)
      if (set_membership(b2, a.act(l, x))) {
        t.elements.push_back(l);
        break;
      }
  }
  return t;
}

namespace {

BoundVerdict ray_verdict(const BornologySpec& bl, Point l0, Point r, std::size_t coord, bool up,
                         const Budget& budget) {
  BoundVerdict v;
  v.outcome = BoundVerdict::Outcome::Unbounded;
  for (Int k = 0; k <= budget.max_index; ++k) {
    const Box lev = bl.level_box(k);
    Int t = 0;
    if (!lev.is_empty()) {
      if (up) t = std::max<Int>(0, floor_div(lev[coord].hi.value - l0[coord], r[coord]) + 1);
      else t = std::max<Int>(0, floor_div(l0[coord] - lev[coord].lo.value, -r[coord]) + 1);
    }
    Point p = l0;
    for (std::size_t i = 0; i < p.size(); ++i) p[i] += t * r[i];
    v.escape.push_back(std::move(p));
  }
  v.base_point = std::move(l0);
  v.direction = std::move(r);
  v.note = "transporter recedes along coordinate " + std::to_string(coord);
  return v;
}

BoundVerdict lattice_piece_bounded(const IntMatrix& m, const Box& c, const BornologySpec& bl, const Budget& budget) {
  if (c.is_empty()) return BoundVerdict::bounded(0, "empty transporter");
  if (auto bb = integer_bounding_box(m, c)) {
    if (bb->is_empty()) return BoundVerdict::bounded(0, "empty transporter");
    BoundVerdict v = is_bounded(bl, *bb, budget);
    v.note = "bounding box " + to_string(*bb);
    return v;
  }
  const std::size_t k = m.cols();
  const Point l0 = *lattice_point_in(m, c);
  std::vector<Interval> iv(k);
  bool hull_exact = true;
  for (std::size_t i = 0; i < k; ++i) {
    const auto range = functional_range(m, c, unit(k, i, 1));
    const bool lower_free = bl.shape().lower[i].infinite;
    const bool upper_free = bl.shape().upper[i].infinite;
    if (!range->hi && !upper_free)
      return ray_verdict(bl, l0, *recession_along(m, c, unit(k, i, 1)), i, true, budget);
    if (!range->lo && !lower_free)
      return ray_verdict(bl, l0, *recession_along(m, c, unit(k, i, -1)), i, false, budget);
    iv[i].lo = range->lo ? End::at(ceil_of(*range->lo)) : End::neg_inf();
    iv[i].hi = range->hi ? End::at(floor_of(*range->hi)) : End::pos_inf();
    hull_exact = false;
  }
  BoundVerdict v = is_bounded(bl, Box(iv), budget);
  v.exact = v.exact && hull_exact;
  v.note = "unbounded only along infinite ends of the group bornology";
  return v;
}

}  // namespace

BoundVerdict transporter_bounded(const ActionInstance& a, const Transporter& t, const Budget& budget) {
  const BornologySpec& bl = a.group_bornology();
  if (bl.is_maximal()) return BoundVerdict::bounded(0, "maximal group bornology");
  if (t.kind == Transporter::Kind::Explicit) {
    if (t.elements.empty()) return BoundVerdict::bounded(0, "empty transporter");
    if (!t.exact)
      for (const Point& l : t.elements)
        if (l[0] == t.window || l[0] == -t.window) {
          BoundVerdict v = BoundVerdict::inconclusive("transporter reaches the window edge " + std::to_string(t.window));
          v.escape = {l};
          return v;
        }
    BoundVerdict v = is_bounded(bl, SetDescriptor::points(t.elements.front().size(), t.elements), budget);
    v.exact = t.exact;
    return v;
  }
  if (bl.is_finite_base()) return BoundVerdict::bounded(0);
  BoundVerdict out = BoundVerdict::bounded(0, "empty transporter");
  for (const Box& c : t.constraints) {
    BoundVerdict v = lattice_piece_bounded(t.m, c, bl, budget);
    if (!v.is_bounded()) return v;
    if (v.index >= out.index) {
      const bool exact = out.exact && v.exact;
      out = std::move(v);
      out.exact = exact;
    }
  }
  return out;
}

// ---- classification ---------------------------------------------------------------

std::vector<Point> sample_points(const ActionInstance& a, const Budget& budget) {
  constexpr std::size_t kCap = 32;
  std::vector<Point> out;
  if (a.is_permutation()) {
    for (std::size_t i = 0; i < a.space().size() && out.size() < kCap; ++i) out.push_back({static_cast<Int>(i)});
    return out;
  }
  const std::size_t d = a.dim();
  const Int r = std::min<Int>(budget.window, d == 1 ? 8 : d == 2 ? 3 : 1);
  auto pts = points_near(Box::full(d), r);
  std::stable_sort(pts.begin(), pts.end(), [](const Point& p, const Point& q) {
    Int np = 0, nq = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      np = std::max(np, p[i] < 0 ? -p[i] : p[i]);
      nq = std::max(nq, q[i] < 0 ? -q[i] : q[i]);
    }
    return np < nq;
  });
  for (const Point& x : pts) {
    if (out.size() >= kCap) break;
    if (!a.is_exact_lattice()) {
      out.push_back(x);
      continue;
    }
    const bool fresh = std::none_of(out.begin(), out.end(), [&](const Point& y) {
      Point diff(d);
      for (std::size_t i = 0; i < d; ++i) diff[i] = x[i] - y[i];
      return lattice_point_in(a.matrix(), Box::point(diff)).has_value();
    });
    if (fresh) out.push_back(x);
  }
  return out;
}

namespace {

void add_ray(Verdict& v, const BoundVerdict& b) {
  if (b.base_point) v.add("witness.base", point_to_string(*b.base_point));
  if (b.direction) v.add("witness.direction", point_to_string(*b.direction));
  if (!b.escape.empty()) v.add("witness.escape", list_points(b.escape));
  v.add("witness.note", b.note);
}

// k(i, j) = alpha i + beta j + gamma on the whole table, when it is affine.
std::optional<std::string> affine_fit(const std::vector<std::vector<Int>>& k) {
  if (k.size() < 2) return std::nullopt;
  const Int g = k[0][0], al = k[1][0] - g, be = k[0][1] - g;
  for (std::size_t i = 0; i < k.size(); ++i)
    for (std::size_t j = 0; j < k[i].size(); ++j)
      if (k[i][j] != al * static_cast<Int>(i) + be * static_cast<Int>(j) + g) return std::nullopt;
  std::ostringstream out;
  out << al << "*i+" << be << "*j+" << g;
  return out.str();
}

Verdict from_bound(const std::string& what, const BoundVerdict& b, bool exact) {
  if (b.is_bounded()) {
    Verdict v = Verdict::confirmed(what + ": bounded", exact && b.exact);
    v.add("index", std::to_string(b.index));
    return v;
  }
  if (b.is_unbounded()) {
    Verdict v = Verdict::refuted(what + ": unbounded", exact);
    add_ray(v, b);
    return v;
  }
  return Verdict::inconclusive(what + ": " + b.note);
}

}  // namespace

Classification classify(const ActionInstance& a, const Budget& budget) {
  Classification c;
  c.samples = sample_points(a, budget);
  const bool exact = !a.is_translation() || a.is_exact_lattice();
  const SetDescriptor x0 = SetDescriptor::points(a.dim(), {c.samples.front()});

  // (BI): the stabilizer of a point. For translations it is the kernel of M,
  // the same at every point.
  {
    const BoundVerdict s = transporter_bounded(a, transporter(a, x0, x0, budget), budget);
    c.bi = from_bound("stabilizer", s, exact);
    c.bi.add("point", point_to_string(c.samples.front()));
    if (a.is_exact_lattice()) c.bi.add("kernel", list_points(column_hnf(a.matrix()).kernel()));
  }

  const BornologySpec& bx = a.space_bornology();
  {
    std::optional<Verdict> weak;
    bool undecided = false;
    Int worst = 0;
    for (const Point& x : c.samples) {
      const SetDescriptor px = SetDescriptor::points(a.dim(), {x});
      for (Int j = 0; j <= budget.max_index && !weak; ++j) {
        const BoundVerdict b = transporter_bounded(a, transporter(a, px, bx.level(j), budget), budget);
        if (b.is_bounded()) {
          worst = std::max(worst, b.index);
          continue;
        }
        if (b.is_unbounded()) {
          weak = Verdict::refuted("point transporter is unbounded", exact);
          weak->add("witness.point", point_to_string(x)).add("witness.level", std::to_string(j));
          add_ray(*weak, b);
        } else {
          undecided = true;
        }
      }
      if (weak) break;
    }
    if (!weak) {
      weak = undecided ? Verdict::inconclusive("some point transporter is undecided")
                       : Verdict::confirmed("every sampled point transporter is bounded", exact);
      weak->add("samples", std::to_string(c.samples.size())).add("max_index", std::to_string(worst));
    }
    c.weakly = std::move(*weak);
  }

  {
    std::optional<Verdict> proper;
    bool undecided = false;
    const std::size_t n = static_cast<std::size_t>(budget.max_index) + 1;
    c.k_table.assign(n, std::vector<Int>(n, -1));
    for (std::size_t i = 0; i < n && !proper; ++i)
      for (std::size_t j = 0; j < n && !proper; ++j) {
        const BoundVerdict b = transporter_bounded(
            a, transporter(a, bx.level(static_cast<Int>(i)), bx.level(static_cast<Int>(j)), budget), budget);
        if (b.is_bounded()) {
          c.k_table[i][j] = b.index;
        } else if (b.is_unbounded()) {
          proper = Verdict::refuted("transporter between bounded sets is unbounded", exact);
          proper->add("witness.levels", "(" + std::to_string(i) + "," + std::to_string(j) + ")");
          add_ray(*proper, b);
        } else {
          undecided = true;
        }
      }
    if (!proper) {
      if (undecided) {
        proper = Verdict::inconclusive("some transporter is undecided");
      } else {
        proper = Verdict::confirmed("every level transporter is bounded", exact);
        const auto fit = affine_fit(c.k_table);
        proper->add("k", fit ? *fit : "table");
        std::ostringstream rows;
        for (std::size_t i = 0; i < n; ++i) {
          rows << (i ? ";" : "");
          for (std::size_t j = 0; j < n; ++j) rows << (j ? "," : "") << c.k_table[i][j];
        }
        proper->add("k_table", rows.str());
      }
    }
    c.b_proper = std::move(*proper);
  }
  return c;
}

// ---- equi-control and transitivity ---------------------------------------------------------

Verdict equi_controlled_check(const ActionPtr& a, const CoarseStructure& cs, const Budget& budget) {
  if (!(cs.space() == a->space())) throw Error(Error::Code::DimensionMismatch, "structure is not on the action space");
  if (cs.is_finite()) {
    for (std::size_t i = 0; i < cs.closure().antichain.size(); ++i) {
      const Relation& r = cs.closure().antichain[i];
      std::vector<PointPair> pairs;
      for (std::size_t x = 0; x < r.n; ++x)
        for (std::size_t y = 0; y < r.n; ++y)
          if (r.has(x, y)) pairs.push_back({{static_cast<Int>(x)}, {static_cast<Int>(y)}});
      const Relation swept = to_relation(*swept_entourage(a, Entourage::finite_rel(cs.space(), pairs)), budget);
      if (!cs.closure().contains(swept)) {
        Verdict v = Verdict::refuted("swept maximal relation " + std::to_string(i) + " is not controlled");
        v.add("relation", std::to_string(i));
        return v;
      }
    }
    return Verdict::confirmed("every swept maximal relation is controlled");
  }
  const CoarseChain& ch = cs.chain();
  std::optional<CoarseStructure> swept;
  std::string why;
  switch (ch.kind) {
    case CoarseChain::Kind::Metric:
      // Signed permutations and translations preserve the sup metric.
      if (a->is_translation()) {
        swept = cs;
        why = "translations are isometries";
      }
      break;
    case CoarseChain::Kind::GroupRight:
      if (a->is_exact_lattice() && !ch.group->is_finite()) {
        swept = cs;
        why = "difference sets are translation invariant";
      }
      break;
    case CoarseChain::Kind::Connected:
      if (a->is_exact_lattice()) {
        CoarseChain o;
        o.kind = CoarseChain::Kind::OrbitPair;
        o.space = ch.space;
        o.bornology = ch.bornology;
        o.action = a;
        swept = CoarseStructure("swept " + cs.name(), std::move(o));
        why = "sweeping (B x B) u diag gives E(L, B)";
      }
      break;
    case CoarseChain::Kind::OrbitPair:
      if (a->is_exact_lattice() && ch.action->is_exact_lattice() && ch.action->matrix() == a->matrix()) {
        swept = cs;
        why = "E(L, B) is invariant";
      }
      break;
  }
  if (!swept) return Verdict::inconclusive("no closed form for the swept levels of " + cs.name());
  Verdict v = structure_leq(*swept, cs, budget);
  v.summary = "equi-control of " + cs.name() + ": " + v.summary;
  v.add("swept", why);
  return v;
}

Verdict coarsely_transitive_check(const ActionInstance& a, const CoarseStructure& cs, const Budget& budget) {
  if (cs.is_finite()) {
    Verdict v = Verdict::confirmed("finite space: B = X is coarsely bounded");
    v.add("set", "X");
    return v;
  }
  if (!a.is_exact_lattice()) return Verdict::inconclusive("twisted rule: covering not decided");
  const auto ib = induced_bornology(cs);
  if (!ib) return Verdict::inconclusive("no closed form for the bounded sets of " + cs.name());
  if (ib->is_maximal()) {
    Verdict v = Verdict::confirmed("X itself is coarsely bounded");
    v.add("set", "X");
    return v;
  }
  const std::size_t d = a.dim();
  std::vector<Point> cols = a.matrix().columns();
  bool one_sided = false;
  for (std::size_t i = 0; i < d; ++i) {
    const bool lo = ib->shape().lower[i].infinite, hi = ib->shape().upper[i].infinite;
    if (lo && hi) cols.push_back(unit(d, i, 1));
    one_sided = one_sided || lo != hi;
  }
  const bool deficient = column_hnf(IntMatrix::from_columns(d, cols)).rank < d;
  std::optional<Point> last_gap;
  Int last_level = 0;
  bool undecided = false;
  const Int cap = deficient ? budget.max_index : budget.cofinal_cap();
  for (Int n = 0; n <= cap; ++n) {
    const Box c = ib->level_box(n);
    if (c.is_empty()) continue;
    const auto [t, gap] = lattice_cover(c, a.matrix());
    if (t == Truth::True) {
      Verdict v = Verdict::confirmed("L B = X for a bounded level");
      v.add("level", std::to_string(n)).add("set", to_string(c));
      return v;
    }
    if (t == Truth::Unknown) undecided = true;
    if (gap) {
      last_gap = gap;
      last_level = n;
    }
  }
  if (deficient && !one_sided && last_gap) {
    Verdict v = Verdict::refuted("orbits of bounded sets lie near a lattice of rank < " + std::to_string(d));
    v.add("witness.level", std::to_string(last_level)).add("witness.point", point_to_string(*last_gap));
    return v;
  }
  if (undecided) return Verdict::inconclusive("covering undecided for one-sided levels");
  return Verdict::inconclusive("no level up to " + std::to_string(cap) + " covers X");
}

// ---- orbit bornologies ---------------------------------------------------------------------

OrbitBornologies orbit_bornologies(const ActionInstance& a, const Point& x) {
  check_dim(x.size(), a.dim(), "orbit_bornologies");
  if (a.is_permutation()) {
    std::set<Int> orbit;
    for (std::size_t g = 0; g < a.group().table().order(); ++g) orbit.insert(a.act(Point{static_cast<Int>(g)}, x)[0]);
    std::vector<std::string> labels;
    for (Int o : orbit) labels.push_back(a.space().labels()[o]);
    const GroundSpace s = GroundSpace::finite(std::move(labels));
    return {BornologySpec::maximal(s), BornologySpec::maximal(s)};
  }
  if (!a.is_exact_lattice()) throw Error(Error::Code::Unsupported, "orbit bornologies of a twisted rule");
  const ColumnHnf h = column_hnf(a.matrix());
  if (h.rank == 0) {
    const GroundSpace s = GroundSpace::finite({point_to_string(x)});
    return {BornologySpec::maximal(s), BornologySpec::maximal(s)};
  }
  if (h.rank < a.rank()) throw Error(Error::Code::Unsupported, "orbit map with a non-trivial kernel");
  const MapDescriptor f = MapDescriptor::orbit(x, a.matrix());
  return {inverse_image_bornology(f, a.space_bornology()), image_bornology(f, a.group_bornology())};
}

Verdict orbit_bornologies_agree(const ActionInstance& a, const Point& x, const Budget& budget) {
  const OrbitBornologies ob = orbit_bornologies(a, x);
  const Verdict push_in_pull = bornology_leq(ob.pushforward, ob.pullback, budget);
  const Verdict pull_in_push = bornology_leq(ob.pullback, ob.pushforward, budget);
  Verdict v = push_in_pull.holds() && pull_in_push.holds()
                  ? Verdict::confirmed("orbit bornologies agree")
                  : (push_in_pull.fails() || pull_in_push.fails() ? Verdict::refuted("orbit bornologies differ")
                                                                  : Verdict::inconclusive("orbit bornologies undecided"));
  v.add("point", point_to_string(x));
  v.add("pullback", describe(ob.pullback)).add("pushforward", describe(ob.pushforward));
  v.add("push<=pull", to_string(push_in_pull.status)).add("pull<=push", to_string(pull_in_push.status));
  if (pull_in_push.fails()) v.add("pull<=push.detail", pull_in_push.summary);
  if (push_in_pull.fails()) v.add("push<=pull.detail", push_in_pull.summary);
  return v;
}

CoarseStructure group_right_structure(const GroupSpec& g) {
  if (g.is_finite()) {
    const auto& t = g.table();
    const std::size_t n = t.order();
    std::vector<LabelSet> ds;
    if (g.bornology().is_maximal()) ds.push_back(full_label_set(n));
    else ds = g.bornology().base();
    std::vector<Relation> base;
    for (LabelSet d : ds) {
      Relation r = Relation::empty(n);
      for (std::size_t l = 0; l < n; ++l)
        for (std::size_t h = 0; h < n; ++h)
          if (d >> t.mul[t.inv[l]][h] & 1) r.set(l, h);
      base.push_back(r);
    }
    return CoarseStructure("group-right", close_finite_base(g.space(), base));
  }
  CoarseChain c;
  c.kind = CoarseChain::Kind::GroupRight;
  c.space = g.space();
  c.bornology = g.bornology();
  c.group = std::make_shared<GroupSpec>(g);
  return CoarseStructure("group-right", std::move(c));
}

}  // namespace bcs
