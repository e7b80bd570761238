#include "bcs/sets.hpp"

#include <algorithm>
#include <sstream>

namespace bcs {

const char* to_string(Error::Code code) {
  switch (code) {
    case Error::Code::DimensionMismatch: return "dimension-mismatch";
    case Error::Code::EmptyInput: return "empty-input";
    case Error::Code::Unsupported: return "unsupported";
    case Error::Code::Validation: return "validation";
    case Error::Code::Parse: return "parse";
    case Error::Code::BudgetExceeded: return "budget-exceeded";
    case Error::Code::NotSurjective: return "not-surjective";
    case Error::Code::Refuted: return "refuted";
  }
  return "unknown";
}

void check_dim(std::size_t a, std::size_t b, const char* where) {
  if (a != b) {
    std::ostringstream os;
    os << where << ": dimension mismatch (" << a << " vs " << b << ")";
    throw Error(Error::Code::DimensionMismatch, os.str());
  }
}

// ---- GroundSpace -----------------------------------------------------------

GroundSpace GroundSpace::finite(std::vector<std::string> labels) {
  std::vector<std::string> sorted = labels;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw Error(Error::Code::Validation, "finite ground space: labels must be pairwise distinct");
  if (labels.empty()) throw Error(Error::Code::Validation, "finite ground space: no labels");
  if (labels.size() > 64) throw Error(Error::Code::Unsupported, "finite ground space: at most 64 labels");
  GroundSpace g;
  g.finite_ = true;
  g.dim_ = 1;
  g.labels_ = std::move(labels);
  return g;
}

GroundSpace GroundSpace::lattice(std::size_t dim) {
  if (dim == 0) throw Error(Error::Code::Validation, "lattice ground space: dimension must be >= 1");
  GroundSpace g;
  g.finite_ = false;
  g.dim_ = dim;
  return g;
}

std::optional<Int> GroundSpace::label_index(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<Int>(it - labels_.begin());
}

// ---- End / Box ---------------------------------------------------------------

std::string to_string(End e) {
  if (e.is_neg_inf()) return "-inf";
  if (e.is_pos_inf()) return "inf";
  return std::to_string(e.value);
}

End shift(End e, Int delta) { return e.finite() ? End::at(e.value + delta) : e; }

Box::Box(std::vector<Interval> dims) : dims_(std::move(dims)), empty_(false) {
  for (const auto& iv : dims_)
    if (iv.empty()) empty_ = true;
}

Box Box::empty(std::size_t dim) {
  Box b(std::vector<Interval>(dim, Interval{End::at(0), End::at(0)}));
  b.empty_ = true;
  return b;
}

Box Box::full(std::size_t dim) {
  return Box(std::vector<Interval>(dim, Interval{End::neg_inf(), End::pos_inf()}));
}

Box Box::point(const Point& p) {
  std::vector<Interval> dims;
  dims.reserve(p.size());
  for (Int v : p) dims.push_back({End::at(v), End::at(v)});
  return Box(std::move(dims));
}

Box Box::cube(std::size_t dim, Int radius) {
  return Box(std::vector<Interval>(dim, Interval{End::at(-radius), End::at(radius)}));
}

Box Box::closed(const Point& lo, const Point& hi) {
  check_dim(lo.size(), hi.size(), "Box::closed");
  std::vector<Interval> dims;
  for (std::size_t i = 0; i < lo.size(); ++i) dims.push_back({End::at(lo[i]), End::at(hi[i])});
  return Box(std::move(dims));
}

bool Box::is_bounded() const {
  if (empty_) return true;
  return std::all_of(dims_.begin(), dims_.end(), [](const Interval& iv) { return iv.bounded(); });
}

bool Box::is_full() const {
  if (empty_) return false;
  return std::all_of(dims_.begin(), dims_.end(), [](const Interval& iv) {
    return iv.lo.is_neg_inf() && iv.hi.is_pos_inf();
  });
}

bool Box::contains(std::span<const Int> p) const {
  check_dim(p.size(), dims_.size(), "Box::contains");
  if (empty_) return false;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (!dims_[i].contains(p[i])) return false;
  return true;
}

bool Box::operator==(const Box& o) const {
  if (dims_.size() != o.dims_.size()) return false;
  if (empty_ || o.empty_) return empty_ == o.empty_;
  return dims_ == o.dims_;
}

std::string to_string(const Box& b) {
  if (b.is_empty()) return "empty";
  std::string out;
  for (std::size_t i = 0; i < b.dim(); ++i) {
    if (i) out += "x";
    const auto& iv = b[i];
    out += iv.lo.finite() ? "[" : "(";
    out += to_string(iv.lo) + "," + to_string(iv.hi);
    out += iv.hi.finite() ? "]" : ")";
  }
  return out;
}

// ---- fault injection ---------------------------------------------------------

namespace fault {
namespace {
thread_local Plan g_plan{};
}

const Plan& active() { return g_plan; }

Scope::Scope(Plan p) : saved_(g_plan) { g_plan = p; }
Scope::~Scope() { g_plan = saved_; }

Plan seeded_plan(std::uint64_t seed) {
  Plan p;
  switch (seed % 3) {
    case 0: p.op = Op::Difference; break;
    case 1: p.op = Op::Intersect; break;
    default: p.op = Op::Translate; break;
  }
  p.coord = 0;
  p.lower = ((seed / 3) % 2) == 0;
  p.bit = static_cast<unsigned>((seed / 6) % 2);
  return p;
}

}  // namespace fault

namespace {

Box apply_fault(Box b, fault::Op op) {
  const auto& plan = fault::active();
  if (plan.op != op || b.is_empty() || plan.coord >= b.dim()) return b;
  auto dims = b.intervals();
  End& e = plan.lower ? dims[plan.coord].lo : dims[plan.coord].hi;
  if (!e.finite()) return b;
  e.value ^= (Int{1} << plan.bit);
  return Box(std::move(dims));
}

}  // namespace

// ---- SetDescriptor -----------------------------------------------------------

SetDescriptor::SetDescriptor(Box b) : dim_(b.dim()), v_(std::move(b)) {}

SetDescriptor SetDescriptor::points(std::size_t dim, std::vector<Point> pts) {
  for (const auto& p : pts) check_dim(p.size(), dim, "SetDescriptor::points");
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  SetDescriptor s;
  s.dim_ = dim;
  s.v_ = FinitePoints{std::move(pts)};
  return s;
}

SetDescriptor SetDescriptor::union_of(std::size_t dim, std::vector<SetDescriptor> members) {
  std::vector<SetDescriptor> flat;
  std::vector<Point> loose_points;
  for (auto& m : members) {
    check_dim(m.dim(), dim, "SetDescriptor::union_of");
    if (m.is_union()) {
      for (const auto& inner : m.members()) flat.push_back(inner);
    } else {
      flat.push_back(std::move(m));
    }
  }
  std::vector<Box> boxes;
  for (auto& m : flat) {
    if (m.is_empty()) continue;
    if (m.is_points()) {
      for (const auto& p : m.point_list()) loose_points.push_back(p);
    } else {
      boxes.push_back(m.box());
    }
  }
  if (dim == 1) {
    for (const auto& p : loose_points) boxes.push_back(Box::point(p));
    loose_points.clear();
    std::sort(boxes.begin(), boxes.end(), [](const Box& a, const Box& b) { return a[0].lo < b[0].lo; });
    std::vector<Box> merged;
    for (const auto& b : boxes) {
      if (!merged.empty()) {
        const auto& last = merged.back()[0];
        // Integer intervals merge when they overlap or touch.
        const bool touches = last.hi.is_pos_inf() || b[0].lo <= shift(last.hi, 1);
        if (touches) {
          End hi = last.hi < b[0].hi ? b[0].hi : last.hi;
          merged.back() = Box({Interval{last.lo, hi}});
          continue;
        }
      }
      merged.push_back(b);
    }
    boxes = std::move(merged);
  } else {
    // Drop points already covered by a box.
    std::erase_if(loose_points, [&](const Point& p) {
      return std::any_of(boxes.begin(), boxes.end(), [&](const Box& b) { return b.contains(p); });
    });
  }
  std::vector<SetDescriptor> out;
  for (auto& b : boxes) {
    // Degenerate one-point boxes in dimension 1 read better as points.
    out.emplace_back(std::move(b));
  }
  if (!loose_points.empty()) out.push_back(points(dim, std::move(loose_points)));
  if (out.empty()) return empty(dim);
  if (out.size() == 1) return out.front();
  if (out.size() > kMaxUnionMembers)
    throw Error(Error::Code::Unsupported, "union exceeds " + std::to_string(kMaxUnionMembers) + " members");
  SetDescriptor s;
  s.dim_ = dim;
  s.v_ = UnionOf{std::move(out)};
  return s;
}

bool SetDescriptor::is_empty() const {
  if (is_box()) return box().is_empty();
  if (is_points()) return point_list().empty();
  return std::all_of(members().begin(), members().end(), [](const SetDescriptor& m) { return m.is_empty(); });
}

bool SetDescriptor::is_bounded() const {
  if (is_box()) return box().is_bounded();
  if (is_points()) return true;
  return std::all_of(members().begin(), members().end(), [](const SetDescriptor& m) { return m.is_bounded(); });
}

bool SetDescriptor::operator==(const SetDescriptor& o) const {
  if (dim_ != o.dim_ || v_.index() != o.v_.index()) return false;
  if (is_box()) return box() == o.box();
  if (is_points()) return point_list() == o.point_list();
  return members() == o.members();
}

namespace {
std::string point_string(const Point& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(p[i]);
  }
  return s + ")";
}
}  // namespace

std::string to_string(const SetDescriptor& s) {
  if (s.is_box()) return to_string(s.box());
  if (s.is_points()) {
    std::string out = "{";
    for (std::size_t i = 0; i < s.point_list().size(); ++i) {
      if (i) out += ",";
      out += point_string(s.point_list()[i]);
    }
    return out + "}";
  }
  std::string out;
  for (std::size_t i = 0; i < s.members().size(); ++i) {
    if (i) out += " u ";
    out += to_string(s.members()[i]);
  }
  return out;
}

// ---- operations --------------------------------------------------------------

bool set_membership(const SetDescriptor& s, std::span<const Int> x) {
  check_dim(x.size(), s.dim(), "set_membership");
  if (s.is_box()) return s.box().contains(x);
  if (s.is_points()) {
    const auto& pts = s.point_list();
    Point key(x.begin(), x.end());
    return std::binary_search(pts.begin(), pts.end(), key);
  }
  return std::any_of(s.members().begin(), s.members().end(),
                     [&](const SetDescriptor& m) { return set_membership(m, x); });
}

Box box_intersect(const Box& b1, const Box& b2) {
  check_dim(b1.dim(), b2.dim(), "box_intersect");
  if (b1.is_empty() || b2.is_empty()) return Box::empty(b1.dim());
  std::vector<Interval> dims(b1.dim());
  for (std::size_t i = 0; i < b1.dim(); ++i) {
    dims[i].lo = b1[i].lo < b2[i].lo ? b2[i].lo : b1[i].lo;
    dims[i].hi = b1[i].hi < b2[i].hi ? b1[i].hi : b2[i].hi;
  }
  return apply_fault(Box(std::move(dims)), fault::Op::Intersect);
}

Box difference_box(const Box& target, const Box& source) {
  check_dim(target.dim(), source.dim(), "difference_box");
  if (target.is_empty() || source.is_empty())
    throw Error(Error::Code::EmptyInput, "difference_box: empty input box");
  std::vector<Interval> dims(target.dim());
  for (std::size_t i = 0; i < target.dim(); ++i) {
    const auto& t = target[i];
    const auto& s = source[i];
    dims[i].lo = (t.lo.finite() && s.hi.finite()) ? End::at(t.lo.value - s.hi.value) : End::neg_inf();
    dims[i].hi = (t.hi.finite() && s.lo.finite()) ? End::at(t.hi.value - s.lo.value) : End::pos_inf();
  }
  return apply_fault(Box(std::move(dims)), fault::Op::Difference);
}

Box box_translate(const Box& b, std::span<const Int> v) {
  check_dim(v.size(), b.dim(), "set_translate");
  if (b.is_empty()) return b;
  std::vector<Interval> dims = b.intervals();
  for (std::size_t i = 0; i < dims.size(); ++i) {
    dims[i].lo = shift(dims[i].lo, v[i]);
    dims[i].hi = shift(dims[i].hi, v[i]);
  }
  return apply_fault(Box(std::move(dims)), fault::Op::Translate);
}

SetDescriptor set_translate(const SetDescriptor& s, std::span<const Int> v) {
  check_dim(v.size(), s.dim(), "set_translate");
  if (s.is_box()) return box_translate(s.box(), v);
  if (s.is_points()) {
    std::vector<Point> pts = s.point_list();
    for (auto& p : pts)
      for (std::size_t i = 0; i < p.size(); ++i) p[i] += v[i];
    return SetDescriptor::points(s.dim(), std::move(pts));
  }
  std::vector<SetDescriptor> out;
  for (const auto& m : s.members()) out.push_back(set_translate(m, v));
  return SetDescriptor::union_of(s.dim(), std::move(out));
}

SetDescriptor self_difference_set(const SetDescriptor& s) {
  if (s.is_union())
    throw Error(Error::Code::Unsupported, "self_difference_set: union input must be decomposed by the caller");
  if (s.is_points()) {
    std::vector<Point> out;
    for (const auto& x : s.point_list())
      for (const auto& y : s.point_list()) {
        Point d(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) d[i] = y[i] - x[i];
        out.push_back(std::move(d));
      }
    return SetDescriptor::points(s.dim(), std::move(out));
  }
  const Box& b = s.box();
  if (b.is_empty()) return b;
  std::vector<Interval> dims(b.dim());
  for (std::size_t i = 0; i < b.dim(); ++i) {
    const bool fin = b[i].bounded();
    dims[i].lo = fin ? End::at(b[i].lo.value - b[i].hi.value) : End::neg_inf();
    dims[i].hi = fin ? End::at(b[i].hi.value - b[i].lo.value) : End::pos_inf();
  }
  return Box(std::move(dims));
}

// ---- helpers -----------------------------------------------------------------

Box hull(const SetDescriptor& s) {
  if (s.is_box()) return s.box();
  if (s.is_points()) {
    const auto& pts = s.point_list();
    if (pts.empty()) return Box::empty(s.dim());
    Point lo = pts.front(), hi = pts.front();
    for (const auto& p : pts)
      for (std::size_t i = 0; i < p.size(); ++i) {
        lo[i] = std::min(lo[i], p[i]);
        hi[i] = std::max(hi[i], p[i]);
      }
    return Box::closed(lo, hi);
  }
  Box out = Box::empty(s.dim());
  for (const auto& m : s.members()) {
    Box h = hull(m);
    if (h.is_empty()) continue;
    if (out.is_empty()) {
      out = h;
      continue;
    }
    std::vector<Interval> dims(s.dim());
    for (std::size_t i = 0; i < s.dim(); ++i) {
      dims[i].lo = out[i].lo < h[i].lo ? out[i].lo : h[i].lo;
      dims[i].hi = out[i].hi < h[i].hi ? h[i].hi : out[i].hi;
    }
    out = Box(std::move(dims));
  }
  return out;
}

bool box_subset(const Box& inner, const Box& outer) {
  check_dim(inner.dim(), outer.dim(), "box_subset");
  if (inner.is_empty()) return true;
  if (outer.is_empty()) return false;
  for (std::size_t i = 0; i < inner.dim(); ++i)
    if (inner[i].lo < outer[i].lo || outer[i].hi < inner[i].hi) return false;
  return true;
}

Box minkowski_sum(const Box& a, const Box& b) {
  check_dim(a.dim(), b.dim(), "minkowski_sum");
  if (a.is_empty() || b.is_empty()) return Box::empty(a.dim());
  std::vector<Interval> dims(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    dims[i].lo = (a[i].lo.finite() && b[i].lo.finite()) ? End::at(a[i].lo.value + b[i].lo.value) : End::neg_inf();
    dims[i].hi = (a[i].hi.finite() && b[i].hi.finite()) ? End::at(a[i].hi.value + b[i].hi.value) : End::pos_inf();
  }
  return Box(std::move(dims));
}

Box inflate(const Box& b, Int r) {
  if (b.is_empty()) return b;
  std::vector<Interval> dims = b.intervals();
  for (auto& iv : dims) {
    iv.lo = shift(iv.lo, -r);
    iv.hi = shift(iv.hi, r);
  }
  return Box(std::move(dims));
}

Box negate(const Box& b) {
  if (b.is_empty()) return b;
  std::vector<Interval> dims(b.dim());
  auto neg = [](End e) {
    if (e.is_neg_inf()) return End::pos_inf();
    if (e.is_pos_inf()) return End::neg_inf();
    return End::at(-e.value);
  };
  for (std::size_t i = 0; i < b.dim(); ++i) dims[i] = {neg(b[i].hi), neg(b[i].lo)};
  return Box(std::move(dims));
}

namespace {

// Pieces of `b` outside `c`: at most 2d disjoint boxes.
std::vector<Box> box_minus(const Box& b, const Box& c) {
  Box inter = box_intersect(b, c);
  if (inter.is_empty()) return {b};
  std::vector<Box> out;
  std::vector<Interval> rest = b.intervals();
  for (std::size_t i = 0; i < b.dim(); ++i) {
    if (rest[i].lo < inter[i].lo) {
      auto dims = rest;
      dims[i] = {rest[i].lo, shift(inter[i].lo, -1)};
      out.emplace_back(std::move(dims));
    }
    if (inter[i].hi < rest[i].hi) {
      auto dims = rest;
      dims[i] = {shift(inter[i].hi, 1), rest[i].hi};
      out.emplace_back(std::move(dims));
    }
    rest[i] = inter[i];
  }
  std::erase_if(out, [](const Box& x) { return x.is_empty(); });
  return out;
}

}  // namespace

bool box_covered_by(const Box& b, std::span<const Box> cover) {
  std::vector<Box> pending{b};
  for (const auto& c : cover) {
    std::vector<Box> next;
    for (const auto& p : pending)
      for (auto& piece : box_minus(p, c)) next.push_back(std::move(piece));
    pending = std::move(next);
    if (pending.empty()) return true;
    if (pending.size() > 4096)
      throw Error(Error::Code::BudgetExceeded, "box_covered_by: too many residual pieces");
  }
  return pending.empty();
}

std::optional<Point> uncovered_point(const Box& b, std::span<const Box> cover) {
  std::vector<Box> pending{b};
  for (const auto& c : cover) {
    std::vector<Box> next;
    for (const auto& p : pending)
      for (auto& piece : box_minus(p, c)) next.push_back(std::move(piece));
    pending = std::move(next);
    if (pending.empty()) return std::nullopt;
    if (pending.size() > 4096)
      throw Error(Error::Code::BudgetExceeded, "uncovered_point: too many residual pieces");
  }
  if (pending.empty()) return std::nullopt;
  return nearest_point(pending.front());
}

Point nearest_point(const Box& b) {
  if (b.is_empty()) throw Error(Error::Code::EmptyInput, "nearest_point: empty box");
  Point p(b.dim());
  for (std::size_t i = 0; i < b.dim(); ++i) {
    const auto& iv = b[i];
    if (iv.contains(0)) p[i] = 0;
    else if (iv.lo.finite() && iv.lo.value > 0) p[i] = iv.lo.value;
    else p[i] = iv.hi.value;
  }
  return p;
}

Point any_point(const SetDescriptor& s) {
  if (s.is_box()) return nearest_point(s.box());
  if (s.is_points()) {
    if (s.point_list().empty()) throw Error(Error::Code::EmptyInput, "any_point: empty set");
    return s.point_list().front();
  }
  for (const auto& m : s.members())
    if (!m.is_empty()) return any_point(m);
  throw Error(Error::Code::EmptyInput, "any_point: empty set");
}

std::vector<Box> as_boxes(const SetDescriptor& s) {
  if (s.is_box()) return s.box().is_empty() ? std::vector<Box>{} : std::vector<Box>{s.box()};
  if (s.is_points()) {
    std::vector<Box> out;
    for (const auto& p : s.point_list()) out.push_back(Box::point(p));
    return out;
  }
  std::vector<Box> out;
  for (const auto& m : s.members())
    for (auto& b : as_boxes(m)) out.push_back(std::move(b));
  return out;
}

std::optional<Int> linf_diameter(const Box& b) {
  if (b.is_empty()) return Int{0};
  if (!b.is_bounded()) return std::nullopt;
  Int d = 0;
  for (const auto& iv : b.intervals()) d = std::max(d, iv.hi.value - iv.lo.value);
  return d;
}

}  // namespace bcs
