#include "bcs/instance.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <set>

namespace bcs {

// ---- groups -------------------------------------------------------------------

GroupSpec GroupSpec::finite(std::vector<std::string> elements, std::vector<std::vector<Int>> mul,
                            BornologySpec bornology) {
  const std::size_t n = elements.size();
  if (n == 0) throw Error(Error::Code::Validation, "group has no elements");
  if (mul.size() != n) throw Error(Error::Code::Validation, "multiplication table has the wrong size");
  for (const auto& row : mul) {
    if (row.size() != n) throw Error(Error::Code::Validation, "multiplication table has the wrong size");
    for (Int v : row)
      if (v < 0 || v >= static_cast<Int>(n)) throw Error(Error::Code::Validation, "product outside the group");
  }
  GroupSpec g;
  g.finite_ = true;
  g.rank_ = 1;
  g.space_ = GroundSpace::finite(elements);
  if (!(bornology.space() == g.space_))
    throw Error(Error::Code::Validation, "group bornology is not on the group elements");
  g.table_.elements = std::move(elements);
  g.table_.mul = std::move(mul);
  const auto& t = g.table_.mul;
  std::optional<Int> e;
  for (std::size_t c = 0; c < n && !e; ++c) {
    bool ok = true;
    for (std::size_t h = 0; h < n && ok; ++h) ok = t[c][h] == static_cast<Int>(h) && t[h][c] == static_cast<Int>(h);
    if (ok) e = static_cast<Int>(c);
  }
  if (!e) throw Error(Error::Code::Validation, "group has no identity element");
  g.table_.identity = *e;
  g.table_.inv.assign(n, -1);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (t[a][b] == *e && t[b][a] == *e) g.table_.inv[a] = static_cast<Int>(b);
  for (std::size_t a = 0; a < n; ++a)
    if (g.table_.inv[a] < 0) throw Error(Error::Code::Validation, "element " + g.table_.elements[a] + " has no inverse");
  g.bornology_ = std::move(bornology);
  return g;
}

GroupSpec GroupSpec::lattice(std::size_t rank, BornologySpec bornology) {
  if (rank == 0) throw Error(Error::Code::Validation, "lattice group rank must be positive");
  GroupSpec g;
  g.finite_ = false;
  g.rank_ = rank;
  g.space_ = GroundSpace::lattice(rank);
  if (!(bornology.space() == g.space_))
    throw Error(Error::Code::Validation, "group bornology is not on Z^" + std::to_string(rank));
  g.bornology_ = std::move(bornology);
  return g;
}

Point GroupSpec::multiply(std::span<const Int> g, std::span<const Int> h) const {
  if (finite_) return {table_.mul[g[0]][h[0]]};
  Point out(rank_);
  for (std::size_t i = 0; i < rank_; ++i) out[i] = g[i] + h[i];
  return out;
}

Point GroupSpec::inverse(std::span<const Int> g) const {
  if (finite_) return {table_.inv[g[0]]};
  Point out(rank_);
  for (std::size_t i = 0; i < rank_; ++i) out[i] = -g[i];
  return out;
}

Point GroupSpec::identity() const {
  if (finite_) return {table_.identity};
  return Point(rank_, 0);
}

// ---- signed permutations ------------------------------------------------------

Point SignedPerm::apply(std::span<const Int> x) const {
  Point y(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) y[i] = sign[i] * x[perm[i]];
  return y;
}

Point SignedPerm::apply_inverse(std::span<const Int> x) const {
  Point y(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) y[perm[i]] = sign[i] * x[i];
  return y;
}

bool SignedPerm::is_identity() const {
  for (std::size_t i = 0; i < perm.size(); ++i)
    if (perm[i] != i || sign[i] != 1) return false;
  return true;
}

// ---- actions -------------------------------------------------------------------

ActionInstance::ActionInstance(std::string name, GroupSpec group, GroundSpace space,
                               std::variant<TranslationRule, PermutationRule> rule, BornologySpec space_bornology)
    : name_(std::move(name)),
      group_(std::move(group)),
      space_(std::move(space)),
      rule_(std::move(rule)),
      space_bornology_(std::move(space_bornology)) {
  if (!(space_bornology_.space() == space_))
    throw Error(Error::Code::Validation, "space bornology is not on the declared space");
  if (auto* t = std::get_if<TranslationRule>(&rule_)) {
    if (group_.is_finite() || space_.is_finite())
      throw Error(Error::Code::Validation, "translation rules need a lattice group and a lattice space");
    if (t->m.rows() != space_.dim() || t->m.cols() != group_.rank())
      throw Error(Error::Code::DimensionMismatch, "action matrix must be d x k");
    if (t->twist) {
      if (group_.rank() != 1) throw Error(Error::Code::Unsupported, "twisted rules need a rank one group");
      const auto& tw = *t->twist;
      if (tw.perm.size() != space_.dim() || tw.sign.size() != space_.dim())
        throw Error(Error::Code::DimensionMismatch, "twist has the wrong size");
      std::vector<bool> seen(space_.dim(), false);
      for (std::size_t i = 0; i < tw.perm.size(); ++i) {
        if (tw.perm[i] >= space_.dim() || seen[tw.perm[i]])
          throw Error(Error::Code::Validation, "twist is not a permutation");
        seen[tw.perm[i]] = true;
        if (tw.sign[i] != 1 && tw.sign[i] != -1) throw Error(Error::Code::Validation, "twist signs must be +1 or -1");
      }
      if (tw.is_identity()) t->twist.reset();
    }
  } else {
    const auto& p = std::get<PermutationRule>(rule_);
    if (!group_.is_finite() || !space_.is_finite())
      throw Error(Error::Code::Validation, "permutation rules need a finite group and a finite space");
    if (p.perm.size() != group_.table().order())
      throw Error(Error::Code::Validation, "one permutation per group element is required");
    for (const auto& row : p.perm) {
      if (row.size() != space_.size()) throw Error(Error::Code::Validation, "permutation has the wrong size");
      std::vector<bool> seen(space_.size(), false);
      for (Int v : row) {
        if (v < 0 || v >= static_cast<Int>(space_.size()) || seen[v])
          throw Error(Error::Code::Validation, "permutation is not a bijection");
        seen[v] = true;
      }
    }
  }
}

Point ActionInstance::act(std::span<const Int> l, std::span<const Int> x) const {
  if (is_permutation()) return {permutation().perm[l[0]][x[0]]};
  const auto& t = translation();
  if (!t.twist) {
    Point y = t.m.apply(l);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += x[i];
    return y;
  }
  const Point c = t.m.column(0);
  Point y(x.begin(), x.end());
  const Int n = l[0];
  for (Int s = 0; s < (n < 0 ? -n : n); ++s) {
    if (n > 0) {
      y = t.twist->apply(y);
      for (std::size_t i = 0; i < y.size(); ++i) y[i] += c[i];
    } else {
      for (std::size_t i = 0; i < y.size(); ++i) y[i] -= c[i];
      y = t.twist->apply_inverse(y);
    }
  }
  return y;
}

ActionInstance ActionInstance::with_space_bornology(BornologySpec b) const {
  return ActionInstance(name_, group_, space_, rule_, std::move(b));
}

ActionInstance ActionInstance::with_group_bornology(BornologySpec b) const {
  GroupSpec g = group_.is_finite()
                    ? GroupSpec::finite(group_.table().elements, group_.table().mul, std::move(b))
                    : GroupSpec::lattice(group_.rank(), std::move(b));
  return ActionInstance(name_, std::move(g), space_, rule_, space_bornology_);
}

// ---- reports ---------------------------------------------------------------------

bool CheckReport::passed() const {
  return std::all_of(lines.begin(), lines.end(), [](const CheckLine& l) { return l.passed; });
}

void CheckReport::add(std::string name, bool passed, std::string detail) {
  lines.push_back({std::move(name), passed, std::move(detail)});
}

Box image_hull(const IntMatrix& m, const Box& b) {
  check_dim(b.dim(), m.cols(), "image_hull");
  if (b.is_empty()) return Box::empty(m.rows());
  std::vector<Interval> out(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    End lo = End::at(0), hi = End::at(0);
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const Int c = m(r, j);
      if (c == 0) continue;
      End a = c > 0 ? b[j].lo : b[j].hi;
      End z = c > 0 ? b[j].hi : b[j].lo;
      const auto scale = [c](End e) -> End {
        if (e.finite()) return End::at(e.value * c);
        const bool up = e.is_pos_inf() == (c > 0);
        return up ? End::pos_inf() : End::neg_inf();
      };
      a = scale(a);
      z = scale(z);
      lo = lo.finite() && a.finite() ? End::at(lo.value + a.value) : (lo.finite() ? a : lo);
      hi = hi.finite() && z.finite() ? End::at(hi.value + z.value) : (hi.finite() ? z : hi);
    }
    out[r] = {lo, hi};
  }
  return Box(std::move(out));
}

namespace {

void check_associativity(const FiniteGroup& t, CheckReport& r) {
  const std::size_t n = t.order();
  std::vector<std::array<std::size_t, 3>> triples;
  if (n <= 8) {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c) triples.push_back({a, b, c});
  } else {
    for (std::size_t s = 0; s < 4096; ++s) triples.push_back({(s * 7919) % n, (s * 104729 + 1) % n, (s * 1299709 + 2) % n});
  }
  for (const auto& [a, b, c] : triples) {
    if (t.mul[t.mul[a][b]][c] != t.mul[a][t.mul[b][c]]) {
      r.add("group associativity", false, "(" + t.elements[a] + t.elements[b] + ")" + t.elements[c]);
      return;
    }
  }
  r.add("group associativity", true, n <= 8 ? "exhaustive" : "sampled");
}

void add_axioms(const BornologySpec& b, const std::string& which, CheckReport& r) {
  const AxiomReport ax = bornology_axiom_check(b);
  for (const auto& c : ax.checks) r.add(which + " bornology " + c.axiom, c.passed, c.witness);
}

}  // namespace

CheckReport validate_instance(const ActionInstance& a) {
  CheckReport r;
  r.subject = a.name();
  add_axioms(a.space_bornology(), "space", r);
  add_axioms(a.group_bornology(), "group", r);
  if (a.group().is_finite()) {
    check_associativity(a.group().table(), r);
    const auto& t = a.group().table();
    const auto& p = a.permutation().perm;
    bool ok = true;
    std::string detail = "exhaustive";
    for (std::size_t g = 0; g < t.order() && ok; ++g)
      for (std::size_t h = 0; h < t.order() && ok; ++h)
        for (std::size_t x = 0; x < a.space().size() && ok; ++x)
          if (p[t.mul[g][h]][x] != p[g][p[h][x]]) {
            ok = false;
            detail = "rho(" + t.elements[g] + t.elements[h] + ") differs at " + a.space().labels()[x];
          }
    r.add("action homomorphism", ok, detail);
    if (p[t.identity] != [&] {
          std::vector<Int> id(a.space().size());
          std::iota(id.begin(), id.end(), 0);
          return id;
        }())
      r.add("identity acts trivially", false, "identity moves a label");
  }
  if (r.passed()) {
    for (auto& line : group_bornological_check(a.group()).lines) r.lines.push_back(line);
    for (auto& line : action_bornological_check(a).lines) r.lines.push_back(line);
  }
  return r;
}

CheckReport group_bornological_check(const GroupSpec& g, Int max_index) {
  CheckReport r;
  r.subject = "group";
  const auto& b = g.bornology();
  if (g.is_finite() || b.is_maximal()) {
    r.add("multiplication bornological", true, "vacuous");
    r.add("inversion bornological", true, "vacuous");
    return r;
  }
  Int worst = 0;
  bool mul_ok = true;
  std::string mul_detail;
  for (Int i = 0; i <= max_index && mul_ok; ++i)
    for (Int j = 0; j <= max_index && mul_ok; ++j) {
      const BoundVerdict v = is_bounded(b, minkowski_sum(b.level_box(i), b.level_box(j)));
      if (!v.is_bounded()) {
        mul_ok = false;
        mul_detail = "D_" + std::to_string(i) + " + D_" + std::to_string(j) + ": " + to_string(v);
      } else {
        worst = std::max(worst, v.index);
      }
    }
  r.add("multiplication bornological", mul_ok, mul_ok ? "sum of levels bounded up to index " + std::to_string(worst) : mul_detail);
  bool inv_ok = true;
  std::string inv_detail;
  for (Int i = 0; i <= max_index && inv_ok; ++i) {
    const BoundVerdict v = is_bounded(b, negate(b.level_box(i)));
    if (!v.is_bounded()) {
      inv_ok = false;
      inv_detail = "-D_" + std::to_string(i) + ": " + to_string(v);
    }
  }
  r.add("inversion bornological", inv_ok, inv_detail);
  return r;
}

CheckReport action_bornological_check(const ActionInstance& a, Int max_index) {
  CheckReport r;
  r.subject = "action";
  if (a.is_permutation()) {
    r.add("action bornological", true, "vacuous on finite spaces");
    return r;
  }
  if (!a.is_exact_lattice()) {
    r.add("action bornological", true, "twisted rule: not decided symbolically");
    return r;
  }
  const auto& bx = a.space_bornology();
  const auto& bl = a.group_bornology();
  Int worst = 0;
  for (Int i = 0; i <= max_index; ++i)
    for (Int j = 0; j <= max_index; ++j) {
      const Box img = minkowski_sum(bx.level_box(j), image_hull(a.matrix(), bl.level_box(i)));
      const BoundVerdict v = is_bounded(bx, img);
      if (!v.is_bounded()) {
        r.add("action bornological", false,
              "rho(D_" + std::to_string(i) + " x B_" + std::to_string(j) + "): " + to_string(v));
        return r;
      }
      worst = std::max(worst, v.index);
    }
  r.add("action bornological", true, "images bounded up to index " + std::to_string(worst));
  return r;
}

}  // namespace bcs
