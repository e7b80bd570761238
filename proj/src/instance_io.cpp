#include "bcs/instance_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "bcs/actions.hpp"

namespace bcs {

ParseError::ParseError(std::string origin, std::size_t line, std::size_t column, const std::string& msg)
    : Error(Code::Parse, origin + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
      line_(line),
      column_(column) {}

namespace {

struct Entry {
  std::string key;
  std::string value;
  std::size_t line = 0;
  std::size_t column = 0;  // of the value
  bool used = false;
};

struct Section {
  std::string name;
  std::size_t line = 0;
  std::vector<Entry> entries;
};

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

bool section_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
}

bool key_char(char c) {
  return std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) || c == '_' ||
         c == '.' || c == '-';
}

class Reader {
 public:
  Reader(const std::string& text, std::string origin) : origin_(std::move(origin)) {
    std::istringstream in(text);
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
      ++line;
      const std::string body = raw.substr(0, raw.find('#'));
      const std::string t = trim(body);
      if (t.empty()) continue;
      const std::size_t indent = body.find_first_not_of(" \t") + 1;
      if (t.front() == '[') {
        if (t.back() != ']') fail(line, indent, "section header is missing ']'");
        const std::string name = trim(t.substr(1, t.size() - 2));
        if (name.empty() || !std::all_of(name.begin(), name.end(), section_char))
          fail(line, indent + 1, "bad section name '" + name + "'");
        for (const auto& s : sections_)
          if (s.name == name) fail(line, indent, "section [" + name + "] appears twice");
        sections_.push_back({name, line, {}});
        continue;
      }
      const auto eq = body.find('=');
      if (eq == std::string::npos) fail(line, indent, "expected 'key = value'");
      if (sections_.empty()) fail(line, indent, "entry before any section");
      const std::string key = trim(body.substr(0, eq));
      if (key.empty() || !std::all_of(key.begin(), key.end(), key_char))
        fail(line, indent, "keys are lowercase tokens, got '" + key + "'");
      std::size_t vcol = body.find_first_not_of(" \t", eq + 1);
      const std::string value = trim(body.substr(eq + 1));
      if (value.empty()) fail(line, eq + 2, "missing value for '" + key + "'");
      for (const auto& e : sections_.back().entries)
        if (e.key == key) fail(line, indent, "key '" + key + "' appears twice");
      sections_.back().entries.push_back({key, value, line, vcol == std::string::npos ? eq + 2 : vcol + 1});
    }
  }

  [[noreturn]] void fail(std::size_t line, std::size_t col, const std::string& msg) const {
    throw ParseError(origin_, line, col, msg);
  }
  [[noreturn]] void fail(const Entry& e, const std::string& msg) const { fail(e.line, e.column, msg); }

  Section* section(const std::string& name) {
    for (auto& s : sections_)
      if (s.name == name) return &s;
    return nullptr;
  }
  Section& require(const std::string& name) {
    if (auto* s = section(name)) return *s;
    fail(sections_.empty() ? 1 : sections_.back().line, 1, "missing section [" + name + "]");
  }
  std::vector<Section>& sections() { return sections_; }

  Entry* find(Section& s, const std::string& key) {
    for (auto& e : s.entries)
      if (e.key == key) {
        e.used = true;
        return &e;
      }
    return nullptr;
  }
  Entry& get(Section& s, const std::string& key) {
    if (auto* e = find(s, key)) return *e;
    fail(s.line, 1, "section [" + s.name + "] needs '" + key + "'");
  }
  void no_leftovers(const Section& s) const {
    for (const auto& e : s.entries)
      if (!e.used) fail(e.line, 1, "unknown key '" + e.key + "' in [" + s.name + "]");
  }

  const std::string& origin() const { return origin_; }

 private:
  std::string origin_;
  std::vector<Section> sections_;
};

// ---- value grammar ------------------------------------------------------------------------------

Int parse_int(Reader& r, const Entry& e, const std::string& s, std::size_t offset = 0) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    r.fail(e.line, e.column + offset, "expected an integer, got '" + s + "'");
  }
  if (pos != s.size()) r.fail(e.line, e.column + offset + pos, "trailing characters in integer '" + s + "'");
  return static_cast<Int>(v);
}

Point parse_tuple(Reader& r, const Entry& e) {
  const std::string& v = e.value;
  if (v.size() < 2 || v.front() != '(' || v.back() != ')') r.fail(e, "expected a tuple like (1,-1)");
  Point out;
  std::size_t start = 1;
  while (start < v.size() - 1 || out.empty()) {
    std::size_t comma = v.find(',', start);
    if (comma == std::string::npos || comma > v.size() - 1) comma = v.size() - 1;
    const std::string item = trim(v.substr(start, comma - start));
    if (item.empty()) r.fail(e.line, e.column + start, "empty tuple entry");
    out.push_back(parse_int(r, e, item, start));
    start = comma + 1;
    if (comma == v.size() - 1) break;
  }
  return out;
}

std::vector<std::string> parse_tokens(const std::string& v) {
  std::istringstream in(v);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

// a*m+b, m-1, -m, 3, (2*m+1)/3, or the infinite end.
ChainEnd parse_end(Reader& r, const Entry& e, bool lower) {
  std::string v;
  for (char c : e.value)
    if (!std::isspace(static_cast<unsigned char>(c))) v += c;
  if (v == "inf" || v == "-inf") {
    if ((v == "inf") == lower) r.fail(e, lower ? "a lower end cannot be +inf" : "an upper end cannot be -inf");
    return ChainEnd::inf();
  }
  Int divisor = 1;
  if (!v.empty() && v.front() == '(') {
    const auto close = v.find(")/");
    if (close == std::string::npos) r.fail(e, "expected (a*m+b)/c");
    divisor = parse_int(r, e, v.substr(close + 2), close + 2);
    if (divisor <= 0) r.fail(e, "divisor must be positive");
    v = v.substr(1, close - 1);
  }
  Int slope = 0, offset = 0;
  const auto mpos = v.find('m');
  if (mpos == std::string::npos) {
    offset = parse_int(r, e, v);
  } else {
    std::string coef = v.substr(0, mpos);
    if (!coef.empty() && coef.back() == '*') coef.pop_back();
    if (coef.empty() || coef == "+") slope = 1;
    else if (coef == "-") slope = -1;
    else slope = parse_int(r, e, coef);
    const std::string rest = v.substr(mpos + 1);
    if (!rest.empty()) {
      if (rest.front() != '+' && rest.front() != '-') r.fail(e.line, e.column + mpos + 1, "expected +b or -b after m");
      offset = parse_int(r, e, rest.front() == '+' ? rest.substr(1) : rest, mpos + 1);
    }
  }
  return ChainEnd{false, {{slope, offset, divisor}}};
}

std::string end_text(const ChainEnd& e, bool lower) {
  if (e.infinite) return lower ? "-inf" : "inf";
  if (e.terms.size() != 1) throw Error(Error::Code::Unsupported, "only single-term chain ends can be written");
  return to_string(e);
}

// ---- sections ------------------------------------------------------------------------------------

BornologySpec parse_bornology(Reader& r, Section& s, const GroundSpace& space) {
  const Entry& kind = r.get(s, "kind");
  BornologySpec b = BornologySpec::maximal(space);
  if (kind.value == "maximal") {
    b = BornologySpec::maximal(space);
  } else if (kind.value == "cubes") {
    if (space.is_finite()) r.fail(kind, "cubes need a lattice space");
    b = BornologySpec::cubes(space.dim());
  } else if (kind.value == "chain") {
    if (space.is_finite()) r.fail(kind, "chains need a lattice space");
    ChainShape sh;
    for (std::size_t i = 0; i < space.dim(); ++i) {
      sh.lower.push_back(parse_end(r, r.get(s, "lower." + std::to_string(i)), true));
      sh.upper.push_back(parse_end(r, r.get(s, "upper." + std::to_string(i)), false));
    }
    if (auto* e = r.find(s, "empty_below")) sh.empty_below = parse_int(r, *e, e->value);
    b = BornologySpec::chain(sh);
  } else if (kind.value == "base") {
    if (!space.is_finite()) r.fail(kind, "a finite base needs a finite space");
    std::vector<LabelSet> base;
    for (std::size_t i = 0;; ++i) {
      Entry* e = r.find(s, "set." + std::to_string(i));
      if (!e) break;
      LabelSet m = 0;
      for (const auto& t : parse_tokens(e->value)) {
        const auto idx = space.label_index(t);
        if (!idx) r.fail(*e, "unknown label '" + t + "'");
        m |= LabelSet{1} << *idx;
      }
      base.push_back(m);
    }
    if (base.empty()) r.fail(kind, "a base needs set.0");
    b = BornologySpec::finite_base(space, base);
  } else {
    r.fail(kind, "bornology kind must be maximal, cubes, chain or base");
  }
  r.no_leftovers(s);
  return b;
}

std::string bornology_text(const BornologySpec& b) {
  std::ostringstream out;
  switch (b.kind()) {
    case BornologySpec::Kind::Maximal: out << "kind = maximal\n"; break;
    case BornologySpec::Kind::FiniteBase:
      out << "kind = base\n";
      for (std::size_t i = 0; i < b.base().size(); ++i) {
        out << "set." << i << " =";
        for (std::size_t l = 0; l < b.space().size(); ++l)
          if (b.base()[i] >> l & 1) out << " " << b.space().labels()[l];
        out << "\n";
      }
      break;
    case BornologySpec::Kind::Chain:
      if (b.shape() == ChainShape::cubes(b.dim())) {
        out << "kind = cubes\n";
        break;
      }
      out << "kind = chain\n";
      for (std::size_t i = 0; i < b.dim(); ++i) {
        out << "lower." << i << " = " << end_text(b.shape().lower[i], true) << "\n";
        out << "upper." << i << " = " << end_text(b.shape().upper[i], false) << "\n";
      }
      if (b.shape().empty_below != 0) out << "empty_below = " << b.shape().empty_below << "\n";
      break;
  }
  return out.str();
}

std::string tuple_text(const Point& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
  return s + ")";
}

const std::set<std::string> kStatuses{"confirmed", "refuted", "inconclusive", "not_applicable"};

}  // namespace

InstanceFile parse_instance_text(const std::string& text, const std::string& origin) {
  Reader r(text, origin);
  for (const auto& s : r.sections()) {
    static const std::set<std::string> known{"space", "group", "action", "bornology.X", "bornology.L", "expect"};
    if (!known.count(s.name) && s.name.rfind("coarse.candidate.", 0) != 0)
      r.fail(s.line, 1, "unknown section [" + s.name + "]");
  }

  // [space]
  Section& sp = r.require("space");
  const Entry& sk = r.get(sp, "kind");
  GroundSpace space = GroundSpace::lattice(1);
  if (sk.value == "lattice") {
    const Entry& d = r.get(sp, "dim");
    const Int dim = parse_int(r, d, d.value);
    if (dim < 1 || dim > 3) r.fail(d, "dim must be 1, 2 or 3");
    space = GroundSpace::lattice(static_cast<std::size_t>(dim));
  } else if (sk.value == "finite") {
    const Entry& l = r.get(sp, "labels");
    auto labels = parse_tokens(l.value);
    if (labels.empty() || labels.size() > 12) r.fail(l, "a finite space has 1 to 12 labels");
    if (std::set<std::string>(labels.begin(), labels.end()).size() != labels.size()) r.fail(l, "repeated label");
    space = GroundSpace::finite(labels);
  } else {
    r.fail(sk, "space kind must be lattice or finite");
  }
  r.no_leftovers(sp);

  // [group] and its bornology
  Section& gp = r.require("group");
  const Entry& gk = r.get(gp, "kind");
  std::vector<std::string> elements;
  std::vector<std::vector<Int>> mul;
  std::size_t rank = 1;
  GroundSpace gspace = GroundSpace::lattice(1);
  if (gk.value == "lattice") {
    const Entry& k = r.get(gp, "rank");
    const Int kv = parse_int(r, k, k.value);
    if (kv < 1 || kv > 3) r.fail(k, "rank must be 1, 2 or 3");
    rank = static_cast<std::size_t>(kv);
    gspace = GroundSpace::lattice(rank);
  } else if (gk.value == "finite") {
    const Entry& el = r.get(gp, "elements");
    elements = parse_tokens(el.value);
    if (elements.empty() || elements.size() > 12) r.fail(el, "a finite group has 1 to 12 elements");
    if (std::set<std::string>(elements.begin(), elements.end()).size() != elements.size())
      r.fail(el, "repeated element");
    gspace = GroundSpace::finite(elements);
    for (const auto& g : elements) {
      const Entry& row = r.get(gp, "mul." + g);
      std::vector<Int> out;
      for (const auto& t : parse_tokens(row.value)) {
        const auto idx = gspace.label_index(t);
        if (!idx) r.fail(row, "unknown element '" + t + "'");
        out.push_back(*idx);
      }
      if (out.size() != elements.size()) r.fail(row, "row needs one product per element");
      mul.push_back(out);
    }
  } else {
    r.fail(gk, "group kind must be lattice or finite");
  }
  r.no_leftovers(gp);
  const BornologySpec bl = parse_bornology(r, r.require("bornology.L"), gspace);
  const BornologySpec bx = parse_bornology(r, r.require("bornology.X"), space);

  // [action]
  Section& ac = r.require("action");
  std::string name = "instance";
  if (auto* n = r.find(ac, "name")) name = n->value;
  std::variant<TranslationRule, PermutationRule> rule;
  try {
    if (gk.value == "lattice") {
      if (space.is_finite()) r.fail(gk, "a lattice group acts on a lattice space");
      std::vector<Point> cols;
      for (std::size_t j = 0; j < rank; ++j) {
        const Entry& c = r.get(ac, "column." + std::to_string(j));
        Point col = parse_tuple(r, c);
        if (col.size() != space.dim()) r.fail(c, "column needs " + std::to_string(space.dim()) + " entries");
        cols.push_back(col);
      }
      TranslationRule t{IntMatrix::from_columns(space.dim(), cols), std::nullopt};
      if (auto* tp = r.find(ac, "twist.perm")) {
        const Entry& ts = r.get(ac, "twist.sign");
        SignedPerm sp2;
        for (Int v : parse_tuple(r, *tp)) {
          if (v < 0) r.fail(*tp, "permutation entries are non-negative");
          sp2.perm.push_back(static_cast<std::size_t>(v));
        }
        sp2.sign = parse_tuple(r, ts);
        t.twist = sp2;
      }
      rule = t;
    } else {
      if (!space.is_finite()) r.fail(gk, "a finite group acts on a finite space");
      PermutationRule p;
      for (const auto& g : elements) {
        const Entry& row = r.get(ac, "perm." + g);
        std::vector<Int> images;
        for (const auto& t : parse_tokens(row.value)) {
          const auto idx = space.label_index(t);
          if (!idx) r.fail(row, "unknown label '" + t + "'");
          images.push_back(*idx);
        }
        if (images.size() != space.size()) r.fail(row, "permutation needs one image per label");
        if (std::set<Int>(images.begin(), images.end()).size() != images.size()) r.fail(row, "not a permutation");
        p.perm.push_back(images);
      }
      rule = p;
    }
  } catch (const ParseError&) {
    throw;
  }
  r.no_leftovers(ac);

  InstanceFile f;
  try {
    GroupSpec g = gk.value == "lattice" ? GroupSpec::lattice(rank, bl) : GroupSpec::finite(elements, mul, bl);
    f.action = std::make_shared<ActionInstance>(name, std::move(g), space, rule, bx);
  } catch (const Error& e) {
    if (dynamic_cast<const ParseError*>(&e)) throw;
    r.fail(ac.line, 1, std::string("invalid instance: ") + e.what());
  }
  const CheckReport check = validate_instance(*f.action);
  for (const auto& line : check.lines)
    if (!line.passed)
      throw Error(Error::Code::Validation, r.origin() + ": " + line.name + " fails: " + line.detail);

  // candidates, in file order
  for (auto& s : r.sections()) {
    if (s.name.rfind("coarse.candidate.", 0) != 0) continue;
    CandidateSpec c;
    c.name = s.name.substr(std::string("coarse.candidate.").size());
    const Entry& k = r.get(s, "kind");
    if (k.value == "metric") c.kind = CandidateSpec::Kind::Metric;
    else if (k.value == "connected") c.kind = CandidateSpec::Kind::Connected;
    else if (k.value == "group_right") c.kind = CandidateSpec::Kind::GroupRight;
    else r.fail(k, "candidate kind must be metric, connected or group_right");
    if (c.kind == CandidateSpec::Kind::Metric && space.is_finite()) r.fail(k, "metric candidates need a lattice space");
    if (c.kind == CandidateSpec::Kind::GroupRight && !(gspace == space))
      r.fail(k, "group_right needs the group to be the space");
    r.no_leftovers(s);
    f.candidates.push_back(c);
  }

  if (auto* ex = r.section("expect")) {
    for (const char* key : {"weak", "main", "transitive"})
      if (auto* e = r.find(*ex, key)) {
        if (!kStatuses.count(e->value)) r.fail(*e, "expected status must be confirmed, refuted, inconclusive or not_applicable");
        f.expect[key] = e->value;
      }
    if (auto* e = r.find(*ex, "transitive.candidate")) {
      const bool known = std::any_of(f.candidates.begin(), f.candidates.end(),
                                     [&](const CandidateSpec& c) { return c.name == e->value; });
      if (!known) r.fail(*e, "no candidate named '" + e->value + "'");
      f.transitive_candidate = e->value;
    }
    r.no_leftovers(*ex);
  }
  return f;
}

InstanceFile parse_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Error::Code::Parse, path + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_instance_text(buf.str(), path);
}

std::vector<CoarseStructure> InstanceFile::candidate_structures() const {
  std::vector<CoarseStructure> out;
  for (const auto& c : candidates) {
    switch (c.kind) {
      case CandidateSpec::Kind::Metric: {
        CoarseStructure m = metric_structure(action->dim());
        out.emplace_back(c.name, m.chain());
        break;
      }
      case CandidateSpec::Kind::Connected: {
        CoarseStructure s = associated_connected_structure(action->space_bornology());
        if (s.is_finite()) out.emplace_back(c.name, s.closure());
        else out.emplace_back(c.name, s.chain());
        break;
      }
      case CandidateSpec::Kind::GroupRight: {
        CoarseStructure s = group_right_structure(action->group());
        if (s.is_finite()) out.emplace_back(c.name, s.closure());
        else out.emplace_back(c.name, s.chain());
        break;
      }
    }
  }
  return out;
}

std::optional<CoarseStructure> InstanceFile::transitive_structure() const {
  const auto all = candidate_structures();
  if (all.empty()) return std::nullopt;
  if (transitive_candidate)
    for (const auto& s : all)
      if (s.name() == *transitive_candidate) return s;
  return all.front();
}

std::string serialize_instance(const InstanceFile& f) {
  const ActionInstance& a = *f.action;
  std::ostringstream out;
  out << "[space]\n";
  if (a.space().is_finite()) {
    out << "kind = finite\nlabels =";
    for (const auto& l : a.space().labels()) out << " " << l;
    out << "\n";
  } else {
    out << "kind = lattice\ndim = " << a.dim() << "\n";
  }
  out << "\n[group]\n";
  const GroupSpec& g = a.group();
  if (g.is_finite()) {
    const auto& t = g.table();
    out << "kind = finite\nelements =";
    for (const auto& e : t.elements) out << " " << e;
    out << "\n";
    for (std::size_t i = 0; i < t.order(); ++i) {
      out << "mul." << t.elements[i] << " =";
      for (Int v : t.mul[i]) out << " " << t.elements[static_cast<std::size_t>(v)];
      out << "\n";
    }
  } else {
    out << "kind = lattice\nrank = " << g.rank() << "\n";
  }
  out << "\n[action]\nname = " << a.name() << "\n";
  if (a.is_translation()) {
    for (std::size_t j = 0; j < a.rank(); ++j) out << "column." << j << " = " << tuple_text(a.matrix().column(j)) << "\n";
    if (const auto& tw = a.translation().twist) {
      Point perm(tw->perm.begin(), tw->perm.end());
      out << "twist.perm = " << tuple_text(perm) << "\ntwist.sign = " << tuple_text(tw->sign) << "\n";
    }
  } else {
    const auto& t = g.table();
    for (std::size_t i = 0; i < t.order(); ++i) {
      out << "perm." << t.elements[i] << " =";
      for (Int v : a.permutation().perm[i]) out << " " << a.space().labels()[static_cast<std::size_t>(v)];
      out << "\n";
    }
  }
  out << "\n[bornology.X]\n" << bornology_text(a.space_bornology());
  out << "\n[bornology.L]\n" << bornology_text(a.group_bornology());
  for (const auto& c : f.candidates) {
    out << "\n[coarse.candidate." << c.name << "]\nkind = ";
    switch (c.kind) {
      case CandidateSpec::Kind::Metric: out << "metric\n"; break;
      case CandidateSpec::Kind::Connected: out << "connected\n"; break;
      case CandidateSpec::Kind::GroupRight: out << "group_right\n"; break;
    }
  }
  if (!f.expect.empty() || f.transitive_candidate) {
    out << "\n[expect]\n";
    for (const char* key : {"weak", "main", "transitive"})
      if (auto it = f.expect.find(key); it != f.expect.end()) out << key << " = " << it->second << "\n";
    if (f.transitive_candidate) out << "transitive.candidate = " << *f.transitive_candidate << "\n";
  }
  return out.str();
}

std::string closure_dot(const FiniteClosure& f, const std::string& name) {
  std::ostringstream out;
  out << "digraph \"" << name << "\" {\n";
  const std::size_t n = f.ground.size();
  for (std::size_t i = 0; i < n; ++i) out << "  n" << i << " [label=\"" << f.ground.labels()[i] << "\"];\n";
  for (std::size_t r = 0; r < f.antichain.size(); ++r)
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        if (f.antichain[r].has(x, y)) out << "  n" << x << " -> n" << y << " [relation=" << r << "];\n";
  out << "}\n";
  return out.str();
}

}  // namespace bcs
