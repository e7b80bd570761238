#include "bcs/report.hpp"

#include <sstream>

namespace bcs {

namespace {

// Values on one line, whatever the certificate contains.
std::string flat(std::string s) {
  for (char& c : s)
    if (c == '\n') c = ' ';
  return s;
}

}  // namespace

std::string render(const std::string& prefix, const Verdict& v, Format f) {
  std::ostringstream out;
  if (f == Format::Machine) {
    out << prefix << ".status=" << to_string(v.status) << "\n";
    out << prefix << ".exact=" << (v.exact ? "true" : "false") << "\n";
    out << prefix << ".summary=" << flat(v.summary) << "\n";
    for (const auto& [k, val] : v.certificate) out << prefix << ".cert." << k << "=" << flat(val) << "\n";
    return out.str();
  }
  out << prefix << ": " << to_string(v.status) << (v.exact ? "" : " (window evidence)");
  if (!v.summary.empty()) out << ", " << v.summary;
  out << "\n";
  for (const auto& [k, val] : v.certificate) out << "    " << k << " = " << val << "\n";
  return out.str();
}

std::string render(const CheckReport& r, Format f) {
  std::ostringstream out;
  if (f == Format::Machine) {
    out << "subject=" << r.subject << "\n";
    for (const auto& line : r.lines) {
      out << "check." << line.name << "=" << (line.passed ? "pass" : "fail") << "\n";
      if (!line.detail.empty()) out << "check." << line.name << ".detail=" << flat(line.detail) << "\n";
    }
    out << "passed=" << (r.passed() ? "true" : "false") << "\n";
    return out.str();
  }
  out << r.subject << "\n";
  for (const auto& line : r.lines) {
    out << "  [" << (line.passed ? "pass" : "FAIL") << "] " << line.name;
    if (!line.detail.empty()) out << ": " << line.detail;
    out << "\n";
  }
  out << (r.passed() ? "all checks pass\n" : "some checks fail\n");
  return out.str();
}

std::string render(const Classification& c, Format f) {
  std::ostringstream out;
  out << render("b_proper", c.b_proper, f) << render("weakly_b_proper", c.weakly, f) << render("bi", c.bi, f);
  if (f == Format::Machine) {
    for (std::size_t i = 0; i < c.k_table.size(); ++i)
      for (std::size_t j = 0; j < c.k_table[i].size(); ++j)
        out << "k." << i << "." << j << "=" << c.k_table[i][j] << "\n";
    return out.str();
  }
  if (!c.k_table.empty()) {
    out << "transporter levels k(i,j), -1 unbounded:\n";
    for (const auto& row : c.k_table) {
      out << " ";
      for (Int k : row) out << " " << k;
      out << "\n";
    }
  }
  return out.str();
}

std::string render(const TheoremReport& t, Format f) {
  std::ostringstream out;
  if (f == Format::Machine) {
    out << "theorem=" << t.theorem << "\n";
    out << "status=" << to_string(t.status) << "\n";
    out << "consistent=" << (t.consistent ? "true" : "false") << "\n";
    out << "window=" << t.budget.window << "\n";
    out << "max_index=" << t.budget.max_index << "\n";
    if (!t.note.empty()) out << "note=" << flat(t.note) << "\n";
    for (const auto& [name, v] : t.conditions) out << render("condition." + name, v, f);
    return out.str();
  }
  out << "theorem " << t.theorem << ": " << to_string(t.status);
  if (!t.consistent) out << " (INCONSISTENT)";
  out << "  [window " << t.budget.window << ", max index " << t.budget.max_index << "]\n";
  if (!t.note.empty()) out << "  " << t.note << "\n";
  for (const auto& [name, v] : t.conditions) out << "  " << render(name, v, f);
  return out.str();
}

std::string render(const std::vector<oracle::CrossCheckReport>& reports, Format f) {
  std::ostringstream out;
  std::size_t bad = 0, advisories = 0, checked = 0;
  for (const auto& r : reports) {
    bad += r.passed() ? 0 : 1;
    advisories += r.advisories.size();
    checked += r.checked;
  }
  if (f == Format::Machine) {
    for (const auto& r : reports) {
      const std::string key = "report." + r.instance + "." + r.primitive;
      out << key << ".checked=" << r.checked << "\n";
      out << key << ".mismatches=" << r.mismatches.size() << "\n";
      out << key << ".advisories=" << r.advisories.size() << "\n";
      for (std::size_t i = 0; i < r.mismatches.size(); ++i) out << key << ".mismatch." << i << "=" << r.mismatches[i] << "\n";
    }
    out << "reports=" << reports.size() << "\nchecked=" << checked << "\nfailing_reports=" << bad
        << "\nadvisories=" << advisories << "\n";
    return out.str();
  }
  for (const auto& r : reports) {
    if (r.passed() && r.advisories.empty()) continue;
    out << (r.passed() ? "note " : "MISMATCH ") << r.instance << " " << r.primitive << " (window " << r.window
        << ")\n";
    for (const auto& m : r.mismatches) out << "  " << m << "\n";
    for (const auto& a : r.advisories) out << "  advisory: " << a << "\n";
  }
  out << reports.size() << " reports, " << checked << " comparisons, " << bad << " with mismatches, " << advisories
      << " advisories\n";
  return out.str();
}

}  // namespace bcs
