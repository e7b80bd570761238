#include "bcs/verdict.hpp"

#include <sstream>

namespace bcs {

std::string point_to_string(const Point& p) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < p.size(); ++i) out << (i ? "," : "") << p[i];
  out << ')';
  return out.str();
}

std::string to_string(const BoundVerdict& v) {
  std::ostringstream out;
  switch (v.outcome) {
    case BoundVerdict::Outcome::BoundedAt:
      out << "BoundedAt(" << v.index << ")";
      if (!v.anchors.empty()) {
        out << " A={";
        for (std::size_t i = 0; i < v.anchors.size(); ++i) out << (i ? "," : "") << point_to_string(v.anchors[i]);
        out << "}";
      }
      break;
    case BoundVerdict::Outcome::Unbounded:
      out << "Unbounded";
      if (v.base_point) out << " x0=" << point_to_string(*v.base_point);
      if (v.direction) out << " r=" << point_to_string(*v.direction);
      break;
    case BoundVerdict::Outcome::Inconclusive:
      out << "Inconclusive";
      break;
  }
  if (!v.note.empty()) out << " (" << v.note << ")";
  return out.str();
}

const char* to_string(Status s) {
  switch (s) {
    case Status::Confirmed: return "confirmed";
    case Status::Refuted: return "refuted";
    case Status::Inconclusive: return "inconclusive";
    case Status::NotApplicable: return "not_applicable";
  }
  return "?";
}

std::optional<std::string> Verdict::find(const std::string& key) const {
  for (const auto& [k, v] : certificate)
    if (k == key) return v;
  return std::nullopt;
}

}  // namespace bcs
