#pragma once

// Text instance files. A file is a list of [section] headers followed by
// `key = value` lines; `#` starts a comment. Sections: [space], [group],
// [action], [bornology.X], [bornology.L], optional [coarse.candidate.NAME]
// and [expect].

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bcs/coarse.hpp"
#include "bcs/instance.hpp"

namespace bcs {

class ParseError : public Error {
 public:
  ParseError(std::string origin, std::size_t line, std::size_t column, const std::string& msg);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

struct CandidateSpec {
  enum class Kind { Metric, Connected, GroupRight };
  std::string name;
  Kind kind = Kind::Metric;
};

struct InstanceFile {
  ActionPtr action;
  std::vector<CandidateSpec> candidates;
  std::map<std::string, std::string> expect;  // weak, main, transitive -> status name
  std::optional<std::string> transitive_candidate;

  std::vector<CoarseStructure> candidate_structures() const;
  /// The candidate named for the transitive theorem, else the first one.
  std::optional<CoarseStructure> transitive_structure() const;
};

/// Parses and validates; semantic failures name the failing axiom.
InstanceFile parse_instance_text(const std::string& text, const std::string& origin = "<text>");
InstanceFile parse_instance(const std::string& path);

/// Canonical text; parsing it gives back the same instance.
std::string serialize_instance(const InstanceFile& f);

/// One node per ground element, one edge per pair of each maximal relation.
std::string closure_dot(const FiniteClosure& f, const std::string& name = "closure");

}  // namespace bcs
