#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bcs/sets.hpp"

namespace bcs {

/// Search limits shared by every decision procedure.
struct Budget {
  Int max_index = 8;  // chain levels examined on the quantified side
  Int window = 64;    // radius of lattice windows used for evidence

  /// Largest level searched on the existential side of a cofinality claim.
  Int cofinal_cap() const { return std::max<Int>(window / 2, 2 * max_index + 2); }
};

/// Result of a boundedness query against a bornology.
struct BoundVerdict {
  enum class Outcome { BoundedAt, Unbounded, Inconclusive };

  Outcome outcome = Outcome::Inconclusive;
  Int index = 0;                   // BoundedAt: the containing level
  std::optional<Point> base_point; // Unbounded: x0 of the escaping ray
  std::optional<Point> direction;  // Unbounded: r with x0 + t r in the set for t >= 0
  std::vector<Point> escape;       // Unbounded: points outside the levels 0..budget
  std::vector<Point> anchors;      // BoundedAt (coarse): the finite set A
  bool exact = true;
  std::string note;

  static BoundVerdict bounded(Int k, std::string note = {}) {
    BoundVerdict v;
    v.outcome = Outcome::BoundedAt;
    v.index = k;
    v.note = std::move(note);
    return v;
  }
  static BoundVerdict inconclusive(std::string note) {
    BoundVerdict v;
    v.outcome = Outcome::Inconclusive;
    v.exact = false;
    v.note = std::move(note);
    return v;
  }

  bool is_bounded() const { return outcome == Outcome::BoundedAt; }
  bool is_unbounded() const { return outcome == Outcome::Unbounded; }
};

std::string to_string(const BoundVerdict& v);

enum class Status { Confirmed, Refuted, Inconclusive, NotApplicable };

const char* to_string(Status s);

/// Three-valued judgement with a key/value certificate that can be replayed.
struct Verdict {
  Status status = Status::Inconclusive;
  bool exact = false;
  std::string summary;
  std::vector<std::pair<std::string, std::string>> certificate;

  static Verdict confirmed(std::string summary, bool exact = true) {
    return {Status::Confirmed, exact, std::move(summary), {}};
  }
  static Verdict refuted(std::string summary, bool exact = true) {
    return {Status::Refuted, exact, std::move(summary), {}};
  }
  static Verdict inconclusive(std::string summary) {
    return {Status::Inconclusive, false, std::move(summary), {}};
  }
  static Verdict not_applicable(std::string summary) {
    return {Status::NotApplicable, true, std::move(summary), {}};
  }

  Verdict& add(std::string key, std::string value) {
    certificate.emplace_back(std::move(key), std::move(value));
    return *this;
  }
  std::optional<std::string> find(const std::string& key) const;

  bool holds() const { return status == Status::Confirmed; }
  bool fails() const { return status == Status::Refuted; }
};

std::string point_to_string(const Point& p);

}  // namespace bcs
