#pragma once

// The orbit-pair entourages E(L, B), their lemmas, the base property of
// E^0(L, B_X), and consistency checks of the characterization theorems.

#include <string>
#include <utility>
#include <vector>

#include "bcs/actions.hpp"

namespace bcs {

/// E(L, B) = (B x B)_L u diag.
Entourage orbit_pair_entourage(const ActionPtr& a, const SetDescriptor& b);

/// E(L, B)[x] = ((L_{x,B})^-1 B) u {x}, both sides computed separately and
/// compared on the window.
Verdict verify_lemma_neighborhood(const ActionPtr& a, const SetDescriptor& b, const Point& x,
                                  const Budget& budget = {});

/// Invariance, diagonal, symmetry, union and composition laws of E(L, B)
/// on window pairs and triples.
Verdict verify_lemma_algebra(const ActionPtr& a, const SetDescriptor& b1, const SetDescriptor& b2,
                             const Budget& budget = {});

/// E^0(L, B_X) is closed under composition up to a level: symbolic indices
/// k(i, j) when B-proper, else a witness triple (x, y, z) per level m.
Verdict base_property_check(const ActionPtr& a, const Classification& cls, const Budget& budget = {});
Verdict base_property_check(const ActionPtr& a, const Budget& budget = {});

/// The chain E(L, B_m). Throws Error(Refuted) when the base property fails.
CoarseStructure associated_structure(const ActionPtr& a, const Budget& budget = {});

/// The coarsely bounded sets of E(L, B_X) are exactly B_X.
Verdict recover_bornology(const ActionPtr& a, const CoarseStructure& assoc, const Budget& budget = {});

struct TheoremReport {
  std::string theorem;
  std::vector<std::pair<std::string, Verdict>> conditions;
  Status status = Status::Inconclusive;
  bool consistent = true;  // false: the proved equivalence was observed violated
  Budget budget;
  std::string note;

  const Verdict* find(const std::string& name) const;
};

TheoremReport verify_theorem_weak(const ActionPtr& a, const Budget& budget = {});
TheoremReport verify_theorem_main(const ActionPtr& a, const std::vector<CoarseStructure>& candidates,
                                  const Budget& budget = {});
TheoremReport verify_theorem_transitive(const ActionPtr& a, const CoarseStructure& cs, const Budget& budget = {});

}  // namespace bcs
