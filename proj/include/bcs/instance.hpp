#pragma once

// Bornological groups and actions: finite groups acting by permutations, and
// Z^k acting on Z^d by x -> x + M l.

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bcs/bornology.hpp"
#include "bcs/lattice.hpp"
#include "bcs/sets.hpp"

namespace bcs {

struct FiniteGroup {
  std::vector<std::string> elements;
  std::vector<std::vector<Int>> mul;  // mul[g][h] = index of g*h
  std::vector<Int> inv;
  Int identity = 0;

  std::size_t order() const { return elements.size(); }
};

class GroupSpec {
 public:
  /// Builds the inverse table and identity from a multiplication table.
  static GroupSpec finite(std::vector<std::string> elements, std::vector<std::vector<Int>> mul,
                          BornologySpec bornology);
  static GroupSpec lattice(std::size_t rank, BornologySpec bornology);

  bool is_finite() const { return finite_; }
  std::size_t rank() const { return rank_; }  // lattice rank; 1 for finite groups
  const FiniteGroup& table() const { return table_; }
  const BornologySpec& bornology() const { return bornology_; }
  /// The underlying set of the group as a ground space.
  const GroundSpace& space() const { return space_; }

  Point multiply(std::span<const Int> g, std::span<const Int> h) const;
  Point inverse(std::span<const Int> g) const;
  Point identity() const;

 private:
  bool finite_ = false;
  std::size_t rank_ = 1;
  FiniteGroup table_;
  GroundSpace space_ = GroundSpace::lattice(1);
  BornologySpec bornology_ = BornologySpec::maximal(GroundSpace::lattice(1));
};

/// x -> A x, A a signed permutation: (A x)_i = sign[i] * x[perm[i]].
struct SignedPerm {
  std::vector<std::size_t> perm;
  std::vector<Int> sign;

  Point apply(std::span<const Int> x) const;
  Point apply_inverse(std::span<const Int> x) const;
  bool is_identity() const;
  bool operator==(const SignedPerm&) const = default;
};

struct TranslationRule {
  IntMatrix m;                     // d x k
  std::optional<SignedPerm> twist;  // rank one only: n acts as g^n, g(x) = A x + M e_1
};

struct PermutationRule {
  std::vector<std::vector<Int>> perm;  // perm[g][x]
};

class ActionInstance {
 public:
  ActionInstance(std::string name, GroupSpec group, GroundSpace space,
                 std::variant<TranslationRule, PermutationRule> rule, BornologySpec space_bornology);

  const std::string& name() const { return name_; }
  const GroupSpec& group() const { return group_; }
  const GroundSpace& space() const { return space_; }
  const BornologySpec& space_bornology() const { return space_bornology_; }
  const BornologySpec& group_bornology() const { return group_.bornology(); }
  const std::variant<TranslationRule, PermutationRule>& rule() const { return rule_; }

  bool is_translation() const { return std::holds_alternative<TranslationRule>(rule_); }
  bool is_permutation() const { return !is_translation(); }
  /// Untwisted translation rule: every quantity has a box/lattice closed form.
  bool is_exact_lattice() const { return is_translation() && !translation().twist; }
  const TranslationRule& translation() const { return std::get<TranslationRule>(rule_); }
  const PermutationRule& permutation() const { return std::get<PermutationRule>(rule_); }
  const IntMatrix& matrix() const { return translation().m; }
  std::size_t dim() const { return space_.dim(); }
  std::size_t rank() const { return group_.rank(); }

  /// rho(l)(x).
  Point act(std::span<const Int> l, std::span<const Int> x) const;

  /// Same action with other bornologies.
  ActionInstance with_space_bornology(BornologySpec b) const;
  ActionInstance with_group_bornology(BornologySpec b) const;

 private:
  std::string name_;
  GroupSpec group_;
  GroundSpace space_;
  std::variant<TranslationRule, PermutationRule> rule_;
  BornologySpec space_bornology_;
};

using ActionPtr = std::shared_ptr<const ActionInstance>;

struct CheckLine {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct CheckReport {
  std::string subject;
  std::vector<CheckLine> lines;

  bool passed() const;
  void add(std::string name, bool passed, std::string detail = {});
};

/// Group axioms of a finite table (associativity exhaustive up to order 8,
/// sampled beyond) and bornologies of the group and space.
CheckReport validate_instance(const ActionInstance& a);

/// Multiplication and inversion are bornological.
CheckReport group_bornological_check(const GroupSpec& g, Int max_index = 8);

/// The action map is bornological on the product bornology.
CheckReport action_bornological_check(const ActionInstance& a, Int max_index = 8);

/// Image of a box under l -> M l, as its box hull.
Box image_hull(const IntMatrix& m, const Box& b);

}  // namespace bcs
