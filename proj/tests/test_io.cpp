#include <filesystem>

#include "bcs/associated.hpp"
#include "bcs/instance_io.hpp"
#include "bcs/oracle.hpp"
#include "bcs/report.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bcs;
using namespace support;

namespace {

std::string fixture(const std::string& name) { return std::string(BCS_FIXTURES) + "/" + name + ".instance"; }

void same_action(const ActionInstance& a, const ActionInstance& b) {
  CHECK(a.name() == b.name());
  CHECK(a.space() == b.space());
  CHECK(a.space_bornology() == b.space_bornology());
  CHECK(a.group_bornology() == b.group_bornology());
  CHECK(a.group().is_finite() == b.group().is_finite());
  CHECK(a.group().rank() == b.group().rank());
  REQUIRE(a.is_translation() == b.is_translation());
  if (a.is_translation()) {
    CHECK(a.matrix() == b.matrix());
    CHECK(a.translation().twist == b.translation().twist);
  } else {
    CHECK(a.permutation().perm == b.permutation().perm);
    CHECK(a.group().table().mul == b.group().table().mul);
  }
}

std::optional<Error::Code> code_of(const std::string& text) {
  try {
    parse_instance_text(text);
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("fixture files describe the built-in examples") {
  const std::vector<std::pair<std::string, ActionPtr>> built = {
      {"shift", shift()},
      {"hyperbola", hyperbola()},
      {"trivial", trivial()},
      {"shift_maximal_space", shift_maximal_space()},
      {"trivial_maximal_group", trivial_maximal_group()},
      {"first_coordinate", first_coordinate()}};
  for (const auto& [name, a] : built) {
    INFO(name);
    same_action(*parse_instance(fixture(name)).action, *a);
  }
  const InstanceFile sq = parse_instance(fixture("cyclic_square"));
  CHECK(sq.action->space().is_finite());
  CHECK(sq.action->group().table().order() == 2);
  CHECK(sq.expect.at("main") == "confirmed");
  REQUIRE(sq.candidates.size() == 1);
  CHECK(sq.candidates[0].kind == CandidateSpec::Kind::Connected);
  const InstanceFile fc = parse_instance(fixture("first_coordinate"));
  CHECK(fc.expect.at("transitive") == "confirmed");
  CHECK(fc.transitive_structure().has_value());
}

TEST_CASE("serialize then parse is the identity") {
  for (const auto& entry : std::filesystem::directory_iterator(BCS_FIXTURES)) {
    const std::string path = entry.path().string();
    if (path.find("malformed") != std::string::npos) continue;
    INFO(path);
    const InstanceFile f = parse_instance(path);
    const std::string text = serialize_instance(f);
    const InstanceFile g = parse_instance_text(text);
    same_action(*f.action, *g.action);
    CHECK(f.expect == g.expect);
    CHECK(f.candidates.size() == g.candidates.size());
    CHECK(f.transitive_candidate == g.transitive_candidate);
    CHECK(serialize_instance(g) == text);
  }
  for (auto p : {oracle::Profile::Finite, oracle::Profile::LatticeK1, oracle::Profile::LatticeK2})
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      InstanceFile f;
      f.action = oracle::random_instance(seed, p);
      const std::string text = serialize_instance(f);
      INFO(text);
      const InstanceFile g = parse_instance_text(text);
      same_action(*f.action, *g.action);
      CHECK(serialize_instance(g) == text);
    }
}

TEST_CASE("malformed fixtures report where they break") {
  try {
    parse_instance(fixture("malformed_syntax"));
    FAIL("accepted");
  } catch (const ParseError& e) {
    CHECK(e.line() == 5);
    CHECK(e.column() == 1);
    CHECK(std::string(e.what()).find("missing ']'") != std::string::npos);
  }
  try {
    parse_instance(fixture("malformed_key"));
    FAIL("accepted");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
    CHECK(std::string(e.what()).find("radius") != std::string::npos);
  }
  try {
    parse_instance(fixture("malformed_chain"));
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("monotone-nonempty") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_instance(fixture("does_not_exist")), Error);
}

TEST_CASE("small syntax errors") {
  const std::string head = "[space]\nkind = lattice\ndim = 1\n[group]\nkind = lattice\nrank = 1\n";
  const std::string rest = "[action]\nname = t\ncolumn.0 = (1)\n[bornology.X]\nkind = cubes\n[bornology.L]\nkind = cubes\n";
  CHECK_NOTHROW(parse_instance_text(head + rest));
  CHECK(code_of(head + head + rest) == Error::Code::Parse);
  CHECK(code_of(head + "dim = 2\n" + rest) == Error::Code::Parse);
  CHECK(code_of(head + "[nonsense]\n" + rest) == Error::Code::Parse);
  CHECK(code_of(head + rest + "[expect]\nmain = maybe\n") == Error::Code::Parse);
  CHECK(code_of(head + "[action]\nname = t\ncolumn.0 = (1, 2)\n[bornology.X]\nkind = cubes\n[bornology.L]\nkind = cubes\n").has_value());
  CHECK(code_of(head).has_value());
}

TEST_CASE("closure as DOT") {
  const InstanceFile sq = parse_instance(fixture("cyclic_square"));
  const CoarseStructure cs = associated_structure(sq.action, Budget{});
  const std::string dot = closure_dot(cs.closure(), "cyclic_square");
  CHECK(dot.rfind("digraph \"cyclic_square\" {", 0) == 0);
  for (const char* label : {"a", "b", "c", "d"}) CHECK(dot.find(std::string("[label=\"") + label + "\"]") != std::string::npos);
  CHECK(dot.find("->") != std::string::npos);
  CHECK(dot.back() == '\n');
  CHECK(closure_dot(cs.closure(), "cyclic_square") == dot);
}

TEST_CASE("machine reports are stable") {
  const InstanceFile f = parse_instance(fixture("shift"));
  const std::string a = render(verify_theorem_weak(f.action, Budget{}), Format::Machine);
  const std::string b = render(verify_theorem_weak(f.action, Budget{}), Format::Machine);
  CHECK(a == b);
  CHECK(a.find("status=confirmed") != std::string::npos);
  for (char c : a) CHECK(c != '\t');
}
