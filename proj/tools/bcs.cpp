// Command line front end: parse an instance file, run one check, print the
// report, and exit with 0 (pass), 1 (refuted), 2 (inconclusive) or 3 (usage).

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "bcs/associated.hpp"
#include "bcs/instance_io.hpp"
#include "bcs/oracle.hpp"
#include "bcs/report.hpp"

using namespace bcs;

namespace {

constexpr int kPass = 0;
constexpr int kRefuted = 1;
constexpr int kInconclusive = 2;
constexpr int kUsage = 3;

struct Common {
  Int window = 64;
  Int max_index = 8;
  std::string format = "text";

  Budget budget() const { return {max_index, window}; }
  Format fmt() const { return format == "machine" ? Format::Machine : Format::Text; }
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--window", c.window, "radius of lattice evidence windows")->check(CLI::Range(1, 4096));
  app->add_option("--max-index", c.max_index, "chain levels examined")->check(CLI::Range(0, 256));
  app->add_option("--format", c.format, "text or machine")->check(CLI::IsMember({"text", "machine"}));
}

int status_code(Status s) {
  switch (s) {
    case Status::Confirmed: return kPass;
    case Status::Refuted: return kRefuted;
    case Status::NotApplicable: return kRefuted;
    case Status::Inconclusive: return kInconclusive;
  }
  return kInconclusive;
}

std::string status_key(Status s) {
  return s == Status::NotApplicable ? "not_applicable" : to_string(s);
}

int run_axioms(const std::string& path, const Common& c) {
  const InstanceFile f = parse_instance(path);
  CheckReport r = validate_instance(*f.action);
  r.subject = f.action->name();
  std::cout << render(r, c.fmt());
  return r.passed() ? kPass : kRefuted;
}

int run_classify(const std::string& path, const Common& c) {
  const InstanceFile f = parse_instance(path);
  const Classification cls = classify(*f.action, c.budget());
  if (c.fmt() == Format::Machine) std::cout << "instance=" << f.action->name() << "\n";
  else std::cout << "instance " << f.action->name() << "\n";
  std::cout << render(cls, c.fmt());
  for (const Verdict* v : {&cls.b_proper, &cls.weakly, &cls.bi})
    if (v->status == Status::Inconclusive) return kInconclusive;
  return kPass;
}

int run_theorem(const std::string& which, const std::string& path, const Common& c) {
  const InstanceFile f = parse_instance(path);
  TheoremReport t;
  if (which == "weak") {
    t = verify_theorem_weak(f.action, c.budget());
  } else if (which == "main") {
    t = verify_theorem_main(f.action, f.candidate_structures(), c.budget());
  } else {
    std::optional<CoarseStructure> cs = f.transitive_structure();
    if (!cs) {
      if (f.action->space().is_finite()) {
        std::cerr << path << ": the transitive theorem needs a [coarse.candidate.*] section\n";
        return kUsage;
      }
      cs = metric_structure(f.action->dim());
    }
    t = verify_theorem_transitive(f.action, *cs, c.budget());
  }
  std::cout << render(t, c.fmt());
  if (!t.consistent) return kRefuted;
  const auto expected = f.expect.find(which);
  if (expected != f.expect.end()) {
    const bool matches = expected->second == status_key(t.status);
    if (c.fmt() == Format::Machine) std::cout << "expected=" << expected->second << "\n";
    else std::cout << "expected " << expected->second << (matches ? ", as declared" : ", NOT as declared") << "\n";
    if (matches) return kPass;
    return t.status == Status::Inconclusive ? kInconclusive : kRefuted;
  }
  return status_code(t.status);
}

int run_closure(const std::string& path, const std::string& dot, const Common& c) {
  const InstanceFile f = parse_instance(path);
  if (!f.action->space().is_finite()) {
    std::cerr << path << ": closure needs a finite instance\n";
    return kUsage;
  }
  // Refuted propagates as an Error and exits 1.
  const CoarseStructure cs = associated_structure(f.action, c.budget());
  AxiomReport axioms = coarse_axiom_check(cs.closure());
  const bool machine = c.fmt() == Format::Machine;
  std::cout << (machine ? "relations=" : "maximal relations: ") << cs.closure().antichain.size() << "\n";
  for (const auto& a : axioms.checks) {
    if (machine) std::cout << "axiom." << a.axiom << "=" << (a.passed ? "pass" : "fail") << "\n";
    else std::cout << "  [" << (a.passed ? "pass" : "FAIL") << "] " << a.axiom << (a.witness.empty() ? "" : ": ")
                   << a.witness << "\n";
  }
  if (!dot.empty()) {
    const std::string text = closure_dot(cs.closure(), f.action->name());
    if (dot == "-") {
      std::cout << text;
    } else {
      std::ofstream out(dot);
      if (!out) {
        std::cerr << dot << ": cannot write\n";
        return kUsage;
      }
      out << text;
    }
  }
  return axioms.passed() ? kPass : kRefuted;
}

int run_crosscheck(const std::vector<std::string>& paths, std::vector<std::string> primitives, const Common& c) {
  std::vector<ActionPtr> instances;
  for (const auto& p : paths) instances.push_back(parse_instance(p).action);
  if (primitives.empty()) primitives = oracle::primitives();
  const auto reports = oracle::cross_check(instances, primitives, c.window, c.budget());
  std::cout << render(reports, c.fmt());
  for (const auto& r : reports)
    if (!r.passed()) return kRefuted;
  return kPass;
}

int run_random(std::uint64_t seed, const std::string& profile) {
  const auto p = oracle::parse_profile(profile);
  if (!p) {
    std::cerr << "unknown profile '" << profile << "' (finite, lattice-k1, lattice-k2)\n";
    return kUsage;
  }
  InstanceFile f;
  f.action = oracle::random_instance(seed, *p);
  std::cout << serialize_instance(f);
  return validate_instance(*f.action).passed() ? kPass : kRefuted;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bornological coarse structures of group actions"};
  app.require_subcommand(1);
  Common common;

  std::string file;
  auto* axioms = app.add_subcommand("axioms", "validate the instance and its bornologies");
  axioms->add_option("file", file)->required();
  add_common(axioms, common);

  auto* cls = app.add_subcommand("classify", "B-proper, weakly B-proper and (BI)");
  cls->add_option("file", file)->required();
  add_common(cls, common);

  std::string which;
  auto* thm = app.add_subcommand("theorem", "check one characterization theorem");
  thm->add_option("which", which)->required()->check(CLI::IsMember({"weak", "main", "transitive"}));
  thm->add_option("file", file)->required();
  add_common(thm, common);

  std::string dot;
  auto* clo = app.add_subcommand("closure", "closure of the orbit-pair base on a finite instance");
  clo->add_option("file", file)->required();
  clo->add_option("--dot", dot, "write the maximal relations as DOT (- for stdout)");
  add_common(clo, common);

  std::vector<std::string> files, primitives;
  auto* cc = app.add_subcommand("crosscheck", "compare symbolic answers with brute force");
  cc->add_option("files", files)->required();
  cc->add_option("--primitive", primitives, "restrict to these primitives")->check(CLI::IsMember(oracle::primitives()));
  add_common(cc, common);

  std::uint64_t seed = 0;
  std::string profile = "lattice-k1";
  auto* rnd = app.add_subcommand("random", "print a seeded random instance");
  rnd->add_option("--seed", seed)->required();
  rnd->add_option("--profile", profile);
  add_common(rnd, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (*axioms) return run_axioms(file, common);
    if (*cls) return run_classify(file, common);
    if (*thm) return run_theorem(which, file, common);
    if (*clo) return run_closure(file, dot, common);
    if (*cc) return run_crosscheck(files, primitives, common);
    if (*rnd) return run_random(seed, profile);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case Error::Code::Refuted: return kRefuted;
      case Error::Code::BudgetExceeded: return kInconclusive;
      default: return kUsage;
    }
  }
  return kUsage;
}
