#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cdl/config.hpp"
#include "cdl/formula.hpp"
#include "cdl/signature.hpp"

namespace cdl {

/// An axiom schema. Propositions in the pattern are formula metavariables
/// and atomic actions are action metavariables.
struct Schema {
  enum class Group { Base, Pointwise, Frame };
  std::string name;
  Group group = Group::Base;
  Formula pattern;
  std::vector<std::string> action_vars;
  std::vector<std::string> formula_vars;
};

/// Replaces the metavariables in order. Throws std::invalid_argument when the
/// argument counts differ from the schema's.
Formula instantiate_schema(const Schema& s, const std::vector<Action>& actions, const std::vector<Formula>& formulas);
/// The instantiation making pattern equal to instance, if there is one.
std::optional<Substitution> match_schema(const Schema& s, const Formula& instance);

struct ProofSystem {
  std::string name;
  Signature signature;
  std::vector<Schema> schemas;

  const Schema* find(const std::string& schema_name) const;
};

/// Base axioms for the config's base logic, one pointwise schema per
/// operation and the frame schemas comp, star and test. Rules: modus
/// ponens, substitution, congruence and star induction.
ProofSystem proof_system(const InstanceConfig& config);

/// Truth-table check with Prop and Dia subterms as independent literals.
/// Throws std::invalid_argument beyond 24 literals.
bool is_tautology(const Formula& f);
/// The maximal non-Boolean subterms of f, in order of first occurrence.
std::vector<Formula> boolean_literals(const Formula& f);

struct Justification {
  enum class Kind { Taut, Axiom, MP, Subst, Cong, Star };
  Kind kind = Kind::Taut;
  std::string schema;          // Axiom
  std::size_t first = 0;       // premise step numbers
  std::size_t second = 0;      // MP
  /// Subst: (name, term text) pairs. Each name is resolved against the
  /// premise, as a proposition or an atomic action, when the step is checked.
  std::vector<std::pair<std::string, std::string>> substitution;
  std::optional<Action> action;  // Cong
};

struct Step {
  std::size_t number = 0;
  std::size_t line = 0;
  Formula formula;
  Justification why;
};

struct Derivation {
  std::vector<Step> steps;
};

class ScriptError : public std::runtime_error {
 public:
  ScriptError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Lines "n. <formula> ; <justification>" with justifications
///   taut | axiom <name> | mp i j | subst i x := <term>, ... | cong i [<action>] | star i
/// Blank lines and lines starting with # are skipped. Throws ScriptError.
Derivation parse_script(const std::string& text, const Signature& sig);

struct ProofVerdict {
  enum class Status { Accepted, Malformed, BadIndex, SchemaMismatch, NotTautology, RuleMismatch };
  Status status = Status::Accepted;
  std::size_t step = 0;  // number of the first failing step
  std::string message;

  bool accepted() const { return status == Status::Accepted; }
};

const char* status_name(ProofVerdict::Status s);

ProofVerdict check_derivation(const ProofSystem& system, const Derivation& d);
/// Parses and checks; parse failures become Malformed verdicts.
ProofVerdict check_script(const ProofSystem& system, const std::string& text);

}  // namespace cdl
