#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdl/closure.hpp"
#include "cdl/config.hpp"
#include "cdl/model.hpp"

namespace cdl {

/// A closure or atom space outgrew the configured budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An emitted model failed re-verification. Always an implementation bug.
class VerificationError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Hintikka atoms over a closure. Atom i is a bitset over the closure's
/// pairs; live marks the atoms that survived elimination so far.
struct AtomSpace {
  Closure closure;
  std::vector<StateSet> atoms;
  StateSet live;

  std::size_t size() const { return atoms.size(); }
  /// Live atoms containing the literal.
  StateSet hat(Literal l) const;
  StateSet hat(const Formula& f) const { return hat(closure.literal_of(f)); }
  std::vector<std::size_t> live_indices() const { return live.indices(); }
};

/// Backtracking over the pairs in closure order; a rule is checked as soon
/// as every pair it mentions is assigned. Throws BudgetError beyond
/// max_pairs closure pairs or max_atoms atoms.
AtomSpace enumerate_atoms(const Closure& closure, std::size_t max_pairs = 64,
                          std::uint64_t max_atoms = std::uint64_t{1} << 13);

/// Least Y with Y = target | pre_R(Y), where rows[i] is the successor set
/// of i. Worklist over predecessor lists.
StateSet star_fixpoint(const std::vector<StateSet>& rows, const StateSet& target);

enum class VerdictKind { Sat, Unsat, UnsatAtomSpace, Valid, NotValid, ValidAtomSpace };

const char* verdict_name(VerdictKind k);
/// 0 for Sat/Valid, 1 for Unsat/NotValid, 3 for the atom-space verdicts.
int verdict_exit_code(VerdictKind k);

struct DecideStats {
  std::size_t pairs = 0;
  std::size_t atoms_generated = 0;
  std::size_t rounds = 0;
  std::size_t eliminated = 0;
  std::size_t live = 0;
};

struct Verdict {
  VerdictKind kind = VerdictKind::Unsat;
  std::string config;
  Formula formula;
  /// Sat: a model of formula. NotValid: a model refuting it.
  std::optional<DynamicModel> model;
  std::string witness;
  /// The formula whose closure was eliminated (the negation for validity)
  /// and the atom behind each model state.
  Formula decided;
  std::vector<StateSet> atoms;
  DecideStats stats;

  /// Negative atom-space verdicts come with no completeness claim.
  bool trusted() const { return kind != VerdictKind::UnsatAtomSpace && kind != VerdictKind::ValidAtomSpace; }
  std::string to_json() const;
};

struct DecideOptions {
  bool parallel = true;
};

/// Type elimination over the atoms of phi's closure. Powerset configs use
/// maximal relations; the other monads use the neighbourhood (or filter)
/// structure read off each atom and report negative results as
/// UnsatAtomSpace. Sat verdicts are re-verified by evaluation and the
/// coherence checker before they are returned.
Verdict decide_sat(const Formula& phi, const InstanceConfig& config, const DecideOptions& options = {});
/// decide_sat of the negation, with the verdict dualized.
Verdict decide_valid(const Formula& phi, const InstanceConfig& config, const DecideOptions& options = {});

}  // namespace cdl
