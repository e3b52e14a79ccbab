#pragma once

#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "cdl/closure.hpp"
#include "cdl/config.hpp"
#include "cdl/formula.hpp"
#include "cdl/monad.hpp"

namespace cdl {

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A finite dynamic model: carrier, atomic action tables and valuation.
struct DynamicModel {
  InstanceConfig config;
  std::vector<std::string> states;
  std::map<std::string, StateSet> valuation;
  std::map<std::string, KleisliArrow> actions;
  /// Set when MonNbhd tables were read as generators and upward closed.
  bool generators = false;

  std::size_t size() const { return states.size(); }
  /// Throws ModelError for an unknown state name.
  std::size_t state_index(const std::string& name) const;
};

/// Evaluation session with memo tables. Unbound propositions denote the
/// empty set; unbound atomic actions raise ModelError.
class Evaluator {
 public:
  explicit Evaluator(const DynamicModel& model);

  StateSet eval(const Formula& phi);
  KleisliArrow eval(const Action& alpha);
  /// Pins the truth set of phi for this session. Used to evaluate programs
  /// against a candidate assignment of closure formulas.
  void assume(const Formula& phi, StateSet truth);

  const MonadInstance& monad() const { return monad_; }
  const Lifting& lifting() const { return lifting_; }
  const DynamicModel& model() const { return model_; }

 private:
  StateSet eval_uncached(const Formula& phi);
  KleisliArrow eval_uncached(const Action& alpha);

  const DynamicModel& model_;
  MonadInstance monad_;
  Lifting lifting_;
  std::map<std::string, NaturalOperation> ops_;
  std::unordered_map<Formula, StateSet, FormulaHash> formulas_;
  std::unordered_map<Action, KleisliArrow, ActionHash> actions_;
};

StateSet eval_formula(const DynamicModel& model, const Formula& phi);
KleisliArrow eval_action(const DynamicModel& model, const Action& alpha);

/// phi holds at every state.
bool check_axiom_validity(const DynamicModel& model, const Formula& phi);
/// If <alpha>psi | phi -> psi is valid then so is <alpha*>phi -> psi.
bool check_star_rule_preservation(const DynamicModel& model, const Action& alpha, const Formula& phi,
                                  const Formula& psi);

struct CoherenceReport {
  bool ok() const { return violations.empty(); }
  std::uint64_t checks = 0;
  std::vector<std::string> violations;
};

/// State i of the model is read as atoms[i]. Checks, for every diamond
/// <alpha>phi of the closure and every atom, that gamma(alpha)(atom) is in
/// lambda(phi-hat) iff <alpha>phi is in the atom, and that every closure
/// formula evaluates to its hat set. Throws ModelError when atoms is not a
/// set of Hintikka atoms matching the carrier.
CoherenceReport check_coherence(const DynamicModel& model, const Closure& closure,
                                const std::vector<StateSet>& atoms);

/// Model file: {"config", "states", "valuation", "actions", "generators"}.
/// A config name is resolved with load_config; an inline object is also
/// accepted. Missing action entries denote the bottom element.
DynamicModel model_from_json(const std::string& text);
DynamicModel load_model(const std::string& path);
std::string model_to_json(const DynamicModel& model);

/// Random model with the given propositions and atomic actions.
DynamicModel random_model(const InstanceConfig& config, std::size_t states, const std::vector<std::string>& props,
                          const std::vector<std::string>& actions, std::mt19937_64& rng);

}  // namespace cdl
