#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdl/laws.hpp"
#include "cdl/lifting.hpp"
#include "cdl/monad.hpp"
#include "cdl/signature.hpp"

namespace cdl {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Budgets {
  std::size_t law_carrier = 3;  // largest carrier the law suites visit
  std::uint64_t law_samples = 10000;
  std::uint64_t exhaustive_limit = 4096;
  std::uint64_t square_limit = std::uint64_t{1} << 23;
  std::size_t closure_pairs = 64;
  std::uint64_t atoms = std::uint64_t{1} << 13;  // relation matrices are quadratic in this
  std::uint64_t random_models = 1000;
  std::size_t model_states = 3;  // largest carrier of random models
};

/// Base logic Ax: dual K (normal diamond) or monotone M.
enum class BaseLogic { K, M };

struct InstanceConfig {
  std::string name;
  MonadKind monad = MonadKind::Pow;
  std::string join = "union";  // union, intersection or upset
  std::string lifting = "kripke-diamond";
  Polarity polarity = Polarity::Diamond;
  std::vector<std::string> operations;
  BaseLogic base_logic = BaseLogic::K;
  bool experimental = false;
  std::uint64_t seed = 1;
  Budgets budgets;

  MonadInstance instance() const;
  Lifting make_lifting() const;
  std::vector<NaturalOperation> natural_operations() const;
  /// The operations as a parser signature.
  Signature signature() const;
  LawBudget law_budget() const;
};

const std::vector<std::string>& shipped_config_names();
/// Throws ConfigError for an unknown name.
InstanceConfig shipped_config(const std::string& name);

InstanceConfig config_from_json(const std::string& text);
std::string config_to_json(const InstanceConfig& c);
/// Overrides budget fields from a JSON object; unknown keys are rejected.
void apply_budget_json(InstanceConfig& c, const std::string& text);

/// A shipped name, or else a path to a JSON config file. The result has
/// passed validate_config.
InstanceConfig load_config(const std::string& name_or_path);

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> problems;
  std::vector<LawReport> reports;
};

/// Standing assumptions: declared polarity is diamond-like and matches
/// classify_polarity, the lifting is monotone and natural, its transpose is
/// a monad morphism, every operation is compatible with its chi, and the
/// join's bottom agrees with the polarity. Uses small carriers and budgets.
ValidationReport validate_config(const InstanceConfig& c);
/// Throws ConfigError listing every failed check.
void require_valid(const InstanceConfig& c);

/// Every monad, join and lifting suite on carriers 1..law_carrier at the
/// config's budgets. Polarity classification appears as suite "polarity",
/// failing when the result differs from the declared polarity.
std::vector<LawReport> run_law_suite(const InstanceConfig& c, bool parallel = true);

}  // namespace cdl
