#include "cdl/config.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

#include "json.hpp"

namespace cdl {

using nlohmann::json;

namespace {

Polarity parse_polarity(const std::string& s) {
  if (s == "diamond") return Polarity::Diamond;
  if (s == "box") return Polarity::Box;
  if (s == "neither") return Polarity::Neither;
  throw ConfigError("unknown polarity '" + s + "'");
}

const char* base_logic_name(BaseLogic b) { return b == BaseLogic::K ? "K" : "M"; }

BaseLogic parse_base_logic(const std::string& s) {
  if (s == "K") return BaseLogic::K;
  if (s == "M") return BaseLogic::M;
  throw ConfigError("unknown base logic '" + s + "'");
}

json budgets_to_json(const Budgets& b) {
  return {{"law_carrier", b.law_carrier},     {"law_samples", b.law_samples},
          {"exhaustive_limit", b.exhaustive_limit}, {"square_limit", b.square_limit},
          {"closure_pairs", b.closure_pairs}, {"atoms", b.atoms},
          {"random_models", b.random_models}, {"model_states", b.model_states}};
}

void read_budgets(Budgets& b, const json& j) {
  if (!j.is_object()) throw ConfigError("budgets must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!value.is_number_unsigned()) throw ConfigError("budget '" + key + "' must be a non-negative integer");
    const auto v = value.get<std::uint64_t>();
    if (key == "law_carrier") b.law_carrier = v;
    else if (key == "law_samples") b.law_samples = v;
    else if (key == "exhaustive_limit") b.exhaustive_limit = v;
    else if (key == "square_limit") b.square_limit = v;
    else if (key == "closure_pairs") b.closure_pairs = v;
    else if (key == "atoms") b.atoms = v;
    else if (key == "random_models") b.random_models = v;
    else if (key == "model_states") b.model_states = v;
    else throw ConfigError("unknown budget '" + key + "'");
  }
}

json parse_json(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

MonadInstance InstanceConfig::instance() const {
  switch (monad) {
    case MonadKind::Pow:
      if (join == "union") return pow_monad();
      break;
    case MonadKind::Filter:
      if (join == "upset") return filter_monad();
      break;
    case MonadKind::MonNbhd:
      if (join == "union") return mon_nbhd_monad(JoinKind::Union);
      if (join == "intersection") return mon_nbhd_monad(JoinKind::Intersection);
      break;
    case MonadKind::Nbhd:
      if (join == "union") return nbhd_monad();
      break;
  }
  throw ConfigError("join '" + join + "' is not available for " + monad_kind_name(monad));
}

Lifting InstanceConfig::make_lifting() const {
  if (lifting == "kripke-diamond") return kripke_diamond();
  if (lifting == "kripke-box") return kripke_box();
  if (lifting == "nonempty-subset") return nonempty_subset();
  if (lifting == "neighbourhood") return neighbourhood_modality();
  if (lifting == "filter-diamond") return filter_diamond();
  if (lifting == "constant-empty") return constant_empty();
  throw ConfigError("unknown lifting '" + lifting + "'");
}

std::vector<NaturalOperation> InstanceConfig::natural_operations() const {
  std::vector<NaturalOperation> out;
  for (const auto& s : operations) {
    try {
      out.push_back(natural_operation(s, monad));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  return out;
}

Signature InstanceConfig::signature() const {
  Signature sig;
  for (const auto& op : natural_operations()) sig.add(op.entry());
  return sig;
}

LawBudget InstanceConfig::law_budget() const {
  LawBudget b;
  b.samples = budgets.law_samples;
  b.exhaustive_limit = budgets.exhaustive_limit;
  b.square_limit = budgets.square_limit;
  b.seed = seed;
  return b;
}

const std::vector<std::string>& shipped_config_names() {
  static const std::vector<std::string> names = {"pdl", "gl", "gl-cap", "fpdl"};
  return names;
}

InstanceConfig shipped_config(const std::string& name) {
  InstanceConfig c;
  c.name = name;
  if (name == "pdl") {
    c.operations = {"+"};
  } else if (name == "gl" || name == "gl-cap") {
    c.monad = MonadKind::MonNbhd;
    c.lifting = "neighbourhood";
    c.base_logic = BaseLogic::M;
    c.operations = name == "gl" ? std::vector<std::string>{"+"} : std::vector<std::string>{"+", "^"};
  } else if (name == "fpdl") {
    c.monad = MonadKind::Filter;
    c.join = "upset";
    c.lifting = "filter-diamond";
    c.experimental = true;
  } else {
    throw ConfigError("unknown config '" + name + "'");
  }
  return c;
}

InstanceConfig config_from_json(const std::string& text) {
  const json j = parse_json(text, "config");
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  InstanceConfig c;
  bool have_name = false, have_monad = false;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "name") {
        c.name = value.get<std::string>();
        have_name = true;
      } else if (key == "monad") {
        const auto kind = parse_monad_kind(value.get<std::string>());
        if (!kind) throw ConfigError("unknown monad '" + value.get<std::string>() + "'");
        c.monad = *kind;
        have_monad = true;
      } else if (key == "join") {
        c.join = value.get<std::string>();
      } else if (key == "lifting") {
        c.lifting = value.get<std::string>();
      } else if (key == "polarity") {
        c.polarity = parse_polarity(value.get<std::string>());
      } else if (key == "operations") {
        c.operations = value.get<std::vector<std::string>>();
      } else if (key == "base_logic") {
        c.base_logic = parse_base_logic(value.get<std::string>());
      } else if (key == "experimental") {
        c.experimental = value.get<bool>();
      } else if (key == "seed") {
        c.seed = value.get<std::uint64_t>();
      } else if (key == "budgets") {
        read_budgets(c.budgets, value);
      } else {
        throw ConfigError("unknown config field '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!have_name || !have_monad) throw ConfigError("config needs 'name' and 'monad'");
  return c;
}

std::string config_to_json(const InstanceConfig& c) {
  const json j = {{"name", c.name},
                  {"monad", monad_kind_name(c.monad)},
                  {"join", c.join},
                  {"lifting", c.lifting},
                  {"polarity", polarity_name(c.polarity)},
                  {"operations", c.operations},
                  {"base_logic", base_logic_name(c.base_logic)},
                  {"experimental", c.experimental},
                  {"seed", c.seed},
                  {"budgets", budgets_to_json(c.budgets)}};
  return j.dump(2);
}

void apply_budget_json(InstanceConfig& c, const std::string& text) {
  const json j = parse_json(text, "budget");
  read_budgets(c.budgets, j);
}

InstanceConfig load_config(const std::string& name_or_path) {
  const auto& names = shipped_config_names();
  InstanceConfig c = std::find(names.begin(), names.end(), name_or_path) != names.end()
                         ? shipped_config(name_or_path)
                         : config_from_json(read_file(name_or_path));
  require_valid(c);
  return c;
}

ValidationReport validate_config(const InstanceConfig& c) {
  ValidationReport out;
  auto fail = [&](std::string why) {
    out.ok = false;
    out.problems.push_back(std::move(why));
  };
  if (c.polarity != Polarity::Diamond)
    fail("only diamond-like configs are supported; the test axiom is stated for the diamond");

  MonadInstance m;
  Lifting l;
  std::vector<NaturalOperation> ops;
  try {
    m = c.instance();
    l = c.make_lifting();
    ops = c.natural_operations();
    c.signature();
  } catch (const std::exception& e) {
    fail(e.what());
    return out;
  }

  LawBudget b;
  b.samples = 500;
  b.square_limit = 1 << 12;
  b.seed = c.seed;
  b.parallel = false;
  auto record = [&](LawReport r) {
    if (!r.ok()) {
      std::string why = r.suite + " failed for " + r.instance + " on " + std::to_string(r.carrier) + " states";
      if (!r.violations.empty()) why += ": " + r.violations.front();
      fail(why);
    }
    out.reports.push_back(std::move(r));
  };

  const std::size_t top = (c.monad == MonadKind::Pow || c.monad == MonadKind::Filter) ? 3 : 2;
  try {
    for (std::size_t n = 1; n <= top; ++n) {
      const PolarityReport p = classify_polarity(l, m, n, b);
      if (p.result != c.polarity)
        fail(std::string("lifting '") + c.lifting + "' is " + polarity_name(p.result) + " on " + std::to_string(n) +
             " states, config declares " + polarity_name(c.polarity));
      record(check_bottom_polarity(l, c.polarity, m, n));
      record(check_lifting_monotone(l, m, n, b));
      record(check_lifting_natural(l, m, n, b));
      record(check_transpose_monad_morphism(l, m, n, b));
      for (const auto& op : ops) record(check_sigma_chi_compat(op, l, m, n, b));
    }
  } catch (const std::exception& e) {
    fail(e.what());
  }
  return out;
}

void require_valid(const InstanceConfig& c) {
  static std::mutex mu;
  static std::map<std::string, std::string> cache;  // config json -> problems ("" when valid)
  const std::string key = config_to_json(c);
  std::string problems;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) {
      problems = it->second;
    } else {
      const ValidationReport r = validate_config(c);
      for (const auto& p : r.problems) problems += "\n  " + p;
      cache.emplace(key, problems);
    }
  }
  if (!problems.empty()) throw ConfigError("config '" + c.name + "' rejected:" + problems);
}

std::vector<LawReport> run_law_suite(const InstanceConfig& c, bool parallel) {
  const MonadInstance m = c.instance();
  const Lifting l = c.make_lifting();
  const std::vector<NaturalOperation> ops = c.natural_operations();
  LawBudget b = c.law_budget();
  b.parallel = parallel;
  std::vector<LawReport> out;
  for (std::size_t n = 1; n <= c.budgets.law_carrier; ++n) {
    out.push_back(check_monad_laws(m, n, b));
    out.push_back(check_join_laws(m, n, b));
    out.push_back(check_left_quantalic(m, n, b));
    out.push_back(check_extension_preserves_joins(m, n, b));
    out.push_back(check_star_unfolding(m, n, b));
    if (m.join_origin) out.push_back(check_join_origin(m, n, b));

    const PolarityReport p = classify_polarity(l, m, n, b);
    LawReport pol;
    pol.suite = "polarity";
    pol.instance = p.diamond.instance;
    pol.carrier = n;
    pol.exhaustive = p.diamond.exhaustive && p.box.exhaustive;
    pol.checks = p.diamond.checks + p.box.checks;
    if (p.result != c.polarity) {
      pol.violation_count = 1;
      pol.violations.push_back(std::string("classified ") + polarity_name(p.result) + ", declared " +
                               polarity_name(c.polarity));
    }
    out.push_back(std::move(pol));
    out.push_back(check_bottom_polarity(l, c.polarity, m, n));
    out.push_back(check_lifting_monotone(l, m, n, b));
    out.push_back(check_lifting_natural(l, m, n, b));
    out.push_back(check_transpose_monad_morphism(l, m, n, b));
    out.push_back(check_composition_lemma(l, m, n, b));
    for (const auto& op : ops) {
      out.push_back(check_sigma_chi_compat(op, l, m, n, b));
      out.push_back(check_sigma_natural(op, m, n, b));
    }
  }
  return out;
}

}  // namespace cdl
