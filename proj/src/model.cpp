#include "cdl/model.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "cdl/kernels.hpp"
#include "cdl/parser.hpp"
#include "json.hpp"

namespace cdl {

using nlohmann::json;

std::size_t DynamicModel::state_index(const std::string& name) const {
  for (std::size_t i = 0; i < states.size(); ++i)
    if (states[i] == name) return i;
  throw ModelError("unknown state '" + name + "'");
}

Evaluator::Evaluator(const DynamicModel& model)
    : model_(model), monad_(model.config.instance()), lifting_(model.config.make_lifting()) {
  for (auto& op : model.config.natural_operations()) ops_.emplace(op.symbol, op);
}

void Evaluator::assume(const Formula& phi, StateSet truth) { formulas_[phi] = std::move(truth); }

StateSet Evaluator::eval(const Formula& phi) {
  auto it = formulas_.find(phi);
  if (it != formulas_.end()) return it->second;
  StateSet out = eval_uncached(phi);
  formulas_.emplace(phi, out);
  return out;
}

KleisliArrow Evaluator::eval(const Action& alpha) {
  auto it = actions_.find(alpha);
  if (it != actions_.end()) return it->second;
  KleisliArrow out = eval_uncached(alpha);
  actions_.emplace(alpha, out);
  return out;
}

StateSet Evaluator::eval_uncached(const Formula& phi) {
  const std::size_t n = model_.size();
  switch (phi.kind()) {
    case FormulaKind::Prop: {
      auto it = model_.valuation.find(phi.name());
      return it == model_.valuation.end() ? StateSet(n) : it->second;
    }
    case FormulaKind::Top:
      return StateSet::full(n);
    case FormulaKind::Neg:
      return eval(phi.sub()).complement();
    case FormulaKind::And:
      return eval(phi.left()) & eval(phi.right());
    case FormulaKind::Dia: {
      const KleisliArrow f = eval(phi.action());
      const StateSet u = eval(phi.body());
      StateSet out(n);
      for (std::size_t x = 0; x < n; ++x)
        if (lifting_.contains(f(x), u)) out.set(x);
      return out;
    }
  }
  throw std::logic_error("eval: bad formula");
}

KleisliArrow Evaluator::eval_uncached(const Action& alpha) {
  const std::size_t n = model_.size();
  switch (alpha.kind()) {
    case ActionKind::Atom: {
      auto it = model_.actions.find(alpha.name());
      if (it == model_.actions.end()) throw ModelError("unbound atomic action '" + alpha.name() + "'");
      return it->second;
    }
    case ActionKind::Seq:
      return kleisli_compose(monad_, eval(alpha.arg(0)), eval(alpha.arg(1)));
    case ActionKind::Op: {
      auto it = ops_.find(alpha.name());
      if (it == ops_.end())
        throw ModelError("operation '" + alpha.name() + "' is not in config '" + model_.config.name + "'");
      std::vector<KleisliArrow> args;
      for (const auto& a : alpha.args()) args.push_back(eval(a));
      KleisliArrow out{n, {}};
      std::vector<TValue> at(args.size());
      for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t i = 0; i < args.size(); ++i) at[i] = args[i](x);
        out.table.push_back(it->second.sigma(n, at));
      }
      return out;
    }
    case ActionKind::Star: {
      const KleisliArrow f = eval(alpha.arg(0));
      if (monad_.kind != MonadKind::Pow) return kleisli_star(monad_, f);
      // Powerset fast path: the star is the reflexive-transitive closure.
      std::vector<StateSet> rows;
      for (const auto& t : f.table) rows.push_back(t.set());
      rows = rt_closure_parallel(std::move(rows));
      KleisliArrow out{n, {}};
      for (auto& r : rows) out.table.push_back(TValue::pow(std::move(r)));
      return out;
    }
    case ActionKind::Test: {
      const StateSet truth = eval(alpha.test());
      KleisliArrow out{n, {}};
      const TValue bot = monad_.bottom(n);
      for (std::size_t x = 0; x < n; ++x) out.table.push_back(truth.test(x) ? monad_.unit(n, x) : bot);
      return out;
    }
  }
  throw std::logic_error("eval: bad action");
}

StateSet eval_formula(const DynamicModel& model, const Formula& phi) { return Evaluator(model).eval(phi); }

KleisliArrow eval_action(const DynamicModel& model, const Action& alpha) { return Evaluator(model).eval(alpha); }

bool check_axiom_validity(const DynamicModel& model, const Formula& phi) { return eval_formula(model, phi).all(); }

bool check_star_rule_preservation(const DynamicModel& model, const Action& alpha, const Formula& phi,
                                  const Formula& psi) {
  Evaluator ev(model);
  const bool premise = ev.eval(implies(disj(dia(alpha, psi), phi), psi)).all();
  if (!premise) return true;
  return ev.eval(implies(dia(star(alpha), phi), psi)).all();
}

CoherenceReport check_coherence(const DynamicModel& model, const Closure& closure,
                                const std::vector<StateSet>& atoms) {
  const std::size_t n = model.size();
  if (atoms.size() != n) throw ModelError("carrier is not an atom space: state and atom counts differ");
  for (const auto& a : atoms)
    if (a.universe() != closure.pair_count() || !closure.is_hintikka(a))
      throw ModelError("carrier is not an atom space: " + a.to_string() + " is not a Hintikka atom");

  auto hat = [&](Literal l) {
    StateSet s(n);
    for (std::size_t i = 0; i < n; ++i)
      if (closure.holds(atoms[i], l)) s.set(i);
    return s;
  };

  CoherenceReport r;
  // Structure condition, with every closure formula read as its hat set.
  Evaluator pinned(model);
  for (std::size_t p = 0; p < closure.pair_count(); ++p) pinned.assume(closure.positive(p), hat({p, true}));
  for (std::size_t p : closure.diamond_pairs()) {
    const Formula& d = closure.positive(p);
    const KleisliArrow f = pinned.eval(d.action());
    const StateSet target = hat(closure.literal_of(d.body()));
    for (std::size_t i = 0; i < n; ++i) {
      ++r.checks;
      const bool in = pinned.lifting().contains(f(i), target);
      if (in != atoms[i].test(p))
        r.violations.push_back("state " + model.states[i] + ": " + to_string(d) + (in ? " forced" : " unfulfilled"));
    }
  }
  // Truth lemma.
  Evaluator plain(model);
  for (std::size_t p = 0; p < closure.pair_count(); ++p) {
    ++r.checks;
    const StateSet truth = plain.eval(closure.positive(p));
    const StateSet expected = hat({p, true});
    if (!(truth == expected))
      r.violations.push_back("truth set of " + to_string(closure.positive(p)) + " is " + truth.to_string() +
                             ", atoms give " + expected.to_string());
  }
  return r;
}

namespace {

StateSet read_states(const DynamicModel& m, const json& j) {
  if (!j.is_array()) throw ModelError("expected a list of state names");
  StateSet s(m.size());
  for (const auto& e : j) s.set(m.state_index(e.get<std::string>()));
  return s;
}

json write_states(const DynamicModel& m, const StateSet& s) {
  json out = json::array();
  s.for_each([&](std::size_t i) { out.push_back(m.states[i]); });
  return out;
}

TValue read_tvalue(const DynamicModel& m, const json& j) {
  const std::size_t n = m.size();
  switch (m.config.monad) {
    case MonadKind::Pow:
      return TValue::pow(read_states(m, j));
    case MonadKind::Filter:
      return TValue::filter(read_states(m, j));
    case MonadKind::MonNbhd:
    case MonadKind::Nbhd: {
      if (!j.is_array()) throw ModelError("expected a list of lists of state names");
      Family fam;
      for (const auto& e : j) fam.push_back(read_states(m, e));
      return m.config.monad == MonadKind::MonNbhd ? TValue::mon_nbhd(std::move(fam), n)
                                                   : TValue::nbhd(std::move(fam), n);
    }
  }
  throw std::logic_error("read_tvalue: bad kind");
}

json write_tvalue(const DynamicModel& m, const TValue& t) {
  if (t.kind() == MonadKind::Pow || t.kind() == MonadKind::Filter) return write_states(m, t.set());
  json out = json::array();
  for (const auto& s : t.family()) out.push_back(write_states(m, s));
  return out;
}

}  // namespace

DynamicModel model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ModelError(std::string("model: ") + e.what());
  }
  if (!j.is_object()) throw ModelError("model must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (key != "config" && key != "states" && key != "valuation" && key != "actions" && key != "generators")
      throw ModelError("unknown model field '" + key + "'");
  if (!j.contains("config") || !j.contains("states")) throw ModelError("model needs 'config' and 'states'");

  DynamicModel m;
  try {
    const json& c = j["config"];
    if (c.is_string()) {
      m.config = load_config(c.get<std::string>());
    } else {
      m.config = config_from_json(c.dump());
      require_valid(m.config);
    }
    std::set<std::string> seen;
    for (const auto& s : j["states"]) {
      const auto name = s.get<std::string>();
      if (!seen.insert(name).second) throw ModelError("duplicate state '" + name + "'");
      m.states.push_back(name);
    }
    if (j.contains("valuation"))
      for (const auto& [p, states] : j["valuation"].items()) m.valuation[p] = read_states(m, states);
    if (j.contains("actions")) {
      const MonadInstance inst = m.config.instance();
      for (const auto& [a, table] : j["actions"].items()) {
        if (!table.is_object()) throw ModelError("action '" + a + "' must map state names to values");
        KleisliArrow f = bottom_arrow(inst, m.size());
        for (const auto& [x, value] : table.items()) f.table[m.state_index(x)] = read_tvalue(m, value);
        m.actions[a] = std::move(f);
      }
    }
    m.generators = m.config.monad == MonadKind::MonNbhd;
    if (j.contains("generators") && !j["generators"].get<bool>() && m.generators)
      throw ModelError("MonNbhd model files list generators; 'generators' cannot be false");
  } catch (const json::exception& e) {
    throw ModelError(std::string("model: ") + e.what());
  }
  return m;
}

DynamicModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open model file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

std::string model_to_json(const DynamicModel& m) {
  json j;
  const auto& names = shipped_config_names();
  if (std::find(names.begin(), names.end(), m.config.name) != names.end() &&
      config_to_json(m.config) == config_to_json(shipped_config(m.config.name)))
    j["config"] = m.config.name;
  else
    j["config"] = json::parse(config_to_json(m.config));
  j["states"] = m.states;
  j["valuation"] = json::object();
  for (const auto& [p, s] : m.valuation) j["valuation"][p] = write_states(m, s);
  j["actions"] = json::object();
  for (const auto& [a, f] : m.actions) {
    json table = json::object();
    for (std::size_t x = 0; x < f.domain(); ++x) table[m.states[x]] = write_tvalue(m, f(x));
    j["actions"][a] = table;
  }
  if (m.config.monad == MonadKind::MonNbhd) j["generators"] = true;
  return j.dump(2);
}

DynamicModel random_model(const InstanceConfig& config, std::size_t states, const std::vector<std::string>& props,
                          const std::vector<std::string>& actions, std::mt19937_64& rng) {
  DynamicModel m;
  m.config = config;
  for (std::size_t i = 0; i < states; ++i) m.states.push_back("s" + std::to_string(i));
  for (const auto& p : props) {
    StateSet s(states);
    for (std::size_t i = 0; i < states; ++i)
      if (rng() & 1) s.set(i);
    m.valuation[p] = s;
  }
  for (const auto& a : actions) m.actions[a] = random_arrow(config.monad, states, rng);
  m.generators = config.monad == MonadKind::MonNbhd;
  return m;
}

}  // namespace cdl
