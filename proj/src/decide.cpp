#include "cdl/decide.hpp"

#include <deque>
#include <map>
#include <unordered_map>

#include "cdl/kernels.hpp"
#include "cdl/parser.hpp"
#include "json.hpp"

namespace cdl {

using nlohmann::json;

StateSet AtomSpace::hat(Literal l) const {
  StateSet out(size());
  live.for_each([&](std::size_t i) {
    if (closure.holds(atoms[i], l)) out.set(i);
  });
  return out;
}

AtomSpace enumerate_atoms(const Closure& closure, std::size_t max_pairs, std::uint64_t max_atoms) {
  const std::size_t k = closure.pair_count();
  if (k > max_pairs)
    throw BudgetError("closure has " + std::to_string(k) + " pairs, budget is " + std::to_string(max_pairs));

  // Rules become checkable once their highest pair is assigned.
  std::vector<std::vector<std::size_t>> due(k);
  for (std::size_t i = 0; i < k; ++i) {
    const HintikkaRule& r = closure.rules()[i];
    std::size_t last = i;
    if (r.kind == HintikkaRule::Kind::Lit || r.kind == HintikkaRule::Kind::And || r.kind == HintikkaRule::Kind::Or)
      last = std::max(last, r.a.pair);
    if (r.kind == HintikkaRule::Kind::And || r.kind == HintikkaRule::Kind::Or) last = std::max(last, r.b.pair);
    due[last].push_back(i);
  }

  AtomSpace space{closure, {}, {}};
  StateSet cur(k);
  auto assign = [&](auto&& self, std::size_t pos) -> void {
    if (pos == k) {
      if (space.atoms.size() >= max_atoms)
        throw BudgetError("more than " + std::to_string(max_atoms) + " atoms");
      space.atoms.push_back(cur);
      return;
    }
    for (bool v : {false, true}) {
      cur.set(pos, v);
      bool ok = true;
      for (std::size_t r : due[pos])
        if (!closure.rule_holds(cur, r)) {
          ok = false;
          break;
        }
      if (ok) self(self, pos + 1);
    }
    cur.reset(pos);
  };
  assign(assign, 0);
  space.live = StateSet::full(space.atoms.size());
  return space;
}

StateSet star_fixpoint(const std::vector<StateSet>& rows, const StateSet& target) {
  const std::size_t n = rows.size();
  std::vector<std::vector<std::size_t>> preds(n);
  for (std::size_t i = 0; i < n; ++i) rows[i].for_each([&](std::size_t j) { preds[j].push_back(i); });
  StateSet y = target;
  std::deque<std::size_t> work;
  target.for_each([&](std::size_t i) { work.push_back(i); });
  while (!work.empty()) {
    const std::size_t d = work.front();
    work.pop_front();
    for (std::size_t g : preds[d])
      if (!y.test(g)) {
        y.set(g);
        work.push_back(g);
      }
  }
  return y;
}

const char* verdict_name(VerdictKind k) {
  switch (k) {
    case VerdictKind::Sat: return "sat";
    case VerdictKind::Unsat: return "unsat";
    case VerdictKind::UnsatAtomSpace: return "unsat-atom-space";
    case VerdictKind::Valid: return "valid";
    case VerdictKind::NotValid: return "not-valid";
    case VerdictKind::ValidAtomSpace: return "valid-atom-space";
  }
  return "?";
}

int verdict_exit_code(VerdictKind k) {
  switch (k) {
    case VerdictKind::Sat:
    case VerdictKind::Valid: return 0;
    case VerdictKind::Unsat:
    case VerdictKind::NotValid: return 1;
    case VerdictKind::UnsatAtomSpace:
    case VerdictKind::ValidAtomSpace: return 3;
  }
  return 2;
}

std::string Verdict::to_json() const {
  json j;
  j["verdict"] = verdict_name(kind);
  j["config"] = config;
  j["formula"] = to_string(formula);
  j["trusted"] = trusted();
  if (model) {
    j["witness"] = witness;
    j["model"] = json::parse(model_to_json(*model));
  }
  j["stats"] = {{"pairs", stats.pairs},
                {"atoms_generated", stats.atoms_generated},
                {"rounds", stats.rounds},
                {"eliminated", stats.eliminated},
                {"live", stats.live}};
  return j.dump(2);
}

namespace {

// Shared state of both elimination engines.
class Elimination {
 public:
  Elimination(const Formula& phi, const InstanceConfig& config, const DecideOptions& options)
      : phi_(phi),
        config_(config),
        options_(options),
        space_(enumerate_atoms(fl_closure(phi, config.signature()), config.budgets.closure_pairs,
                               config.budgets.atoms)) {
    const Closure& c = space_.closure;
    for (std::size_t p : c.diamond_pairs()) {
      const Formula& d = c.positive(p);
      if (d.action().kind() == ActionKind::Atom)
        atomic_[d.action().name()].push_back({p, c.literal_of(d.body())});
    }
    for (const auto& a : action_names(phi)) atomic_[a];
    for (auto& op : config.natural_operations()) ops_.emplace(op.symbol, op);
    root_ = c.literal_of(phi);
  }

  Verdict run() {
    Verdict v;
    v.config = config_.name;
    v.formula = phi_;
    v.decided = phi_;
    v.stats.pairs = space_.closure.pair_count();
    v.stats.atoms_generated = space_.size();
    const bool pow = config_.monad == MonadKind::Pow;
    while (space_.hat(root_).any()) {
      ++v.stats.rounds;
      const StateSet bad = pow ? pow_round() : generic_round();
      if (bad.none()) break;
      v.stats.eliminated += bad.count();
      space_.live -= bad;
    }
    v.stats.live = space_.live.count();
    const StateSet witnesses = space_.hat(root_);
    if (witnesses.none()) {
      v.kind = pow ? VerdictKind::Unsat : VerdictKind::UnsatAtomSpace;
      return v;
    }
    v.kind = VerdictKind::Sat;
    const std::size_t w = position(witnesses.find_first());
    v.model = build_model();
    v.witness = v.model->states[w];
    space_.live.for_each([&](std::size_t i) { v.atoms.push_back(space_.atoms[i]); });
    verify(*v.model, w);
    return v;
  }

 private:
  using Rows = std::vector<StateSet>;
  struct Demand {
    std::size_t pair;
    Literal body;
  };

  std::size_t position(std::size_t atom) const {
    std::size_t pos = 0;
    space_.live.for_each([&](std::size_t i) { pos += i < atom; });
    return pos;
  }

  // Restricts a set over all atoms to the live carrier.
  StateSet to_live(const StateSet& s, const std::vector<std::size_t>& live) const {
    StateSet out(live.size());
    for (std::size_t j = 0; j < live.size(); ++j)
      if (s.test(live[j])) out.set(j);
    return out;
  }

  // Maximal relation for atomic a: Gamma R Delta unless some <a>psi is
  // missing from Gamma while psi is in Delta.
  Rows atomic_relation(const std::string& a) const {
    const auto& demands = atomic_.at(a);
    std::vector<StateSet> blocked;
    for (const auto& d : demands) blocked.push_back(space_.hat(d.body));
    Rows rows(space_.size(), StateSet(space_.size()));
    space_.live.for_each([&](std::size_t i) {
      StateSet row = space_.live;
      for (std::size_t k = 0; k < demands.size(); ++k)
        if (!space_.atoms[i].test(demands[k].pair)) row -= blocked[k];
      rows[i] = std::move(row);
    });
    return rows;
  }

  const Rows& relation(const Action& alpha) {
    auto it = relations_.find(alpha);
    if (it != relations_.end()) return it->second;
    const std::size_t n = space_.size();
    Rows rows;
    switch (alpha.kind()) {
      case ActionKind::Atom:
        rows = atomic_relation(alpha.name());
        break;
      case ActionKind::Seq: {
        const Rows first = relation(alpha.arg(0));
        const Rows& second = relation(alpha.arg(1));
        rows = options_.parallel ? compose_parallel(first, second) : compose_serial(first, second);
        break;
      }
      case ActionKind::Op: {
        const NaturalOperation& op = ops_.at(alpha.name());
        std::vector<Rows> args;
        for (const auto& a : alpha.args()) args.push_back(relation(a));
        rows.assign(n, StateSet(n));
        std::vector<TValue> at(args.size());
        space_.live.for_each([&](std::size_t i) {
          for (std::size_t k = 0; k < args.size(); ++k) at[k] = TValue::pow(args[k][i]);
          rows[i] = op.sigma(n, at).set() & space_.live;
        });
        break;
      }
      case ActionKind::Star: {
        Rows base = relation(alpha.arg(0));
        rows = options_.parallel ? rt_closure_parallel(std::move(base)) : rt_closure_serial(std::move(base));
        for (std::size_t i = 0; i < n; ++i) rows[i] = space_.live.test(i) ? rows[i] & space_.live : StateSet(n);
        break;
      }
      case ActionKind::Test: {
        const StateSet truth = space_.hat(alpha.test());
        rows.assign(n, StateSet(n));
        truth.for_each([&](std::size_t i) { rows[i].set(i); });
        break;
      }
    }
    return relations_.emplace(alpha, std::move(rows)).first->second;
  }

  // Atoms whose membership of some closure diamond disagrees with the
  // derived relations.
  StateSet pow_round() {
    relations_.clear();
    const Closure& c = space_.closure;
    const std::size_t n = space_.size();
    std::vector<StateSet> fulfilled;
    for (std::size_t p : c.diamond_pairs()) {
      const Formula& d = c.positive(p);
      const StateSet target = space_.hat(d.body());
      if (d.action().kind() == ActionKind::Star)
        fulfilled.push_back(star_fixpoint(relation(d.action().arg(0)), target) & space_.live);
      else
        fulfilled.push_back(options_.parallel ? preimage_parallel(relation(d.action()), target)
                                              : preimage_serial(relation(d.action()), target));
    }
    const std::vector<std::size_t> live = space_.live_indices();
    std::vector<char> bad(live.size(), 0);
    const auto& pairs = c.diamond_pairs();
#pragma omp parallel for schedule(static) if (options_.parallel && live.size() > 256)
    for (std::size_t j = 0; j < live.size(); ++j)
      for (std::size_t k = 0; k < pairs.size(); ++k)
        if (space_.atoms[live[j]].test(pairs[k]) != fulfilled[k].test(live[j])) {
          bad[j] = 1;
          break;
        }
    StateSet out(n);
    for (std::size_t j = 0; j < live.size(); ++j)
      if (bad[j]) out.set(live[j]);
    return out;
  }

  // The structure read off the live atoms: the upset of the hats of an
  // atom's a-diamond bodies, or the filter of its maximal-relation successors.
  TValue atomic_structure(const std::string& a, std::size_t atom, const std::vector<std::size_t>& live,
                          const Rows* filter_rows) const {
    const std::size_t n = live.size();
    if (config_.monad == MonadKind::Filter) return TValue::filter(to_live((*filter_rows)[atom], live));
    Family gens;
    for (const auto& d : atomic_.at(a))
      if (space_.atoms[atom].test(d.pair)) gens.push_back(to_live(space_.hat(d.body), live));
    if (config_.monad == MonadKind::Nbhd) return TValue::nbhd(std::move(gens), n);
    return TValue::mon_nbhd(std::move(gens), n);
  }

  DynamicModel build_model() {
    const std::vector<std::size_t> live = space_.live_indices();
    const std::size_t n = live.size();
    DynamicModel m;
    m.config = config_;
    for (std::size_t j = 0; j < n; ++j) m.states.push_back("g" + std::to_string(j));
    for (const auto& p : prop_names(phi_)) m.valuation[p] = to_live(space_.hat(prop(p)), live);
    const MonadInstance inst = config_.instance();
    for (const auto& [a, demands] : atomic_) {
      KleisliArrow f = bottom_arrow(inst, n);
      if (config_.monad == MonadKind::Pow) {
        const Rows rows = atomic_relation(a);
        for (std::size_t j = 0; j < n; ++j) f.table[j] = TValue::pow(to_live(rows[live[j]], live));
      } else {
        const Rows rows = config_.monad == MonadKind::Filter ? atomic_relation(a) : Rows{};
        for (std::size_t j = 0; j < n; ++j) f.table[j] = atomic_structure(a, live[j], live, &rows);
      }
      m.actions[a] = std::move(f);
    }
    m.generators = config_.monad == MonadKind::MonNbhd;
    return m;
  }

  StateSet generic_round() {
    const Closure& c = space_.closure;
    const std::vector<std::size_t> live = space_.live_indices();
    const DynamicModel m = build_model();
    Evaluator ev(m);
    for (std::size_t p = 0; p < c.pair_count(); ++p) ev.assume(c.positive(p), to_live(space_.hat(Literal{p, true}), live));
    std::vector<char> bad(live.size(), 0);
    for (std::size_t p : c.diamond_pairs()) {
      const Formula& d = c.positive(p);
      const KleisliArrow f = ev.eval(d.action());
      const StateSet target = to_live(space_.hat(d.body()), live);
      const Lifting& lifting = ev.lifting();
#pragma omp parallel for schedule(static) if (options_.parallel && live.size() > 64)
      for (std::size_t j = 0; j < live.size(); ++j)
        if (lifting.contains(f(j), target) != space_.atoms[live[j]].test(p)) bad[j] = 1;
    }
    StateSet out(space_.size());
    for (std::size_t j = 0; j < live.size(); ++j)
      if (bad[j]) out.set(live[j]);
    return out;
  }

  void verify(const DynamicModel& m, std::size_t witness) const {
    std::vector<StateSet> atoms;
    space_.live.for_each([&](std::size_t i) { atoms.push_back(space_.atoms[i]); });
    const CoherenceReport r = check_coherence(m, space_.closure, atoms);
    if (!r.ok()) throw VerificationError("emitted model is not coherent: " + r.violations.front());
    if (!eval_formula(m, phi_).test(witness))
      throw VerificationError("emitted model does not satisfy " + to_string(phi_) + " at " + m.states[witness]);
  }

  Formula phi_;
  const InstanceConfig& config_;
  DecideOptions options_;
  AtomSpace space_;
  Literal root_;
  std::map<std::string, std::vector<Demand>> atomic_;
  std::map<std::string, NaturalOperation> ops_;
  std::unordered_map<Action, Rows, ActionHash> relations_;
};

}  // namespace

Verdict decide_sat(const Formula& phi, const InstanceConfig& config, const DecideOptions& options) {
  return Elimination(phi, config, options).run();
}

Verdict decide_valid(const Formula& phi, const InstanceConfig& config, const DecideOptions& options) {
  Verdict v = decide_sat(neg(phi), config, options);
  v.formula = phi;
  switch (v.kind) {
    case VerdictKind::Sat: v.kind = VerdictKind::NotValid; break;
    case VerdictKind::Unsat: v.kind = VerdictKind::Valid; break;
    case VerdictKind::UnsatAtomSpace: v.kind = VerdictKind::ValidAtomSpace; break;
    default: break;
  }
  return v;
}

}  // namespace cdl
