#include "cdl/closure.hpp"

#include <deque>
#include <stdexcept>

#include "cdl/parser.hpp"

namespace cdl {

std::vector<Formula> Closure::formulas() const {
  std::vector<Formula> out;
  out.reserve(size());
  for (const auto& p : positives_) {
    out.push_back(p);
    out.push_back(neg(p));
  }
  return out;
}

std::optional<Literal> Closure::literal(const Formula& f) const {
  const bool negated = f.is_neg();
  auto it = index_.find(negated ? f.sub() : f);
  if (it == index_.end()) return std::nullopt;
  return Literal{it->second, !negated};
}

Literal Closure::literal_of(const Formula& f) const {
  auto l = literal(f);
  if (!l) throw std::out_of_range("formula not in closure: " + to_string(f));
  return *l;
}

Formula Closure::formula(Literal l) const {
  return l.positive ? positives_[l.pair] : neg(positives_[l.pair]);
}

bool Closure::rule_holds(const StateSet& atom, std::size_t pair) const {
  const HintikkaRule& r = rules_[pair];
  const bool lhs = atom.test(pair);
  switch (r.kind) {
    case HintikkaRule::Kind::Free:
      return true;
    case HintikkaRule::Kind::True:
      return lhs;
    case HintikkaRule::Kind::Lit:
      return lhs == holds(atom, r.a);
    case HintikkaRule::Kind::And:
      return lhs == (holds(atom, r.a) && holds(atom, r.b));
    case HintikkaRule::Kind::Or:
      return lhs == (holds(atom, r.a) || holds(atom, r.b));
  }
  return false;
}

bool Closure::is_hintikka(const StateSet& atom) const {
  if (atom.universe() != pair_count()) return false;
  for (std::size_t i = 0; i < pair_count(); ++i)
    if (!rule_holds(atom, i)) return false;
  return true;
}

namespace {

// Formulas a positive closure member forces into the closure.
std::vector<Formula> consequences(const Formula& p, const Signature& sig) {
  switch (p.kind()) {
    case FormulaKind::Prop:
    case FormulaKind::Top:
    case FormulaKind::Neg:
      return {};
    case FormulaKind::And:
      return {p.left(), p.right()};
    case FormulaKind::Dia:
      break;
  }
  const Action& alpha = p.action();
  const Formula& psi = p.body();
  switch (alpha.kind()) {
    case ActionKind::Atom:
      return {psi};
    case ActionKind::Seq:
      return {psi, dia(alpha.arg(0), dia(alpha.arg(1), psi))};
    case ActionKind::Op: {
      const SignatureEntry* e = sig.find(alpha.name());
      if (!e) throw std::invalid_argument("unknown pointwise symbol '" + alpha.name() + "'");
      return {psi, pw_axiom_body(*e, alpha.args(), psi)};
    }
    case ActionKind::Star:
      return {psi, dia(alpha.arg(0), p), dia(alpha.arg(0), psi)};
    case ActionKind::Test:
      return {psi, conj(alpha.test(), psi)};
  }
  return {};
}

}  // namespace

Closure fl_closure(const Formula& phi, const Signature& sig) {
  Closure c;
  c.root_ = phi;
  std::deque<Formula> work{phi};
  while (!work.empty()) {
    Formula f = work.front();
    work.pop_front();
    if (f.is_neg()) f = f.sub();
    if (c.index_.count(f)) continue;
    c.index_.emplace(f, c.positives_.size());
    c.positives_.push_back(f);
    for (auto& g : consequences(f, sig)) work.push_back(std::move(g));
  }

  c.rules_.resize(c.positives_.size());
  for (std::size_t i = 0; i < c.positives_.size(); ++i) {
    const Formula& p = c.positives_[i];
    HintikkaRule& r = c.rules_[i];
    switch (p.kind()) {
      case FormulaKind::Prop:
      case FormulaKind::Neg:
        break;
      case FormulaKind::Top:
        r.kind = HintikkaRule::Kind::True;
        break;
      case FormulaKind::And:
        r.kind = HintikkaRule::Kind::And;
        r.a = c.literal_of(p.left());
        r.b = c.literal_of(p.right());
        break;
      case FormulaKind::Dia: {
        c.diamonds_.push_back(i);
        const Action& alpha = p.action();
        const Formula& psi = p.body();
        switch (alpha.kind()) {
          case ActionKind::Atom:
            break;
          case ActionKind::Seq:
            r.kind = HintikkaRule::Kind::Lit;
            r.a = c.literal_of(dia(alpha.arg(0), dia(alpha.arg(1), psi)));
            break;
          case ActionKind::Op:
            r.kind = HintikkaRule::Kind::Lit;
            r.a = c.literal_of(pw_axiom_body(*sig.find(alpha.name()), alpha.args(), psi));
            break;
          case ActionKind::Star:
            r.kind = HintikkaRule::Kind::Or;
            r.a = c.literal_of(psi);
            r.b = c.literal_of(dia(alpha.arg(0), p));
            break;
          case ActionKind::Test:
            r.kind = HintikkaRule::Kind::Lit;
            r.a = c.literal_of(conj(alpha.test(), psi));
            break;
        }
        break;
      }
    }
  }
  return c;
}

Formula characteristic_formula(const Closure& closure, const std::vector<StateSet>& atoms) {
  std::vector<Formula> disjuncts;
  for (const auto& atom : atoms) {
    std::vector<Formula> lits;
    for (std::size_t i = 0; i < closure.pair_count(); ++i)
      lits.push_back(closure.formula(Literal{i, atom.test(i)}));
    disjuncts.push_back(conj_all(lits));
  }
  return disj_all(disjuncts);
}

}  // namespace cdl
