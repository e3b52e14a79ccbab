#include "cdl/formula.hpp"

#include <functional>
#include <set>
#include <stdexcept>

namespace cdl {

struct FormulaNode {
  FormulaKind kind = FormulaKind::Top;
  std::string name;
  Formula a, b;
  Action act;
  std::size_t hash = 0;
  std::size_t size = 1;
};

struct ActionNode {
  ActionKind kind = ActionKind::Atom;
  std::string name;
  std::vector<Action> args;
  Formula test;
  std::size_t hash = 0;
  std::size_t size = 1;
};

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

}  // namespace

struct FormulaFactory {
  static Formula make(FormulaNode n) {
    n.hash = mix(0x51ed27 + static_cast<std::size_t>(n.kind), std::hash<std::string>{}(n.name));
    if (n.a.valid()) {
      n.hash = mix(n.hash, n.a.hash());
      n.size += n.a.size();
    }
    if (n.b.valid()) {
      n.hash = mix(n.hash, n.b.hash());
      n.size += n.b.size();
    }
    if (n.act.valid()) {
      n.hash = mix(n.hash, n.act.hash());
      n.size += n.act.size();
    }
    return Formula(std::make_shared<const FormulaNode>(std::move(n)));
  }

  static Action make(ActionNode n) {
    n.hash = mix(0xac7100 + static_cast<std::size_t>(n.kind), std::hash<std::string>{}(n.name));
    for (const auto& x : n.args) {
      n.hash = mix(n.hash, x.hash());
      n.size += x.size();
    }
    if (n.test.valid()) {
      n.hash = mix(n.hash, n.test.hash());
      n.size += n.test.size();
    }
    return Action(std::make_shared<const ActionNode>(std::move(n)));
  }
};

FormulaKind Formula::kind() const { return node_->kind; }
const std::string& Formula::name() const { return node_->name; }
const Formula& Formula::sub() const { return node_->a; }
const Formula& Formula::left() const { return node_->a; }
const Formula& Formula::right() const { return node_->b; }
const Action& Formula::action() const { return node_->act; }
const Formula& Formula::body() const { return node_->a; }
std::size_t Formula::hash() const { return node_ ? node_->hash : 0; }
std::size_t Formula::size() const { return node_ ? node_->size : 0; }

ActionKind Action::kind() const { return node_->kind; }
const std::string& Action::name() const { return node_->name; }
const std::vector<Action>& Action::args() const { return node_->args; }
const Formula& Action::test() const { return node_->test; }
std::size_t Action::hash() const { return node_ ? node_->hash : 0; }
std::size_t Action::size() const { return node_ ? node_->size : 0; }

int compare(const Formula& x, const Formula& y) {
  const FormulaNode* a = x.node();
  const FormulaNode* b = y.node();
  if (a == b) return 0;
  if (!a || !b) return a ? 1 : -1;
  if (a->hash != b->hash) return a->hash < b->hash ? -1 : 1;
  if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
  if (int c = a->name.compare(b->name)) return c < 0 ? -1 : 1;
  if (int c = compare(a->a, b->a)) return c;
  if (int c = compare(a->b, b->b)) return c;
  return compare(a->act, b->act);
}

int compare(const Action& x, const Action& y) {
  const ActionNode* a = x.node();
  const ActionNode* b = y.node();
  if (a == b) return 0;
  if (!a || !b) return a ? 1 : -1;
  if (a->hash != b->hash) return a->hash < b->hash ? -1 : 1;
  if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
  if (int c = a->name.compare(b->name)) return c < 0 ? -1 : 1;
  if (a->args.size() != b->args.size()) return a->args.size() < b->args.size() ? -1 : 1;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (int c = compare(a->args[i], b->args[i])) return c;
  return compare(a->test, b->test);
}

bool operator==(const Formula& a, const Formula& b) {
  return a.node_ == b.node_ || (a.hash() == b.hash() && compare(a, b) == 0);
}
bool operator<(const Formula& a, const Formula& b) { return compare(a, b) < 0; }
bool operator==(const Action& a, const Action& b) {
  return a.node_ == b.node_ || (a.hash() == b.hash() && compare(a, b) == 0);
}
bool operator<(const Action& a, const Action& b) { return compare(a, b) < 0; }

Formula prop(const std::string& name) {
  FormulaNode n;
  n.kind = FormulaKind::Prop;
  n.name = name;
  return FormulaFactory::make(std::move(n));
}

Formula top() {
  static const Formula t = [] {
    FormulaNode n;
    n.kind = FormulaKind::Top;
    return FormulaFactory::make(std::move(n));
  }();
  return t;
}

Formula bot() { return neg(top()); }

Formula neg(const Formula& f) {
  if (f.kind() == FormulaKind::Neg) return f.sub();
  FormulaNode n;
  n.kind = FormulaKind::Neg;
  n.a = f;
  return FormulaFactory::make(std::move(n));
}

Formula conj(const Formula& a, const Formula& b) {
  FormulaNode n;
  n.kind = FormulaKind::And;
  n.a = a;
  n.b = b;
  return FormulaFactory::make(std::move(n));
}

Formula disj(const Formula& a, const Formula& b) { return neg(conj(neg(a), neg(b))); }
Formula implies(const Formula& a, const Formula& b) { return neg(conj(a, neg(b))); }
Formula iff(const Formula& a, const Formula& b) { return conj(implies(a, b), implies(b, a)); }

Formula dia(const Action& alpha, const Formula& f) {
  FormulaNode n;
  n.kind = FormulaKind::Dia;
  n.a = f;
  n.act = alpha;
  return FormulaFactory::make(std::move(n));
}

Formula box(const Action& alpha, const Formula& f) { return neg(dia(alpha, neg(f))); }

Formula conj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return top();
  Formula out = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) out = conj(out, fs[i]);
  return out;
}

Formula disj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return bot();
  Formula out = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) out = disj(out, fs[i]);
  return out;
}

Action act(const std::string& name) {
  ActionNode n;
  n.kind = ActionKind::Atom;
  n.name = name;
  return FormulaFactory::make(std::move(n));
}

Action seq(const Action& a, const Action& b) {
  ActionNode n;
  n.kind = ActionKind::Seq;
  n.args = {a, b};
  return FormulaFactory::make(std::move(n));
}

Action op(const std::string& symbol, std::vector<Action> args) {
  ActionNode n;
  n.kind = ActionKind::Op;
  n.name = symbol;
  n.args = std::move(args);
  return FormulaFactory::make(std::move(n));
}

Action star(const Action& a) {
  ActionNode n;
  n.kind = ActionKind::Star;
  n.args = {a};
  return FormulaFactory::make(std::move(n));
}

Action test(const Formula& f) {
  ActionNode n;
  n.kind = ActionKind::Test;
  n.test = f;
  return FormulaFactory::make(std::move(n));
}

bool match_or(const Formula& f, Formula& a, Formula& b) {
  if (!f.is_neg() || f.sub().kind() != FormulaKind::And) return false;
  const Formula& c = f.sub();
  if (!c.left().is_neg() || !c.right().is_neg()) return false;
  a = c.left().sub();
  b = c.right().sub();
  return true;
}

bool match_imp(const Formula& f, Formula& a, Formula& b) {
  if (!f.is_neg() || f.sub().kind() != FormulaKind::And) return false;
  const Formula& c = f.sub();
  if (c.right().is_neg()) {
    a = c.left();
    b = c.right().sub();
    return true;
  }
  // ~(a & ~b) with b a disjunction or implication: ~b collapsed into a conjunction.
  const Formula nb = neg(c.right());
  Formula x, y;
  if (!match_or(nb, x, y) && !(nb.is_neg() && nb.sub().kind() == FormulaKind::And && nb.sub().right().is_neg()))
    return false;
  a = c.left();
  b = nb;
  return true;
}

bool match_iff(const Formula& f, Formula& a, Formula& b) {
  if (f.kind() != FormulaKind::And) return false;
  Formula a1, b1, a2, b2;
  if (!match_imp(f.left(), a1, b1) || !match_imp(f.right(), a2, b2)) return false;
  if (!(a1 == b2) || !(b1 == a2)) return false;
  a = a1;
  b = b1;
  return true;
}

bool match_box(const Formula& f, Action& alpha, Formula& body) {
  if (!f.is_neg() || f.sub().kind() != FormulaKind::Dia) return false;
  const Formula& d = f.sub();
  if (!d.body().is_neg()) return false;
  alpha = d.action();
  body = d.body().sub();
  return true;
}

bool is_bot(const Formula& f) { return f.is_neg() && f.sub().kind() == FormulaKind::Top; }

Formula substitute(const Formula& f, const Substitution& s) {
  switch (f.kind()) {
    case FormulaKind::Prop: {
      auto it = s.props.find(f.name());
      return it == s.props.end() ? f : it->second;
    }
    case FormulaKind::Top:
      return f;
    case FormulaKind::Neg:
      return neg(substitute(f.sub(), s));
    case FormulaKind::And:
      return conj(substitute(f.left(), s), substitute(f.right(), s));
    case FormulaKind::Dia:
      return dia(substitute(f.action(), s), substitute(f.body(), s));
  }
  throw std::logic_error("substitute: bad formula kind");
}

Action substitute(const Action& a, const Substitution& s) {
  switch (a.kind()) {
    case ActionKind::Atom: {
      auto it = s.actions.find(a.name());
      return it == s.actions.end() ? a : it->second;
    }
    case ActionKind::Seq:
      return seq(substitute(a.arg(0), s), substitute(a.arg(1), s));
    case ActionKind::Op: {
      std::vector<Action> args;
      for (const auto& x : a.args()) args.push_back(substitute(x, s));
      return op(a.name(), std::move(args));
    }
    case ActionKind::Star:
      return star(substitute(a.arg(0), s));
    case ActionKind::Test:
      return test(substitute(a.test(), s));
  }
  throw std::logic_error("substitute: bad action kind");
}

namespace {

struct NameCollector {
  std::set<std::string> props, actions, ops;

  void visit(const Formula& f) {
    switch (f.kind()) {
      case FormulaKind::Prop:
        props.insert(f.name());
        break;
      case FormulaKind::Top:
        break;
      case FormulaKind::Neg:
        visit(f.sub());
        break;
      case FormulaKind::And:
        visit(f.left());
        visit(f.right());
        break;
      case FormulaKind::Dia:
        visit(f.action());
        visit(f.body());
        break;
    }
  }

  void visit(const Action& a) {
    switch (a.kind()) {
      case ActionKind::Atom:
        actions.insert(a.name());
        break;
      case ActionKind::Op:
        ops.insert(a.name());
        [[fallthrough]];
      case ActionKind::Seq:
      case ActionKind::Star:
        for (const auto& x : a.args()) visit(x);
        break;
      case ActionKind::Test:
        visit(a.test());
        break;
    }
  }
};

}  // namespace

std::vector<std::string> prop_names(const Formula& f) {
  NameCollector c;
  c.visit(f);
  return {c.props.begin(), c.props.end()};
}

std::vector<std::string> action_names(const Formula& f) {
  NameCollector c;
  c.visit(f);
  return {c.actions.begin(), c.actions.end()};
}

std::vector<std::string> op_symbols(const Formula& f) {
  NameCollector c;
  c.visit(f);
  return {c.ops.begin(), c.ops.end()};
}

}  // namespace cdl
