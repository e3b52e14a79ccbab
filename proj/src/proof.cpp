#include "cdl/proof.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>
#include <sstream>
#include <stdexcept>

#include "cdl/lifting.hpp"
#include "cdl/parser.hpp"

namespace cdl {

namespace {

bool match(const Formula& pat, const Formula& f, Substitution& s);

bool match(const Action& pat, const Action& a, Substitution& s) {
  switch (pat.kind()) {
    case ActionKind::Atom: {
      auto [it, fresh] = s.actions.emplace(pat.name(), a);
      return fresh || it->second == a;
    }
    case ActionKind::Seq:
    case ActionKind::Star:
    case ActionKind::Op: {
      if (a.kind() != pat.kind() || a.args().size() != pat.args().size()) return false;
      if (pat.kind() == ActionKind::Op && a.name() != pat.name()) return false;
      for (std::size_t i = 0; i < pat.args().size(); ++i)
        if (!match(pat.arg(i), a.arg(i), s)) return false;
      return true;
    }
    case ActionKind::Test:
      return a.kind() == ActionKind::Test && match(pat.test(), a.test(), s);
  }
  return false;
}

bool match(const Formula& pat, const Formula& f, Substitution& s) {
  switch (pat.kind()) {
    case FormulaKind::Prop: {
      auto [it, fresh] = s.props.emplace(pat.name(), f);
      return fresh || it->second == f;
    }
    case FormulaKind::Top:
      return f.kind() == FormulaKind::Top;
    case FormulaKind::Neg:
      // A metavariable instantiated with a negation loses one ~ to
      // normalization, so a non-negated f still matches ~X with X := ~f.
      return f.is_neg() ? match(pat.sub(), f.sub(), s) : match(pat.sub(), neg(f), s);
    case FormulaKind::And:
      return f.kind() == FormulaKind::And && match(pat.left(), f.left(), s) && match(pat.right(), f.right(), s);
    case FormulaKind::Dia:
      return f.kind() == FormulaKind::Dia && match(pat.action(), f.action(), s) && match(pat.body(), f.body(), s);
  }
  return false;
}

Schema make_schema(const std::string& name, Schema::Group group, const Formula& pattern) {
  Schema s{name, group, pattern, {}, {}};
  const auto actions = action_names(pattern);
  const auto props = prop_names(pattern);
  s.action_vars.assign(actions.begin(), actions.end());
  s.formula_vars.assign(props.begin(), props.end());
  return s;
}

void collect_literals(const Formula& f, std::vector<Formula>& out, std::set<Formula>& seen) {
  switch (f.kind()) {
    case FormulaKind::Top:
      return;
    case FormulaKind::Neg:
      collect_literals(f.sub(), out, seen);
      return;
    case FormulaKind::And:
      collect_literals(f.left(), out, seen);
      collect_literals(f.right(), out, seen);
      return;
    case FormulaKind::Prop:
    case FormulaKind::Dia:
      if (seen.insert(f).second) out.push_back(f);
      return;
  }
}

using Column = std::vector<std::uint64_t>;

Column truth_column(const Formula& f, const std::vector<Formula>& lits, const std::vector<Column>& cols,
                    std::size_t words) {
  switch (f.kind()) {
    case FormulaKind::Top:
      return Column(words, ~std::uint64_t{0});
    case FormulaKind::Neg: {
      Column c = truth_column(f.sub(), lits, cols, words);
      for (auto& w : c) w = ~w;
      return c;
    }
    case FormulaKind::And: {
      Column c = truth_column(f.left(), lits, cols, words);
      const Column r = truth_column(f.right(), lits, cols, words);
      for (std::size_t i = 0; i < words; ++i) c[i] &= r[i];
      return c;
    }
    case FormulaKind::Prop:
    case FormulaKind::Dia:
      for (std::size_t i = 0; i < lits.size(); ++i)
        if (lits[i] == f) return cols[i];
      break;
  }
  throw std::logic_error("truth_column: literal not collected");
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::size_t parse_index(const std::string& word, std::size_t line) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), v);
  if (ec != std::errc() || ptr != word.data() + word.size() || word.empty())
    throw ScriptError(line, "expected a step number, got '" + word + "'");
  return v;
}

// Splits at commas outside parentheses.
std::vector<std::string> split_top_level(const std::string& text) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

Justification parse_justification(const std::string& text, std::size_t line, const Signature& sig) {
  std::istringstream in(text);
  std::string head;
  in >> head;
  Justification j;
  std::string rest;
  std::getline(in, rest);
  rest = trim(rest);
  std::istringstream args(rest);
  auto next_index = [&] {
    std::string w;
    if (!(args >> w)) throw ScriptError(line, "'" + head + "' needs a step number");
    return parse_index(w, line);
  };
  auto expect_done = [&] {
    std::string w;
    if (args >> w) throw ScriptError(line, "unexpected '" + w + "' after '" + head + "'");
  };

  if (head == "taut") {
    j.kind = Justification::Kind::Taut;
    expect_done();
  } else if (head == "axiom") {
    j.kind = Justification::Kind::Axiom;
    if (!(args >> j.schema)) throw ScriptError(line, "'axiom' needs a schema name");
    expect_done();
  } else if (head == "mp") {
    j.kind = Justification::Kind::MP;
    j.first = next_index();
    j.second = next_index();
    expect_done();
  } else if (head == "star") {
    j.kind = Justification::Kind::Star;
    j.first = next_index();
    expect_done();
  } else if (head == "cong") {
    j.kind = Justification::Kind::Cong;
    j.first = next_index();
    std::string action_text;
    std::getline(args, action_text);
    action_text = trim(action_text);
    if (!action_text.empty()) {
      try {
        j.action = parse_action(action_text, sig);
      } catch (const std::exception& e) {
        throw ScriptError(line, e.what());
      }
    }
  } else if (head == "subst") {
    j.kind = Justification::Kind::Subst;
    j.first = next_index();
    std::string list;
    std::getline(args, list);
    list = trim(list);
    if (list.empty()) throw ScriptError(line, "'subst' needs at least one 'name := term'");
    for (const auto& entry : split_top_level(list)) {
      const auto pos = entry.find(":=");
      if (pos == std::string::npos) throw ScriptError(line, "expected 'name := term' in '" + trim(entry) + "'");
      const std::string name = trim(entry.substr(0, pos));
      const std::string term = trim(entry.substr(pos + 2));
      if (name.empty() || term.empty()) throw ScriptError(line, "expected 'name := term' in '" + trim(entry) + "'");
      j.substitution.emplace_back(name, term);
    }
  } else if (head.empty()) {
    throw ScriptError(line, "missing justification");
  } else {
    throw ScriptError(line, "unknown justification '" + head + "'");
  }
  return j;
}

// Structural splits that ignore how the consequent prints: every ~(x & y)
// is x -> ~y.
bool split_imp(const Formula& f, Formula& a, Formula& b) {
  if (!f.is_neg() || f.sub().kind() != FormulaKind::And) return false;
  a = f.sub().left();
  b = neg(f.sub().right());
  return true;
}

bool split_iff(const Formula& f, Formula& a, Formula& b) {
  if (f.kind() != FormulaKind::And || !split_imp(f.left(), a, b)) return false;
  return iff(a, b) == f;
}

}  // namespace

Formula instantiate_schema(const Schema& s, const std::vector<Action>& actions, const std::vector<Formula>& formulas) {
  if (actions.size() != s.action_vars.size() || formulas.size() != s.formula_vars.size())
    throw std::invalid_argument("schema '" + s.name + "' takes " + std::to_string(s.action_vars.size()) +
                                " actions and " + std::to_string(s.formula_vars.size()) + " formulas");
  Substitution sub;
  for (std::size_t i = 0; i < actions.size(); ++i) sub.actions[s.action_vars[i]] = actions[i];
  for (std::size_t i = 0; i < formulas.size(); ++i) sub.props[s.formula_vars[i]] = formulas[i];
  return substitute(s.pattern, sub);
}

std::optional<Substitution> match_schema(const Schema& s, const Formula& instance) {
  Substitution sub;
  if (!match(s.pattern, instance, sub)) return std::nullopt;
  return sub;
}

const Schema* ProofSystem::find(const std::string& schema_name) const {
  for (const auto& s : schemas)
    if (s.name == schema_name) return &s;
  return nullptr;
}

ProofSystem proof_system(const InstanceConfig& config) {
  ProofSystem sys;
  sys.name = config.name;
  sys.signature = config.signature();
  const Signature& std_sig = Signature::standard();
  auto add = [&](const std::string& name, Schema::Group g, const char* text) {
    sys.schemas.push_back(make_schema(name, g, parse_formula(text, std_sig)));
  };
  if (config.base_logic == BaseLogic::K) {
    add("dia-or", Schema::Group::Base, "<a>(p | q) <-> <a>p | <a>q");
    add("dia-bot", Schema::Group::Base, "~<a>false");
  } else {
    add("mono", Schema::Group::Base, "<a>(p & q) -> <a>p");
  }
  const char* names[] = {"a", "b", "c", "d", "e", "f"};
  for (const auto& op : config.natural_operations()) {
    if (op.arity > 6) throw std::invalid_argument("operation '" + op.symbol + "' has too many arguments");
    std::vector<Action> args;
    for (std::size_t i = 0; i < op.arity; ++i) args.push_back(act(names[i]));
    sys.schemas.push_back(
        make_schema("pw" + op.symbol, Schema::Group::Pointwise, generate_pw_axiom(op.entry(), args, prop("p"))));
  }
  add("comp", Schema::Group::Frame, "<a;b>p <-> <a><b>p");
  add("star", Schema::Group::Frame, "<a*>p <-> p | <a><a*>p");
  add("test", Schema::Group::Frame, "<?psi>p <-> psi & p");
  return sys;
}

std::vector<Formula> boolean_literals(const Formula& f) {
  std::vector<Formula> out;
  std::set<Formula> seen;
  collect_literals(f, out, seen);
  return out;
}

bool is_tautology(const Formula& f) {
  const std::vector<Formula> lits = boolean_literals(f);
  const std::size_t k = lits.size();
  if (k > 24) throw std::invalid_argument("too many literals for a truth table: " + std::to_string(k));
  const std::size_t rows = std::size_t{1} << k;
  const std::size_t words = (rows + 63) / 64;
  std::vector<Column> cols(k, Column(words, 0));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t r = 0; r < rows; ++r)
      if ((r >> i) & 1) cols[i][r / 64] |= std::uint64_t{1} << (r % 64);
  const Column c = truth_column(f, lits, cols, words);
  for (std::size_t w = 0; w < words; ++w) {
    const std::size_t valid = std::min<std::size_t>(64, rows - w * 64);
    const std::uint64_t mask = valid == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << valid) - 1;
    if ((c[w] & mask) != mask) return false;
  }
  return true;
}

Derivation parse_script(const std::string& text, const Signature& sig) {
  Derivation d;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (s.empty() || s[0] == '#') continue;
    const auto dot = s.find('.');
    if (dot == std::string::npos) throw ScriptError(line, "expected 'n. <formula> ; <justification>'");
    Step step;
    step.line = line;
    step.number = parse_index(trim(s.substr(0, dot)), line);
    if (!d.steps.empty() && step.number <= d.steps.back().number)
      throw ScriptError(line, "step numbers must increase");
    const std::string body = s.substr(dot + 1);
    std::size_t end = 0;
    try {
      step.formula = parse_formula_prefix(body, end, sig);
    } catch (const std::exception& e) {
      throw ScriptError(line, e.what());
    }
    const std::string tail = trim(body.substr(end));
    if (tail.empty() || tail[0] != ';') throw ScriptError(line, "expected ';' before the justification");
    step.why = parse_justification(trim(tail.substr(1)), line, sig);
    d.steps.push_back(std::move(step));
  }
  return d;
}

const char* status_name(ProofVerdict::Status s) {
  switch (s) {
    case ProofVerdict::Status::Accepted: return "accepted";
    case ProofVerdict::Status::Malformed: return "malformed";
    case ProofVerdict::Status::BadIndex: return "bad-index";
    case ProofVerdict::Status::SchemaMismatch: return "schema-mismatch";
    case ProofVerdict::Status::NotTautology: return "not-tautology";
    case ProofVerdict::Status::RuleMismatch: return "rule-mismatch";
  }
  return "?";
}

ProofVerdict check_derivation(const ProofSystem& system, const Derivation& d) {
  using Status = ProofVerdict::Status;
  std::vector<const Step*> done;
  auto fail = [](const Step& s, Status st, std::string msg) {
    return ProofVerdict{st, s.number, "step " + std::to_string(s.number) + ": " + msg};
  };

  for (const Step& step : d.steps) {
    auto premise = [&](std::size_t n) -> const Formula* {
      for (const Step* p : done)
        if (p->number == n) return &p->formula;
      return nullptr;
    };
    const Formula& cur = step.formula;
    const Justification& j = step.why;
    switch (j.kind) {
      case Justification::Kind::Taut: {
        bool ok = false;
        try {
          ok = is_tautology(cur);
        } catch (const std::invalid_argument& e) {
          return fail(step, Status::NotTautology, e.what());
        }
        if (!ok) return fail(step, Status::NotTautology, "not a propositional tautology");
        break;
      }
      case Justification::Kind::Axiom: {
        const Schema* s = system.find(j.schema);
        if (!s) return fail(step, Status::SchemaMismatch, "unknown schema '" + j.schema + "'");
        if (!match_schema(*s, cur))
          return fail(step, Status::SchemaMismatch, "not an instance of '" + j.schema + "': " + to_string(s->pattern));
        break;
      }
      case Justification::Kind::MP: {
        const Formula* a = premise(j.first);
        const Formula* b = premise(j.second);
        if (!a || !b) return fail(step, Status::BadIndex, "mp cites a step that is not earlier");
        Formula x, y;
        if (!split_imp(*a, x, y) && !split_imp(*b, x, y))
          return fail(step, Status::RuleMismatch, "mp cites no implication");
        if (!(implies(*a, cur) == *b) && !(implies(*b, cur) == *a))
          return fail(step, Status::RuleMismatch,
                      "mp needs steps phi and phi -> " + to_string(cur));
        break;
      }
      case Justification::Kind::Subst: {
        const Formula* a = premise(j.first);
        if (!a) return fail(step, Status::BadIndex, "subst cites a step that is not earlier");
        const auto props = prop_names(*a);
        const auto actions = action_names(*a);
        Substitution sub;
        for (const auto& [name, text] : j.substitution) {
          const bool is_prop = std::find(props.begin(), props.end(), name) != props.end();
          const bool is_action = std::find(actions.begin(), actions.end(), name) != actions.end();
          if (is_prop == is_action)
            return fail(step, Status::RuleMismatch,
                        "'" + name + "' is " + (is_prop ? "both a proposition and an action" : "not in the premise"));
          try {
            if (is_prop)
              sub.props[name] = parse_formula(text, system.signature);
            else
              sub.actions[name] = parse_action(text, system.signature);
          } catch (const std::exception& e) {
            return fail(step, Status::Malformed, e.what());
          }
        }
        if (!(substitute(*a, sub) == cur))
          return fail(step, Status::RuleMismatch, "substitution gives " + to_string(substitute(*a, sub)));
        break;
      }
      case Justification::Kind::Cong: {
        const Formula* a = premise(j.first);
        if (!a) return fail(step, Status::BadIndex, "cong cites a step that is not earlier");
        Formula l, r;
        if (!split_iff(*a, l, r))
          return fail(step, Status::RuleMismatch, "cong needs a biconditional premise");
        Action alpha;
        if (j.action) {
          alpha = *j.action;
        } else {
          Formula cl, cr;
          if (!split_iff(cur, cl, cr) || cl.kind() != FormulaKind::Dia)
            return fail(step, Status::RuleMismatch, "cong concludes <alpha>phi <-> <alpha>psi");
          alpha = cl.action();
        }
        if (!(iff(dia(alpha, l), dia(alpha, r)) == cur))
          return fail(step, Status::RuleMismatch, "cong gives " + to_string(iff(dia(alpha, l), dia(alpha, r))));
        break;
      }
      case Justification::Kind::Star: {
        const Formula* a = premise(j.first);
        if (!a) return fail(step, Status::BadIndex, "star cites a step that is not earlier");
        Formula lhs, psi;
        if (!split_imp(cur, lhs, psi) || lhs.kind() != FormulaKind::Dia || lhs.action().kind() != ActionKind::Star)
          return fail(step, Status::RuleMismatch, "star concludes <alpha*>phi -> psi");
        const Action& alpha = lhs.action().arg(0);
        const Formula expected = implies(disj(dia(alpha, psi), lhs.body()), psi);
        if (!(expected == *a))
          return fail(step, Status::RuleMismatch, "star needs premise " + to_string(expected));
        break;
      }
    }
    done.push_back(&step);
  }
  return {};
}

ProofVerdict check_script(const ProofSystem& system, const std::string& text) {
  try {
    return check_derivation(system, parse_script(text, system.signature));
  } catch (const ScriptError& e) {
    return {ProofVerdict::Status::Malformed, 0, e.what()};
  }
}

}  // namespace cdl
