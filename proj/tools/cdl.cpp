// Command-line front end: parse, closure, check, sat, valid, laws, prove.
// Exit codes: 0 success / sat / valid, 1 negative answer, 2 error,
// 3 negative answer on the atom space only (no completeness claim).

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "cdl/config.hpp"
#include "cdl/decide.hpp"
#include "cdl/model.hpp"
#include "cdl/parser.hpp"
#include "cdl/proof.hpp"
#include "json.hpp"

using namespace cdl;
using nlohmann::json;

namespace {

struct Common {
  std::string config = "pdl";
  bool json = false;
  std::optional<std::uint64_t> seed;
  std::string budget;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "Shipped config name or path to a config file");
  sub->add_flag("--json", c.json, "Emit a JSON report");
  sub->add_option("--seed", c.seed, "Seed for sampled checks");
  sub->add_option("--budget", c.budget, "JSON file overriding budget fields");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

InstanceConfig resolve_config(const Common& c) {
  InstanceConfig cfg = load_config(c.config);
  if (!c.budget.empty()) apply_budget_json(cfg, read_file(c.budget));
  if (c.seed) cfg.seed = *c.seed;
  return cfg;
}

int cmd_parse(const Common& c, const std::string& text) {
  const Formula f = parse_formula(text, resolve_config(c).signature());
  if (c.json) {
    std::cout << json{{"formula", to_string(f)}, {"ast", dump_ast(f)}}.dump(2) << "\n";
  } else {
    std::cout << to_string(f) << "\n" << dump_ast(f) << "\n";
  }
  return 0;
}

int cmd_closure(const Common& c, const std::string& text) {
  const Formula f = parse_formula(text, resolve_config(c).signature());
  const Closure cl = fl_closure(f, resolve_config(c).signature());
  const auto formulas = cl.formulas();
  if (c.json) {
    json out{{"pairs", cl.pair_count()}, {"formulas", json::array()}};
    for (const auto& g : formulas) out["formulas"].push_back(to_string(g));
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  std::cout << formulas.size() << " formulas in " << cl.pair_count() << " pairs\n";
  for (std::size_t i = 0; i < formulas.size(); ++i) std::cout << "  " << i << "  " << to_string(formulas[i]) << "\n";
  return 0;
}

int cmd_check(const Common& c, bool config_given, const std::string& model_path, const std::string& text) {
  const DynamicModel m = load_model(model_path);
  if (config_given && config_to_json(resolve_config(c)) != config_to_json(m.config))
    throw std::runtime_error("model uses config '" + m.config.name + "', not '" + c.config + "'");
  const Formula f = parse_formula(text, m.config.signature());
  const StateSet truth = eval_formula(m, f);
  if (c.json) {
    json out{{"formula", to_string(f)}, {"valid", truth.all()}, {"true_at", json::array()}};
    truth.for_each([&](std::size_t i) { out["true_at"].push_back(m.states[i]); });
    std::cout << out.dump(2) << "\n";
  } else {
    for (std::size_t i = 0; i < m.size(); ++i) std::cout << m.states[i] << "  " << (truth.test(i) ? "true" : "false") << "\n";
    std::cout << (truth.all() ? "valid in model" : "not valid in model") << "\n";
  }
  return truth.all() ? 0 : 1;
}

int cmd_decide(const Common& c, bool validity, const std::string& text, const std::string& output) {
  const InstanceConfig cfg = resolve_config(c);
  const Formula f = parse_formula(text, cfg.signature());
  const Verdict v = validity ? decide_valid(f, cfg) : decide_sat(f, cfg);
  if (v.model && !output.empty()) {
    std::ofstream out(output);
    if (!out) throw std::runtime_error("cannot write '" + output + "'");
    out << model_to_json(*v.model) << "\n";
  }
  if (c.json) {
    std::cout << v.to_json() << "\n";
  } else {
    std::cout << verdict_name(v.kind) << "\n";
    if (v.model) {
      std::cout << "witness " << v.witness << " in a " << v.model->size() << "-state model";
      if (!output.empty()) std::cout << ", written to " << output;
      std::cout << "\n";
    }
    if (!v.trusted()) std::cout << "note: negative answer on the atom space; completeness is not established\n";
    std::cout << "pairs " << v.stats.pairs << ", atoms " << v.stats.atoms_generated << ", rounds " << v.stats.rounds
              << ", eliminated " << v.stats.eliminated << "\n";
  }
  return verdict_exit_code(v.kind);
}

int cmd_laws(const Common& c) {
  const InstanceConfig cfg = resolve_config(c);
  const std::vector<LawReport> reports = run_law_suite(cfg);
  bool ok = true;
  json out{{"config", cfg.name}, {"experimental", cfg.experimental}, {"suites", json::array()}};
  for (const auto& r : reports) {
    ok = ok && r.ok();
    out["suites"].push_back({{"suite", r.suite},
                             {"instance", r.instance},
                             {"carrier", r.carrier},
                             {"exhaustive", r.exhaustive},
                             {"checks", r.checks},
                             {"violations", r.violation_count},
                             {"samples", r.violations}});
    if (!c.json) {
      std::cout << (r.ok() ? "ok   " : "FAIL ") << r.suite << "  " << r.instance << "  n=" << r.carrier << "  "
                << (r.exhaustive ? "exhaustive" : "sampled") << "  checks=" << r.checks
                << "  violations=" << r.violation_count << "\n";
      for (const auto& s : r.violations) std::cout << "       " << s << "\n";
    }
  }
  out["ok"] = ok;
  if (c.json) {
    std::cout << out.dump(2) << "\n";
  } else {
    if (cfg.experimental) std::cout << "note: config '" << cfg.name << "' is experimental; completeness is conjectural\n";
    std::cout << (ok ? "all suites pass" : "some suites fail") << "\n";
  }
  return ok ? 0 : 1;
}

int cmd_prove(const Common& c, const std::string& path) {
  const InstanceConfig cfg = resolve_config(c);
  const std::string text = read_file(path);
  const ProofVerdict v = check_script(proof_system(cfg), text);
  if (c.json) {
    std::cout << json{{"status", status_name(v.status)}, {"step", v.step}, {"message", v.message}}.dump(2) << "\n";
  } else if (v.accepted()) {
    std::cout << "accepted\n";
  } else {
    std::cout << status_name(v.status) << ": " << v.message << "\n";
  }
  if (v.accepted()) return 0;
  return v.status == ProofVerdict::Status::Malformed ? 2 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coalgebraic dynamic logic toolkit"};
  app.require_subcommand(1);
  Common common;
  std::string formula, path, output = "witness.json";

  auto* parse = app.add_subcommand("parse", "Print the normalized formula and its syntax tree");
  auto* closure = app.add_subcommand("closure", "List the Fischer-Ladner closure");
  auto* check = app.add_subcommand("check", "Evaluate a formula on a model file");
  auto* sat = app.add_subcommand("sat", "Decide satisfiability");
  auto* valid = app.add_subcommand("valid", "Decide validity");
  auto* laws = app.add_subcommand("laws", "Run the monad and lifting law suites");
  auto* prove = app.add_subcommand("prove", "Check a derivation script");
  for (auto* s : {parse, closure, check, sat, valid, laws, prove}) add_common(s, common);
  for (auto* s : {parse, closure, sat, valid}) s->add_option("formula", formula, "Formula")->required();
  check->add_option("model", path, "Model file")->required();
  check->add_option("formula", formula, "Formula")->required();
  for (auto* s : {sat, valid}) s->add_option("-o,--output", output, "Where to write a witness or countermodel");
  prove->add_option("script", path, "Derivation script")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*parse) return cmd_parse(common, formula);
    if (*closure) return cmd_closure(common, formula);
    if (*check) return cmd_check(common, check->count("--config") > 0, path, formula);
    if (*sat) return cmd_decide(common, false, formula, output);
    if (*valid) return cmd_decide(common, true, formula, output);
    if (*laws) return cmd_laws(common);
    if (*prove) return cmd_prove(common, path);
  } catch (const VerificationError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
