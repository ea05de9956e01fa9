#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "leanevo/engine.hpp"
#include "leanevo/hash.hpp"
#include "leanevo/parser.hpp"
#include "leanevo/printer.hpp"
#include "leanevo/prompts.hpp"
#include "leanevo/rules.hpp"
#include "leanevo/variants.hpp"

namespace py = pybind11;
using namespace leanevo;

namespace {

Statement parse_or_throw(const std::string& text) {
  auto res = parse_statement(text);
  if (!res.ok()) throw py::value_error(res.error->message());
  return *res.statement;
}

std::set<RuleId> rules_from_names(const std::optional<std::vector<std::string>>& names) {
  if (!names) return all_rules();
  std::set<RuleId> out;
  for (const auto& n : *names) {
    auto id = rule_from_name(n);
    if (!id) throw py::value_error("unknown rule: " + n);
    out.insert(*id);
  }
  return out;
}

py::dict record_to_dict(const EvolutionRecord& rec) {
  py::dict d;
  d["seed_id"] = rec.seed_statement_id;
  d["method"] = method_name(rec.method);
  d["rng_seed"] = rec.rng_seed;
  d["output"] = rec.output;
  d["status"] = status_name(rec.status);
  py::list apps;
  for (const auto& a : rec.applications) {
    py::dict app;
    app["rule"] = rule_info(a.rule).name;
    app["node_path"] = a.node_path;
    app["before"] = a.before;
    app["after"] = a.after;
    apps.append(app);
  }
  d["applications"] = apps;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Lean 4 statement evolution: parsing, rewriting, prompts";

  py::class_<Statement>(m, "Statement")
      .def_property_readonly("name", [](const Statement& s) { return s.name; })
      .def_property_readonly("binder_names", &Statement::binder_names)
      .def_property_readonly("hypothesis_labels",
                             [](const Statement& s) {
                               std::vector<std::string> out;
                               for (const auto& h : s.hypotheses) out.push_back(h.label);
                               return out;
                             })
      .def_property_readonly("hypotheses",
                             [](const Statement& s) {
                               std::vector<std::pair<std::string, std::string>> out;
                               for (const auto& h : s.hypotheses) {
                                 out.emplace_back(h.label, print_expr(h.prop));
                               }
                               return out;
                             })
      .def_property_readonly("goal", [](const Statement& s) { return print_expr(s.goal); })
      .def_property_readonly("header", [](const Statement& s) { return s.header; })
      .def("__str__", [](const Statement& s) { return print_statement(s); })
      .def("__repr__", [](const Statement& s) {
        return "<Statement " + s.name + ": " + print_expr(s.goal) + ">";
      });

  m.def("parse_statement", &parse_or_throw, py::arg("text"),
        "Parse one theorem declaration; raises ValueError on unsupported syntax.");
  m.def("print_statement", [](const Statement& s) { return print_statement(s); }, py::arg("statement"));
  m.def("roundtrip", [](const std::string& text) { return print_statement(parse_or_throw(text)); },
        py::arg("text"), "Parse and reprint with canonical spacing and minimal parentheses.");

  m.def("free_vars",
        [](const std::string& expr_text) {
          auto res = parse_expression(expr_text);
          if (!res.ok()) throw py::value_error(res.error->message());
          return free_vars(res.expr);
        },
        py::arg("expression"));

  m.def("structural_hash",
        [](const std::string& text) { return hash_hex(structural_hash(parse_or_throw(text))); },
        py::arg("text"), "Alpha-normalized dedup digest (hex).");
  m.def("normalized_print",
        [](const std::string& text) { return normalized_print(parse_or_throw(text)); },
        py::arg("text"));

  m.def("rule_catalog", []() {
    py::list out;
    for (const auto& info : rule_catalog()) {
      py::dict d;
      d["name"] = info.name;
      d["scope"] = info.scope == RuleScope::StatementLevel ? "statement" : "node";
      d["description"] = info.description;
      d["side_conditions"] = info.side_conditions;
      out.append(d);
    }
    return out;
  });

  m.def(
      "evolve_ast",
      [](const std::string& text, double probability, std::uint64_t seed, int variants,
         int max_applications, const std::optional<std::vector<std::string>>& rules,
         const std::string& suffix, const std::string& seed_id) {
        EngineConfig cfg;
        cfg.probability = probability;
        cfg.rng_seed = seed;
        cfg.variants_per_statement = variants;
        cfg.max_rule_applications = max_applications;
        cfg.enabled_rules = rules_from_names(rules);
        cfg.name_suffix = suffix;
        py::list out;
        for (const auto& rec : evolve_ast(parse_or_throw(text), cfg, seed_id)) {
          out.append(record_to_dict(rec));
        }
        return out;
      },
      py::arg("text"), py::arg("probability") = 0.5, py::arg("seed") = 0,
      py::arg("variants") = 3, py::arg("max_applications") = 8,
      py::arg("rules") = std::nullopt, py::arg("suffix") = "_auged",
      py::arg("seed_id") = "seed");

  m.def(
      "enumerate_closure",
      [](const std::string& text, const std::optional<std::vector<std::string>>& rules, int depth,
         std::size_t max_size) {
        Closure c = enumerate_closure(parse_or_throw(text), rules_from_names(rules), depth,
                                      max_size);
        py::list statements;
        for (const auto& s : c.statements) statements.append(print_statement(s));
        py::dict out;
        out["statements"] = statements;
        out["truncated"] = c.truncated;
        return out;
      },
      py::arg("text"), py::arg("rules") = std::nullopt, py::arg("depth") = 4,
      py::arg("max_size") = 20000);

  m.def("render_domain_prompt",
        [](const std::string& text, const std::optional<std::vector<std::string>>& domains) {
          if (!domains) return render_domain_prompt(text);
          return render_domain_prompt(text, DomainList{*domains});
        },
        py::arg("text"), py::arg("domains") = std::nullopt);

  m.def("render_difficulty_prompt",
        [](const std::string& text, int strategy_id, int direction) {
          return render_difficulty_prompt(text, DifficultyStrategy::get(strategy_id, direction));
        },
        py::arg("text"), py::arg("strategy_id"), py::arg("direction"));

  m.def("preset_domains", []() { return DomainList::preset().domains; });

  m.def(
      "parse_variants",
      [](const std::string& response, bool expect_domain) {
        VariantParse parsed = parse_variants(response, expect_domain);
        py::list variants;
        for (const auto& v : parsed.variants) {
          py::dict d;
          d["nl_description"] = v.nl_description;
          d["formal_statement"] = v.formal_statement;
          if (v.domain) {
            d["domain"] = *v.domain;
          } else {
            d["domain"] = py::none();
          }
          variants.append(d);
        }
        py::dict out;
        out["variants"] = variants;
        out["diagnostics"] = parsed.diagnostics;
        return out;
      },
      py::arg("response"), py::arg("expect_domain") = false);

  m.attr("__version__") = "0.1.0";
}
