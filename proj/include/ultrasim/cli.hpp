#pragma once

/** \file
 * \brief The ultrasim command line. run_cli() takes the arguments after the
 * program name and explicit streams so tests can drive it in-process.
 *
 * Exit codes: 0 yes, 1 no (with certificate), 2 input error, 3 search
 * budget exceeded. Stdout always carries exactly one JSON document.
 */

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ultrasim/decision.hpp"
#include "ultrasim/error.hpp"
#include "ultrasim/io.hpp"
#include "ultrasim/mapping.hpp"
#include "ultrasim/orders.hpp"
#include "ultrasim/similarity.hpp"

namespace ultrasim {

enum ExitCode : int { kExitYes = 0, kExitNo = 1, kExitInputError = 2, kExitBudget = 3 };

inline constexpr std::size_t kDefaultMaxN = 512;
inline constexpr std::size_t kDefaultCompareMaxN = 10;

namespace cli_detail {

struct Common {
  bool pretty = false;
  bool csv = false;
  std::size_t max_n = 0;
};

inline void emit(std::ostream& out, const Json& j, bool pretty) {
  out << (pretty ? j.dump(2) : j.dump()) << '\n';
}

inline MappingDocument load(const std::string& path, std::istream& in, const Common& c) {
  MappingDocument doc;
  if (path == "-") {
    doc = read_mapping_document(in, c.csv);
  } else {
    std::ifstream f(path);
    if (!f) throw InputError("cannot open '" + path + "'");
    doc = read_mapping_document(f, c.csv);
  }
  if (doc.mapping.size() > c.max_n)
    throw InputError("mapping has " + std::to_string(doc.mapping.size()) + " points, above the limit of " +
                     std::to_string(c.max_n) + " (raise with --max-n)");
  return doc;
}

inline std::size_t default_budget() {
  const char* env = std::getenv("ULTRASIM_BUDGET");
  if (!env) return kDefaultSearchBudget;
  const std::string s = env;
  if (!detail::all_digits(s) || s.size() > 18) throw InputError("ULTRASIM_BUDGET must be a positive integer");
  return std::stoull(s);
}

inline Json labels(const FiniteMapping& m, const std::vector<std::size_t>& points) {
  Json a = Json::array();
  for (std::size_t x : points) a.push_back(m.points()[x]);
  return a;
}

inline Json verdict_json(const RealizeResult& r, const FiniteMapping& m) {
  if (auto real = std::get_if<Realization>(&r)) return Json{{"verdict", "yes"}, {"realization", realization_to_json(*real)}};
  return Json{{"verdict", "no"}, {"certificate", certificate_to_json(std::get<Certificate>(r), m)}};
}

inline Json minimal_json(const std::variant<FinitePoset, UCycle>& mo, const FiniteMapping& m) {
  if (auto p = std::get_if<FinitePoset>(&mo)) return Json{{"verdict", "yes"}, {"poset", poset_to_json(*p)}};
  return Json{{"verdict", "no"}, {"certificate", certificate_to_json(std::get<UCycle>(mo), m)}};
}

inline Json report_json(const AnalysisReport& rep, const FiniteMapping& m) {
  auto check = [&](const std::optional<Certificate>& c) {
    Json j{{"ok", !c.has_value()}};
    if (c) j["certificate"] = certificate_to_json(*c, m);
    return j;
  };
  Json j{{"points", m.size()}, {"values", m.value_count()}, {"full", rep.full}};
  j["symmetry"] = rep.asymmetry ? check(Certificate{*rep.asymmetry}) : check(std::nullopt);
  if (!rep.diagonal) {
    j["diagonal"] = nullptr;
  } else if (auto v = std::get_if<std::size_t>(&*rep.diagonal)) {
    j["diagonal"] = Json{{"ok", true}, {"value", m.values()[*v]}};
  } else {
    j["diagonal"] = check(Certificate{std::get<NonConstantDiagonal>(*rep.diagonal)});
  }
  j["coherence"] = rep.coherence_checked ? check(rep.coherence_violation) : Json(nullptr);
  if (rep.scalene_checked) {
    j["scalene"] = rep.scalene ? check(Certificate{*rep.scalene}) : check(std::nullopt);
    if (rep.full) {
      Json all = Json::array();
      for (const auto& t : rep.all_scalene) all.push_back(labels(m, {t.x1, t.x2, t.x3}));
      j["scalene"]["all"] = std::move(all);
    }
  } else {
    j["scalene"] = nullptr;
  }
  if (rep.u) {
    Json u = Json::array();
    for (const auto& [a, b] : rep.u->pairs()) u.push_back({m.values()[a], m.values()[b]});
    j["u_relation"] = std::move(u);
  } else {
    j["u_relation"] = nullptr;
  }
  j["minimal_order"] = rep.minimal ? minimal_json(*rep.minimal, m) : Json(nullptr);
  j["pseudoultrametric"] = verdict_json(rep.pseudo, m);
  j["ultrametric"] = verdict_json(rep.ultra, m);
  return j;
}

inline Json violation_json(const QViolation& v, const FiniteMapping& m, const FinitePoset& q) {
  Json j{{"clause", clause_name(v.clause)}, {"points", labels(m, v.points)}};
  if (v.gamma) j["gamma"] = q.label(*v.gamma);
  return j;
}

}  // namespace cli_detail

inline int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
                   std::ostream& err) {
  using namespace cli_detail;
  CLI::App app{"Decide similarity of finite value tables to (pseudo)ultrametrics", "ultrasim"};
  app.require_subcommand(1);

  Common common;
  std::string path, path_b, kind, mode;
  bool full = false;
  std::optional<std::size_t> budget, max_n;
  std::size_t chain_k = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_flag("--pretty", common.pretty, "Indent JSON output");
    sub->add_flag("--csv", common.csv, "Read CSV matrices instead of JSON");
    sub->add_option("--max-n", max_n, "Refuse inputs with more points than this");
  };

  auto* analyze = app.add_subcommand("analyze", "Run every stage of the realization pipeline");
  analyze->add_option("path", path, "Mapping file, or - for stdin")->required();
  analyze->add_flag("--full", full, "Evaluate all stages even after a failure");
  add_common(analyze);

  auto* realize = app.add_subcommand("realize", "Realize as a rational (pseudo)ultrametric or refute");
  realize->add_option("path", path, "Mapping file, or - for stdin")->required();
  realize->add_option("--kind", kind, "pseudo or ultra")
      ->default_val("pseudo")
      ->check(CLI::IsMember({"pseudo", "ultra"}));
  add_common(realize);

  auto* compare = app.add_subcommand("compare", "Search for a similarity between two mappings");
  compare->add_option("path_a", path, "First mapping file")->required();
  compare->add_option("path_b", path_b, "Second mapping file")->required();
  compare->add_option("--mode", mode, "comb or weak")->default_val("comb")->check(CLI::IsMember({"comb", "weak"}));
  compare->add_option("--budget", budget, "Search node cap (default from ULTRASIM_BUDGET)");
  add_common(compare);

  auto* minimal = app.add_subcommand("minimal-order", "Minimal order on the values, or a u-cycle");
  minimal->add_option("path", path, "Mapping file, or - for stdin")->required();
  add_common(minimal);

  auto* validate = app.add_subcommand("validate-q", "Check against the poset section of the file");
  validate->add_option("path", path, "Mapping file with a poset section")->required();
  validate->add_option("--kind", kind, "pseudo, ultra or distance")
      ->default_val("pseudo")
      ->check(CLI::IsMember({"pseudo", "ultra", "distance"}));
  add_common(validate);

  auto* chain = app.add_subcommand("chain", "Canonical ultrametric on the chain 0 < 1 < ... < k-1");
  chain->add_option("k", chain_k, "Chain length")->required()->check(CLI::PositiveNumber);
  add_common(chain);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitYes : kExitInputError;
  }

  auto fail_input = [&](const std::string& msg) {
    err << "error: " << msg << '\n';
    emit(out, Json{{"error", msg}}, common.pretty);
    return kExitInputError;
  };

  try {
    if (compare->parsed()) {
      common.max_n = max_n.value_or(kDefaultCompareMaxN);
      const std::size_t cap = budget ? *budget : default_budget();
      const MappingDocument a = load(path, in, common);
      const MappingDocument b = load(path_b, in, common);
      SimilarityResult res;
      if (mode == "weak") {
        auto order = [](const MappingDocument& d, const char* which) {
          if (d.poset) return *d.poset;
          auto mo = minimal_order(d.mapping);
          if (!std::holds_alternative<FinitePoset>(mo))
            throw InputError(std::string("mapping ") + which + " has no poset section and no minimal order");
          return std::get<FinitePoset>(std::move(mo));
        };
        res = weakly_similar(a.mapping, order(a, "A"), b.mapping, order(b, "B"), cap);
      } else {
        res = combinatorially_similar(a.mapping, b.mapping, cap);
      }
      Json j{{"command", "compare"}, {"mode", mode}, {"nodes", res.nodes}};
      switch (res.status) {
        case SearchStatus::Similar:
          j["verdict"] = "yes";
          j["witness"] = witness_to_json(*res.witness, a.mapping, b.mapping);
          emit(out, j, common.pretty);
          return kExitYes;
        case SearchStatus::NotSimilar:
          j["verdict"] = "no";
          emit(out, j, common.pretty);
          return kExitNo;
        case SearchStatus::BudgetExceeded:
          j["verdict"] = "budget_exceeded";
          emit(out, j, common.pretty);
          return kExitBudget;
      }
    }

    common.max_n = max_n.value_or(kDefaultMaxN);

    if (chain->parsed()) {
      if (chain_k > common.max_n)
        throw InputError("chain length above the limit of " + std::to_string(common.max_n));
      std::vector<std::string> labels;
      for (std::size_t i = 0; i < chain_k; ++i) labels.push_back(std::to_string(i));
      const ChainUltrametric c = canonical_chain_ultrametric(labels);
      emit(out, mapping_to_json(c.mapping, c.order), common.pretty);
      return kExitYes;
    }

    const MappingDocument doc = load(path, in, common);
    const FiniteMapping& m = doc.mapping;

    if (analyze->parsed()) {
      const AnalysisReport rep = ultrasim::analyze(m, AnalysisOptions{full});
      Json j{{"command", "analyze"}, {"verdict", rep.pseudo_yes() ? "yes" : "no"}, {"report", report_json(rep, m)}};
      emit(out, j, common.pretty);
      return rep.pseudo_yes() ? kExitYes : kExitNo;
    }
    if (realize->parsed()) {
      const RealizeResult r = kind == "ultra" ? realize_ultrametric(m) : realize_pseudoultrametric(m);
      Json j{{"command", "realize"}, {"kind", kind}};
      j.update(verdict_json(r, m));
      emit(out, j, common.pretty);
      return std::holds_alternative<Realization>(r) ? kExitYes : kExitNo;
    }
    if (minimal->parsed()) {
      if (auto a = find_asymmetry(m)) {
        Json j{{"command", "minimal-order"}, {"verdict", "no"}, {"certificate", certificate_to_json(*a, m)}};
        emit(out, j, common.pretty);
        return kExitNo;
      }
      const auto mo = minimal_order(m);
      Json j{{"command", "minimal-order"}};
      j.update(minimal_json(mo, m));
      emit(out, j, common.pretty);
      return std::holds_alternative<FinitePoset>(mo) ? kExitYes : kExitNo;
    }
    if (validate->parsed()) {
      if (!doc.poset) throw InputError("validate-q needs a poset section in the input");
      const FinitePoset& q = *doc.poset;
      const ValueMap embed = embed_by_label(m, q);
      std::optional<QViolation> v;
      if (kind == "pseudo")
        v = q_pseudoultrametric_violation(m, q, embed);
      else if (kind == "ultra")
        v = q_ultrametric_violation(m, q, embed);
      else
        v = ultrametric_distance_violation(m, q, embed);
      Json j{{"command", "validate-q"}, {"kind", kind}, {"verdict", v ? "no" : "yes"}};
      if (v) j["violation"] = violation_json(*v, m, q);
      emit(out, j, common.pretty);
      return v ? kExitNo : kExitYes;
    }
  } catch (const InputError& e) {
    return fail_input(e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail_input(std::string("bad JSON field: ") + e.what());
  }
  return kExitInputError;
}

}  // namespace ultrasim
