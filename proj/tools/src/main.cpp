#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cotlab/error.hpp"
#include "cotlab/universe.hpp"
#include "scenario.hpp"
#include "witness.hpp"

namespace fs = std::filesystem;
using cotlab::cli::Json;

namespace {

constexpr int kInputError = 3;

struct Common {
  std::optional<std::size_t> max_dim, rep_max_dim, n_max, budget;
  std::optional<std::string> cache_dir;
  std::string out;
  bool json = false;
  bool no_timestamp = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--max-dim", c.max_dim, "Largest total dimension enumerated in value universes");
  cmd->add_option("--n-max", c.n_max, "Largest n certified for extendability and lifts");
  cmd->add_option("--budget", c.budget, "Total-dimension budget for approximation searches");
  cmd->add_option("--cache-dir", c.cache_dir, "Universe cache directory (\"\" disables caching)");
  cmd->add_option("--out", c.out, "Write the JSON report here");
  cmd->add_flag("--json", c.json, "Print the JSON report instead of the summary");
  cmd->add_flag("--no-timestamp", c.no_timestamp, "Leave the timestamp out of the report");
}

cotlab::cli::RunOptions run_options(const Common& c, const fs::path& base) {
  cotlab::cli::RunOptions o;
  o.max_dim = c.max_dim;
  o.rep_max_dim = c.rep_max_dim;
  o.n_max = c.n_max;
  o.budget = c.budget;
  o.cache_dir = c.cache_dir;
  o.base_dir = base;
  o.timestamp = !c.no_timestamp;
  return o;
}

int run(const Json& scenario, const Common& c, const fs::path& base) {
  const cotlab::cli::RunOutcome out = cotlab::cli::run_scenario(scenario, run_options(c, base));
  if (c.json) {
    std::cout << out.report.dump(2) << '\n';
  } else {
    for (const std::string& line : out.summary) std::cout << line << '\n';
    std::cout << "verdict: " << out.report["verdict"].get<std::string>() << '\n';
  }
  if (!c.out.empty()) cotlab::cli::write_json_file(c.out, out.report);
  return out.exit_code;
}

// A file holding either an algebra or a saved universe.
Json universe_def(const std::string& file) {
  const fs::path p = fs::absolute(file);
  const Json j = cotlab::cli::read_json_file(p);
  if (j.is_object() && j.contains("indecomposables")) return Json{{"universe_file", p.string()}};
  return Json{{"algebra", j}};
}

Json scenario_skeleton(const std::string& file) {
  Json s;
  s["schema"] = cotlab::cli::kScenarioSchema;
  s["universes"] = Json{{"A", universe_def(file)}};
  s["classes"] = Json::object();
  s["checks"] = Json::array();
  return s;
}

void add_class(Json& s, const std::string& name, const std::string& pred, const std::string& universe = "A") {
  s["classes"][name] = Json{{"universe", universe}, {"predicate", pred}};
}

Json triple_scenario(const std::string& file, const std::string& c, const std::string& w, const std::string& f) {
  Json s = scenario_skeleton(file);
  add_class(s, "c", c);
  add_class(s, "w", w);
  add_class(s, "f", f);
  s["triples"] = Json{{"t", Json{{"c", "c"}, {"w", "w"}, {"f", "f"}}}};
  return s;
}

Json read_shape(const std::string& arg) {
  if (!arg.empty() && arg.front() == '{') {
    try {
      return Json::parse(arg);
    } catch (const Json::parse_error& e) {
      throw cotlab::ParseError(std::string("shape: ") + e.what());
    }
  }
  if (arg == "A2") {
    return Json{{"vertices", {"p", "q"}}, {"arrows", Json::array({Json{{"id", "a"}, {"src", "p"}, {"tgt", "q"}}})}};
  }
  return cotlab::cli::read_json_file(arg);
}

int verify_witness_file(const std::string& file) {
  const cotlab::cli::BatchCheck r = cotlab::cli::verify_document(cotlab::cli::read_json_file(file));
  for (const std::string& f : r.failures) std::cout << "FAIL  " << f << '\n';
  std::cout << r.checked << " witnesses checked, " << r.failures.size() << " rejected\n";
  return r.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cotorsion pairs, Hovey triples and their lifts over finite-dimensional algebras", "cotlab"};
  app.set_version_flag("--version", cotlab::cli::tool_version());
  app.require_subcommand(0, 1);

  std::string file, shape, pred = "all", x = "all", y = "all", c_pred = "all", w_pred = "all", f_pred = "all";
  std::string side = "left", top_witness;
  Common common;
  std::function<int()> action;

  app.add_option("--verify-witness", top_witness, "Re-check every witness in a report or witness file");

  auto* algebra = app.add_subcommand("algebra", "Bound quiver algebras")->require_subcommand(1);
  auto* algebra_check = algebra->add_subcommand("check", "Parse an algebra and certify admissibility");
  algebra_check->add_option("FILE", file, "Algebra JSON")->required();
  add_common(algebra_check, common);
  algebra_check->callback([&] {
    action = [&] {
      Json s = scenario_skeleton(file);
      s["checks"].push_back(Json{{"check", "algebra"}, {"universe", "A"}});
      return run(s, common, fs::current_path());
    };
  });

  auto* uni = app.add_subcommand("universe", "Universes of indecomposables")->require_subcommand(1);
  auto* uni_enum = uni->add_subcommand("enumerate", "Enumerate indecomposables up to --max-dim");
  uni_enum->add_option("FILE", file, "Algebra JSON")->required();
  add_common(uni_enum, common);
  uni_enum->callback([&] {
    action = [&] {
      const auto alg = cotlab::bqa::parse_algebra(cotlab::cli::read_json_file(file));
      std::size_t cap = common.max_dim.value_or(0);
      if (cap == 0) {
        for (std::size_t v = 0; v < alg->num_vertices(); ++v) {
          cap = std::max({cap, cotlab::homalg::indecomposable_projective(alg, v).total_dim(),
                          cotlab::homalg::indecomposable_injective(alg, v).total_dim()});
        }
      }
      cotlab::universe::EnumerateOptions eo;
      eo.cache_dir = common.cache_dir;
      const auto u = cotlab::universe::Universe::enumerate(alg, cap, eo);
      if (common.json) {
        std::cout << u->to_json().dump(2) << '\n';
      } else {
        std::cout << u->size() << " indecomposables up to dimension " << cap << ", fingerprint " << u->fingerprint()
                  << '\n';
        for (std::size_t i = 0; i < u->size(); ++i) std::cout << "  " << u->id(i) << "  " << u->label(i) << '\n';
      }
      if (!common.out.empty()) cotlab::cli::write_json_file(common.out, u->to_json());
      return 0;
    };
  });

  auto* cls = app.add_subcommand("class", "Classes of modules")->require_subcommand(1);
  auto* cls_show = cls->add_subcommand("show", "List the members of a class predicate");
  cls_show->add_option("FILE", file, "Algebra or universe JSON")->required();
  cls_show->add_option("--class", pred, "Class predicate");
  add_common(cls_show, common);
  cls_show->callback([&] {
    action = [&] {
      Json s = scenario_skeleton(file);
      add_class(s, "k", pred);
      s["checks"].push_back(Json{{"check", "class"}, {"class", "k"}});
      return run(s, common, fs::current_path());
    };
  });

  auto* cot = app.add_subcommand("cotorsion", "Cotorsion pairs")->require_subcommand(1);
  auto* cot_check = cot->add_subcommand("check", "Pair, completeness, heredity and extendability of (X, Y)");
  cot_check->add_option("FILE", file, "Algebra or universe JSON")->required();
  cot_check->add_option("--x", x, "Class predicate for X");
  cot_check->add_option("--y", y, "Class predicate for Y");
  cot_check->add_option("--side", side, "left or right")->check(CLI::IsMember({"left", "right"}));
  add_common(cot_check, common);
  cot_check->callback([&] {
    action = [&] {
      Json s = scenario_skeleton(file);
      add_class(s, "x", x);
      add_class(s, "y", y);
      s["checks"].push_back(Json{{"check", "cotorsion-pair"}, {"x", "x"}, {"y", "y"}});
      s["checks"].push_back(Json{{"check", "extendable"}, {"x", "x"}, {"y", "y"}, {"side", side}});
      s["checks"].push_back(Json{{"check", "dimension-coherence"}, {"x", "x"}, {"y", "y"}, {"side", side}});
      return run(s, common, fs::current_path());
    };
  });

  auto* hov = app.add_subcommand("hovey", "Hovey triples")->require_subcommand(1);
  auto triple_cmd = [&](const std::string& name, const std::string& help, auto make_checks) {
    auto* cmd = hov->add_subcommand(name, help);
    cmd->add_option("FILE", file, "Algebra or universe JSON")->required();
    cmd->add_option("--c", c_pred, "Class predicate for C");
    cmd->add_option("--w", w_pred, "Class predicate for W");
    cmd->add_option("--f", f_pred, "Class predicate for F");
    cmd->add_option("--side", side, "left or right")->check(CLI::IsMember({"left", "right"}));
    add_common(cmd, common);
    cmd->callback([&, make_checks] {
      action = [&, make_checks] {
        Json s = triple_scenario(file, c_pred, w_pred, f_pred);
        s["checks"] = make_checks();
        return run(s, common, fs::current_path());
      };
    });
  };
  triple_cmd("verify", "Verify (C, W, F) as a Hovey triple", [&] {
    return Json::array({Json{{"check", "hovey-verify"}, {"triple", "t"}}});
  });
  triple_cmd("lift", "Lift the triple to levels n <= --n-max", [&] {
    return Json::array({Json{{"check", "hovey-verify"}, {"triple", "t"}},
                        Json{{"check", "sstype"}, {"triple", "t"}, {"side", side}},
                        Json{{"check", "cor-identity"}, {"triple", "t"}, {"side", side}},
                        Json{{"check", "hovey-lift"}, {"triple", "t"}, {"side", side}}});
  });
  triple_cmd("tower", "Compare Frobenius cores along the tower of lifts", [&] {
    return Json::array({Json{{"check", "hovey-verify"}, {"triple", "t"}},
                        Json{{"check", "tower"}, {"triple", "t"}, {"side", side}}});
  });

  auto* quiver = app.add_subcommand("quiver", "Representations of shape quivers")->require_subcommand(1);
  auto* quiver_lift = quiver->add_subcommand("lift", "Lift a triple to representations along both routes");
  quiver_lift->add_option("FILE", file, "Algebra or universe JSON for the values")->required();
  quiver_lift->add_option("--shape", shape, "Shape quiver: JSON file, inline JSON or A2")->required();
  quiver_lift->add_option("--c", c_pred, "Class predicate for C");
  quiver_lift->add_option("--w", w_pred, "Class predicate for W");
  quiver_lift->add_option("--f", f_pred, "Class predicate for F");
  quiver_lift->add_option("--side", side, "left or right")->check(CLI::IsMember({"left", "right"}));
  quiver_lift->add_option("--rep-max-dim", common.rep_max_dim, "Largest total dimension of representations");
  add_common(quiver_lift, common);
  quiver_lift->callback([&] {
    action = [&] {
      Json s = triple_scenario(file, c_pred, w_pred, f_pred);
      s["universes"]["R"] = Json{{"shape", read_shape(shape)}, {"value", "A"}};
      const bool left = side == "left";
      s["checks"] = Json::array({
          Json{{"check", "hovey-verify"}, {"triple", "t"}},
          Json{{"check", "quiver-pair"}, {"universe", "R"}, {"x", left ? "c" : "w"}, {"y", left ? "w" : "f"},
               {"side", side}},
          Json{{"check", "quiver-lift"}, {"universe", "R"}, {"triple", "t"}, {"side", side}},
      });
      return run(s, common, fs::current_path());
    };
  });

  auto* scen = app.add_subcommand("scenario", "Scenario files")->require_subcommand(1);
  auto* scen_run = scen->add_subcommand("run", "Run every check of a scenario");
  scen_run->add_option("FILE", file, "Scenario JSON")->required();
  scen_run->add_option("--rep-max-dim", common.rep_max_dim, "Largest total dimension of representations");
  add_common(scen_run, common);
  scen_run->callback([&] {
    action = [&] {
      const fs::path p = fs::absolute(file);
      return run(cotlab::cli::read_json_file(p), common, p.parent_path());
    };
  });

  auto* verify = app.add_subcommand("verify-witness", "Re-check every witness in a report or witness file");
  verify->add_option("FILE", file, "Report or witness JSON")->required();
  verify->callback([&] { action = [&] { return verify_witness_file(file); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  try {
    if (!top_witness.empty()) return verify_witness_file(top_witness);
    if (!action) {
      std::cout << app.help();
      return kInputError;
    }
    return action();
  } catch (const cotlab::Error& e) {
    std::cerr << "cotlab: " << e.what() << '\n';
    return kInputError;
  } catch (const Json::exception& e) {
    std::cerr << "cotlab: malformed JSON: " << e.what() << '\n';
    return kInputError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "cotlab: " << e.what() << '\n';
    return kInputError;
  }
}
