// Command-line front end: monitoring, synthesis dialogues, the paraphrase
// experiment, training, rollouts and the HTTP service.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "stlwb/dialogue/oracle.hpp"
#include "stlwb/interfaces/experiment.hpp"
#include "stlwb/interfaces/service.hpp"
#include "stlwb/rl/qlearning.hpp"
#include "stlwb/stl/monitor.hpp"
#include "stlwb/stl/parser.hpp"
#include "stlwb/world/demo.hpp"

using namespace stlwb;

namespace {

constexpr int kExitError = 1;
constexpr int kExitParse = 2;
constexpr int kExitNoFormula = 3;

struct Common {
  std::string data_dir;
  std::string grid_path;
  std::string lexicon_path;
  std::uint64_t seed = 7;
};

std::string default_data_dir() {
  if (const char* env = std::getenv("STLWB_DATA_DIR"); env && *env) return env;
  return STLWB_DEFAULT_DATA_DIR;
}

world::GridSpec load_grid(const Common& c) {
  return c.grid_path.empty() ? world::default_grid() : world::load_grid(c.grid_path);
}

dialogue::NlBundle load_bundle(const Common& c) {
  auto b = dialogue::NlBundle::load(c.data_dir);
  if (!c.lexicon_path.empty()) b.lexicon = nl::PhraseLexicon::load(c.lexicon_path);
  return b;
}

std::string format(const stl::Formula& f) { return stl::format_formula(f); }

// A trace file is either a JSON-lines trace or a demonstration fixture, which
// is replayed on the grid.
stl::Trace load_trace(const std::string& path, const world::GridSpec& g) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception&) {
    return stl::read_trace_file(path);
  }
  if (j.is_object() && j.contains("actions")) return world::demo_to_trace(world::fixture_from_json(j, g).demo, g);
  return stl::read_trace_file(path);
}

// Asks on the console.
class ConsoleUser : public dialogue::Answerer {
 public:
  ConsoleUser(const world::GridSpec& g) : grid_(g) {}

  dialogue::Answer answer(const dialogue::Question& q) override {
    for (;;) {
      std::cout << "? " << q.prompt << "\n> " << std::flush;
      std::string line;
      if (!std::getline(std::cin, line)) return dialogue::Answer::not_applicable(q.id);
      try {
        auto a = dialogue::parse_answer(q, line);
        dialogue::check_answer(q, a);
        return a;
      } catch (const dialogue::DialogueError& e) {
        std::cout << "  " << e.what() << "\n";
      }
    }
  }

  bool label(const world::Demonstration& d) override {
    std::cout << "? Is this a correct way to do the task? ";
    for (auto a : d.actions()) std::cout << world::action_name(a) << ' ';
    std::cout << "(yes/no)\n> " << std::flush;
    std::string line;
    if (!std::getline(std::cin, line)) return false;
    return !line.empty() && (line[0] == 'y' || line[0] == 'Y');
  }

 private:
  const world::GridSpec& grid_;
};

void print_metrics(const dialogue::Session& s) {
  auto m = s.metrics();
  std::cout << "UIs=" << m.user_interactions << " EFs=" << m.enumerated_formulas << " runtime=" << std::fixed
            << std::setprecision(3) << m.runtime_seconds << "s" << std::defaultfloat;
  if (m.success) std::cout << " success=" << (*m.success ? "true" : "false");
  std::cout << "\n";
}

std::optional<stl::Formula> formula_header(std::istream& in) {
  std::string line;
  auto pos = in.tellg();
  while (std::getline(in, line)) {
    if (line.rfind("# formula ", 0) == 0) return stl::parse_formula(line.substr(10), world::world_signature());
    if (line.empty() || line[0] != '#') break;
  }
  in.clear();
  in.seekg(pos);
  return std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Specify robot tasks in English, get temporal-logic formulas, and train policies for them."};
  app.require_subcommand(1);
  Common c;
  c.data_dir = default_data_dir();
  app.add_option("--data", c.data_dir, "Data directory (default: $STLWB_DATA_DIR)");
  app.add_option("--grid", c.grid_path, "Grid file (default: built-in layout)");
  app.add_option("--lexicon", c.lexicon_path, "Phrase lexicon TSV");
  app.add_option("--seed", c.seed, "Random seed");

  std::string formula_text, trace_path;
  auto* check = app.add_subcommand("check", "Monitor a formula on a trace or demonstration file");
  check->add_option("formula", formula_text)->required();
  check->add_option("trace", trace_path)->required();

  std::string nl_text, oracle_text;
  std::vector<std::string> demo_paths;
  double epsilon = 0.3;
  bool no_delays = false, transcript = false;
  auto* synth = app.add_subcommand("synthesize", "Turn an English task plus demonstrations into a formula");
  synth->add_option("nl", nl_text)->required();
  synth->add_option("--demos", demo_paths, "Demonstration fixture files")->required();
  synth->add_option("--oracle", oracle_text, "Answer questions automatically from this formula");
  synth->add_option("--epsilon", epsilon, "Paraphrase threshold for the lexicon score");
  synth->add_flag("--no-delays", no_delays, "Skip delayed-demonstration labels");
  synth->add_flag("--transcript", transcript, "Print the questions and answers");

  std::string suite_path, paraphrase_path, out_path;
  auto* exper = app.add_subcommand("experiment", "Run the paraphrase suite with the oracle and write a CSV");
  exper->add_option("suite", suite_path, "Suite file (default: <data>/suite.json)");
  exper->add_option("--paraphrases", paraphrase_path, "Paraphrase corpus (default: <data>/paraphrases.json)");
  exper->add_option("--out", out_path, "CSV output (default: stdout)");
  exper->add_option("--epsilon", epsilon, "Paraphrase threshold for the lexicon score");

  std::string curve_path;
  std::size_t episodes = rl::Hyperparams{}.episodes;
  auto* train = app.add_subcommand("train", "Learn a policy for a formula");
  train->add_option("formula", formula_text)->required();
  train->add_option("--out", out_path, "Policy file");
  train->add_option("--curve", curve_path, "Learning-curve CSV");
  train->add_option("--episodes", episodes, "Episode budget");

  std::string policy_path;
  auto* rollout = app.add_subcommand("rollout", "Greedy rollout of a trained policy");
  rollout->add_option("policy", policy_path)->required();
  rollout->add_option("--formula", formula_text, "Formula (default: the policy file header)");

  std::string host = "127.0.0.1", store_dir = "sessions";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--host", host);
  serve->add_option("--port", port);
  serve->add_option("--store", store_dir, "Session directory");

  std::string fixture_path;
  auto* demo = app.add_subcommand("demo", "Print the trace of a demonstration fixture");
  demo->add_option("fixture", fixture_path)->required();
  demo->add_option("--out", out_path, "Trace output (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    const world::GridSpec grid = load_grid(c);

    if (*check) {
      auto f = stl::parse_formula(formula_text, world::world_signature());
      auto t = load_trace(trace_path, grid);
      std::cout << "sat=" << (stl::satisfies(f, t, 0) ? "true" : "false") << " robustness=" << stl::robustness(f, t, 0)
                << "\n";
      return 0;
    }

    if (*synth) {
      auto bundle = load_bundle(c);
      dialogue::PipelineConfig cfg;
      cfg.epsilon = epsilon;
      cfg.delay_variants = !no_delays;
      std::vector<world::LabeledDemo> demos;
      for (const auto& p : demo_paths) demos.push_back(world::load_fixture(p, grid));
      std::optional<stl::Formula> truth;
      if (!oracle_text.empty()) truth = stl::parse_formula(oracle_text, world::world_signature());
      std::unique_ptr<dialogue::Answerer> user;
      if (truth) user = std::make_unique<dialogue::OracleUser>(*truth, bundle.lexicon, grid, cfg.probe_horizon);
      else user = std::make_unique<ConsoleUser>(grid);
      auto out = dialogue::run_pipeline(nl_text, demos, *user, bundle.resources(grid), cfg, truth);
      if (transcript)
        for (const auto& ex : out.session.transcript())
          std::cout << "Q: " << ex.question.prompt << "\nA: " << ex.answer.describe() << "\n";
      if (!out.formula) {
        std::cout << "no formula: " << out.session.note() << "\n";
        print_metrics(out.session);
        return kExitNoFormula;
      }
      std::cout << format(*out.formula) << "\n";
      print_metrics(out.session);
      return 0;
    }

    if (*exper) {
      auto bundle = load_bundle(c);
      if (suite_path.empty()) suite_path = c.data_dir + "/suite.json";
      if (paraphrase_path.empty()) paraphrase_path = c.data_dir + "/paraphrases.json";
      dialogue::PipelineConfig cfg;
      cfg.epsilon = epsilon;
      auto results = interfaces::run_experiment_suite(interfaces::load_suite(suite_path),
                                                      interfaces::load_paraphrases(paraphrase_path),
                                                      bundle.resources(grid), c.data_dir, cfg);
      if (out_path.empty()) {
        interfaces::write_csv(std::cout, results);
      } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
        interfaces::write_csv(out, results);
      }
      std::cerr << "overall success rate " << interfaces::overall_success(results) << "\n";
      return 0;
    }

    if (*train) {
      auto f = stl::parse_formula(formula_text, world::world_signature());
      rl::Hyperparams h;
      h.seed = c.seed;
      h.episodes = episodes;
      auto r = rl::train(grid, grid.start, f, h);
      auto roll = rl::evaluate(r.policy, grid, grid.start, f, h.max_steps);
      if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
        out << "# formula " << format(f) << "\n";
        rl::write_policy(out, r.policy);
      }
      if (!curve_path.empty()) {
        std::ofstream out(curve_path);
        if (!out) throw std::runtime_error("cannot write '" + curve_path + "'");
        rl::write_curve_csv(out, r.curve);
      }
      std::size_t goals = 0;
      for (const auto& p : r.curve) goals += p.reached_goal;
      std::cout << "episodes=" << r.curve.size() << " goals=" << goals << " states=" << r.policy.table.size()
                << " satisfied=" << (roll.satisfied ? "true" : "false") << "\n";
      for (auto a : roll.actions) std::cout << world::action_name(a) << ' ';
      std::cout << "\n";
      return 0;
    }

    if (*rollout) {
      std::ifstream in(policy_path);
      if (!in) throw std::runtime_error("cannot open '" + policy_path + "'");
      auto header = formula_header(in);
      std::optional<stl::Formula> f;
      if (!formula_text.empty()) f = stl::parse_formula(formula_text, world::world_signature());
      else f = header;
      if (!f) throw std::runtime_error("no formula given and none in the policy file");
      auto q = rl::read_policy(in, rl::StateProjection(grid, *f));
      auto roll = rl::evaluate(q, grid, grid.start, *f, rl::Hyperparams{}.max_steps);
      for (std::size_t i = 0; i < roll.actions.size(); ++i)
        std::cout << i << ' ' << world::action_name(roll.actions[i]) << ' ' << world::to_json(roll.states[i + 1]).dump()
                  << "\n";
      std::cout << "satisfied=" << (roll.satisfied ? "true" : "false") << "\n";
      return roll.satisfied ? 0 : kExitNoFormula;
    }

    if (*serve) {
      auto bundle = load_bundle(c);
      interfaces::SessionStore store(bundle.resources(grid), store_dir);
      for (const auto& e : store.load_errors()) std::cerr << "skipped session file " << e << "\n";
      std::cerr << "listening on http://" << host << ":" << port << "\n";
      if (!interfaces::serve(store, host, port)) {
        std::cerr << "cannot listen on " << host << ":" << port << "\n";
        return kExitError;
      }
      return 0;
    }

    if (*demo) {
      auto d = world::load_fixture(fixture_path, grid);
      auto t = world::demo_to_trace(d.demo, grid);
      if (out_path.empty()) {
        stl::write_trace(std::cout, t);
      } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
        stl::write_trace(out, t);
      }
      return 0;
    }
  } catch (const stl::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return 0;
}
