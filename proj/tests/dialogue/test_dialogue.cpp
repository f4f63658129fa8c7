#include <doctest.h>

#include <fstream>

#include "stlwb/dialogue/oracle.hpp"
#include "stlwb/stl/monitor.hpp"
#include "stlwb/stl/parser.hpp"

using namespace stlwb;
using namespace stlwb::dialogue;
using stl::parse_formula;

namespace {

const std::string kData = STLWB_DATA_DIR;

const NlBundle& bundle() {
  static const NlBundle b = NlBundle::load(kData);
  return b;
}

Resources res() { return bundle().resources(world::default_grid()); }

world::LabeledDemo fixture(const std::string& name) {
  return world::load_fixture(kData + "/fixtures/" + name + ".json", world::default_grid());
}

PipelineOutcome run(const std::string& nl, const std::vector<std::string>& demo_names, const std::string& truth) {
  std::vector<world::LabeledDemo> demos;
  for (const auto& n : demo_names) demos.push_back(fixture(n));
  OracleUser oracle(parse_formula(truth), bundle().lexicon, world::default_grid());
  return run_pipeline(nl, demos, oracle, res(), {}, parse_formula(truth));
}

const std::string kPhi3 = "F[0,15]((lampOn & F[0,10](itemOnRobot(purpleCube))))";

}  // namespace

TEST_CASE("running example end to end") {
  auto out = run("turn on the lamp and pick up the cube", {"running_example"}, kPhi3);
  const Session& s = out.session;
  CHECK(s.bounds() == pstl::SynthesisBounds{3, 5});
  REQUIRE(out.formula);
  CHECK(match(*out.formula, parse_formula(kPhi3)));
  CHECK(s.metrics().user_interactions == 3);
  CHECK(s.metrics().enumerated_formulas == 14);
  CHECK(*s.metrics().success);
  for (const auto& ex : s.transcript()) MESSAGE(ex.question.prompt << " -> " << ex.answer.describe());
}

TEST_CASE("the curated sentences with the oracle") {
  std::ifstream in(kData + "/suite.json");
  auto suite = nlohmann::json::parse(in);
  for (const auto& row : suite["rows"]) {
    const std::string nl = row["nl"];
    CAPTURE(nl);
    auto out = run(nl, row["demos"].get<std::vector<std::string>>(), row["groundTruth"]);
    MESSAGE(nl << " => " << (out.formula ? stl::format_formula(*out.formula) : "none") << " UIs "
               << out.session.metrics().user_interactions << " EFs " << out.session.metrics().enumerated_formulas
               << " " << out.session.note());
    CHECK(*out.session.metrics().success);
    CHECK(std::abs(static_cast<double>(out.session.metrics().user_interactions) - row["reference"]["uis"].get<double>()) <= 1.0);
  }
}

TEST_CASE("questions planned for the running example") {
  Session s(res());
  s.add_demo(fixture("running_example"));
  s.set_task("turn on the lamp and pick up the cube");
  CHECK(s.status() == Status::AwaitingAnswer);
  const auto& plan = s.pending_questions();
  REQUIRE(plan.size() == 3);
  CHECK(plan[0].kind == QuestionKind::TaskOrder);
  CHECK(plan[1].id == "interval:1");
  CHECK(plan[2].id == "interval:2");
  CHECK(plan_questions(s).size() == 3);
}

TEST_CASE("answering a question twice is rejected") {
  Session s(res());
  s.add_demo(fixture("running_example"));
  s.set_task("turn on the lamp and pick up the cube");
  const Question q = s.pending_questions().front();
  s.answer(Answer::yes(q.id, true));
  CHECK_THROWS_AS(s.answer(Answer::yes(q.id, true)), NotPendingError);
  CHECK_THROWS_AS(s.answer(Answer::yes("order:nothing:here", true)), NotPendingError);
  CHECK_THROWS_AS(s.set_task("again"), NotPendingError);
}

TEST_CASE("badly shaped answers are rejected") {
  Session s(res());
  s.add_demo(fixture("running_example"));
  s.set_task("turn on the lamp and pick up the cube");
  const Question q = s.pending_questions().front();
  CHECK_THROWS_AS(s.answer(Answer::interval(q.id, 0, 5)), DialogueError);
  CHECK(s.transcript().empty());
}

TEST_CASE("sessions are deterministic and replay from their document") {
  auto a = run("turn on the lamp and pick up the cube", {"running_example"}, kPhi3);
  auto b = run("turn on the lamp and pick up the cube", {"running_example"}, kPhi3);
  REQUIRE(a.formula);
  REQUIRE(b.formula);
  CHECK(stl::format_formula(*a.formula) == stl::format_formula(*b.formula));
  CHECK(a.session.document()["log"] == b.session.document()["log"]);

  auto doc = a.session.document();
  Session r = Session::replay(res(), doc);
  CHECK(r.version() == a.session.version());
  REQUIRE(r.result());
  CHECK(stl::format_formula(*r.result()) == stl::format_formula(*a.formula));
  REQUIRE(r.transcript().size() == a.session.transcript().size());
  for (std::size_t i = 0; i < r.transcript().size(); ++i) {
    CHECK(r.transcript()[i].question.id == a.session.transcript()[i].question.id);
    CHECK(r.transcript()[i].answer.describe() == a.session.transcript()[i].answer.describe());
  }
  CHECK(r.document() == doc);
}

TEST_CASE("a task nothing in the lexicon recognizes ends without a formula") {
  auto out = run("flarb the zibble", {"pick_purple"}, "F[0,15](itemOnRobot(purpleCube))");
  CHECK_FALSE(out.formula);
  REQUIRE_FALSE(out.session.transcript().empty());
  CHECK(out.session.transcript().front().question.kind == QuestionKind::Paraphrase);
  CHECK(out.session.status() == Status::Done);
  CHECK_FALSE(*out.session.metrics().success);
}

TEST_CASE("a single-atom task asks one question") {
  auto out = run("pick up the purple cube", {"pick_purple"}, "F[0,15](itemOnRobot(purpleCube))");
  REQUIRE(out.formula);
  CHECK(stl::format_formula(*out.formula) == "F[0,15](itemOnRobot(purpleCube))");
  CHECK(out.session.metrics().user_interactions == 1);
}

TEST_CASE("oracle answers") {
  OracleUser o(parse_formula(kPhi3), bundle().lexicon, world::default_grid());
  auto order = o.answer(Question::task_order("lampOn", "turn on the lamp", "itemOnRobot", "pick up the cube"));
  CHECK(order.kind == AnswerKind::Yes);
  auto i1 = o.answer(Question::op_param(1));
  CHECK(i1.kind == AnswerKind::Interval);
  CHECK(i1.lo == 0);
  CHECK(i1.hi == 15);
  auto i2 = o.answer(Question::op_param(2));
  CHECK(i2.hi == 10);
  CHECK(o.answer(Question::op_param(3)).kind == AnswerKind::NotApplicable);
  auto item = o.answer(Question::atom_param("itemOnRobot", "item", 0, stl::SlotKind::ItemName));
  CHECK(item.kind == AnswerKind::Value);
  CHECK(std::get<std::string>(item.value) == "purpleCube");
  CHECK_THROWS_AS(o.answer(Question::atom_param("robotAt", "x", 0, stl::SlotKind::Coordinate)), OracleError);
  CHECK(o.label(fixture("running_example").demo));
  CHECK_FALSE(o.label(fixture("unsafe_route").demo));
  CHECK_THROWS_AS(OracleUser(parse_formula("F[0,?t1](lampOn)"), bundle().lexicon, world::default_grid()),
                  OracleError);
}

TEST_CASE("selection returns a consistent candidate or nothing") {
  auto& g = world::default_grid();
  auto pos = world::demo_to_trace(fixture("running_example").demo, g);
  auto neg = world::demo_to_trace(fixture("unsafe_route").demo, g);
  CHECK_FALSE(select_best_stl({}, {}, {pos}, {neg}));

  auto f = parse_formula(kPhi3);
  CHECK(consistent(f, {pos}, {}));
  CHECK_FALSE(consistent(f, {pos}, {pos}));
  CHECK(consistent(parse_formula("F[0,15](lampOn)"), {pos}, {}));
}

TEST_CASE("match ignores the order of conjuncts and disjuncts only") {
  auto a = parse_formula("F[0,5]((lampOn & (fireOn | doorOpen)))");
  auto b = parse_formula("F[0,5](((doorOpen | fireOn) & lampOn))");
  CHECK(match(a, b));
  CHECK(match(b, a));
  CHECK(match(a, a));
  CHECK_FALSE(match(parse_formula("(lampOn U[0,3] fireOn)"), parse_formula("(fireOn U[0,3] lampOn)")));
  CHECK_FALSE(match(parse_formula("F[0,5](lampOn)"), parse_formula("F[0,6](lampOn)")));
  CHECK(stl::format_formula(normalize(a)) == stl::format_formula(normalize(b)));
}

TEST_CASE("free-text answers") {
  auto order = Question::task_order("lampOn", "turn on the lamp", "fireOff", "put out the fire");
  CHECK(parse_answer(order, "Yes").kind == AnswerKind::Yes);
  CHECK(parse_answer(order, "nope").kind == AnswerKind::No);
  CHECK(parse_answer(order, "n/a").kind == AnswerKind::NotApplicable);
  CHECK_THROWS_AS(parse_answer(order, "maybe"), DialogueError);

  auto op = Question::op_param(1);
  auto w = parse_answer(op, "15 seconds");
  CHECK(w.lo == 0);
  CHECK(w.hi == 15);
  CHECK(parse_answer(op, "[0, 7]").hi == 7);
  CHECK_THROWS_AS(parse_answer(op, "soon"), DialogueError);
  CHECK_THROWS_AS(check_answer(op, Answer::interval(op.id, 2, 7)), DialogueError);
  CHECK_NOTHROW(check_answer(op, Answer::interval(op.id, 0, 7)));

  auto item = Question::atom_param("itemOnRobot", "item", 0, stl::SlotKind::ItemName);
  CHECK(std::get<std::string>(parse_answer(item, "the violet block").value) == "purpleCube");
  CHECK_THROWS_AS(parse_answer(item, "banana"), DialogueError);
  auto x = Question::atom_param("robotAt", "x", 0, stl::SlotKind::Coordinate);
  CHECK(std::get<std::int64_t>(parse_answer(x, " 7 ").value) == 7);
  CHECK_THROWS_AS(check_answer(x, Answer::of_value(x.id, std::string("seven"))), DialogueError);

  auto j = to_json(Answer::interval(op.id, 0, 9));
  auto back = answer_from_json(j);
  CHECK(back.question_id == op.id);
  CHECK(back.hi == 9);
}
