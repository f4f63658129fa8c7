#include <doctest.h>
#include <httplib.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <thread>

#include "stlwb/dialogue/oracle.hpp"
#include "stlwb/interfaces/service.hpp"
#include "stlwb/stl/parser.hpp"

using namespace stlwb;
using namespace stlwb::interfaces;
using nlohmann::json;

namespace {

const std::string kData = STLWB_DATA_DIR;
const std::string kPhi3 = "F[0,15]((lampOn & F[0,10](itemOnRobot(purpleCube))))";

const dialogue::NlBundle& bundle() {
  static const dialogue::NlBundle b = dialogue::NlBundle::load(kData);
  return b;
}

dialogue::Resources res() { return bundle().resources(world::default_grid()); }

json fixture_json(const std::string& name) {
  std::ifstream in(kData + "/fixtures/" + name + ".json");
  return json::parse(in);
}

// A server on a free local port for the lifetime of the object.
struct Running {
  explicit Running(SessionStore& store) : store(&store), service(store) {
    service.mount(server);
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
    client = std::make_unique<httplib::Client>("127.0.0.1", port);
  }
  ~Running() {
    server.stop();
    thread.join();
  }

  std::pair<int, json> get(const std::string& path) {
    auto r = client->Get(path);
    REQUIRE(r);
    return {r->status, r->body.empty() ? json() : json::parse(r->body)};
  }
  std::pair<int, json> post(const std::string& path, const json& body = json::object()) {
    auto r = client->Post(path, body.dump(), "application/json");
    REQUIRE(r);
    return {r->status, r->body.empty() ? json() : json::parse(r->body)};
  }

  SessionStore* store;
  httplib::Server server;
  Service service;
  int port = 0;
  std::thread thread;
  std::unique_ptr<httplib::Client> client;
};

// Drives a session to the end over HTTP, answering like the oracle would.
json drive(Running& srv, const std::string& id, const std::string& truth) {
  dialogue::OracleUser oracle(stl::parse_formula(truth), bundle().lexicon, world::default_grid());
  const std::string base = "/sessions/" + id;
  for (int round = 0; round < 200; ++round) {
    auto [st, qs] = srv.get(base + "/questions");
    REQUIRE(st == 200);
    if (!qs["labels"].empty()) {
      json labels = json::object();
      for (const auto& l : qs["labels"]) {
        auto d = world::Demonstration::from_actions(world::default_grid(), world::default_grid().start,
                                                    world::parse_actions(l["actions"]));
        labels[l["id"].get<std::string>()] = oracle.label(d);
      }
      REQUIRE(srv.post(base + "/labels", {{"labels", labels}}).first == 200);
      continue;
    }
    if (qs["questions"].empty()) break;
    // Rebuild the question from the session itself to ask the oracle.
    auto rec = srv.store->find(id);
    dialogue::Question q;
    {
      std::lock_guard lock(rec->mu);
      q = rec->session.pending_questions().front();
    }
    dialogue::Answer a;
    try {
      a = oracle.answer(q);
    } catch (const dialogue::OracleError&) {
      a = dialogue::Answer::not_applicable(q.id);
    }
    auto [ast, body] = srv.post(base + "/answers", dialogue::to_json(a));
    REQUIRE_MESSAGE(ast == 200, body.dump());
  }
  return srv.get(base + "/formula").second;
}

std::string temp_dir(const std::string& tag) {
  auto p = std::filesystem::temp_directory_path() /
           ("stlwb_" + tag + "_" + std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()));
  std::filesystem::create_directories(p);
  return p.string();
}

}  // namespace

TEST_CASE("world description") {
  SessionStore store(res());
  Running srv(store);
  auto [st, w] = srv.get("/world");
  CHECK(st == 200);
  CHECK(w["grid"]["width"] == 8);
  CHECK(w["atoms"].size() == world::atom_registry().size());
  CHECK(w["actions"].size() == world::kActionCount);
}

TEST_CASE("unknown sessions and bad payloads") {
  SessionStore store(res());
  Running srv(store);
  CHECK(srv.get("/sessions/nope").first == 404);
  CHECK(srv.post("/sessions/nope/nl", {{"text", "x"}}).first == 404);
  CHECK(srv.get("/sessions/nope/train/status").first == 404);
  auto [st, s] = srv.post("/sessions");
  REQUIRE(st == 201);
  const std::string base = "/sessions/" + s["id"].get<std::string>();
  CHECK(srv.post(base + "/nl", {{"words", "x"}}).first == 422);
  auto r = srv.client->Post(base + "/nl", "{not json", "application/json");
  REQUIRE(r);
  CHECK(r->status == 400);
  CHECK(srv.post(base + "/answers", {{"questionId", "order:a:b"}, {"yes", true}}).first == 409);
  CHECK(srv.post(base + "/answers", {{"nothing", 1}}).first == 422);
  CHECK(srv.post(base + "/labels", {{"labels", {{"delay:0:0:1", true}}}}).first == 409);
  CHECK(srv.post(base + "/train").first == 409);
  CHECK(srv.get(base + "/policy").first == 409);
}

TEST_CASE("running example over HTTP") {
  SessionStore store(res());
  Running srv(store);
  auto [st, s] = srv.post("/sessions");
  REQUIRE(st == 201);
  const std::string base = "/sessions/" + s["id"].get<std::string>();

  json demo = fixture_json("running_example");
  auto [dst, d] = srv.post(base + "/demos", {{"actions", demo["actions"]}});
  REQUIRE(dst == 201);
  CHECK(d["demos"] == 1);
  CHECK(d["demo"]["states"].size() == demo["actions"].size());

  auto [nst, n] = srv.post(base + "/nl", {{"text", "turn on the lamp and pick up the cube"}});
  REQUIRE(nst == 200);
  REQUIRE(n["questions"].size() == 3);
  CHECK(n["questions"][0]["kind"] == "taskOrder");
  CHECK(srv.post(base + "/nl", {{"text", "again"}}).first == 409);

  auto [cst, c] = srv.get(base + "/candidates");
  CHECK(cst == 200);
  CHECK(c["enumeratedFormulas"] == 14);
  CHECK(c["bounds"] == json::array({3, 5}));
  CHECK(c["candidates"].size() + c["pruned"].size() == 14);

  const std::string order = n["questions"][0]["id"];
  CHECK(srv.post(base + "/answers", {{"questionId", order}, {"interval", {0, 5}}}).first == 422);
  CHECK(srv.post(base + "/answers", {{"questionId", order}, {"yes", true}}).first == 200);
  CHECK(srv.post(base + "/answers", {{"questionId", order}, {"yes", true}}).first == 409);

  json f = drive(srv, s["id"], kPhi3);
  REQUIRE(f["formula"].is_string());
  CHECK(dialogue::match(stl::parse_formula(f["formula"].get<std::string>()), stl::parse_formula(kPhi3)));
  CHECK(f["metrics"]["userInteractions"] == 3);

  // Same inputs and answers through the library give the same formula.
  std::vector<world::LabeledDemo> demos{world::fixture_from_json(demo, world::default_grid())};
  dialogue::OracleUser oracle(stl::parse_formula(kPhi3), bundle().lexicon, world::default_grid());
  auto out = dialogue::run_pipeline("turn on the lamp and pick up the cube", demos, oracle, res(), {});
  REQUIRE(out.formula);
  CHECK(stl::format_formula(*out.formula) == f["formula"].get<std::string>());
}

TEST_CASE("demonstration uploads are replayed") {
  SessionStore store(res());
  Running srv(store);
  auto [st, s] = srv.post("/sessions");
  const std::string base = "/sessions/" + s["id"].get<std::string>();
  // From (4,4), two steps east reach (6,4); (5,5) is a wall south of (5,4).
  auto [dst, d] = srv.post(base + "/demos", {{"actions", {"moveE", "moveS", "moveE"}}});
  REQUIRE(dst == 201);
  const auto& states = d["demo"]["states"];
  REQUIRE(states.size() == 3);
  CHECK(states[0]["hitWall"] == false);
  CHECK(states[1]["hitWall"] == true);
  CHECK(states[1]["robot"] == json::array({5, 4}));
  CHECK(states[2]["hitWall"] == false);

  CHECK(srv.post(base + "/demos", {{"actions", {"moveE", "fly"}}}).first == 422);
  CHECK(srv.post(base + "/demos", {{"actions", {"moveE"}}, {"initial", {{"robot", {3, 1}}}}}).first == 422);
  CHECK(srv.post(base + "/demos", {{"actions", {"moveE"}}, {"label", "maybe"}}).first == 422);
  CHECK(srv.post(base + "/demos", {{"label", "positive"}}).first == 422);
  CHECK(srv.get(base).second["demos"] == 1);
}

TEST_CASE("sessions survive a restart") {
  const std::string dir = temp_dir("store");
  json before;
  std::string id;
  {
    SessionStore store(res(), dir);
    Running srv(store);
    auto [st, s] = srv.post("/sessions");
    id = s["id"];
    const std::string base = "/sessions/" + id;
    srv.post(base + "/demos", {{"actions", fixture_json("running_example")["actions"]}});
    srv.post(base + "/nl", {{"text", "turn on the lamp and pick up the cube"}});
    const std::string order = srv.get(base + "/questions").second["questions"][0]["id"];
    REQUIRE(srv.post(base + "/answers", {{"questionId", order}, {"yes", true}}).first == 200);
    before = srv.get(base).second;
  }
  REQUIRE(std::filesystem::exists(std::filesystem::path(dir) / (id + ".json")));
  // Debris from an interrupted write is ignored; a broken file is reported.
  std::ofstream(std::filesystem::path(dir) / (id + ".json.tmp")) << "{";
  std::ofstream(std::filesystem::path(dir) / "s99.json") << "{\"id\": \"s99\"";
  {
    SessionStore store(res(), dir);
    CHECK(store.load_errors().size() == 1);
    Running srv(store);
    auto [st, after] = srv.get("/sessions/" + id);
    REQUIRE(st == 200);
    // Everything but the measured runtime is reproduced by the replay.
    after["metrics"].erase("runtimeSeconds");
    before["metrics"].erase("runtimeSeconds");
    CHECK(after == before);
    CHECK(after["version"] == 3);
    auto [nst, n] = srv.post("/sessions");
    CHECK(n["id"] != id);
    CHECK(drive(srv, id, kPhi3)["formula"].is_string());
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("training runs in the background") {
  SessionStore store(res());
  Running srv(store);
  auto [st, s] = srv.post("/sessions");
  const std::string base = "/sessions/" + s["id"].get<std::string>();
  CHECK(srv.post(base + "/train", {{"formula", "F[0,15](robotAt(0,0))"}, {"hyperparameters", {{"gamma", 2}}}}).first ==
        422);
  CHECK(srv.post(base + "/train", {{"formula", "F[0,15](robotAt("}}).first == 422);

  auto [tst, t] = srv.post(base + "/train", {{"formula", "F[0,15](robotAt(0,0))"}, {"hyperparameters", {{"episodes", 4000}}}});
  REQUIRE(tst == 202);
  CHECK(t["hyperparameters"]["episodes"] == 4000);
  json status;
  for (int i = 0; i < 600; ++i) {
    status = srv.get(base + "/train/status").second;
    if (status["state"] != "running") break;
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
  REQUIRE(status["state"] == "done");
  CHECK(status["episode"] == 4000);
  auto [pst, p] = srv.get(base + "/policy");
  REQUIRE(pst == 200);
  CHECK(p["rollout"]["satisfied"] == true);
  CHECK(p["rollout"]["states"].back()["robot"] == json::array({0, 0}));

  REQUIRE(srv.post(base + "/train", {{"formula", "F[0,15](robotAt(0,0))"}}).first == 202);
  CHECK(srv.post(base + "/train", {{"formula", "F[0,15](robotAt(0,0))"}}).first == 409);
  srv.post(base + "/train/cancel");
  for (int i = 0; i < 600; ++i) {
    status = srv.get(base + "/train/status").second;
    if (status["state"] != "running") break;
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  CHECK(status["state"] == "cancelled");
  CHECK(srv.get(base + "/policy").first == 409);
}

TEST_CASE("concurrent sessions") {
  SessionStore store(res());
  Running srv(store);
  std::vector<std::string> ids;
  for (int i = 0; i < 4; ++i) ids.push_back(srv.post("/sessions").second["id"]);
  std::vector<std::thread> workers;
  std::vector<int> ok(ids.size(), 0);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    workers.emplace_back([&, i] {
      httplib::Client c("127.0.0.1", srv.port);
      const std::string base = "/sessions/" + ids[i];
      json demo{{"actions", fixture_json("pick_purple")["actions"]}};
      auto a = c.Post(base + "/demos", demo.dump(), "application/json");
      auto b = c.Post(base + "/nl", json{{"text", "pick up the purple cube"}}.dump(), "application/json");
      ok[i] = a && b && a->status == 201 && b->status == 200;
    });
  }
  for (auto& w : workers) w.join();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    CHECK(ok[i] == 1);
    auto s = srv.get("/sessions/" + ids[i]).second;
    CHECK(s["version"] == 2);
  }
  CHECK(store.ids().size() == 4);
}
