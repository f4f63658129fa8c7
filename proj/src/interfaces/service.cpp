#include "stlwb/interfaces/service.hpp"

#include <httplib.h>

#include <sstream>

#include "stlwb/stl/parser.hpp"
#include "stlwb/world/demo.hpp"

namespace stlwb::interfaces {

using nlohmann::json;

namespace {

// Thrown inside handlers and turned into an error response.
struct HttpError {
  int status;
  std::string message;
};

json metrics_json(const dialogue::Metrics& m) {
  json j{{"enumeratedFormulas", m.enumerated_formulas},
         {"userInteractions", m.user_interactions},
         {"runtimeSeconds", m.runtime_seconds}};
  j["success"] = m.success ? json(*m.success) : json(nullptr);
  return j;
}

json label_json(const dialogue::LabelRequest& l, const world::GridSpec& g) {
  json states = json::array();
  for (const auto& s : l.demo.successors(g)) states.push_back(world::to_json(s));
  json actions = json::array();
  for (auto a : l.demo.actions()) actions.push_back(world::action_name(a));
  json j{{"id", l.id},
         {"demoIndex", l.demo_index},
         {"position", l.delay.position},
         {"waits", l.delay.waits},
         {"actions", actions},
         {"states", states}};
  j["positive"] = l.positive ? json(*l.positive) : json(nullptr);
  return j;
}

json questions_json(const dialogue::Session& s, const world::GridSpec& g) {
  json qs = json::array();
  for (const auto& q : s.pending_questions()) qs.push_back(dialogue::to_json(q));
  json ls = json::array();
  for (const auto& l : s.pending_labels()) ls.push_back(label_json(l, g));
  return {{"questions", qs}, {"labels", ls}, {"status", dialogue::status_name(s.status())}};
}

json progress_json(const TrainingJob& job) {
  json j{{"state", job_state_name(job.state)}, {"formula", job.formula}};
  if (!job.error.empty()) j["error"] = job.error;
  if (job.control) {
    auto p = job.control->snapshot();
    json tail = json::array();
    for (const auto& c : p.tail)
      tail.push_back({{"episode", c.episode}, {"return", c.ret}, {"epsilon", c.epsilon}, {"replaySize", c.replay_size}});
    j["episode"] = p.episode;
    j["episodes"] = p.episodes;
    j["epsilon"] = p.epsilon;
    j["goals"] = p.goals;
    j["tail"] = tail;
  }
  if (job.rollout) j["satisfied"] = job.rollout->satisfied;
  return j;
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    return json::parse(req.body);
  } catch (const json::exception& e) {
    throw HttpError{400, std::string("malformed JSON: ") + e.what()};
  }
}

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

}  // namespace

json session_json(const SessionRecord& r) {
  const auto& s = r.session;
  json transcript = json::array();
  for (const auto& ex : s.transcript())
    transcript.push_back({{"question", dialogue::to_json(ex.question)}, {"answer", dialogue::to_json(ex.answer)}});
  json j{{"id", r.id},
         {"version", s.version()},
         {"status", dialogue::status_name(s.status())},
         {"demos", s.demos().size()},
         {"transcript", transcript},
         {"note", s.note()},
         {"metrics", metrics_json(s.metrics())},
         {"config", dialogue::to_json(s.config())}};
  j["task"] = s.task() ? json(*s.task()) : json(nullptr);
  j["formula"] = s.result() ? json(stl::format_formula(*s.result())) : json(nullptr);
  json qs = json::array();
  for (const auto& q : s.pending_questions()) qs.push_back(dialogue::to_json(q));
  j["questions"] = qs;
  j["pendingLabels"] = s.pending_labels().size();
  return j;
}

Service::Service(SessionStore& store) : store_(store) {}

void Service::mount(httplib::Server& server) {
  const world::GridSpec& grid = *store_.resources().grid;

  // Runs `fn` with the session locked, saves it afterwards, and maps errors.
  auto with_session = [this](const httplib::Request& req, httplib::Response& res, auto fn) {
    try {
      auto rec = store_.find(req.matches[1].str());
      if (!rec) throw HttpError{404, "unknown session '" + req.matches[1].str() + "'"};
      std::lock_guard lock(rec->mu);
      auto [status, body] = fn(*rec);
      store_.save(*rec);
      reply(res, status, body);
    } catch (const HttpError& e) {
      reply(res, e.status, {{"error", e.message}});
    } catch (const dialogue::NotPendingError& e) {
      reply(res, 409, {{"error", e.what()}});
    } catch (const dialogue::DialogueError& e) {
      reply(res, 422, {{"error", e.what()}});
    } catch (const world::WorldError& e) {
      reply(res, 422, {{"error", e.what()}});
    } catch (const stl::ParseError& e) {
      reply(res, 422, {{"error", e.what()}});
    } catch (const rl::RlError& e) {
      reply(res, 422, {{"error", e.what()}});
    } catch (const json::exception& e) {
      reply(res, 422, {{"error", std::string("bad payload: ") + e.what()}});
    } catch (const std::exception& e) {
      reply(res, 500, {{"error", e.what()}});
    }
  };
  using Result = std::pair<int, json>;

  server.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
    try {
      json body = parse_body(req);
      dialogue::PipelineConfig c;
      if (body.contains("config")) c = dialogue::config_from_json(body["config"]);
      auto rec = store_.create(c);
      std::lock_guard lock(rec->mu);
      reply(res, 201, session_json(*rec));
    } catch (const HttpError& e) {
      reply(res, e.status, {{"error", e.message}});
    } catch (const std::exception& e) {
      reply(res, 422, {{"error", e.what()}});
    }
  });

  server.Get("/world", [&grid](const httplib::Request&, httplib::Response& res) {
    json atoms = json::array();
    for (const auto& a : world::atom_registry()) {
      json params = json::array();
      for (const auto& p : a.params) params.push_back(p.name);
      atoms.push_back({{"name", a.name}, {"params", params}});
    }
    json actions = json::array();
    for (auto a : world::all_actions()) actions.push_back(world::action_name(a));
    reply(res, 200, {{"grid", world::to_json(grid)}, {"atoms", atoms}, {"actions", actions}});
  });

  server.Get(R"(/sessions/([^/]+))", [=](const httplib::Request& req, httplib::Response& res) {
    with_session(req, res, [](SessionRecord& r) { return Result{200, session_json(r)}; });
  });

  server.Post(R"(/sessions/([^/]+)/nl)", [=](const httplib::Request& req, httplib::Response& res) {
    with_session(req, res, [&](SessionRecord& r) {
      json body = parse_body(req);
      if (!body.contains("text") || !body["text"].is_string()) throw HttpError{422, "expected {\"text\": ...}"};
      r.session.set_task(body["text"].get<std::string>());
      return Result{200, session_json(r)};
    });
  });

  server.Get(R"(/sessions/([^/]+)/questions)", [=, &grid](const httplib::Request& req, httplib::Response& res) {
    with_session(req, res, [&](SessionRecord& r) { return Result{200, questions_json(r.session, grid)}; });
  });

  server.Post(R"(/sessions/([^/]+)/answers)", [=](const httplib::Request& req, httplib::Response& res) {
    with_session(req, res, [&](SessionRecord& r) {
      json body = parse_body(req);
      dialogue::Answer a;
      try {
        a = dialogue::answer_from_json(body);
      } catch (const std::exception& e) {
        throw HttpError{422, e.what()};
      }
      r.session.answer(a);
      return Result{200, session_json(r)};
    });
  });

  server.Post(R"(/sessions/([^/]+)/demos)", [=, &grid](const httplib::Request& req, httplib::Response& res) {
    with_session(req, res, [&](SessionRecord& r) {
      json body = parse_body(req);
      if (!body.contains("actions")) throw HttpError{422, "expected {\"actions\": [...]}"};
      if (!body.contains("label")) body["label"] = "positive";
      if (!body.contains("name")) body["name"] = "demo" + std::to_string(r.session.demos().size() + 1);
      world::LabeledDemo d = world::fixture_from_json(body, grid);
      r.session.add_demo(d);
      json states = json::array();
      for (const auto& s : d.demo.successors(grid)) states.push_back(world::to_json(s));
      json out = session_json(r);
      out["demo"] = {{"index", r.session.demos().size() - 1}, {"states", states}};
      return Result{201, out};
    });
  });

  server.Post(R"(/sessions/([^/]+)/labels)", [=](const httplib::Request& req, httplib::Response& res) {
    with_session(req, res, [&](SessionRecord& r) {
      json body = parse_body(req);
      std::map<std::string, bool> labels;
      if (body.contains("labels")) {
        labels = body["labels"].get<std::map<std::string, bool>>();
      } else if (body.contains("id") && body.contains("positive")) {
        labels[body["id"].get<std::string>()] = body["positive"].get<bool>();
      } else {
        throw HttpError{422, "expected {\"labels\": {id: bool}} or {\"id\", \"positive\"}"};
      }
      r.session.label(labels);
      return Result{200, session_json(r)};
    });
  });

  server.Get(R"(/sessions/([^/]+)/candidates)", [=](const httplib::Request& req, httplib::Response& res) {
    with_session(req, res, [&](SessionRecord& r) {
      const auto& s = r.session;
      json cands = json::array();
      for (const auto& c : s.candidates()) {
        json item{{"template", pstl::canonical(c)}};
        if (pstl::is_total(c, s.valuation())) item["formula"] = stl::format_formula(pstl::instantiate(c, s.valuation()));
        cands.push_back(item);
      }
      json pruned = json::array();
      for (const auto& p : s.pruned()) pruned.push_back(pstl::canonical(p.pstl));
      json lits = json::array();
      for (const auto& l : s.literals()) lits.push_back(stl::format_formula(l.formula()));
      json ops = json::array();
      for (auto op : s.operators()) ops.push_back(nl::op_symbol(op));
      return Result{200,
                    {{"enumeratedFormulas", s.enumerated().size()},
                     {"bounds", {s.bounds().lower, s.bounds().upper}},
                     {"literals", lits},
                     {"operators", ops},
                     {"candidates", cands},
                     {"pruned", pruned}}};
    });
  });

  server.Get(R"(/sessions/([^/]+)/formula)", [=](const httplib::Request& req, httplib::Response& res) {
    with_session(req, res, [&](SessionRecord& r) {
      const auto& s = r.session;
      json j{{"status", dialogue::status_name(s.status())}, {"note", s.note()}, {"metrics", metrics_json(s.metrics())}};
      j["formula"] = s.result() ? json(stl::format_formula(*s.result())) : json(nullptr);
      return Result{200, j};
    });
  });

  server.Post(R"(/sessions/([^/]+)/train)", [=, this, &grid](const httplib::Request& req, httplib::Response& res) {
    with_session(req, res, [&](SessionRecord& r) {
      json body = parse_body(req);
      auto& job = r.training;
      if (job.state == JobState::Running) throw HttpError{409, "training is already running"};
      stl::Formula f = [&] {
        if (body.contains("formula")) return stl::parse_formula(body["formula"].get<std::string>(), world::world_signature());
        if (!r.session.result()) throw HttpError{409, "the session has no selected formula yet"};
        return *r.session.result();
      }();
      json hp = body.value("hyperparameters", json::object());
      rl::Hyperparams h = rl::hyperparams_from_json(hp);
      if (job.thread.joinable()) job.thread.join();
      job = TrainingJob{};
      job.state = JobState::Running;
      job.formula = stl::format_formula(f);
      job.hyperparams = h;
      job.control = std::make_shared<rl::TrainControl>();
      std::shared_ptr<SessionRecord> self = store_.find(r.id);
      job.thread = std::thread([self, f, h, &grid, control = job.control] {
        std::optional<rl::TrainResult> result;
        std::optional<rl::Rollout> rollout;
        std::string error;
        try {
          result = rl::train(grid, grid.start, f, h, control.get());
          rollout = rl::evaluate(result->policy, grid, grid.start, f, h.max_steps);
        } catch (const std::exception& e) {
          error = e.what();
        }
        std::lock_guard lock(self->mu);
        auto& j = self->training;
        j.error = error;
        if (!error.empty()) j.state = JobState::Failed;
        else j.state = result->cancelled ? JobState::Cancelled : JobState::Done;
        j.result = std::move(result);
        j.rollout = std::move(rollout);
      });
      json out = progress_json(job);
      out["hyperparameters"] = rl::to_json(h);
      return Result{202, out};
    });
  });

  server.Get(R"(/sessions/([^/]+)/train/status)", [=](const httplib::Request& req, httplib::Response& res) {
    with_session(req, res, [&](SessionRecord& r) { return Result{200, progress_json(r.training)}; });
  });

  server.Post(R"(/sessions/([^/]+)/train/cancel)", [=](const httplib::Request& req, httplib::Response& res) {
    with_session(req, res, [&](SessionRecord& r) {
      if (r.training.control) r.training.control->cancel = true;
      return Result{200, progress_json(r.training)};
    });
  });

  server.Get(R"(/sessions/([^/]+)/policy)", [=](const httplib::Request& req, httplib::Response& res) {
    with_session(req, res, [&](SessionRecord& r) {
      const auto& job = r.training;
      if (job.state != JobState::Done || !job.result || !job.rollout) throw HttpError{409, "no trained policy"};
      std::ostringstream pol;
      rl::write_policy(pol, job.result->policy);
      json actions = json::array();
      for (auto a : job.rollout->actions) actions.push_back(world::action_name(a));
      json states = json::array();
      for (const auto& s : job.rollout->states) states.push_back(world::to_json(s));
      return Result{200,
                    {{"formula", job.formula},
                     {"states", job.result->policy.table.size()},
                     {"policy", pol.str()},
                     {"rollout", {{"satisfied", job.rollout->satisfied}, {"actions", actions}, {"states", states}}}}};
    });
  });
}

bool serve(SessionStore& store, const std::string& host, int port) {
  httplib::Server server;
  Service service(store);
  service.mount(server);
  return server.listen(host, port);
}

}  // namespace stlwb::interfaces
