#pragma once

#include <string>

#include <json.hpp>

#include "stlwb/interfaces/store.hpp"

namespace httplib {
class Server;
}

namespace stlwb::interfaces {

/// JSON view of a session: status, pending questions and labels, transcript,
/// selected formula and metrics.
nlohmann::json session_json(const SessionRecord& r);

/// HTTP/JSON front end over a session store. Routes:
///   POST /sessions                       {"config"?}            -> 201 session
///   GET  /sessions/{id}                                         -> session
///   POST /sessions/{id}/nl               {"text"}               -> session
///   GET  /sessions/{id}/questions                               -> questions, labels
///   POST /sessions/{id}/answers          answer JSON            -> session (409, 422)
///   POST /sessions/{id}/demos            {"actions", "label"?, "initial"?, "name"?} -> 201 (422)
///   POST /sessions/{id}/labels           {"labels": {id: bool}} -> session (409)
///   GET  /sessions/{id}/candidates                              -> candidates, pruned
///   GET  /sessions/{id}/formula                                 -> formula, metrics
///   POST /sessions/{id}/train            hyperparameters        -> 202 (409)
///   GET  /sessions/{id}/train/status                            -> progress
///   POST /sessions/{id}/train/cancel                            -> progress
///   GET  /sessions/{id}/policy                                  -> policy lines, greedy rollout (409)
///   GET  /world                                                 -> grid, atoms, actions
/// Unknown sessions give 404.
class Service {
 public:
  explicit Service(SessionStore& store);
  void mount(httplib::Server& server);

 private:
  SessionStore& store_;
};

/// Serves until the server is stopped. Returns false if the port cannot be bound.
bool serve(SessionStore& store, const std::string& host, int port);

}  // namespace stlwb::interfaces
