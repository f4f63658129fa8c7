#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "stlwb/dialogue/session.hpp"
#include "stlwb/rl/qlearning.hpp"

namespace stlwb::interfaces {

class StoreError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class JobState { Idle, Running, Done, Cancelled, Failed };
const char* job_state_name(JobState s);

/// Background training for one session. Fields other than `control` are
/// guarded by the owning record's mutex.
struct TrainingJob {
  JobState state = JobState::Idle;
  std::string formula;
  rl::Hyperparams hyperparams;
  std::shared_ptr<rl::TrainControl> control;
  std::optional<rl::TrainResult> result;
  std::optional<rl::Rollout> rollout;
  std::string error;
  std::thread thread;
};

struct SessionRecord {
  SessionRecord(std::string id, dialogue::Session s) : id(std::move(id)), session(std::move(s)) {}

  const std::string id;
  std::mutex mu;  // serializes every operation on this session
  dialogue::Session session;
  std::size_t saved_version = 0;
  TrainingJob training;
};

/// Sessions by id, persisted as one JSON file each when a directory is given.
/// A file holds the session's command log and is replaced atomically (written
/// to a temporary file, then renamed), so a crash leaves either the old or the
/// new version. Loading replays every log.
class SessionStore {
 public:
  /// An empty `dir` keeps sessions in memory only.
  SessionStore(dialogue::Resources r, std::string dir = {});
  ~SessionStore();
  SessionStore(const SessionStore&) = delete;
  SessionStore& operator=(const SessionStore&) = delete;

  std::shared_ptr<SessionRecord> create(const dialogue::PipelineConfig& c = {});
  std::shared_ptr<SessionRecord> find(const std::string& id) const;
  std::vector<std::string> ids() const;

  /// Writes the record if its session changed since the last save. The caller
  /// must hold the record's mutex.
  void save(SessionRecord& r);

  /// Files that could not be replayed at startup, with the reason.
  const std::vector<std::string>& load_errors() const { return load_errors_; }
  const dialogue::Resources& resources() const { return res_; }
  const std::string& directory() const { return dir_; }

  /// Cancels running training jobs and waits for them.
  void shutdown();

 private:
  void load_all();
  std::string path_for(const std::string& id) const;

  dialogue::Resources res_;
  std::string dir_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<SessionRecord>> sessions_;
  std::size_t next_id_ = 1;
  std::vector<std::string> load_errors_;
};

/// Atomically replaces `path` with `content`.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace stlwb::interfaces
