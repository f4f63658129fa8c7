#include "stlwb/interfaces/store.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace stlwb::interfaces {

namespace fs = std::filesystem;

const char* job_state_name(JobState s) {
  switch (s) {
    case JobState::Idle: return "idle";
    case JobState::Running: return "running";
    case JobState::Done: return "done";
    case JobState::Cancelled: return "cancelled";
    case JobState::Failed: return "failed";
  }
  return "?";
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw StoreError("cannot write " + tmp);
    out << content;
    out.flush();
    if (!out) throw StoreError("write failed for " + tmp);
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw StoreError("cannot replace " + path + ": " + ec.message());
}

SessionStore::SessionStore(dialogue::Resources r, std::string dir) : res_(r), dir_(std::move(dir)) {
  if (dir_.empty()) return;
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw StoreError("cannot create session directory " + dir_ + ": " + ec.message());
  load_all();
}

SessionStore::~SessionStore() { shutdown(); }

std::string SessionStore::path_for(const std::string& id) const { return (fs::path(dir_) / (id + ".json")).string(); }

void SessionStore::load_all() {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir_))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& p : files) {
    try {
      std::ifstream in(p);
      auto j = nlohmann::json::parse(in);
      const std::string id = j.at("id").get<std::string>();
      if (id + ".json" != p.filename().string()) throw StoreError("id does not match the file name");
      auto s = dialogue::Session::replay(res_, j.at("session"));
      if (s.version() != j.at("version").get<std::size_t>()) throw StoreError("version does not match the log");
      auto rec = std::make_shared<SessionRecord>(id, std::move(s));
      rec->saved_version = rec->session.version();
      sessions_[id] = rec;
      if (id.size() > 1 && id[0] == 's') {
        try {
          next_id_ = std::max(next_id_, static_cast<std::size_t>(std::stoull(id.substr(1))) + 1);
        } catch (const std::exception&) {
        }
      }
    } catch (const std::exception& e) {
      load_errors_.push_back(p.filename().string() + ": " + e.what());
    }
  }
}

std::shared_ptr<SessionRecord> SessionStore::create(const dialogue::PipelineConfig& c) {
  std::shared_ptr<SessionRecord> rec;
  {
    std::lock_guard lock(mu_);
    std::string id;
    do {
      id = "s" + std::to_string(next_id_++);
    } while (sessions_.count(id) || (!dir_.empty() && fs::exists(path_for(id))));
    rec = std::make_shared<SessionRecord>(id, dialogue::Session(res_, c));
    sessions_[id] = rec;
  }
  std::lock_guard lock(rec->mu);
  rec->saved_version = static_cast<std::size_t>(-1);
  save(*rec);
  return rec;
}

std::shared_ptr<SessionRecord> SessionStore::find(const std::string& id) const {
  std::lock_guard lock(mu_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::vector<std::string> SessionStore::ids() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  for (const auto& [id, _] : sessions_) out.push_back(id);
  return out;
}

void SessionStore::save(SessionRecord& r) {
  const std::size_t v = r.session.version();
  if (v == r.saved_version) return;
  if (r.saved_version != static_cast<std::size_t>(-1) && v < r.saved_version)
    throw StoreError("session " + r.id + " went back from version " + std::to_string(r.saved_version));
  if (!dir_.empty()) {
    nlohmann::json j{{"id", r.id}, {"version", v}, {"session", r.session.document()}};
    write_file_atomic(path_for(r.id), j.dump(1));
  }
  r.saved_version = v;
}

void SessionStore::shutdown() {
  std::vector<std::shared_ptr<SessionRecord>> all;
  {
    std::lock_guard lock(mu_);
    for (const auto& [_, r] : sessions_) all.push_back(r);
  }
  for (auto& r : all) {
    std::thread t;
    {
      std::lock_guard lock(r->mu);
      if (r->training.control) r->training.control->cancel = true;
      t = std::move(r->training.thread);
    }
    if (t.joinable()) t.join();
  }
}

}  // namespace stlwb::interfaces
