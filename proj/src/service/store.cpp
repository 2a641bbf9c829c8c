#include <fcntl.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pypal/service/service.hpp"

namespace fs = std::filesystem;

namespace pypal::service {

bool valid_session_id(std::string_view id) {
  if (id.empty() || id.size() > 64) return false;
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
                    c == '-';
    if (!ok) return false;
  }
  return true;
}

Clock system_clock_seconds() {
  return [] {
    return std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch())
        .count();
  };
}

namespace {

nlohmann::json optional_string(const std::optional<std::string>& s) {
  return s ? nlohmann::json(*s) : nlohmann::json(nullptr);
}

std::optional<std::string> read_optional(const nlohmann::json& doc, const char* key) {
  const auto& v = doc.at(key);
  if (v.is_null()) return std::nullopt;
  if (!v.is_string()) throw StorageError(std::string("'") + key + "' must be a string or null");
  return v.get<std::string>();
}

const char* kTempMarker = ".tmp-";

}  // namespace

nlohmann::json record_to_json(const SessionRecord& r) {
  const auto& s = r.state;
  return {
      {"schema", kSessionSchema},
      {"session_id", s.session_id},
      {"last_exercise_id", optional_string(s.last_exercise_id)},
      {"last_tutorial_topic", optional_string(s.last_tutorial_topic)},
      {"pending", dialogue::to_string(s.pending)},
      {"pending_exercise_id", s.pending_exercise_id},
      {"confirm_reprompts", s.confirm_reprompts},
      {"last_activity", r.last_activity},
      {"turns", r.turns},
  };
}

SessionRecord record_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw StorageError("session record is not an object");
  if (doc.value("schema", "") != kSessionSchema) {
    throw StorageError("session schema is '" + doc.value("schema", std::string("?")) + "', expected '" +
                       std::string(kSessionSchema) + "'");
  }
  try {
    SessionRecord r;
    r.state.session_id = doc.at("session_id").get<std::string>();
    r.state.last_exercise_id = read_optional(doc, "last_exercise_id");
    r.state.last_tutorial_topic = read_optional(doc, "last_tutorial_topic");
    r.state.pending = dialogue::pending_from_string(doc.at("pending").get<std::string>());
    r.state.pending_exercise_id = doc.at("pending_exercise_id").get<std::string>();
    r.state.confirm_reprompts = doc.at("confirm_reprompts").get<int>();
    r.last_activity = doc.at("last_activity").get<std::int64_t>();
    r.turns = doc.at("turns").get<std::uint64_t>();
    if ((r.state.pending == dialogue::PendingKind::idle) != r.state.pending_exercise_id.empty()) {
      throw StorageError("pending_exercise_id does not agree with pending");
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw StorageError(std::string("malformed session record: ") + e.what());
  } catch (const StorageError&) {
    throw;
  } catch (const Error& e) {
    throw StorageError(e.what());
  }
}

SessionStore::SessionStore(std::string dir, Logger log, Clock now, std::chrono::seconds ttl)
    : dir_(std::move(dir)), log_(std::move(log)), now_(std::move(now)), ttl_(ttl) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (!fs::is_directory(dir_, ec)) throw StorageError("cannot create session directory '" + dir_ + "'");
  int stale = 0;
  for (const auto& entry : fs::directory_iterator(dir_, ec)) {
    const auto name = entry.path().filename().string();
    if (name.find(kTempMarker) != std::string::npos && fs::remove(entry.path(), ec)) ++stale;
  }
  if (stale > 0) log_("session store: removed " + std::to_string(stale) + " interrupted write(s)");
}

std::string SessionStore::path_for(const std::string& session_id) const {
  return (fs::path(dir_) / (session_id + ".json")).string();
}

SessionRecord SessionStore::load(const std::string& session_id) const {
  if (!valid_session_id(session_id)) throw StorageError("invalid session id");
  SessionRecord fresh;
  fresh.state.session_id = session_id;
  fresh.last_activity = now_();

  const std::string path = path_for(session_id);
  std::ifstream in(path, std::ios::binary);
  if (!in) return fresh;
  std::ostringstream text;
  text << in.rdbuf();

  SessionRecord record;
  try {
    const auto doc = nlohmann::json::parse(text.str(), nullptr, false);
    if (doc.is_discarded()) throw StorageError("not valid JSON");
    record = record_from_json(doc);
    if (record.state.session_id != session_id) throw StorageError("record belongs to another session");
  } catch (const StorageError& e) {
    log_("warning: session " + session_id + ": " + e.what() + "; starting a fresh session");
    return fresh;
  }
  if (fresh.last_activity - record.last_activity > ttl_.count()) {
    std::error_code ec;
    fs::remove(path, ec);
    return fresh;
  }
  return record;
}

void SessionStore::persist(SessionRecord& record) const {
  const std::string& id = record.state.session_id;
  if (!valid_session_id(id)) throw StorageError("invalid session id");
  record.last_activity = now_();
  const std::string data = record_to_json(record).dump(2) + "\n";

  static std::atomic<std::uint64_t> counter{0};
  const std::string target = path_for(id);
  const std::string temp = (fs::path(dir_) / ("." + id + kTempMarker + std::to_string(::getpid()) + "-" +
                                              std::to_string(counter.fetch_add(1))))
                               .string();
  auto fail = [&](const char* what) {
    const std::string msg = std::string(what) + " '" + temp + "': " + std::strerror(errno);
    ::unlink(temp.c_str());
    throw StorageError(msg);
  };

  const int fd = ::open(temp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) fail("cannot create");
  std::size_t written = 0;
  while (written < data.size()) {
    const ssize_t n = ::write(fd, data.data() + written, data.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      ::close(fd);
      fail("cannot write");
    }
    written += static_cast<std::size_t>(n);
  }
  if (::fsync(fd) != 0) {
    ::close(fd);
    fail("cannot sync");
  }
  if (::close(fd) != 0) fail("cannot close");
  if (::rename(temp.c_str(), target.c_str()) != 0) fail("cannot rename");
  const int dfd = ::open(dir_.c_str(), O_RDONLY | O_DIRECTORY | O_CLOEXEC);
  if (dfd >= 0) {
    ::fsync(dfd);
    ::close(dfd);
  }
}

std::mutex& SessionStore::acquire(const std::string& id) {
  std::lock_guard lock(registry_mutex_);
  auto& slot = slots_[id];
  if (!slot) slot = std::make_unique<Slot>();
  ++slot->users;
  return slot->mutex;
}

void SessionStore::release(const std::string& id) {
  std::lock_guard lock(registry_mutex_);
  auto it = slots_.find(id);
  if (it != slots_.end() && --it->second->users == 0) slots_.erase(it);
}

SessionStore::Lock::Lock(SessionStore& store, std::string session_id)
    : store_(store), id_(std::move(session_id)), guard_(store_.acquire(id_)) {}

SessionStore::Lock::~Lock() {
  guard_.unlock();
  store_.release(id_);
}

}  // namespace pypal::service
