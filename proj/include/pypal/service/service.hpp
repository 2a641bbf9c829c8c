#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pypal/dialogue/dialogue.hpp"
#include "pypal/error.hpp"

namespace httplib {
class Server;
}

namespace pypal::service {

inline constexpr std::string_view kVersion = "1.0.0";

struct ConfigError : Error {
  using Error::Error;
};

struct StorageError : Error {
  using Error::Error;
};

/// Receives one line of log text.
using Logger = std::function<void(std::string_view)>;
Logger stderr_logger();

// ---- configuration --------------------------------------------------------

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string bank_dir;
  std::string session_dir;
  std::string tutorials_path;
  std::string model_path;
  std::int64_t step_limit = 100000;
};

/// "host:port" -> (host, port). Throws ConfigError.
std::pair<std::string, int> parse_address(std::string_view addr);

using EnvLookup = std::function<std::optional<std::string>(const char*)>;
EnvLookup process_env();

/// Reads a "pypal-config" document. Relative paths are resolved against the
/// directory holding the file; PYPAL_BANK_DIR, PYPAL_SESSION_DIR and
/// PYPAL_ADDR then override the file's values.
ServiceConfig load_config(const std::string& path, const EnvLookup& env = process_env());

/// Throws ConfigError naming the first missing or unreadable path. Creates
/// the session directory when it does not exist yet.
void validate_config(const ServiceConfig& config);

// ---- sessions -------------------------------------------------------------

inline constexpr std::string_view kSessionSchema = "pypal-session/1";

struct SessionRecord {
  dialogue::SessionState state;
  std::int64_t last_activity = 0;  // unix seconds
  std::uint64_t turns = 0;         // messages handled for this session

  bool operator==(const SessionRecord&) const = default;
};

/// 1 to 64 characters from [A-Za-z0-9_-].
bool valid_session_id(std::string_view id);

nlohmann::json record_to_json(const SessionRecord& r);
/// Throws StorageError on a schema mismatch or a malformed record.
SessionRecord record_from_json(const nlohmann::json& doc);

using Clock = std::function<std::int64_t()>;
Clock system_clock_seconds();

/// One JSON file per session. Writes go to a temporary file that is synced
/// and renamed over the old record, so readers see either the old or the new
/// record in full.
class SessionStore {
 public:
  SessionStore(std::string dir, Logger log = stderr_logger(), Clock now = system_clock_seconds(),
               std::chrono::seconds ttl = std::chrono::hours(24));

  /// A fresh idle record for missing, expired, corrupt and version-mismatched
  /// files; the last three are logged. Throws StorageError for invalid ids.
  SessionRecord load(const std::string& session_id) const;
  /// Stamps last_activity with the current time. Throws StorageError.
  void persist(SessionRecord& record) const;

  std::string path_for(const std::string& session_id) const;
  const std::string& dir() const { return dir_; }

  /// Held while a request reads, updates and writes one session.
  class Lock {
   public:
    Lock(SessionStore& store, std::string session_id);
    ~Lock();
    Lock(const Lock&) = delete;
    Lock& operator=(const Lock&) = delete;

   private:
    SessionStore& store_;
    std::string id_;
    std::unique_lock<std::mutex> guard_;
  };

 private:
  struct Slot {
    std::mutex mutex;
    int users = 0;
  };
  std::mutex& acquire(const std::string& id);
  void release(const std::string& id);

  std::string dir_;
  Logger log_;
  Clock now_;
  std::chrono::seconds ttl_;
  std::mutex registry_mutex_;
  std::map<std::string, std::unique_ptr<Slot>> slots_;
};

// ---- wire format ----------------------------------------------------------

nlohmann::json diagnostic_to_json(const diag::Diagnostic& d);
nlohmann::json grade_report_to_json(const grading::GradeReport& r);
nlohmann::json exercise_to_json(const grading::Exercise& ex);
nlohmann::json reply_to_json(const dialogue::Reply& r);
nlohmann::json state_summary(const dialogue::SessionState& s);

// ---- the service ----------------------------------------------------------

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

/// Loads the bank, tutorials and intent model named by the config and
/// answers API requests. Request methods are safe to call concurrently.
class Service {
 public:
  explicit Service(const ServiceConfig& config, Logger log = stderr_logger());
  ~Service();

  ApiResponse chat(std::string_view body);
  ApiResponse submit(std::string_view body);
  ApiResponse exercises() const;
  ApiResponse tutorials() const;
  ApiResponse health() const;

  /// Registers the /api routes. Unexpected exceptions become 500 responses
  /// carrying only an opaque id; the details go to the log.
  void mount(httplib::Server& server);

  SessionStore& store() { return *store_; }
  const dialogue::DialogueEngine& engine() const { return *engine_; }

 private:
  ApiResponse guarded(const char* route, const std::function<ApiResponse()>& fn);

  Logger log_;
  std::vector<grading::Exercise> bank_;
  dialogue::TutorialRepository tutorials_;
  intent::IntentModel model_;
  std::unique_ptr<dialogue::DialogueEngine> engine_;
  std::unique_ptr<SessionStore> store_;
};

/// Binds `config`'s address and serves until SIGINT or SIGTERM.
/// Throws ConfigError when the address cannot be bound.
void run_server(const ServiceConfig& config, Logger log = stderr_logger());

}  // namespace pypal::service
