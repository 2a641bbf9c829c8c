#include <pthread.h>
#include <signal.h>

#include <atomic>
#include <random>
#include <thread>

#include "httplib.h"
#include "pypal/service/service.hpp"

namespace pypal::service {

namespace {

constexpr std::size_t kMaxTextBytes = 64 * 1024;

ApiResponse bad_request(std::string message) { return {400, {{"error", std::move(message)}}}; }

/// The named string field of a request object, or nullopt.
std::optional<std::string> string_field(const nlohmann::json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end() || !it->is_string()) return std::nullopt;
  return it->get<std::string>();
}

std::string opaque_id() {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  static const char* digits = "0123456789abcdef";
  std::string id(16, '0');
  auto bits = rng();
  for (auto& c : id) {
    c = digits[bits & 0xf];
    bits >>= 4;
  }
  return id;
}

}  // namespace

Service::Service(const ServiceConfig& config, Logger log)
    : log_(std::move(log)),
      bank_((validate_config(config), grading::load_bank(config.bank_dir))),
      tutorials_(dialogue::TutorialRepository::load(config.tutorials_path)),
      model_(intent::IntentModel::load(config.model_path)) {
  exec::Limits limits;
  limits.max_steps = config.step_limit;
  engine_ = std::make_unique<dialogue::DialogueEngine>(model_, bank_, tutorials_, dialogue::default_transitions(),
                                                       dialogue::default_chat_rules(), limits);
  store_ = std::make_unique<SessionStore>(config.session_dir, log_);
}

Service::~Service() = default;

ApiResponse Service::chat(std::string_view body) {
  const auto doc = nlohmann::json::parse(body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) return bad_request("body must be a JSON object");
  const auto id = string_field(doc, "session_id");
  const auto text = string_field(doc, "text");
  if (!id || !valid_session_id(*id)) return bad_request("'session_id' must be 1-64 characters of [A-Za-z0-9_-]");
  if (!text) return bad_request("'text' must be a string");
  if (text->size() > kMaxTextBytes) return bad_request("'text' is longer than 64 KiB");

  SessionStore::Lock lock(*store_, *id);
  SessionRecord record = store_->load(*id);
  auto result = engine_->handle_message(record.state, *text);
  record.state = std::move(result.state);
  ++record.turns;
  store_->persist(record);

  nlohmann::json replies = nlohmann::json::array();
  for (const auto& r : result.replies) replies.push_back(reply_to_json(r));
  return {200, {{"replies", std::move(replies)}, {"session", state_summary(record.state)}}};
}

ApiResponse Service::submit(std::string_view body) {
  const auto doc = nlohmann::json::parse(body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) return bad_request("body must be a JSON object");
  const auto id = string_field(doc, "session_id");
  const auto exercise_id = string_field(doc, "exercise_id");
  const auto code = string_field(doc, "code");
  if (!id || !valid_session_id(*id)) return bad_request("'session_id' must be 1-64 characters of [A-Za-z0-9_-]");
  if (!exercise_id) return bad_request("'exercise_id' must be a string");
  if (!code) return bad_request("'code' must be a string");
  if (code->size() > kMaxTextBytes) return bad_request("'code' is longer than 64 KiB");
  if (!grading::find_exercise(bank_, *exercise_id)) {
    return {404, {{"error", "unknown exercise '" + *exercise_id + "'"}}};
  }

  SessionStore::Lock lock(*store_, *id);
  SessionRecord record = store_->load(*id);
  auto feedback = engine_->submit(record.state, *exercise_id, *code);
  ++record.turns;
  store_->persist(record);
  return {200, grade_report_to_json(feedback->report)};
}

ApiResponse Service::exercises() const {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& ex : bank_) list.push_back(exercise_to_json(ex));
  return {200, {{"exercises", std::move(list)}}};
}

ApiResponse Service::tutorials() const {
  nlohmann::json map = nlohmann::json::object();
  for (const auto& [topic, t] : tutorials_.all()) map[topic] = {{"title", t.title}, {"url", t.url}};
  return {200, {{"tutorials", std::move(map)}}};
}

ApiResponse Service::health() const { return {200, {{"status", "ok"}, {"version", kVersion}}}; }

ApiResponse Service::guarded(const char* route, const std::function<ApiResponse()>& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    const std::string id = opaque_id();
    log_(std::string("error ") + id + " in " + route + ": " + e.what());
    return {500, {{"error", "internal error"}, {"id", id}}};
  }
}

void Service::mount(httplib::Server& server) {
  auto send = [](httplib::Response& res, const ApiResponse& r) {
    res.status = r.status;
    res.set_content(r.body.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace), "application/json");
  };
  server.Post("/api/chat", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, guarded("/api/chat", [&] { return chat(req.body); }));
  });
  server.Post("/api/submit", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, guarded("/api/submit", [&] { return submit(req.body); }));
  });
  server.Get("/api/exercises", [this, send](const httplib::Request&, httplib::Response& res) {
    send(res, guarded("/api/exercises", [&] { return exercises(); }));
  });
  server.Get("/api/tutorials", [this, send](const httplib::Request&, httplib::Response& res) {
    send(res, guarded("/api/tutorials", [&] { return tutorials(); }));
  });
  server.Get("/api/health", [this, send](const httplib::Request&, httplib::Response& res) {
    send(res, guarded("/api/health", [&] { return health(); }));
  });
  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) {
      res.set_content(nlohmann::json{{"error", httplib::status_message(res.status)}}.dump(), "application/json");
    }
  });
}

void run_server(const ServiceConfig& config, Logger log) {
  sigset_t stop_signals;
  sigemptyset(&stop_signals);
  sigaddset(&stop_signals, SIGINT);
  sigaddset(&stop_signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);

  Service service(config, log);
  httplib::Server server;
  service.mount(server);

  const int port = config.port == 0 ? server.bind_to_any_port(config.host) : config.port;
  if (config.port != 0 && !server.bind_to_port(config.host, config.port)) {
    throw ConfigError("cannot listen on " + config.host + ":" + std::to_string(config.port));
  }
  if (port < 0) throw ConfigError("cannot listen on " + config.host);

  std::atomic<bool> done{false};
  std::thread waiter([&] {
    const timespec tick{0, 200 * 1000 * 1000};
    while (!done.load()) {
      if (sigtimedwait(&stop_signals, nullptr, &tick) > 0) {
        server.stop();
        return;
      }
    }
  });
  log("pypal " + std::string(kVersion) + " listening on " + config.host + ":" + std::to_string(port));
  server.listen_after_bind();
  done = true;
  waiter.join();
  log("pypal stopped");
}

}  // namespace pypal::service
