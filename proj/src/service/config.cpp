#include <unistd.h>

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "pypal/service/service.hpp"

namespace fs = std::filesystem;

namespace pypal::service {

Logger stderr_logger() {
  return [](std::string_view line) { std::cerr << line << std::endl; };
}

EnvLookup process_env() {
  return [](const char* name) -> std::optional<std::string> {
    const char* v = std::getenv(name);
    if (v == nullptr) return std::nullopt;
    return std::string(v);
  };
}

std::pair<std::string, int> parse_address(std::string_view addr) {
  const auto colon = addr.rfind(':');
  if (colon == std::string_view::npos || colon == 0) {
    throw ConfigError("listen address '" + std::string(addr) + "' must look like host:port");
  }
  const auto port_text = addr.substr(colon + 1);
  int port = -1;
  auto [end, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
  if (ec != std::errc{} || end != port_text.data() + port_text.size() || port < 0 || port > 65535) {
    throw ConfigError("listen address '" + std::string(addr) + "' has an invalid port");
  }
  return {std::string(addr.substr(0, colon)), port};
}

namespace {

std::string required_string(const nlohmann::json& doc, const char* key, const std::string& origin) {
  if (!doc.contains(key) || !doc[key].is_string()) {
    throw ConfigError(origin + ": missing string field '" + key + "'");
  }
  return doc[key].get<std::string>();
}

std::string resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return (path.is_absolute() ? path : base / path).lexically_normal().string();
}

}  // namespace

ServiceConfig load_config(const std::string& path, const EnvLookup& env) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  const auto doc = nlohmann::json::parse(text.str(), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw ConfigError(path + ": not a JSON object");
  if (doc.value("format", "") != "pypal-config" || doc.value("version", 0) != 1) {
    throw ConfigError(path + ": expected format \"pypal-config\" version 1");
  }

  const fs::path base = fs::absolute(fs::path(path)).parent_path();
  ServiceConfig config;
  std::tie(config.host, config.port) = parse_address(required_string(doc, "listen", path));
  config.bank_dir = resolve(base, required_string(doc, "bank_dir", path));
  config.session_dir = resolve(base, required_string(doc, "session_dir", path));
  config.tutorials_path = resolve(base, required_string(doc, "tutorials", path));
  config.model_path = resolve(base, required_string(doc, "intent_model", path));
  if (doc.contains("step_limit")) {
    if (!doc["step_limit"].is_number_integer()) throw ConfigError(path + ": 'step_limit' must be an integer");
    config.step_limit = doc["step_limit"].get<std::int64_t>();
  }

  if (auto v = env("PYPAL_BANK_DIR")) config.bank_dir = *v;
  if (auto v = env("PYPAL_SESSION_DIR")) config.session_dir = *v;
  if (auto v = env("PYPAL_ADDR")) std::tie(config.host, config.port) = parse_address(*v);
  return config;
}

void validate_config(const ServiceConfig& config) {
  if (config.step_limit <= 0) throw ConfigError("step_limit must be positive");
  std::error_code ec;
  if (!fs::is_directory(config.bank_dir, ec) || ::access(config.bank_dir.c_str(), R_OK | X_OK) != 0) {
    throw ConfigError("bank directory '" + config.bank_dir + "' is not a readable directory");
  }
  for (const auto* file : {&config.tutorials_path, &config.model_path}) {
    if (!fs::is_regular_file(*file, ec) || ::access(file->c_str(), R_OK) != 0) {
      throw ConfigError("'" + *file + "' is not a readable file");
    }
  }
  fs::create_directories(config.session_dir, ec);
  if (!fs::is_directory(config.session_dir, ec) ||
      ::access(config.session_dir.c_str(), R_OK | W_OK | X_OK) != 0) {
    throw ConfigError("session directory '" + config.session_dir + "' is not a writable directory");
  }
}

}  // namespace pypal::service
