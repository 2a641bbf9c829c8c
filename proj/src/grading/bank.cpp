#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "pypal/grading/grading.hpp"

namespace pypal::grading {

namespace {

using nlohmann::json;

[[noreturn]] void malformed(std::string_view origin, std::string_view field, std::string_view what) {
  throw MalformedExercise(std::string(origin) + ": field '" + std::string(field) + "' " +
                          std::string(what));
}

std::string required_string(const json& doc, std::string_view origin, const char* field) {
  auto it = doc.find(field);
  if (it == doc.end()) malformed(origin, field, "is missing");
  if (!it->is_string()) malformed(origin, field, "must be a string");
  return it->get<std::string>();
}

exec::Value value_from_json(const json& j, std::string_view origin, const char* field) {
  switch (j.type()) {
    case json::value_t::null:
      return exec::Value::none();
    case json::value_t::boolean:
      return exec::Value::boolean(j.get<bool>());
    case json::value_t::number_integer:
    case json::value_t::number_unsigned:
      if (j.is_number_unsigned() && j.get<std::uint64_t>() > INT64_MAX) {
        malformed(origin, field, "holds an integer outside the 64-bit range");
      }
      return exec::Value::integer(j.get<std::int64_t>());
    case json::value_t::number_float:
      return exec::Value::floating(j.get<double>());
    case json::value_t::string:
      return exec::Value::str(j.get<std::string>());
    default:
      malformed(origin, field, "must be null, a boolean, a number or a string");
  }
}

}  // namespace

std::string value_to_json(const exec::Value& v) {
  json j;
  if (v.is_none()) {
    j = nullptr;
  } else if (v.is_bool()) {
    j = v.as_bool();
  } else if (v.is_int()) {
    j = v.as_int();
  } else if (v.is_float()) {
    j = v.as_float();
  } else if (v.is_str()) {
    j = v.as_str();
  } else {
    j = exec::repr_value(v);
  }
  return j.dump();
}

Exercise parse_exercise(std::string_view json_text, std::string_view origin) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw MalformedExercise(std::string(origin) + ": invalid JSON: " + e.what());
  }
  if (!doc.is_object()) throw MalformedExercise(std::string(origin) + ": top level must be an object");
  if (doc.value("format", "") != "pypal-exercise") malformed(origin, "format", "must be \"pypal-exercise\"");
  if (!doc.contains("version") || doc["version"] != 1) malformed(origin, "version", "must be 1");

  Exercise ex;
  ex.id = required_string(doc, origin, "id");
  if (ex.id.empty()) malformed(origin, "id", "is empty");
  ex.title = required_string(doc, origin, "title");
  ex.topic = required_string(doc, origin, "topic");
  if (std::find(std::begin(kTopics), std::end(kTopics), ex.topic) == std::end(kTopics)) {
    malformed(origin, "topic", "is not one of the six topics");
  }
  ex.prompt = required_string(doc, origin, "prompt");
  ex.shown_test_description = required_string(doc, origin, "shown_test_description");

  if (auto it = doc.find("stdin_lines"); it != doc.end()) {
    if (!it->is_array()) malformed(origin, "stdin_lines", "must be a list of strings");
    for (const auto& line : *it) {
      if (!line.is_string()) malformed(origin, "stdin_lines", "must be a list of strings");
      ex.stdin_lines.push_back(line.get<std::string>());
    }
  }

  const std::string mode = required_string(doc, origin, "mode");
  if (mode == "stdout") {
    ex.mode = TestMode::stdout_mode;
    ex.expected_output = required_string(doc, origin, "expected_output");
    for (const char* field : {"function_name", "args", "expected_return"}) {
      if (doc.contains(field)) malformed(origin, field, "is only allowed in function mode");
    }
  } else if (mode == "function") {
    ex.mode = TestMode::function_mode;
    ex.function_name = required_string(doc, origin, "function_name");
    auto args = doc.find("args");
    if (args == doc.end()) malformed(origin, "args", "is missing");
    if (!args->is_array()) malformed(origin, "args", "must be a list");
    for (const auto& a : *args) ex.args.push_back(value_from_json(a, origin, "args"));
    auto ret = doc.find("expected_return");
    if (ret == doc.end()) malformed(origin, "expected_return", "is missing");
    ex.expected_return = value_from_json(*ret, origin, "expected_return");
    if (doc.contains("expected_output")) malformed(origin, "expected_output", "is only allowed in stdout mode");
  } else {
    malformed(origin, "mode", "must be \"stdout\" or \"function\"");
  }
  return ex;
}

std::vector<Exercise> load_bank(const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error("exercise bank directory not found: " + dir);

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  std::vector<Exercise> bank;
  for (const auto& path : files) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    Exercise ex = parse_exercise(text.str(), path.string());
    if (find_exercise(bank, ex.id) != nullptr) malformed(path.string(), "id", "duplicates another exercise");
    bank.push_back(std::move(ex));
  }
  std::sort(bank.begin(), bank.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return bank;
}

const Exercise* find_exercise(const std::vector<Exercise>& bank, std::string_view id) {
  for (const auto& ex : bank) {
    if (ex.id == id) return &ex;
  }
  return nullptr;
}

}  // namespace pypal::grading
