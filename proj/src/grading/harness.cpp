#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "pypal/grading/grading.hpp"

namespace pypal::grading {

namespace {

std::string header_value(std::string_view line, std::string_view key) {
  const std::string prefix = "# " + std::string(key) + ":";
  if (line.substr(0, prefix.size()) != prefix) return {};
  std::string_view rest = line.substr(prefix.size());
  const auto first = rest.find_first_not_of(" \t");
  const auto last = rest.find_last_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  return std::string(rest.substr(first, last - first + 1));
}

}  // namespace

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::correct: return "correct";
    case Verdict::incorrect_feedback: return "incorrect-feedback";
    case Verdict::undetected: return "undetected";
    case Verdict::false_alarm: return "false-alarm";
  }
  return "correct";
}

CorpusEntry parse_corpus_entry(std::string file_name, std::string source) {
  CorpusEntry entry;
  entry.file_name = std::move(file_name);
  std::istringstream in(source);
  std::string line;
  while (std::getline(in, line) && line.rfind('#', 0) == 0) {
    if (auto v = header_value(line, "exercise"); !v.empty()) entry.exercise_id = v;
    if (auto v = header_value(line, "pattern"); !v.empty()) entry.pattern_id = v;
  }
  if (entry.exercise_id.empty()) throw Error(entry.file_name + ": missing '# exercise:' header");
  if (entry.pattern_id.empty()) throw Error(entry.file_name + ": missing '# pattern:' header");
  entry.source = std::move(source);
  return entry;
}

std::vector<CorpusEntry> load_corpus(const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error("corpus directory not found: " + dir);
  std::vector<CorpusEntry> corpus;
  for (const auto& item : fs::directory_iterator(dir)) {
    if (!item.is_regular_file() || item.path().extension() != ".py") continue;
    std::ifstream in(item.path(), std::ios::binary);
    if (!in) throw Error("cannot read " + item.path().string());
    std::ostringstream text;
    text << in.rdbuf();
    corpus.push_back(parse_corpus_entry(item.path().filename().string(), text.str()));
  }
  std::sort(corpus.begin(), corpus.end(), [](const auto& a, const auto& b) {
    return std::tie(a.exercise_id, a.file_name) < std::tie(b.exercise_id, b.file_name);
  });
  return corpus;
}

int HarnessReport::total() const {
  int n = 0;
  for (const auto& t : exercises) n += t.total;
  return n;
}

int HarnessReport::correct() const {
  int n = 0;
  for (const auto& t : exercises) n += t.correct;
  return n;
}

double HarnessReport::overall_accuracy() const {
  return total() == 0 ? 0.0 : static_cast<double>(correct()) / total();
}

HarnessReport run_harness(const std::vector<Exercise>& bank, const std::vector<CorpusEntry>& corpus,
                          const diag::TemplateTable& table) {
  std::map<std::string, ExerciseTally> tallies;
  HarnessReport report;
  for (const auto& entry : corpus) {
    const Exercise* ex = find_exercise(bank, entry.exercise_id);
    if (ex == nullptr) throw Error(entry.file_name + ": unknown exercise id '" + entry.exercise_id + "'");

    const GradeReport grade = grade_submission(*ex, entry.source, table);
    EntryOutcome out;
    out.file_name = entry.file_name;
    out.exercise_id = entry.exercise_id;
    out.expected_pattern = entry.pattern_id;
    out.status = grade.status;
    if (grade.status == GradeStatus::test_failed) {
      out.detected_pattern = kSemanticLabel;
    } else if (grade.diagnostic) {
      out.detected_pattern = grade.diagnostic->pattern_id;
    }

    ExerciseTally& tally = tallies[ex->id];
    tally.exercise_id = ex->id;
    tally.title = ex->title;
    ++tally.total;
    if (entry.pattern_id == kCorrectLabel) {
      out.verdict = grade.status == GradeStatus::passed ? Verdict::correct : Verdict::false_alarm;
    } else {
      ++tally.erroneous;
      if (grade.status == GradeStatus::passed) {
        out.verdict = Verdict::undetected;
      } else if (out.detected_pattern == entry.pattern_id) {
        out.verdict = Verdict::correct;
      } else {
        out.verdict = Verdict::incorrect_feedback;
      }
    }
    switch (out.verdict) {
      case Verdict::correct: ++tally.correct; break;
      case Verdict::incorrect_feedback: ++tally.incorrect_feedback; break;
      case Verdict::undetected: ++tally.undetected; break;
      case Verdict::false_alarm: ++tally.false_alarms; break;
    }
    report.entries.push_back(std::move(out));
  }
  for (auto& [id, tally] : tallies) report.exercises.push_back(std::move(tally));
  std::sort(report.entries.begin(), report.entries.end(), [](const auto& a, const auto& b) {
    return std::tie(a.exercise_id, a.file_name) < std::tie(b.exercise_id, b.file_name);
  });
  return report;
}

std::string format_accuracy(int correct, int total) {
  const double pct = total == 0 ? 0.0 : 100.0 * correct / total;
  char buf[64];
  if (std::fabs(pct - std::round(pct)) < 1e-9) {
    std::snprintf(buf, sizeof buf, "%.0f%% (%d/%d)", pct, correct, total);
  } else {
    std::snprintf(buf, sizeof buf, "%.2f%% (%d/%d)", pct, correct, total);
  }
  return buf;
}

std::string format_table(const HarnessReport& report) {
  std::size_t width = std::string_view("Exercise Title").size();
  for (const auto& t : report.exercises) width = std::max(width, t.title.size());
  char buf[512];
  std::string out;
  auto row = [&](const std::string& title, const std::string& acc, const std::string& inc,
                 const std::string& und) {
    std::snprintf(buf, sizeof buf, "%-*s  %-16s  %-18s  %s\n", static_cast<int>(width), title.c_str(),
                  acc.c_str(), inc.c_str(), und.c_str());
    out += buf;
  };
  row("Exercise Title", "Accuracy", "Incorrect Feedback", "Undetected Errors");
  int inc = 0;
  int und = 0;
  for (const auto& t : report.exercises) {
    row(t.title, format_accuracy(t.correct, t.total), std::to_string(t.incorrect_feedback),
        std::to_string(t.undetected));
    inc += t.incorrect_feedback;
    und += t.undetected;
  }
  row("Overall", format_accuracy(report.correct(), report.total()), std::to_string(inc),
      std::to_string(und));
  return out;
}

std::string report_to_json(const HarnessReport& report) {
  nlohmann::json j;
  j["format"] = "pypal-harness-report";
  j["version"] = 1;
  j["overall_accuracy"] = report.overall_accuracy();
  j["total"] = report.total();
  j["correct"] = report.correct();
  auto& exercises = j["exercises"] = nlohmann::json::array();
  for (const auto& t : report.exercises) {
    exercises.push_back({{"id", t.exercise_id},
                         {"title", t.title},
                         {"total", t.total},
                         {"erroneous", t.erroneous},
                         {"correct", t.correct},
                         {"accuracy", t.accuracy()},
                         {"incorrect_feedback", t.incorrect_feedback},
                         {"undetected_errors", t.undetected},
                         {"false_alarms", t.false_alarms}});
  }
  auto& entries = j["entries"] = nlohmann::json::array();
  for (const auto& e : report.entries) {
    entries.push_back({{"file", e.file_name},
                       {"exercise", e.exercise_id},
                       {"expected_pattern", e.expected_pattern},
                       {"detected_pattern", e.detected_pattern},
                       {"status", to_string(e.status)},
                       {"verdict", to_string(e.verdict)}});
  }
  return j.dump(2) + "\n";
}

}  // namespace pypal::grading
