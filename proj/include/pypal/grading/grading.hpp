#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pypal/diag/diagnostic.hpp"
#include "pypal/error.hpp"
#include "pypal/exec/interpreter.hpp"
#include "pypal/exec/value.hpp"

namespace pypal::grading {

inline constexpr std::string_view kTopics[] = {"variables",  "data_types", "arithmetic",
                                               "comparison", "functions",  "return_values"};

enum class TestMode { stdout_mode, function_mode };

struct Exercise {
  std::string id;
  std::string title;
  std::string topic;
  std::string prompt;
  TestMode mode = TestMode::stdout_mode;
  std::optional<std::string> function_name;
  std::vector<exec::Value> args;
  std::vector<std::string> stdin_lines;
  std::string expected_output;                // stdout mode
  std::optional<exec::Value> expected_return;  // function mode
  std::string shown_test_description;
};

/// Thrown by the bank loader. The message names the file and the field.
class MalformedExercise : public Error {
 public:
  using Error::Error;
};

/// Parses one exercise document. `origin` is used in error messages.
Exercise parse_exercise(std::string_view json_text, std::string_view origin);

/// Every `*.json` file in `dir`, sorted by id. Duplicate ids are malformed.
std::vector<Exercise> load_bank(const std::string& dir);

const Exercise* find_exercise(const std::vector<Exercise>& bank, std::string_view id);

/// The JSON value an exercise's args and expected return are written in.
std::string value_to_json(const exec::Value& v);

enum class GradeStatus { passed, test_failed, syntax_error, runtime_error, lint_error };

inline constexpr GradeStatus kAllStatuses[] = {GradeStatus::passed, GradeStatus::test_failed,
                                               GradeStatus::syntax_error,
                                               GradeStatus::runtime_error, GradeStatus::lint_error};

std::string_view to_string(GradeStatus s) noexcept;

struct GradeReport {
  GradeStatus status = GradeStatus::passed;
  std::optional<diag::Diagnostic> diagnostic;
  std::string feedback;
  std::optional<std::string> actual_output;
  std::optional<std::string> expected_output;
};

inline constexpr std::string_view kPassedFeedback = "Well done! Your solution passed the test case.";

/// parse, lint, execute, compare. Never throws for any source text.
GradeReport grade_submission(const Exercise& ex, std::string_view source,
                             const diag::TemplateTable& table = diag::default_templates(),
                             const exec::Limits& limits = {});

/// Line-wise equality after stripping trailing whitespace from each line and
/// dropping trailing empty lines.
bool compare_output(std::string_view actual, std::string_view expected);

// ---- evaluation harness ---------------------------------------------------

inline constexpr std::string_view kCorrectLabel = "correct";
inline constexpr std::string_view kSemanticLabel = "semantic";

/// One labeled solution. Files start with `# exercise: <id>` and
/// `# pattern: <pattern-id | semantic | fallback | correct>` comment lines.
struct CorpusEntry {
  std::string file_name;
  std::string exercise_id;
  std::string pattern_id;
  std::string source;
};

CorpusEntry parse_corpus_entry(std::string file_name, std::string source);
std::vector<CorpusEntry> load_corpus(const std::string& dir);

enum class Verdict { correct, incorrect_feedback, undetected, false_alarm };

std::string_view to_string(Verdict v) noexcept;

struct EntryOutcome {
  std::string file_name;
  std::string exercise_id;
  std::string expected_pattern;
  GradeStatus status = GradeStatus::passed;
  std::string detected_pattern;  // "semantic" for a test failure, "" when passed
  Verdict verdict = Verdict::correct;
};

struct ExerciseTally {
  std::string exercise_id;
  std::string title;
  int total = 0;
  int correct = 0;
  int incorrect_feedback = 0;
  int undetected = 0;
  int false_alarms = 0;
  int erroneous = 0;  // entries not labeled "correct"

  double accuracy() const { return total == 0 ? 0.0 : static_cast<double>(correct) / total; }
};

struct HarnessReport {
  std::vector<ExerciseTally> exercises;  // sorted by exercise id
  std::vector<EntryOutcome> entries;     // sorted by exercise id, then file name

  int total() const;
  int correct() const;
  double overall_accuracy() const;
};

/// Throws pypal::Error when an entry names an exercise missing from `bank`.
HarnessReport run_harness(const std::vector<Exercise>& bank,
                          const std::vector<CorpusEntry>& corpus,
                          const diag::TemplateTable& table = diag::default_templates());

/// "83.33% (5/6)" style, with "100% (6/6)" for whole percentages.
std::string format_accuracy(int correct, int total);

/// Table with the columns "Exercise Title", "Accuracy", "Incorrect Feedback"
/// and "Undetected Errors".
std::string format_table(const HarnessReport& report);

std::string report_to_json(const HarnessReport& report);

}  // namespace pypal::grading
