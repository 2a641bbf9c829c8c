#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pypal/error.hpp"

namespace pypal::intent {

// ---- labels ---------------------------------------------------------------

enum class Intent {
  general_conversation,
  ask_submission,
  video_variable,
  video_data_types,
  video_arith_operation,
  video_comparison,
  video_functions,
  video_return_values,
  video_none,
  exercise_variable,
  exercise_data_types,
  exercise_arith_operation,
  exercise_comparison,
  exercise_function,
  exercise_return_values,
  exercise_none,
};

inline constexpr std::size_t kIntentCount = 16;

/// Canonical order; ties in prediction go to the earliest entry.
inline constexpr Intent kAllIntents[kIntentCount] = {
    Intent::general_conversation,  Intent::ask_submission,     Intent::video_variable,
    Intent::video_data_types,      Intent::video_arith_operation, Intent::video_comparison,
    Intent::video_functions,       Intent::video_return_values, Intent::video_none,
    Intent::exercise_variable,     Intent::exercise_data_types, Intent::exercise_arith_operation,
    Intent::exercise_comparison,   Intent::exercise_function,   Intent::exercise_return_values,
    Intent::exercise_none,
};

enum class MainIntent { general, submit, video_request, exercise_request };
inline constexpr MainIntent kAllMainIntents[] = {MainIntent::general, MainIntent::submit,
                                                 MainIntent::video_request,
                                                 MainIntent::exercise_request};

/// The six exercise topics plus "none" for topics the tutor does not cover.
enum class SubIntent { variables, data_types, arithmetic, comparison, functions, return_values, none };
inline constexpr SubIntent kAllSubIntents[] = {SubIntent::variables,  SubIntent::data_types,
                                               SubIntent::arithmetic, SubIntent::comparison,
                                               SubIntent::functions,  SubIntent::return_values,
                                               SubIntent::none};

std::string_view to_string(Intent i) noexcept;
std::string_view to_string(MainIntent m) noexcept;
/// Matches the exercise ids of the shipped bank; "none" for SubIntent::none.
std::string_view to_string(SubIntent s) noexcept;

/// Throws pypal::Error for unknown names.
Intent intent_from_string(std::string_view name);
MainIntent main_intent_from_string(std::string_view name);
SubIntent sub_intent_from_string(std::string_view name);

MainIntent main_intent(Intent i) noexcept;
std::optional<SubIntent> sub_intent(Intent i) noexcept;
/// Inverse of (main_intent, sub_intent). Throws pypal::Error when a request
/// intent has no sub-intent or a non-request intent has one.
Intent compose(MainIntent m, std::optional<SubIntent> s);

// ---- errors ---------------------------------------------------------------

struct EmptyCorpus : Error { using Error::Error; };
struct DegenerateDataset : Error { using Error::Error; };
struct TemplateExhausted : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct ModelFormatError : Error { using Error::Error; };

// ---- features -------------------------------------------------------------

/// Lowercased ASCII alphanumeric runs; everything else separates tokens.
std::vector<std::string> tokenize_query(std::string_view text);

/// (feature index, value) pairs sorted by index.
using SparseVector = std::vector<std::pair<std::uint32_t, double>>;

class Featurizer {
 public:
  /// Throws EmptyCorpus when `docs` is empty.
  static Featurizer fit(const std::vector<std::vector<std::string>>& docs);
  static Featurizer from_parts(std::vector<std::string> vocabulary, std::vector<double> idf,
                               std::int64_t document_count);

  /// tf * idf, L2-normalized. Out-of-vocabulary tokens are ignored.
  SparseVector vectorize(const std::vector<std::string>& tokens) const;

  std::size_t size() const { return vocabulary_.size(); }
  std::int64_t document_count() const { return document_count_; }
  std::optional<double> idf(std::string_view token) const;
  const std::vector<std::string>& vocabulary() const { return vocabulary_; }
  const std::vector<double>& idf_weights() const { return idf_; }

 private:
  std::vector<std::string> vocabulary_;  // sorted; index = position
  std::vector<double> idf_;
  std::int64_t document_count_ = 0;
};

// ---- linear model -----------------------------------------------------------

struct TrainParams {
  double learning_rate = 0.5;
  int epochs = 300;
  double l2 = 1e-4;
};

/// Softmax regression over the labels present in the training data.
class LinearModel {
 public:
  /// Full-batch gradient descent on L2-regularized cross-entropy from zero
  /// weights. `labels` lists the class names in canonical order; `y` indexes
  /// into it. Classes absent from `y` are dropped. Throws DegenerateDataset
  /// for an empty dataset or a class with a single example.
  static LinearModel train(const std::vector<SparseVector>& x, const std::vector<int>& y,
                           const std::vector<std::string>& labels, std::size_t feature_count,
                           const TrainParams& params = {});

  LinearModel() = default;
  LinearModel(std::vector<std::string> labels, std::size_t feature_count,
              std::vector<double> weights, std::vector<double> bias);

  std::vector<double> scores(const SparseVector& v) const;
  std::vector<double> probabilities(const SparseVector& v) const;
  /// Index into labels() of the highest score, lowest index on ties.
  std::size_t predict_index(const SparseVector& v) const;

  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t feature_count() const { return feature_count_; }
  const std::vector<double>& weights() const { return weights_; }  // row-major classes x features
  const std::vector<double>& bias() const { return bias_; }

 private:
  std::vector<std::string> labels_;
  std::size_t feature_count_ = 0;
  std::vector<double> weights_;
  std::vector<double> bias_;
};

// ---- intent models --------------------------------------------------------

struct LabeledQuery {
  std::string text;
  Intent label = Intent::general_conversation;

  bool operator==(const LabeledQuery&) const = default;
};

struct Prediction {
  Intent label = Intent::general_conversation;
  /// Probability per flat label in canonical order. For the hierarchical
  /// model, P(main) * P(sub | main).
  std::vector<double> scores;
};

enum class ModelKind { flat, hierarchical };

std::string_view to_string(ModelKind k) noexcept;

class IntentModel {
 public:
  static IntentModel train_flat(const std::vector<LabeledQuery>& data, const TrainParams& params = {});
  /// Throws DegenerateDataset naming the level that could not be trained.
  static IntentModel train_hierarchical(const std::vector<LabeledQuery>& data,
                                        const TrainParams& params = {});

  /// Empty and all-out-of-vocabulary queries are general_conversation.
  Prediction predict(std::string_view query) const;

  ModelKind kind() const { return kind_; }
  const Featurizer& featurizer() const { return featurizer_; }

  std::string to_json() const;
  /// Throws ModelFormatError on a wrong format tag, version or shape.
  static IntentModel from_json(std::string_view text);
  void save(const std::string& path) const;
  static IntentModel load(const std::string& path);

 private:
  ModelKind kind_ = ModelKind::flat;
  Featurizer featurizer_;
  LinearModel flat_;
  LinearModel level1_;
  LinearModel video_;
  LinearModel exercise_;
};

inline constexpr std::string_view kModelFormat = "pypal-intent-model";
inline constexpr int kModelVersion = 1;

// ---- metrics --------------------------------------------------------------

struct ClassScore {
  std::string label;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  int support = 0;  // occurrences in truths
};

struct F1Report {
  double macro_f1 = 0;
  std::vector<ClassScore> per_class;  // sorted by label
};

/// Macro average over the labels present in truths or preds. Throws
/// LengthMismatch for unequal or empty inputs.
F1Report macro_f1(const std::vector<std::string>& truths, const std::vector<std::string>& preds);

struct EvalResult {
  F1Report f1;
  double mean_latency_us = 0;
  std::vector<Intent> predictions;
};

EvalResult evaluate(const IntentModel& model, const std::vector<LabeledQuery>& test);

// ---- corpus ---------------------------------------------------------------

/// Deterministic template-grid expansion from the embedded grid. Throws
/// TemplateExhausted when an intent cannot supply `per_intent` distinct
/// queries, and pypal::Error when per_intent < 2.
std::vector<LabeledQuery> generate_corpus(std::uint64_t seed, int per_intent);

struct Split {
  std::vector<LabeledQuery> train;
  std::vector<LabeledQuery> test;
};

/// Per label, a seeded shuffle sends round(n * test_fraction) queries to test.
Split stratified_split(const std::vector<LabeledQuery>& data, std::uint64_t seed,
                       double test_fraction = 0.2);

/// One `text<TAB>label` line per query.
std::string write_corpus(const std::vector<LabeledQuery>& data);
std::vector<LabeledQuery> read_corpus(std::string_view text);

/// Twelve hand-written example queries with their expected labels.
const std::vector<LabeledQuery>& example_queries();

}  // namespace pypal::intent
