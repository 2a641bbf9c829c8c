#include <cctype>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "pypal/intent/intent.hpp"

namespace pypal::intent {

namespace detail {
extern const std::string_view kEmbeddedIntentGrid;
}

namespace {

using nlohmann::json;

template <class T>
void seeded_shuffle(std::vector<T>& items, std::mt19937_64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(items[i - 1], items[j]);
  }
}

std::string join_prefix(const std::string& prefix, std::string sentence) {
  const bool lower = prefix.size() >= 2 && prefix.compare(prefix.size() - 2, 2, ", ") == 0;
  const bool pronoun_i = sentence.size() > 1 && sentence[0] == 'I' && (sentence[1] == ' ' || sentence[1] == '\'');
  if (lower && !sentence.empty() && !pronoun_i) {
    sentence[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(sentence[0])));
  }
  return prefix + sentence;
}

std::string fill(const std::string& tmpl, const std::string& topic) {
  std::string out = tmpl;
  const std::string slot = "{topic}";
  if (auto pos = out.find(slot); pos != std::string::npos) out.replace(pos, slot.size(), topic);
  return out;
}

std::vector<std::string> candidates(const json& grid, Intent intent) {
  const auto prefixes = grid.at("prefixes").get<std::vector<std::string>>();
  std::vector<std::string> sentences;
  const MainIntent main = main_intent(intent);
  if (main == MainIntent::general || main == MainIntent::submit) {
    sentences = grid.at(std::string(to_string(intent))).get<std::vector<std::string>>();
  } else {
    const char* key = main == MainIntent::video_request ? "video_templates" : "exercise_templates";
    const auto topics = grid.at("topics").at(std::string(to_string(*sub_intent(intent))));
    for (const auto& tmpl : grid.at(key)) {
      for (const auto& topic : topics) sentences.push_back(fill(tmpl.get<std::string>(), topic.get<std::string>()));
    }
  }
  std::vector<std::string> out;
  for (const auto& s : sentences) {
    for (const auto& p : prefixes) out.push_back(join_prefix(p, s));
  }
  return out;
}

}  // namespace

std::vector<LabeledQuery> generate_corpus(std::uint64_t seed, int per_intent) {
  if (per_intent < 2) throw Error("per-intent count must be at least 2");
  static const json grid = json::parse(detail::kEmbeddedIntentGrid);
  std::mt19937_64 rng(seed);
  std::set<std::string> used;
  std::vector<LabeledQuery> corpus;
  for (Intent intent : kAllIntents) {
    auto pool = candidates(grid, intent);
    seeded_shuffle(pool, rng);
    int taken = 0;
    for (auto& text : pool) {
      if (taken == per_intent) break;
      if (!used.insert(text).second) continue;
      corpus.push_back({std::move(text), intent});
      ++taken;
    }
    if (taken < per_intent) {
      throw TemplateExhausted("template grid for '" + std::string(to_string(intent)) + "' supplies only " +
                              std::to_string(taken) + " distinct queries, " + std::to_string(per_intent) +
                              " requested");
    }
  }
  return corpus;
}

Split stratified_split(const std::vector<LabeledQuery>& data, std::uint64_t seed, double test_fraction) {
  if (test_fraction < 0 || test_fraction > 1) throw Error("test fraction must lie in [0, 1]");
  std::mt19937_64 rng(seed);
  std::vector<bool> in_test(data.size(), false);
  for (Intent intent : kAllIntents) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (data[i].label == intent) idx.push_back(i);
    }
    seeded_shuffle(idx, rng);
    const auto n_test = static_cast<std::size_t>(std::llround(static_cast<double>(idx.size()) * test_fraction));
    for (std::size_t k = 0; k < n_test; ++k) in_test[idx[k]] = true;
  }
  Split split;
  for (std::size_t i = 0; i < data.size(); ++i) (in_test[i] ? split.test : split.train).push_back(data[i]);
  return split;
}

std::string write_corpus(const std::vector<LabeledQuery>& data) {
  std::string out;
  for (const auto& q : data) {
    if (q.text.find_first_of("\t\n") != std::string::npos) throw Error("query contains a tab or newline");
    out += q.text;
    out += '\t';
    out += to_string(q.label);
    out += '\n';
  }
  return out;
}

std::vector<LabeledQuery> read_corpus(std::string_view text) {
  std::vector<LabeledQuery> data;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.rfind('\t');
    if (tab == std::string::npos) throw Error("corpus line " + std::to_string(number) + " has no tab");
    data.push_back({line.substr(0, tab), intent_from_string(line.substr(tab + 1))});
  }
  return data;
}

const std::vector<LabeledQuery>& example_queries() {
  static const std::vector<LabeledQuery> queries = {
      {"How can I stay motivated while learning to code?", Intent::general_conversation},
      {"Can you show me a video on Python variables?", Intent::video_variable},
      {"Can you show me a video on understanding data types in Python?", Intent::video_data_types},
      {"Can I watch a video on using Python for arithmetic calculations?", Intent::video_arith_operation},
      {"I need a video on defining and calling functions in Python.", Intent::video_functions},
      {"Can you find a video on how to work with return values in Python functions?",
       Intent::video_return_values},
      {"Please provide a beginner's exercise on Python data types.", Intent::exercise_data_types},
      {"I'd like to practice basic arithmetic in Python.", Intent::exercise_arith_operation},
      {"I need a practice exercise on defining and calling functions in Python.", Intent::exercise_function},
      {"Is there a video explaining the difference between global and local variables in Python?",
       Intent::video_none},
      {"I'd like an exercise about calculating the power of a number in Python.", Intent::exercise_none},
      {"I've finished the exercise and I'm ready to submit.", Intent::ask_submission},
  };
  return queries;
}

}  // namespace pypal::intent
