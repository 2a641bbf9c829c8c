#include <chrono>
#include <map>

#include "pypal/intent/intent.hpp"

namespace pypal::intent {

F1Report macro_f1(const std::vector<std::string>& truths, const std::vector<std::string>& preds) {
  if (truths.size() != preds.size()) {
    throw LengthMismatch("truths and predictions differ in length (" + std::to_string(truths.size()) +
                         " vs " + std::to_string(preds.size()) + ")");
  }
  if (truths.empty()) throw LengthMismatch("no labels to score");

  struct Counts {
    int tp = 0, fp = 0, fn = 0, support = 0;
  };
  std::map<std::string, Counts> counts;
  for (std::size_t i = 0; i < truths.size(); ++i) {
    ++counts[truths[i]].support;
    if (truths[i] == preds[i]) {
      ++counts[truths[i]].tp;
    } else {
      ++counts[truths[i]].fn;
      ++counts[preds[i]].fp;
    }
  }

  F1Report report;
  double sum = 0;
  for (const auto& [label, c] : counts) {
    ClassScore s;
    s.label = label;
    s.support = c.support;
    s.precision = c.tp + c.fp == 0 ? 0.0 : static_cast<double>(c.tp) / (c.tp + c.fp);
    s.recall = c.tp + c.fn == 0 ? 0.0 : static_cast<double>(c.tp) / (c.tp + c.fn);
    s.f1 = s.precision + s.recall == 0 ? 0.0 : 2 * s.precision * s.recall / (s.precision + s.recall);
    sum += s.f1;
    report.per_class.push_back(std::move(s));
  }
  report.macro_f1 = sum / static_cast<double>(report.per_class.size());
  return report;
}

EvalResult evaluate(const IntentModel& model, const std::vector<LabeledQuery>& test) {
  EvalResult result;
  std::vector<std::string> truths;
  std::vector<std::string> preds;
  std::chrono::nanoseconds elapsed{0};
  for (const auto& q : test) {
    const auto start = std::chrono::steady_clock::now();
    const Intent label = model.predict(q.text).label;
    elapsed += std::chrono::steady_clock::now() - start;
    result.predictions.push_back(label);
    truths.emplace_back(to_string(q.label));
    preds.emplace_back(to_string(label));
  }
  result.f1 = macro_f1(truths, preds);
  result.mean_latency_us =
      std::chrono::duration<double, std::micro>(elapsed).count() / static_cast<double>(test.size());
  return result;
}

}  // namespace pypal::intent
