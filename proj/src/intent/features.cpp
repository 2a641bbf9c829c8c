#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>

#include "pypal/intent/intent.hpp"

namespace pypal::intent {

std::vector<std::string> tokenize_query(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (c < 0x80 && std::isalnum(c)) {
      current += static_cast<char>(std::tolower(c));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

Featurizer Featurizer::fit(const std::vector<std::vector<std::string>>& docs) {
  if (docs.empty()) throw EmptyCorpus("cannot fit a featurizer on an empty corpus");
  std::map<std::string, std::int64_t> df;
  for (const auto& doc : docs) {
    std::set<std::string_view> seen(doc.begin(), doc.end());
    for (auto t : seen) ++df[std::string(t)];
  }
  Featurizer f;
  f.document_count_ = static_cast<std::int64_t>(docs.size());
  const double n = static_cast<double>(f.document_count_);
  for (const auto& [token, count] : df) {
    f.vocabulary_.push_back(token);
    f.idf_.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0);
  }
  return f;
}

Featurizer Featurizer::from_parts(std::vector<std::string> vocabulary, std::vector<double> idf,
                                  std::int64_t document_count) {
  if (vocabulary.size() != idf.size()) throw Error("vocabulary and idf sizes differ");
  if (!std::is_sorted(vocabulary.begin(), vocabulary.end()) ||
      std::adjacent_find(vocabulary.begin(), vocabulary.end()) != vocabulary.end()) {
    throw Error("vocabulary must be sorted and free of duplicates");
  }
  Featurizer f;
  f.vocabulary_ = std::move(vocabulary);
  f.idf_ = std::move(idf);
  f.document_count_ = document_count;
  return f;
}

std::optional<double> Featurizer::idf(std::string_view token) const {
  auto it = std::lower_bound(vocabulary_.begin(), vocabulary_.end(), token);
  if (it == vocabulary_.end() || *it != token) return std::nullopt;
  return idf_[static_cast<std::size_t>(it - vocabulary_.begin())];
}

SparseVector Featurizer::vectorize(const std::vector<std::string>& tokens) const {
  std::map<std::uint32_t, double> tf;
  for (const auto& t : tokens) {
    auto it = std::lower_bound(vocabulary_.begin(), vocabulary_.end(), t);
    if (it == vocabulary_.end() || *it != t) continue;
    tf[static_cast<std::uint32_t>(it - vocabulary_.begin())] += 1.0;
  }
  SparseVector v;
  double norm = 0;
  for (const auto& [index, count] : tf) {
    const double w = count * idf_[index];
    v.emplace_back(index, w);
    norm += w * w;
  }
  if (norm > 0) {
    norm = std::sqrt(norm);
    for (auto& entry : v) entry.second /= norm;
  }
  return v;
}

LinearModel::LinearModel(std::vector<std::string> labels, std::size_t feature_count,
                         std::vector<double> weights, std::vector<double> bias)
    : labels_(std::move(labels)),
      feature_count_(feature_count),
      weights_(std::move(weights)),
      bias_(std::move(bias)) {
  if (weights_.size() != labels_.size() * feature_count_ || bias_.size() != labels_.size()) {
    throw Error("linear model shape does not match its label count");
  }
}

LinearModel LinearModel::train(const std::vector<SparseVector>& x, const std::vector<int>& y,
                               const std::vector<std::string>& labels, std::size_t feature_count,
                               const TrainParams& params) {
  if (x.size() != y.size()) throw Error("feature and label counts differ");
  if (x.empty()) throw DegenerateDataset("no training examples");

  std::vector<int> counts(labels.size(), 0);
  for (int label : y) {
    if (label < 0 || static_cast<std::size_t>(label) >= labels.size()) throw Error("label index out of range");
    ++counts[static_cast<std::size_t>(label)];
  }
  std::vector<int> compact(labels.size(), -1);
  std::vector<std::string> present;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (counts[i] == 0) continue;
    if (counts[i] < 2) throw DegenerateDataset("label '" + labels[i] + "' has a single example");
    compact[i] = static_cast<int>(present.size());
    present.push_back(labels[i]);
  }

  const std::size_t k = present.size();
  const std::size_t d = feature_count;
  const double n = static_cast<double>(x.size());
  std::vector<double> w(k * d, 0.0);
  std::vector<double> b(k, 0.0);
  std::vector<double> gw(k * d);
  std::vector<double> gb(k);
  std::vector<double> p(k);

  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    std::fill(gw.begin(), gw.end(), 0.0);
    std::fill(gb.begin(), gb.end(), 0.0);
    for (std::size_t s = 0; s < x.size(); ++s) {
      double top = -INFINITY;
      for (std::size_t c = 0; c < k; ++c) {
        double z = b[c];
        for (const auto& [j, v] : x[s]) z += w[c * d + j] * v;
        p[c] = z;
        top = std::max(top, z);
      }
      double sum = 0;
      for (auto& z : p) sum += (z = std::exp(z - top));
      const auto truth = static_cast<std::size_t>(compact[static_cast<std::size_t>(y[s])]);
      for (std::size_t c = 0; c < k; ++c) {
        const double g = p[c] / sum - (c == truth ? 1.0 : 0.0);
        gb[c] += g;
        for (const auto& [j, v] : x[s]) gw[c * d + j] += g * v;
      }
    }
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= params.learning_rate * (gw[i] / n + params.l2 * w[i]);
    for (std::size_t c = 0; c < k; ++c) b[c] -= params.learning_rate * gb[c] / n;
  }
  return LinearModel(std::move(present), d, std::move(w), std::move(b));
}

std::vector<double> LinearModel::scores(const SparseVector& v) const {
  std::vector<double> z(bias_);
  for (std::size_t c = 0; c < labels_.size(); ++c) {
    for (const auto& [j, value] : v) {
      if (j < feature_count_) z[c] += weights_[c * feature_count_ + j] * value;
    }
  }
  return z;
}

std::vector<double> LinearModel::probabilities(const SparseVector& v) const {
  auto z = scores(v);
  if (z.empty()) return z;
  const double top = *std::max_element(z.begin(), z.end());
  double sum = 0;
  for (auto& s : z) sum += (s = std::exp(s - top));
  for (auto& s : z) s /= sum;
  return z;
}

std::size_t LinearModel::predict_index(const SparseVector& v) const {
  const auto z = scores(v);
  std::size_t best = 0;
  for (std::size_t c = 1; c < z.size(); ++c) {
    if (z[c] > z[best]) best = c;
  }
  return best;
}

}  // namespace pypal::intent
