#include <fstream>
#include <sstream>

#include "json.hpp"
#include "pypal/intent/intent.hpp"

namespace pypal::intent {

namespace {

using nlohmann::json;


template <class Enum, std::size_t N>
std::vector<std::string> names(const Enum (&values)[N]) {
  std::vector<std::string> out;
  for (auto v : values) out.emplace_back(to_string(v));
  return out;
}


LinearModel train_level(const char* level, const Featurizer& f,
                        const std::vector<std::pair<std::vector<std::string>, int>>& rows,
                        const std::vector<std::string>& labels, const TrainParams& params) {
  std::vector<SparseVector> x;
  std::vector<int> y;
  for (const auto& [tokens, label] : rows) {
    x.push_back(f.vectorize(tokens));
    y.push_back(label);
  }
  try {
    return LinearModel::train(x, y, labels, f.size(), params);
  } catch (const DegenerateDataset& e) {
    throw DegenerateDataset(std::string(level) + " model: " + e.what());
  }
}

Featurizer fit_on(const std::vector<LabeledQuery>& data, std::vector<std::vector<std::string>>& tokens) {
  tokens.clear();
  for (const auto& q : data) tokens.push_back(tokenize_query(q.text));
  return Featurizer::fit(tokens);
}

json model_to_json(const LinearModel& m) {
  return {{"labels", m.labels()}, {"weights", m.weights()}, {"bias", m.bias()}};
}

LinearModel model_from_json(const json& j, std::size_t feature_count, const char* name) {
  try {
    auto labels = j.at("labels").get<std::vector<std::string>>();
    auto weights = j.at("weights").get<std::vector<double>>();
    auto bias = j.at("bias").get<std::vector<double>>();
    if (labels.empty()) throw ModelFormatError(std::string(name) + " model has no labels");
    return LinearModel(std::move(labels), feature_count, std::move(weights), std::move(bias));
  } catch (const json::exception& e) {
    throw ModelFormatError(std::string(name) + " model: " + e.what());
  } catch (const ModelFormatError&) {
    throw;
  } catch (const Error& e) {
    throw ModelFormatError(std::string(name) + " model: " + e.what());
  }
}

void check_labels(const LinearModel& m, const char* name, auto&& parse) {
  for (const auto& label : m.labels()) {
    try {
      parse(label);
    } catch (const Error&) {
      throw ModelFormatError(std::string(name) + " model has unknown label '" + label + "'");
    }
  }
}

}  // namespace

IntentModel IntentModel::train_flat(const std::vector<LabeledQuery>& data, const TrainParams& params) {
  if (data.empty()) throw DegenerateDataset("no training examples");
  std::vector<std::vector<std::string>> tokens;
  IntentModel m;
  m.kind_ = ModelKind::flat;
  m.featurizer_ = fit_on(data, tokens);
  std::vector<std::pair<std::vector<std::string>, int>> rows;
  for (std::size_t i = 0; i < data.size(); ++i) rows.emplace_back(tokens[i], static_cast<int>(data[i].label));
  m.flat_ = train_level("flat", m.featurizer_, rows, names(kAllIntents), params);
  return m;
}

IntentModel IntentModel::train_hierarchical(const std::vector<LabeledQuery>& data, const TrainParams& params) {
  if (data.empty()) throw DegenerateDataset("level-1 model: no training examples");
  std::vector<std::vector<std::string>> tokens;
  IntentModel m;
  m.kind_ = ModelKind::hierarchical;
  m.featurizer_ = fit_on(data, tokens);

  std::vector<std::pair<std::vector<std::string>, int>> level1;
  std::vector<std::pair<std::vector<std::string>, int>> video;
  std::vector<std::pair<std::vector<std::string>, int>> exercise;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const MainIntent main = main_intent(data[i].label);
    level1.emplace_back(tokens[i], static_cast<int>(main));
    if (auto sub = sub_intent(data[i].label)) {
      (main == MainIntent::video_request ? video : exercise).emplace_back(tokens[i], static_cast<int>(*sub));
    }
  }
  m.level1_ = train_level("level-1", m.featurizer_, level1, names(kAllMainIntents), params);
  m.video_ = train_level("level-2 video", m.featurizer_, video, names(kAllSubIntents), params);
  m.exercise_ = train_level("level-2 exercise", m.featurizer_, exercise, names(kAllSubIntents), params);
  return m;
}

Prediction IntentModel::predict(std::string_view query) const {
  Prediction out;
  out.scores.assign(kIntentCount, 0.0);
  const SparseVector v = featurizer_.vectorize(tokenize_query(query));
  if (v.empty()) {
    out.label = Intent::general_conversation;
    out.scores[0] = 1.0;
    return out;
  }
  if (kind_ == ModelKind::flat) {
    const auto probs = flat_.probabilities(v);
    for (std::size_t c = 0; c < probs.size(); ++c) {
      out.scores[static_cast<std::size_t>(intent_from_string(flat_.labels()[c]))] = probs[c];
    }
    out.label = intent_from_string(flat_.labels()[flat_.predict_index(v)]);
    return out;
  }

  const auto main_probs = level1_.probabilities(v);
  for (std::size_t c = 0; c < main_probs.size(); ++c) {
    const MainIntent main = main_intent_from_string(level1_.labels()[c]);
    if (main == MainIntent::general || main == MainIntent::submit) {
      out.scores[static_cast<std::size_t>(compose(main, std::nullopt))] = main_probs[c];
      continue;
    }
    const LinearModel& level2 = main == MainIntent::video_request ? video_ : exercise_;
    const auto sub_probs = level2.probabilities(v);
    for (std::size_t s = 0; s < sub_probs.size(); ++s) {
      const Intent flat = compose(main, sub_intent_from_string(level2.labels()[s]));
      out.scores[static_cast<std::size_t>(flat)] = main_probs[c] * sub_probs[s];
    }
  }
  const MainIntent main = main_intent_from_string(level1_.labels()[level1_.predict_index(v)]);
  if (main == MainIntent::video_request || main == MainIntent::exercise_request) {
    const LinearModel& level2 = main == MainIntent::video_request ? video_ : exercise_;
    out.label = compose(main, sub_intent_from_string(level2.labels()[level2.predict_index(v)]));
  } else {
    out.label = compose(main, std::nullopt);
  }
  return out;
}

std::string IntentModel::to_json() const {
  json j;
  j["format"] = kModelFormat;
  j["version"] = kModelVersion;
  j["kind"] = to_string(kind_);
  j["featurizer"] = {{"vocabulary", featurizer_.vocabulary()},
                     {"idf", featurizer_.idf_weights()},
                     {"document_count", featurizer_.document_count()}};
  if (kind_ == ModelKind::flat) {
    j["models"] = {{"flat", model_to_json(flat_)}};
  } else {
    j["models"] = {{"level1", model_to_json(level1_)},
                   {"video", model_to_json(video_)},
                   {"exercise", model_to_json(exercise_)}};
  }
  return j.dump();
}

IntentModel IntentModel::from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ModelFormatError(std::string("intent model is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || j.value("format", "") != kModelFormat) {
    throw ModelFormatError("not an intent model file (format tag missing or wrong)");
  }
  if (!j.contains("version") || !j["version"].is_number_integer() || j["version"] != kModelVersion) {
    throw ModelFormatError("unsupported intent model version " + (j.contains("version") ? j["version"].dump() : "(none)") +
                           ", expected " + std::to_string(kModelVersion));
  }
  IntentModel m;
  try {
    const auto& f = j.at("featurizer");
    m.featurizer_ = Featurizer::from_parts(f.at("vocabulary").get<std::vector<std::string>>(),
                                           f.at("idf").get<std::vector<double>>(),
                                           f.at("document_count").get<std::int64_t>());
  } catch (const json::exception& e) {
    throw ModelFormatError(std::string("featurizer: ") + e.what());
  } catch (const Error& e) {
    throw ModelFormatError(std::string("featurizer: ") + e.what());
  }
  const std::string kind = j.value("kind", "");
  const std::size_t d = m.featurizer_.size();
  if (!j.contains("models") || !j["models"].is_object()) throw ModelFormatError("models section missing");
  const auto& models = j["models"];
  auto section = [&](const char* name) -> const json& {
    if (!models.contains(name)) throw ModelFormatError(std::string(name) + " model missing");
    return models[name];
  };
  if (kind == "flat") {
    m.kind_ = ModelKind::flat;
    m.flat_ = model_from_json(section("flat"), d, "flat");
    check_labels(m.flat_, "flat", intent_from_string);
  } else if (kind == "hierarchical") {
    m.kind_ = ModelKind::hierarchical;
    m.level1_ = model_from_json(section("level1"), d, "level1");
    m.video_ = model_from_json(section("video"), d, "video");
    m.exercise_ = model_from_json(section("exercise"), d, "exercise");
    check_labels(m.level1_, "level1", main_intent_from_string);
    check_labels(m.video_, "video", sub_intent_from_string);
    check_labels(m.exercise_, "exercise", sub_intent_from_string);
  } else {
    throw ModelFormatError("unknown model kind '" + kind + "'");
  }
  return m;
}

void IntentModel::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out << to_json() << '\n';
  if (!out) throw Error("failed writing " + path);
}

IntentModel IntentModel::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read intent model " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return from_json(text.str());
}

}  // namespace pypal::intent
