#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pypal/service/service.hpp"

using namespace pypal;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text) || !out.flush()) throw Error("cannot write '" + path + "'");
}

std::string data_path(const std::string& rel) { return std::string(PYPAL_DEFAULT_DATA_DIR) + "/" + rel; }

void print_reply(const dialogue::Reply& reply) {
  using namespace dialogue;
  if (auto* t = std::get_if<TextReply>(&reply)) {
    std::cout << "tutor> " << t->text << "\n";
  } else if (auto* l = std::get_if<TutorialLink>(&reply)) {
    std::cout << "tutor> [tutorial] " << l->title << ": " << l->url << "\n";
  } else if (auto* p = std::get_if<ExercisePrompt>(&reply)) {
    std::cout << "tutor> [exercise] " << p->exercise.title << "\n" << p->exercise.prompt << "\n";
    if (!p->exercise.shown_test_description.empty()) std::cout << p->exercise.shown_test_description << "\n";
  } else if (auto* g = std::get_if<GradeFeedback>(&reply)) {
    std::cout << "tutor> [" << grading::to_string(g->report.status) << "]\n" << g->report.feedback << "\n";
  } else if (auto* c = std::get_if<Clarification>(&reply)) {
    std::cout << "tutor> " << c->question << "\n";
    for (const auto& o : c->options) std::cout << "  - " << o << "\n";
  }
}

int cmd_grade(const std::string& exercise_id, const std::string& file, const std::string& bank_dir, bool json) {
  const auto bank = grading::load_bank(bank_dir);
  const auto* ex = grading::find_exercise(bank, exercise_id);
  if (!ex) throw Error("unknown exercise '" + exercise_id + "'");
  const auto report = grading::grade_submission(*ex, read_file(file));
  if (json) {
    std::cout << service::grade_report_to_json(report).dump(2) << "\n";
  } else {
    std::cout << "status: " << grading::to_string(report.status) << "\n\n" << report.feedback << "\n";
  }
  return report.status == grading::GradeStatus::passed ? 0 : 1;
}

int cmd_harness(const std::string& corpus_dir, const std::string& bank_dir, const std::string& report_path) {
  const auto report = grading::run_harness(grading::load_bank(bank_dir), grading::load_corpus(corpus_dir));
  if (!report_path.empty()) write_file(report_path, grading::report_to_json(report));
  std::cout << grading::format_table(report);
  return 0;
}

intent::IntentModel train(const std::string& strategy, const std::vector<intent::LabeledQuery>& data) {
  if (strategy == "flat") return intent::IntentModel::train_flat(data);
  if (strategy == "hier") return intent::IntentModel::train_hierarchical(data);
  throw Error("unknown strategy '" + strategy + "' (expected flat or hier)");
}

int cmd_chat(const std::string& config_path) {
  auto config = service::load_config(config_path);
  service::validate_config(config);
  const auto bank = grading::load_bank(config.bank_dir);
  const auto tutorials = dialogue::TutorialRepository::load(config.tutorials_path);
  const auto model = intent::IntentModel::load(config.model_path);
  exec::Limits limits;
  limits.max_steps = config.step_limit;
  dialogue::DialogueEngine engine(model, bank, tutorials, dialogue::default_transitions(),
                                  dialogue::default_chat_rules(), limits);

  dialogue::SessionState state;
  state.session_id = "local";
  std::cout << "Type a message, or end a code submission with a line holding only '.'. Ctrl-D quits.\n";
  std::string line;
  while (std::cout << "you> " << std::flush, std::getline(std::cin, line)) {
    std::string message = line;
    if (state.pending == dialogue::PendingKind::awaiting_code) {
      while (std::getline(std::cin, line) && line != ".") message += "\n" + line;
    }
    if (message.empty()) continue;
    auto result = engine.handle_message(state, message);
    for (const auto& r : result.replies) print_reply(r);
    state = std::move(result.state);
  }
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pypal: a Python programming tutor"};
  app.require_subcommand(1);
  int status = 0;

  std::string exercise_id, file, bank_dir = data_path("bank");
  bool json = false;
  auto* grade = app.add_subcommand("grade", "Grade one solution file");
  grade->add_option("--exercise", exercise_id, "Exercise id")->required();
  grade->add_option("--file", file, "Solution file")->required();
  grade->add_option("--bank", bank_dir, "Exercise bank directory");
  grade->add_flag("--json", json, "Print the report as JSON");
  grade->callback([&] { status = cmd_grade(exercise_id, file, bank_dir, json); });

  std::string corpus_dir = data_path("corpus"), report_path;
  auto* harness = app.add_subcommand("harness", "Grade a labeled corpus and tabulate accuracy");
  harness->add_option("--corpus", corpus_dir, "Corpus directory");
  harness->add_option("--bank", bank_dir, "Exercise bank directory");
  harness->add_option("--report", report_path, "Write the JSON report here");
  harness->callback([&] { status = cmd_harness(corpus_dir, bank_dir, report_path); });

  auto* intent_cmd = app.add_subcommand("intent", "Intent corpus and model tools");
  intent_cmd->require_subcommand(1);

  std::string strategy = "flat", corpus_file, out, model_path;
  auto* train_cmd = intent_cmd->add_subcommand("train", "Train an intent model");
  train_cmd->add_option("--strategy", strategy, "flat or hier")->check(CLI::IsMember({"flat", "hier"}));
  train_cmd->add_option("--corpus", corpus_file, "Training corpus (text<TAB>label lines)")->required();
  train_cmd->add_option("--out", out, "Model output path")->required();
  train_cmd->callback([&] {
    const auto model = train(strategy, intent::read_corpus(read_file(corpus_file)));
    model.save(out);
    std::cout << "wrote " << intent::to_string(model.kind()) << " model to " << out << "\n";
  });

  auto* eval_cmd = intent_cmd->add_subcommand("eval", "Evaluate a model on a labeled corpus");
  eval_cmd->add_option("--model", model_path, "Model path")->required();
  eval_cmd->add_option("--corpus", corpus_file, "Evaluation corpus")->required();
  eval_cmd->callback([&] {
    const auto model = intent::IntentModel::load(model_path);
    const auto test = intent::read_corpus(read_file(corpus_file));
    const auto result = intent::evaluate(model, test);
    std::cout << "queries: " << test.size() << "\n";
    std::cout << "macro-F1: " << std::fixed << std::setprecision(4) << result.f1.macro_f1 << "\n";
    std::cout << "mean latency: " << std::setprecision(1) << result.mean_latency_us << " us/query\n";
  });

  std::uint64_t seed = 1;
  int per_intent = 50;
  auto* gen_cmd = intent_cmd->add_subcommand("gen", "Generate a labeled query corpus");
  gen_cmd->add_option("--seed", seed, "Generator seed");
  gen_cmd->add_option("--per-intent", per_intent, "Queries per intent");
  gen_cmd->add_option("--out", out, "Output path")->required();
  gen_cmd->callback([&] { write_file(out, intent::write_corpus(intent::generate_corpus(seed, per_intent))); });

  std::string train_out, test_out;
  double test_fraction = 0.2;
  auto* split_cmd = intent_cmd->add_subcommand("split", "Stratified train/test split of a corpus");
  split_cmd->add_option("--corpus", corpus_file, "Corpus to split")->required();
  split_cmd->add_option("--seed", seed, "Shuffle seed");
  split_cmd->add_option("--test-fraction", test_fraction, "Share of each label held out")
      ->check(CLI::Range(0.0, 1.0));
  split_cmd->add_option("--train", train_out, "Training part output")->required();
  split_cmd->add_option("--test", test_out, "Held-out part output")->required();
  split_cmd->callback([&] {
    const auto split = intent::stratified_split(intent::read_corpus(read_file(corpus_file)), seed, test_fraction);
    write_file(train_out, intent::write_corpus(split.train));
    write_file(test_out, intent::write_corpus(split.test));
  });

  std::string config_path = data_path("pypal.json");
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--config", config_path, "Service config file");
  serve->callback([&] {
    auto config = service::load_config(config_path);
    service::run_server(config);
  });

  auto* chat = app.add_subcommand("chat", "Chat with the tutor in the terminal");
  chat->add_option("--config", config_path, "Service config file");
  chat->callback([&] { status = cmd_chat(config_path); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "pypal: error: " << e.what() << "\n";
    return 2;
  }
  return status;
}
