#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <set>
#include <sstream>

#include "kdd_profile.hpp"
#include "mimic/config.hpp"
#include "mimic/data.hpp"
#include "mimic/error.hpp"
#include "mimic/eval.hpp"
#include "mimic/hash.hpp"
#include "mimic/model_store.hpp"
#include "mimic/pipeline.hpp"
#include "mimic/version.hpp"

namespace mimic::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

const std::set<std::string> kInputFlags = {"--input", "--schema", "--data", "--model", "--teacher", "--student",
                                           "--test", "--sensitive", "--unlabeled", "--config"};
const std::set<std::string> kOutputFlags = {"--out-dir", "--out-model", "--report", "--out", "--roc-dir",
                                            "--manifest", "--schema-out"};

int exit_code(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::Usage:
    case ErrorCategory::Contract:
      return kExitUsage;
    case ErrorCategory::Data:
    case ErrorCategory::Training:
    case ErrorCategory::Storage:
      return kExitData;
    case ErrorCategory::Internal:
      break;
  }
  return kExitInternal;
}

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

std::string percent(const std::optional<double>& v) {
  if (!v) return "n/a";
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << *v * 100.0 << '%';
  return s.str();
}

void print_header(std::ostream& out) {
  out << "  " << std::left << std::setw(12) << "classifier" << std::right;
  for (const char* h : {"ACC", "TPR", "FPR", "TNR", "FNR", "AUC"}) out << std::setw(10) << h;
  out << "\n";
}

void print_row(std::ostream& out, std::string_view name, const std::optional<double>& acc,
               const std::optional<double>& tpr, const std::optional<double>& fpr, const std::optional<double>& tnr,
               const std::optional<double>& fnr, const std::optional<double>& auc) {
  out << "  " << std::left << std::setw(12) << name << std::right;
  for (const auto* v : {&acc, &tpr, &fpr, &tnr, &fnr, &auc}) out << std::setw(10) << percent(*v);
}

void print_selection(std::ostream& out, std::string_view title, const Selection& selection, int k) {
  out << title << " (" << k << "-fold cross-validation means)\n";
  print_header(out);
  for (std::size_t i = 0; i < selection.table.size(); ++i) {
    const auto& row = selection.table[i];
    const auto& m = row.cv.mean;
    print_row(out, row.spec.name(), m.acc, m.tpr, m.fpr, m.tnr, m.fnr, m.auc);
    out << (i == selection.winner_index ? "  selected\n" : "\n");
    for (const auto& w : row.cv.warnings) out << "    warning: " << w << "\n";
  }
}

void print_evaluation(std::ostream& out, std::string_view name, const EvaluationReport& r) {
  print_row(out, name, r.rates.acc, r.rates.tpr, r.rates.fpr, r.rates.tnr, r.rates.fnr, r.auc);
  out << "\n";
}

void write_roc(const fs::path& path, const EvaluationReport& report) {
  std::string text = "fpr,tpr\n";
  for (const auto& p : report.roc) text += format_number(p.fpr) + "," + format_number(p.tpr) + "\n";
  write_text_file(path, text);
}

std::int64_t resolve_timestamp(const std::optional<std::int64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH"); env && *env) {
    std::int64_t value = 0;
    const std::string_view s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError("SOURCE_DATE_EPOCH is not an integer");
    return value;
  }
  return std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch())
      .count();
}

// Everything needed to rerun a command and check its outputs.
struct Manifest {
  std::string command;
  std::vector<std::string> argv;
  json settings = json::object();
  std::vector<fs::path> inputs{};
  std::vector<fs::path> outputs{};
  json timings = json::object();

  void write(const fs::path& path) const {
    json in = json::object(), out = json::object();
    for (const auto& p : inputs) in[p.string()] = sha256_file(p);
    for (const auto& p : outputs) out[p.filename().string()] = sha256_file(p);
    const json doc = {{"command", command},
                      {"argv", argv},
                      {"cwd", fs::current_path().string()},
                      {"tool_version", kToolVersion},
                      {"settings", settings},
                      {"inputs", in},
                      {"outputs", out},
                      {"timings_ms", timings}};
    write_text_file(path, dump_canonical(doc));
  }
};

std::shared_ptr<const Schema> read_schema(const std::string& path) {
  return std::make_shared<const Schema>(load_schema(path));
}

// Config file (if any), then command-line overrides, in one pass so the
// overrides win.
PipelineConfig build_config(const std::optional<std::string>& config_path, const std::vector<std::string>& overrides) {
  std::string text;
  if (config_path) {
    std::ifstream in(*config_path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file " + *config_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str() + "\n";
  }
  for (const auto& line : overrides) text += line + "\n";
  return parse_config(text, PipelineConfig::defaults(0));
}

bool has_rows(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::string line;
  while (std::getline(in, line)) {
    if (!trim(line).empty()) return true;
  }
  return false;
}

struct Options {
  std::vector<std::string> argv;
  std::string schema;
  bool header = false;
  unsigned threads = default_thread_count();

  // split
  std::string input, out_dir;
  std::size_t labeled_n = 0, unlabeled_n = 0, test_n = 0;
  bool stratified = false;
  std::optional<std::uint64_t> seed;

  // train
  std::string data, out_model, report;
  std::optional<std::string> roster, config, manifest;
  std::optional<int> cv_k;
  std::optional<std::int64_t> timestamp;

  // annotate
  std::string model, out;

  // evaluate
  std::string teacher, test;
  std::optional<std::string> student, roc_dir;
  double threshold = 0.01;

  // pipeline
  std::string sensitive, unlabeled;

  // generate
  std::uint64_t rows = 0;
  std::optional<std::string> schema_out;
};

int cmd_split(const Options& o, std::ostream& out) {
  const auto start = Clock::now();
  const auto schema = read_schema(o.schema);
  const Dataset source = load_dataset(o.input, schema, o.header);
  SplitSpec spec{o.labeled_n, o.unlabeled_n, o.test_n, o.seed.value_or(0), o.stratified};
  const auto parts = split_dataset(source, spec);

  const fs::path dir(o.out_dir);
  fs::create_directories(dir);
  Manifest m{"split", o.argv};
  m.inputs = {o.input, o.schema};
  const std::pair<const char*, const Dataset*> files[] = {
      {"sensitive.csv", &parts.sensitive}, {"unlabeled.csv", &parts.public_unlabeled}, {"test.csv", &parts.test}};
  for (const auto& [name, ds] : files) {
    write_dataset(dir / name, *ds, false);
    m.outputs.push_back(dir / name);
    out << std::left << std::setw(15) << name << std::right << std::setw(8) << ds->size() << " rows";
    if (ds->labeled() && !ds->empty()) out << "  (" << percent(class_balance(*ds).malicious_fraction) << " malicious)";
    out << "\n";
  }
  m.settings = {{"seed", spec.seed},
                {"labeled_count", spec.labeled_count},
                {"unlabeled_count", spec.unlabeled_count},
                {"test_count", spec.test_count},
                {"stratified", spec.stratified},
                {"source_rows", source.size()}};
  m.timings["total"] = elapsed_ms(start);
  m.write(dir / "manifest.json");
  return kExitOk;
}

int cmd_train(const Options& o, ModelRole role, std::ostream& out) {
  const auto start = Clock::now();
  std::vector<std::string> overrides;
  if (o.seed) overrides.push_back("pipeline.seed: " + std::to_string(*o.seed));
  if (o.roster) {
    overrides.push_back(std::string(role == ModelRole::Teacher ? "pipeline.teacher_roster: " : "pipeline.student_roster: ") +
                        *o.roster);
  }
  if (o.cv_k) overrides.push_back("eval.k: " + std::to_string(*o.cv_k));
  overrides.push_back("pipeline.timestamp: " + std::to_string(resolve_timestamp(o.timestamp)));
  const PipelineConfig cfg = build_config(o.config, overrides);

  const auto schema = read_schema(o.schema);
  const Dataset data = load_dataset(o.data, schema, o.header);
  if (!data.labeled()) throw ContractError(o.data + ": training data must be labeled");
  const TrainOptions options{o.threads};
  const auto generated = role == ModelRole::Teacher ? teacher_model_generation(data, cfg, options)
                                                    : student_model_generation(data, cfg, options);

  print_selection(out, role == ModelRole::Teacher ? "Teacher selection" : "Student selection", generated.selection,
                  cfg.cv.k);
  save_model(generated.model, o.out_model);
  out << "wrote " << role_name(role) << " model (" << generated.model.metadata.spec.name() << ") to " << o.out_model
      << "\n";

  Manifest m{role == ModelRole::Teacher ? "train-teacher" : "train-student", o.argv};
  m.inputs = {o.data, o.schema};
  if (o.config) m.inputs.push_back(*o.config);
  m.outputs = {o.out_model};
  if (!o.report.empty()) {
    write_text_file(o.report, dump_canonical(to_json(generated.selection)));
    m.outputs.push_back(o.report);
  }
  m.settings = {{"config", config_to_text(cfg)}, {"threads", o.threads}};
  m.timings["total"] = elapsed_ms(start);
  if (o.manifest) m.write(*o.manifest);
  return kExitOk;
}

int cmd_annotate(const Options& o, std::ostream& out) {
  const auto start = Clock::now();
  const TrainedModel model = load_model(o.model);
  const auto schema = read_schema(o.schema);
  if (!has_rows(o.data)) throw ContractError(o.data + ": no rows to annotate");
  const Dataset data = load_dataset(o.data, schema, o.header);
  if (data.labeled()) throw ContractError(o.data + ": input is labeled; annotate expects unlabeled data");
  check_schema(model, data);
  const Dataset annotated = annotate(model, data);
  write_dataset(o.out, annotated, false);
  const auto balance = class_balance(annotated);
  out << "annotated " << annotated.size() << " rows (" << percent(balance.malicious_fraction) << " malicious) -> "
      << o.out << "\n";

  Manifest m{"annotate", o.argv};
  m.inputs = {o.model, o.data, o.schema};
  m.outputs = {o.out};
  m.timings["total"] = elapsed_ms(start);
  if (o.manifest) m.write(*o.manifest);
  return kExitOk;
}

int cmd_evaluate(const Options& o, std::ostream& out) {
  const auto start = Clock::now();
  const auto schema = read_schema(o.schema);
  const Dataset test = load_dataset(o.test, schema, o.header);
  if (!test.labeled()) throw ContractError(o.test + ": test data must be labeled");
  const TrainedModel teacher = load_model(o.teacher);
  Manifest m{"evaluate", o.argv};
  m.inputs = {o.teacher, o.test, o.schema};

  int status = kExitOk;
  json report;
  print_header(out);
  if (!o.student) {
    const auto r = evaluate(teacher, test);
    print_evaluation(out, teacher.metadata.spec.name(), r);
    report = {{"model", metadata_to_json(teacher.metadata)}, {"evaluation", to_json(r)}};
    if (o.roc_dir) {
      fs::create_directories(*o.roc_dir);
      write_roc(fs::path(*o.roc_dir) / "roc.csv", r);
      m.outputs.push_back(fs::path(*o.roc_dir) / "roc.csv");
    }
  } else {
    const TrainedModel student = load_model(*o.student);
    m.inputs.push_back(*o.student);
    const auto cmp = evaluate_models(teacher, student, test);
    const bool pass = release_decision(cmp.relative_score_difference, o.threshold);
    print_evaluation(out, "teacher/" + std::string(teacher.metadata.spec.name()), cmp.teacher);
    print_evaluation(out, "student/" + std::string(student.metadata.spec.name()), cmp.student);
    out << "relative score difference " << std::setprecision(6) << cmp.relative_score_difference << " (threshold "
        << o.threshold << "): " << (pass ? "PASS" : "FAIL") << "\n";
    report = {{"teacher", metadata_to_json(teacher.metadata)},
              {"student", metadata_to_json(student.metadata)},
              {"teacher_eval", to_json(cmp.teacher)},
              {"student_eval", to_json(cmp.student)},
              {"relative_score_difference", cmp.relative_score_difference},
              {"threshold", o.threshold},
              {"pass", pass}};
    if (o.roc_dir) {
      fs::create_directories(*o.roc_dir);
      write_roc(fs::path(*o.roc_dir) / "roc_teacher.csv", cmp.teacher);
      write_roc(fs::path(*o.roc_dir) / "roc_student.csv", cmp.student);
      m.outputs.push_back(fs::path(*o.roc_dir) / "roc_teacher.csv");
      m.outputs.push_back(fs::path(*o.roc_dir) / "roc_student.csv");
    }
    if (!pass) status = kExitGateFailed;
  }
  if (!o.report.empty()) {
    write_text_file(o.report, dump_canonical(report));
    m.outputs.push_back(o.report);
  }
  m.settings = {{"threshold", o.threshold}};
  m.timings["total"] = elapsed_ms(start);
  if (o.manifest) m.write(*o.manifest);
  return status;
}

int cmd_pipeline(const Options& o, std::ostream& out) {
  const auto start = Clock::now();
  std::vector<std::string> overrides;
  if (o.seed) overrides.push_back("pipeline.seed: " + std::to_string(*o.seed));
  overrides.push_back("pipeline.timestamp: " + std::to_string(resolve_timestamp(o.timestamp)));
  const PipelineConfig cfg = build_config(o.config, overrides);

  const auto schema = read_schema(o.schema);
  const Dataset sensitive = load_dataset(o.sensitive, schema, o.header);
  const Dataset unlabeled = load_dataset(o.unlabeled, schema, o.header);
  const Dataset test = load_dataset(o.test, schema, o.header);
  const double load_ms = elapsed_ms(start);

  const auto run_start = Clock::now();
  const PipelineReport report = run_pipeline(sensitive, unlabeled, test, cfg, TrainOptions{o.threads});
  const double run_ms = elapsed_ms(run_start);

  print_selection(out, "Teacher selection", report.teacher_selection, cfg.cv.k);
  out << "\nannotated " << report.annotation.rows << " public rows (" << percent(report.annotation.malicious_fraction)
      << " malicious)\n\n";
  print_selection(out, "Student selection", report.student_selection, cfg.cv.k);
  out << "\nTest set (" << test.size() << " rows)\n";
  print_header(out);
  print_evaluation(out, "teacher/" + std::string(report.teacher.metadata.spec.name()), report.teacher_eval);
  print_evaluation(out, "student/" + std::string(report.student.metadata.spec.name()), report.student_eval);
  out << "relative score difference " << std::setprecision(6) << report.relative_score_difference << " (threshold "
      << report.release_threshold << "): " << (report.released ? "RELEASED" : "NOT RELEASED") << "\n";

  const fs::path dir(o.out_dir);
  fs::create_directories(dir);
  Manifest m{"pipeline", o.argv};
  m.inputs = {o.sensitive, o.unlabeled, o.test, o.schema};
  if (o.config) m.inputs.push_back(*o.config);
  save_model(report.teacher, dir / "teacher.json");
  save_model(report.student, dir / "student.json");
  write_dataset(dir / "annotated.csv", *report.annotated, false);
  write_text_file(dir / "report.json", dump_canonical(to_json(report)));
  write_roc(dir / "roc_teacher.csv", report.teacher_eval);
  write_roc(dir / "roc_student.csv", report.student_eval);
  for (const char* name : {"teacher.json", "student.json", "annotated.csv", "report.json", "roc_teacher.csv",
                           "roc_student.csv"}) {
    m.outputs.push_back(dir / name);
  }
  m.settings = {{"config", config_to_text(cfg)}, {"threads", o.threads}};
  m.timings = {{"load", load_ms}, {"pipeline", run_ms}, {"total", elapsed_ms(start)}};
  m.write(dir / "manifest.json");
  return report.released ? kExitOk : kExitGateFailed;
}

int cmd_generate(const Options& o, std::ostream& out) {
  {
    std::ofstream file(o.out, std::ios::binary);
    if (!file) throw StorageError("cannot write " + o.out);
    kdd::write_csv(file, o.rows, o.seed.value_or(0), o.header);
    if (!file) throw StorageError("write failed: " + o.out);
  }
  if (o.schema_out) write_text_file(*o.schema_out, kdd::schema_text());
  out << "wrote " << o.rows << " synthetic KDD-profile records to " << o.out << "\n";
  return kExitOk;
}

// Reruns a recorded command with its outputs redirected to `out_dir`, then
// compares every output checksum with the recorded one.
int cmd_replay(const std::string& manifest_path, const std::string& out_dir, std::ostream& out, std::ostream& err) {
  std::ifstream in(manifest_path, std::ios::binary);
  if (!in) throw StorageError("cannot open manifest " + manifest_path);
  json m;
  try {
    m = json::parse(in);
  } catch (const json::exception& e) {
    throw IntegrityError(manifest_path + ": " + e.what());
  }
  const fs::path cwd = m.at("cwd").get<std::string>();
  for (const auto& [path, digest] : m.at("inputs").items()) {
    const fs::path p = fs::path(path).is_absolute() ? fs::path(path) : cwd / path;
    if (!fs::exists(p) || sha256_file(p) != digest.get<std::string>()) {
      throw IntegrityError("input changed since the recorded run: " + path);
    }
  }

  fs::create_directories(out_dir);
  const auto recorded = m.at("argv").get<std::vector<std::string>>();
  std::vector<std::string> args;
  bool has_timestamp = false;
  for (std::size_t i = 0; i < recorded.size(); ++i) {
    std::string flag = recorded[i], value;
    bool inline_value = false;
    if (const auto eq = flag.find('='); flag.starts_with("--") && eq != std::string::npos) {
      value = flag.substr(eq + 1);
      flag = flag.substr(0, eq);
      inline_value = true;
    } else if ((kInputFlags.contains(flag) || kOutputFlags.contains(flag)) && i + 1 < recorded.size()) {
      value = recorded[++i];
    } else {
      if (flag == "--timestamp") has_timestamp = true;
      args.push_back(flag);
      continue;
    }
    if (flag == "--timestamp") has_timestamp = true;
    if (kInputFlags.contains(flag) && fs::path(value).is_relative()) value = (cwd / value).string();
    if (kOutputFlags.contains(flag)) {
      value = flag == "--out-dir" || flag == "--roc-dir" ? out_dir : (fs::path(out_dir) / fs::path(value).filename()).string();
    }
    if (inline_value) {
      args.push_back(flag + "=" + value);
    } else {
      args.push_back(flag);
      args.push_back(value);
    }
  }
  // Commands that stamp models default to the wall clock; pin it.
  if (!has_timestamp && m.contains("settings") && m["settings"].contains("config")) {
    const auto config = m["settings"]["config"].get<std::string>();
    const auto pos = config.find("pipeline.timestamp: ");
    if (pos != std::string::npos) {
      const auto end = config.find('\n', pos);
      args.push_back("--timestamp");
      args.push_back(config.substr(pos + 20, end - pos - 20));
    }
  }

  std::ostringstream sink;
  const int status = run(args, sink, err);
  bool identical = true;
  for (const auto& [name, digest] : m.at("outputs").items()) {
    const fs::path p = fs::path(out_dir) / name;
    const bool same = fs::exists(p) && sha256_file(p) == digest.get<std::string>();
    identical = identical && same;
    out << (same ? "match     " : "MISMATCH  ") << name << "\n";
  }
  out << "replay exit status " << status << "; outputs " << (identical ? "identical" : "differ") << "\n";
  return identical ? kExitOk : kExitGateFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  o.argv = args;
  std::string replay_manifest, replay_out;

  CLI::App app{"Mimic-learning pipeline for network intrusion detection"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  auto schema_opt = [&](CLI::App* c) {
    c->add_option("--schema", o.schema, "Schema file")->required()->check(CLI::ExistingFile);
    c->add_flag("--header", o.header, "Input CSV files start with a header row");
  };
  auto threads_opt = [&](CLI::App* c) {
    c->add_option("--threads", o.threads, "Worker threads (default: MIMIC_THREADS, else hardware threads)")->check(CLI::PositiveNumber);
  };

  auto* split = app.add_subcommand("split", "Split a labeled dataset into sensitive / public unlabeled / test parts");
  split->add_option("--input", o.input, "Labeled CSV")->required()->check(CLI::ExistingFile);
  schema_opt(split);
  split->add_option("--labeled-n", o.labeled_n, "Rows in the sensitive labeled part")->required();
  split->add_option("--unlabeled-n", o.unlabeled_n, "Rows in the public unlabeled part")->required();
  split->add_option("--test-n", o.test_n, "Rows in the test part")->required();
  split->add_option("--seed", o.seed, "Shuffle seed");
  split->add_flag("--stratified", o.stratified, "Keep the class balance in every part");
  split->add_option("--out-dir", o.out_dir, "Output directory")->required();

  std::array<CLI::App*, 2> trainers{};
  for (auto [i, name, about] : {std::tuple{0, "train-teacher", "Select and train the teacher on sensitive data"},
                                std::tuple{1, "train-student", "Select and train the student on annotated data"}}) {
    auto* c = app.add_subcommand(name, about);
    c->add_option("--data", o.data, "Labeled CSV")->required()->check(CLI::ExistingFile);
    schema_opt(c);
    c->add_option("--roster", o.roster, "Comma list of dt,rf,svm,nb (default: all four)");
    c->add_option("--cv-k", o.cv_k, "Cross-validation folds (default 10)");
    c->add_option("--seed", o.seed, "Seed for CV folds and classifiers");
    c->add_option("--config", o.config, "Config file")->check(CLI::ExistingFile);
    c->add_option("--timestamp", o.timestamp, "Model creation time (default: SOURCE_DATE_EPOCH or now)");
    c->add_option("--out-model", o.out_model, "Model file to write")->required();
    c->add_option("--report", o.report, "Selection report (JSON)");
    c->add_option("--manifest", o.manifest, "Run manifest (JSON)");
    threads_opt(c);
    trainers[i] = c;
  }

  auto* annotate_cmd = app.add_subcommand("annotate", "Label public data with a teacher model");
  annotate_cmd->add_option("--model", o.model, "Teacher model")->required()->check(CLI::ExistingFile);
  annotate_cmd->add_option("--data", o.data, "Unlabeled CSV")->required()->check(CLI::ExistingFile);
  schema_opt(annotate_cmd);
  annotate_cmd->add_option("--out", o.out, "Labeled CSV to write")->required();
  annotate_cmd->add_option("--manifest", o.manifest, "Run manifest (JSON)");

  auto* evaluate_cmd = app.add_subcommand("evaluate", "Evaluate a model, or compare teacher and student");
  evaluate_cmd->add_option("--teacher", o.teacher, "Teacher (or single) model")->required()->check(CLI::ExistingFile);
  evaluate_cmd->add_option("--student", o.student, "Student model")->check(CLI::ExistingFile);
  evaluate_cmd->add_option("--test", o.test, "Labeled test CSV")->required()->check(CLI::ExistingFile);
  schema_opt(evaluate_cmd);
  evaluate_cmd->add_option("--report", o.report, "Evaluation report (JSON)");
  evaluate_cmd->add_option("--threshold", o.threshold, "Release threshold on the relative score difference")
      ->check(CLI::NonNegativeNumber);
  evaluate_cmd->add_option("--roc-dir", o.roc_dir, "Directory for ROC point tables");
  evaluate_cmd->add_option("--manifest", o.manifest, "Run manifest (JSON)");

  auto* pipeline_cmd = app.add_subcommand("pipeline", "Teacher, annotation, student and release gate in one run");
  pipeline_cmd->add_option("--sensitive", o.sensitive, "Sensitive labeled CSV")->required()->check(CLI::ExistingFile);
  pipeline_cmd->add_option("--unlabeled", o.unlabeled, "Public unlabeled CSV")->required()->check(CLI::ExistingFile);
  pipeline_cmd->add_option("--test", o.test, "Labeled test CSV")->required()->check(CLI::ExistingFile);
  schema_opt(pipeline_cmd);
  pipeline_cmd->add_option("--config", o.config, "Config file")->check(CLI::ExistingFile);
  pipeline_cmd->add_option("--seed", o.seed, "Overrides pipeline.seed");
  pipeline_cmd->add_option("--timestamp", o.timestamp, "Model creation time (default: SOURCE_DATE_EPOCH or now)");
  pipeline_cmd->add_option("--out-dir", o.out_dir, "Output directory")->required();
  threads_opt(pipeline_cmd);

  auto* generate_cmd = app.add_subcommand("generate", "Write synthetic KDD-profile records");
  generate_cmd->add_option("--rows", o.rows, "Record count")->required();
  generate_cmd->add_option("--seed", o.seed, "Generator seed");
  generate_cmd->add_option("--out", o.out, "CSV to write")->required();
  generate_cmd->add_option("--schema-out", o.schema_out, "Also write the matching schema file");
  generate_cmd->add_flag("--header", o.header, "Write a header row");

  auto* replay_cmd = app.add_subcommand("replay", "Rerun a command from its manifest and compare outputs");
  replay_cmd->add_option("--manifest", replay_manifest, "Manifest of the original run")->required()->check(CLI::ExistingFile);
  replay_cmd->add_option("--out-dir", replay_out, "Directory for the rerun's outputs")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (split->parsed()) return cmd_split(o, out);
    if (trainers[0]->parsed()) return cmd_train(o, ModelRole::Teacher, out);
    if (trainers[1]->parsed()) return cmd_train(o, ModelRole::Student, out);
    if (annotate_cmd->parsed()) return cmd_annotate(o, out);
    if (evaluate_cmd->parsed()) return cmd_evaluate(o, out);
    if (pipeline_cmd->parsed()) return cmd_pipeline(o, out);
    if (generate_cmd->parsed()) return cmd_generate(o, out);
    if (replay_cmd->parsed()) return cmd_replay(replay_manifest, replay_out, out, err);
  } catch (const StageError& e) {
    err << "error [" << stage_name(e.stage()) << "]: " << e.what() << "\n";
    return exit_code(e.category());
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.category());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace mimic::cli
