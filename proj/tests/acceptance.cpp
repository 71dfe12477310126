// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.
//
// Criteria 5-8 run on a KDD-style dataset. MIMIC_KDD_CSV (and optionally
// MIMIC_KDD_SCHEMA, MIMIC_KDD_HEADER=1) select a real file; otherwise the
// synthetic KDD-profile generator writes 136,000 records.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "fixtures.hpp"
#include "kdd_profile.hpp"
#include "mimic/eval.hpp"
#include "mimic/hash.hpp"
#include "mimic/impurity.hpp"
#include "mimic/model_store.hpp"
#include "mimic/pipeline.hpp"

using namespace mimic;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    notes.push_back((ok ? "ok: " : "FAILED: ") + what);
  }
};

int failures = 0;

void report(const std::string& id, const std::string& title, const Outcome& o, double seconds) {
  std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << "criterion " << id << ": " << title << " (" << std::fixed
            << std::setprecision(2) << seconds << " s)\n";
  for (const auto& n : o.notes) std::cout << "         " << n << "\n";
  std::cout.flush();
  if (!o.pass) ++failures;
}

void run_criterion(const std::string& id, const std::string& title, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto start = Clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.require(false, std::string("exception: ") + e.what());
  }
  report(id, title, o, std::chrono::duration<double>(Clock::now() - start).count());
}

std::string fmt(double v, int digits = 6) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

std::string pct(double v) { return fmt(v * 100.0, 2) + "%"; }

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

// ---------------------------------------------------------------- 1

void metric_oracle(Outcome& o) {
  const auto start = Clock::now();
  Rng rng(101);
  int mismatches = 0, identity_failures = 0;
  const int trials = 500;
  for (int t = 0; t < trials; ++t) {
    const std::size_t n = 1 + rng.below(400);
    const double base = rng.uniform(), skill = rng.uniform();
    std::vector<Label> truth(n), predicted(n);
    for (std::size_t i = 0; i < n; ++i) {
      truth[i] = rng.uniform() < base ? Label::Malicious : Label::Benign;
      const bool right = rng.uniform() < skill;
      predicted[i] = right ? truth[i] : (truth[i] == Label::Malicious ? Label::Benign : Label::Malicious);
    }
    // Brute force straight from the lists.
    double tp = 0, tn = 0, fp = 0, fn = 0, correct = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool m = truth[i] == Label::Malicious, pm = predicted[i] == Label::Malicious;
      tp += m && pm;
      tn += !m && !pm;
      fp += !m && pm;
      fn += m && !pm;
      correct += truth[i] == predicted[i];
    }
    const auto r = metrics(tally(truth, predicted));
    auto same = [&](const std::optional<double>& got, double num, double den) {
      if (den == 0) return !got.has_value();
      return got.has_value() && *got == num / den;
    };
    if (!same(r.acc, correct, static_cast<double>(n)) || !same(r.tpr, tp, tp + fn) || !same(r.fpr, fp, fp + tn) ||
        !same(r.tnr, tn, tn + fp) || !same(r.fnr, fn, fn + tp)) {
      ++mismatches;
    }
    if (r.tpr && std::abs(*r.tpr + *r.fnr - 1.0) > 1e-12) ++identity_failures;
    if (r.tnr && std::abs(*r.tnr + *r.fpr - 1.0) > 1e-12) ++identity_failures;
    if (r.tpr && r.tnr) {
      const double p = tp + fn, q = tn + fp;
      if (std::abs(*r.acc - (*r.tpr * p + *r.tnr * q) / (p + q)) > 1e-12) ++identity_failures;
    }
  }
  const double elapsed = seconds_since(start);
  o.require(mismatches == 0, std::to_string(trials) + " random prediction lists, " + std::to_string(mismatches) +
                                 " metric mismatches against brute force");
  o.require(identity_failures == 0, "tpr+fnr=1, tnr+fpr=1, acc=(tpr*P+tnr*N)/(P+N) within 1e-12");
  o.require(elapsed < 1.0, "runtime " + fmt(elapsed, 3) + " s < 1 s");
}

// ---------------------------------------------------------------- 2

double brute_entropy(const std::vector<Label>& labels) {
  if (labels.empty()) return 0.0;
  double h = 0.0;
  for (const Label c : {Label::Benign, Label::Malicious}) {
    const double k = static_cast<double>(std::count(labels.begin(), labels.end(), c));
    const double p = k / static_cast<double>(labels.size());
    if (p > 0) h -= p * std::log2(p);
  }
  return h;
}

void entropy_oracle(Outcome& o) {
  const auto start = Clock::now();
  Rng rng(202);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + rng.below(50);
    std::vector<Label> parent(n);
    const double p = rng.uniform();
    for (auto& l : parent) l = rng.uniform() < p ? Label::Malicious : Label::Benign;
    const std::size_t k = 1 + rng.below(6);
    std::vector<std::vector<Label>> groups(k);
    for (const auto l : parent) groups[rng.below(k)].push_back(l);
    double remainder = 0.0;
    std::vector<ClassCounts> children;
    ClassCounts pc;
    for (const auto l : parent) pc.add(l);
    for (const auto& g : groups) {
      remainder += static_cast<double>(g.size()) / static_cast<double>(n) * brute_entropy(g);
      ClassCounts c;
      for (const auto l : g) c.add(l);
      children.push_back(c);
    }
    const double expected = std::max(0.0, brute_entropy(parent) - remainder);
    worst = std::max(worst, std::abs(information_gain(pc, children) - expected));
    worst = std::max(worst, std::abs(entropy(pc) - brute_entropy(parent)));
  }
  o.require(worst <= 1e-9, "1000 random partitions, max |error| = " + std::to_string(worst));
  o.require(entropy({5, 5}) == 1.0, "entropy(5,5) = 1.0");
  o.require(std::abs(entropy({9, 5}) - 0.940286) < 1e-6, "entropy(9,5) = " + fmt(entropy({9, 5})));

  const auto weather = fixtures::weather();
  std::vector<std::size_t> rows(weather.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  const double ig = information_gain(weather, rows, SplitRule{SplitRule::Kind::Categorical, 0, 0.0});
  o.require(std::abs(ig - 0.246750) < 1e-6, "14-row fixture IG(outlook) = " + fmt(ig));
  const double elapsed = seconds_since(start);
  o.require(elapsed < 1.0, "runtime " + fmt(elapsed, 3) + " s < 1 s");
}

// ---------------------------------------------------------------- 3

void auc_oracle(Outcome& o) {
  Rng rng(303);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    std::vector<ScoredLabel> s;
    const std::size_t n = 2 + rng.below(300);
    const std::size_t levels = t % 3 == 0 ? 4 : 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double score = levels ? static_cast<double>(rng.below(levels)) / (levels - 1) : rng.uniform();
      s.push_back({score, rng.below(2) ? Label::Malicious : Label::Benign});
    }
    s[0].truth = Label::Malicious;
    s[1].truth = Label::Benign;
    const auto r = roc_auc(s);
    worst = std::max(worst, std::abs(r.auc - trapezoid_area(r.points)));
  }
  o.require(worst <= 1e-9, "200 random score sets, max |rank AUC - trapezoid| = " + std::to_string(worst));

  std::vector<ScoredLabel> ordered, tied;
  for (int i = 0; i < 10; ++i) {
    ordered.push_back({0.5 + i * 0.05, Label::Malicious});
    ordered.push_back({0.4 - i * 0.03, Label::Benign});
    tied.push_back({0.3, i % 3 ? Label::Benign : Label::Malicious});
  }
  o.require(roc_auc(ordered).auc == 1.0, "perfectly ordered scores give exactly 1.0");
  o.require(roc_auc(tied).auc == 0.5, "all-tied scores give exactly 0.5");
}

// ---------------------------------------------------------------- 4

double accuracy_on(const TrainedModel& m, const Dataset& ds) { return *evaluate(m, ds).rates.acc; }

void sanity_ladder(Outcome& o) {
  const auto start = Clock::now();
  bool dt_ok = true, rf_ok = true, equal_ok = true, nb_ok = true;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto consistent = fixtures::random_consistent(400, seed);
    const auto separable = fixtures::separable_mixed(400, seed);
    for (const auto* ds : {&consistent, &separable}) {
      dt_ok = dt_ok && accuracy_on(train(*ds, ClassifierSpec::defaults(Family::DecisionTree)), *ds) == 1.0;
    }
    auto rf = ClassifierSpec::defaults(Family::RandomForest, seed);
    std::get<ForestParams>(rf.params).tree_count = 25;
    rf_ok = rf_ok && accuracy_on(train(separable, rf), separable) == 1.0;

    auto single = ClassifierSpec::defaults(Family::RandomForest, seed);
    auto& f = std::get<ForestParams>(single.params);
    f.tree_count = 1;
    f.bootstrap = false;
    f.feature_subsample = static_cast<int>(consistent.schema().feature_count());
    const auto one = train(consistent, single);
    const auto dt = train(consistent, ClassifierSpec::defaults(Family::DecisionTree));
    equal_ok = equal_ok && predict_all(one, consistent) == predict_all(dt, consistent);
    const auto probe = fixtures::random_consistent(400, seed + 1000).without_labels();
    equal_ok = equal_ok && predict_all(one, probe) == predict_all(dt, probe);

    for (const auto* ds : {&consistent, &separable}) {
      const auto nb = std::get<NaiveBayesModel>(train(*ds, ClassifierSpec::defaults(Family::NaiveBayes)).body);
      for (std::size_t r = 0; r < ds->size(); ++r) {
        const auto post = nb.posterior(ds->ref(r));
        nb_ok = nb_ok && std::isfinite(post[0]) && std::isfinite(post[1]) && std::abs(post[0] + post[1] - 1.0) <= 1e-9;
      }
    }
  }
  o.require(dt_ok, "DT training accuracy 1.0 on consistent and separable fixtures");
  o.require(rf_ok, "RF (25 trees) training accuracy 1.0 on separable fixtures");
  o.require(equal_ok, "RF(1 tree, no bootstrap, all features) == DT row-for-row");
  o.require(nb_ok, "NB posteriors sum to 1 within 1e-9 on every fixture row");

  const auto clusters = fixtures::clusters_1d(100, 7);
  const double sep = accuracy_on(train(clusters, ClassifierSpec::defaults(Family::Svm, 1)), clusters);
  o.require(sep == 1.0, "SVM on separated clusters: " + pct(sep));
  double worst_xor = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto x = fixtures::xor_2d(50, seed);
    worst_xor = std::max(worst_xor, accuracy_on(train(x, ClassifierSpec::defaults(Family::Svm, seed)), x));
  }
  o.require(worst_xor <= 0.75, "SVM on balanced XOR: best of 5 seeds " + pct(worst_xor) + " <= 75%");
  const double elapsed = seconds_since(start);
  o.require(elapsed < 10.0, "runtime " + fmt(elapsed, 2) + " s < 10 s");
}

// ---------------------------------------------------------------- 5-8

struct KddRun {
  fs::path dir;
  fs::path schema, sensitive, unlabeled, test;
  bool header = false;
  std::string source;
  json report;
  int status = -1;
  double seconds = 0.0;
};

std::optional<double> cv_acc(const json& selection, const std::string& family) {
  for (const auto& row : selection["table"]) {
    if (row["spec"]["family"] == family && row["cv"]["mean"]["acc"].is_number()) {
      return row["cv"]["mean"]["acc"].get<double>();
    }
  }
  return std::nullopt;
}

KddRun prepare_and_run(const fs::path& work) {
  KddRun run;
  run.dir = work;
  fs::create_directories(work);
  fs::path csv;
  std::vector<std::string> split = {"split"};
  if (const char* real = std::getenv("MIMIC_KDD_CSV"); real && *real) {
    csv = real;
    const char* schema = std::getenv("MIMIC_KDD_SCHEMA");
    run.schema = schema && *schema ? fs::path(schema) : work / "kdd.schema";
    if (!(schema && *schema)) write_text_file(run.schema, kdd::schema_text());
    const char* header = std::getenv("MIMIC_KDD_HEADER");
    run.header = header && std::string(header) == "1";
    run.source = "real data from MIMIC_KDD_CSV=" + csv.string();
  } else {
    csv = work / "kdd_synthetic.csv";
    run.schema = work / "kdd.schema";
    std::ofstream out(csv, std::ios::binary);
    kdd::write_csv(out, 136000, 20240601);
    out.close();
    write_text_file(run.schema, kdd::schema_text());
    run.source = "synthetic KDD-profile data (136,000 generated records, seed 20240601)";
  }
  split.insert(split.end(), {"--input", csv.string(), "--schema", run.schema.string(), "--labeled-n", "57900",
                             "--unlabeled-n", "57900", "--test-n", "20173", "--seed", "1", "--out-dir",
                             (work / "parts").string()});
  if (run.header) split.push_back("--header");
  std::ostringstream sink;
  if (cli::run(split, sink, std::cerr) != cli::kExitOk) throw std::runtime_error("split failed");
  run.sensitive = work / "parts" / "sensitive.csv";
  run.unlabeled = work / "parts" / "unlabeled.csv";
  run.test = work / "parts" / "test.csv";

  const auto start = Clock::now();
  std::ostringstream out;
  run.status = cli::run({"pipeline", "--sensitive", run.sensitive.string(), "--unlabeled", run.unlabeled.string(),
                         "--test", run.test.string(), "--schema", run.schema.string(), "--seed", "1", "--timestamp",
                         "1700000000", "--out-dir", (work / "run").string()},
                        out, std::cerr);
  run.seconds = seconds_since(start);
  std::cout << out.str();
  run.report = json::parse(std::ifstream(work / "run" / "report.json"));
  return run;
}

void kdd_shape(Outcome& o, const KddRun& run) {
  o.notes.push_back("data: " + run.source);
  const auto& t = run.report["teacher_selection"];
  const auto& s = run.report["student_selection"];
  o.require(t["winner"] == "rf", "(a) teacher selection picks " + t["winner"].get<std::string>());
  o.require(s["winner"] == "rf", "(a) student selection picks " + s["winner"].get<std::string>());

  const double teacher_acc = run.report["teacher_eval"]["rates"]["acc"].get<double>();
  o.require(teacher_acc >= 0.99, "(b) teacher test accuracy " + pct(teacher_acc) + " >= 99.00%");

  const auto rf = cv_acc(t, "rf"), dt = cv_acc(t, "dt"), svm = cv_acc(t, "svm"), nb = cv_acc(t, "nb");
  if (!rf || !dt || !svm || !nb) {
    o.require(false, "(c) CV accuracy missing for a classifier");
    return;
  }
  std::ostringstream order;
  order << "rf " << pct(*rf) << ", dt " << pct(*dt) << ", svm " << pct(*svm) << ", nb " << pct(*nb);
  o.require(*rf >= *dt && *dt > *svm && *svm > *nb, "(c) CV ordering RF >= DT > SVM > NB: " + order.str());
  const double gap = std::min(*rf, *dt) - std::max(*svm, *nb);
  o.require(gap >= 0.01, "(c) tree family leads SVM/NB by " + fmt(gap * 100.0, 2) + " pp (need >= 1 pp)");
  o.require(run.seconds < 900.0, "pipeline runtime " + fmt(run.seconds, 1) + " s < 900 s");
}

void headline(Outcome& o, const KddRun& run) {
  const double rsd = run.report["relative_score_difference"].get<double>();
  const double t_acc = run.report["teacher_eval"]["rates"]["acc"].get<double>();
  const double s_acc = run.report["student_eval"]["rates"]["acc"].get<double>();
  o.require(rsd < 0.01, "relative score difference |" + pct(t_acc) + " - " + pct(s_acc) + "| / " + pct(t_acc) +
                            " = " + fmt(rsd) + " < 0.01");
  const auto& auc = run.report["student_eval"]["auc"];
  o.require(auc.is_number() && auc.get<double>() >= 0.98,
            "student AUC " + (auc.is_number() ? fmt(auc.get<double>(), 4) : std::string("undefined")) + " >= 0.98");
  o.require(run.report["released"] == true && run.status == cli::kExitOk, "pipeline command released the student");
}

void determinism(Outcome& o, const KddRun& run) {
  std::ostringstream out;
  const int status = cli::run({"replay", "--manifest", (run.dir / "run" / "manifest.json").string(), "--out-dir",
                               (run.dir / "replay").string()},
                              out, std::cerr);
  std::istringstream lines(out.str());
  for (std::string line; std::getline(lines, line);) o.notes.push_back("  " + line);
  o.require(status == cli::kExitOk, "pipeline rerun from its manifest reproduces every output checksum");

  const auto schema = std::make_shared<const Schema>(load_schema(run.schema));
  const Dataset sensitive = load_dataset(run.sensitive, schema, false);
  const Dataset test = load_dataset(run.test, schema, false);
  std::vector<std::size_t> subset(5000), probe(1000);
  Rng rng(808);
  for (auto& r : subset) r = static_cast<std::size_t>(rng.below(sensitive.size()));
  for (auto& r : probe) r = static_cast<std::size_t>(rng.below(test.size()));
  const Dataset train_rows = sensitive.select(subset, true);
  const Dataset probe_rows = test.select(probe, false);

  std::vector<TrainedModel> models = {load_model(run.dir / "run" / "teacher.json"),
                                      load_model(run.dir / "run" / "student.json")};
  for (const auto family : {Family::DecisionTree, Family::RandomForest, Family::Svm, Family::NaiveBayes}) {
    models.push_back(train(train_rows, ClassifierSpec::defaults(family, 3)));
  }
  for (const auto& m : models) {
    const auto path = run.dir / "roundtrip.json";
    save_model(m, path);
    const auto loaded = load_model(path);
    const bool same = predict_all(loaded, probe_rows) == predict_all(m, probe_rows) &&
                      score_all(loaded, probe_rows) == score_all(m, probe_rows);
    save_model(loaded, run.dir / "roundtrip2.json");
    const bool stable = sha256_file(path) == sha256_file(run.dir / "roundtrip2.json");
    const auto role = m.metadata.role == ModelRole::None ? std::string("fresh") : std::string(role_name(m.metadata.role));
    o.require(same && stable, role + " " + std::string(m.metadata.spec.name()) +
                                  ": save/load exact on 1,000 random test rows, save-load-save byte-identical");
  }
}

void annotation_fidelity(Outcome& o, const KddRun& run) {
  const auto schema = std::make_shared<const Schema>(load_schema(run.schema));
  const auto teacher = load_model(run.dir / "run" / "teacher.json");
  const Dataset unlabeled = load_dataset(run.unlabeled, schema, false);
  const Dataset annotated = load_dataset(run.dir / "run" / "annotated.csv", schema, false);
  o.require(annotated.size() == unlabeled.size(),
            "annotated rows " + std::to_string(annotated.size()) + " = unlabeled rows " + std::to_string(unlabeled.size()));
  std::size_t agree = 0, same_rows = 0;
  for (std::size_t r = 0; r < std::min(annotated.size(), unlabeled.size()); ++r) {
    agree += annotated.label(r) == predict_row(teacher, unlabeled.ref(r));
    auto a = annotated.row(r);
    a.label.reset();
    same_rows += a == unlabeled.row(r);
  }
  o.require(agree == unlabeled.size(), std::to_string(agree) + " / " + std::to_string(unlabeled.size()) +
                                           " annotated labels equal teacher.predict");
  o.require(same_rows == unlabeled.size(), "row values and order preserved");
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path work = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "mimic-acceptance";
  fs::remove_all(work);

  run_criterion("1", "metric oracle suite", metric_oracle);
  run_criterion("2", "entropy / information gain oracle", entropy_oracle);
  run_criterion("3", "AUC double computation", auc_oracle);
  run_criterion("4", "classifier sanity ladder", sanity_ladder);

  KddRun kdd;
  bool ran = false;
  {
    const auto start = Clock::now();
    try {
      kdd = prepare_and_run(work);
      ran = true;
    } catch (const std::exception& e) {
      std::cout << "KDD-profile run failed: " << e.what() << "\n";
    }
    std::cout << "KDD-profile run: " << fmt(seconds_since(start), 1) << " s\n";
  }
  auto with_run = [&](void (*fn)(Outcome&, const KddRun&)) {
    return [&, fn](Outcome& o) {
      if (!ran) {
        o.require(false, "KDD-profile run did not complete");
        return;
      }
      fn(o, kdd);
    };
  };
  run_criterion("5", "KDD-profile reproduction (selection, teacher accuracy, ordering)", with_run(kdd_shape));
  run_criterion("6", "mimic-learning headline (relative gap, student AUC)", with_run(headline));
  run_criterion("7", "determinism and model round-trip", with_run(determinism));
  run_criterion("8", "annotation fidelity", with_run(annotation_fidelity));

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criterion(s) failed") << "\n";
  return failures == 0 ? 0 : 1;
}
