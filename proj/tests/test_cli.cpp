#include <doctest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "fixtures.hpp"
#include "mimic/hash.hpp"
#include "mimic/model_store.hpp"

using namespace mimic;

namespace {

struct Result {
  int status;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int status = cli::run(args, out, err);
  return {status, out.str(), err.str()};
}

std::size_t line_count(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) n += line.empty() ? 0 : 1;
  return n;
}

// Separable fixture split into sensitive / unlabeled / test files.
struct Workspace {
  fixtures::TempDir dir{"cli"};
  std::string schema = (dir / "mixed.schema").string();

  Workspace() {
    write_text_file(schema, fixtures::mixed_schema()->canonical_text());
    const auto ds = fixtures::separable_mixed(300, 11);
    write_dataset(dir / "all.csv", ds, false);
    write_dataset(dir / "sensitive.csv", ds, false);
    write_dataset(dir / "unlabeled.csv", ds.without_labels(), false);
    write_dataset(dir / "test.csv", ds, false);
    write_text_file(dir / "dt.conf", "pipeline.teacher_roster: dt\npipeline.student_roster: dt\neval.k: 5\n");
  }
  std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(run({"--help"}).status == cli::kExitOk);
  CHECK(run({"--version"}).out == "0.1.0\n");
  CHECK(run({}).status == cli::kExitUsage);
  CHECK(run({"frobnicate"}).status == cli::kExitUsage);
  CHECK(run({"split", "--input", "nowhere.csv"}).status == cli::kExitUsage);
}

TEST_CASE("split with 57,900 / 57,900 / 20,173 partition sizes") {
  fixtures::TempDir tmp("split");
  const auto csv = (tmp / "kdd.csv").string(), schema = (tmp / "kdd.schema").string();
  REQUIRE(run({"generate", "--rows", "136000", "--seed", "3", "--out", csv, "--schema-out", schema}).status == 0);
  const std::vector<std::string> base = {"split", "--input", csv, "--schema", schema, "--labeled-n", "57900",
                                         "--unlabeled-n", "57900", "--test-n", "20173", "--seed", "8"};
  auto a = base;
  a.insert(a.end(), {"--out-dir", (tmp / "a").string()});
  auto b = base;
  b.insert(b.end(), {"--out-dir", (tmp / "b").string()});
  REQUIRE(run(a).status == cli::kExitOk);
  REQUIRE(run(b).status == cli::kExitOk);
  CHECK(line_count(tmp / "a" / "sensitive.csv") == 57900);
  CHECK(line_count(tmp / "a" / "unlabeled.csv") == 57900);
  CHECK(line_count(tmp / "a" / "test.csv") == 20173);
  for (const char* name : {"sensitive.csv", "unlabeled.csv", "test.csv"}) {
    CHECK(sha256_file(tmp / "a" / name) == sha256_file(tmp / "b" / name));
  }
  const auto manifest = nlohmann::json::parse(std::ifstream(tmp / "a" / "manifest.json"));
  CHECK(manifest["settings"]["seed"] == 8);
  CHECK(manifest["inputs"][csv] == sha256_file(csv));

  auto too_many = base;
  too_many[6] = "136000";
  too_many.insert(too_many.end(), {"--out-dir", (tmp / "c").string()});
  CHECK(run(too_many).status == cli::kExitData);
}

TEST_CASE("train-teacher writes a model and a selection report") {
  Workspace ws;
  const auto r = run({"train-teacher", "--data", ws / "sensitive.csv", "--schema", ws.schema, "--roster", "dt,nb",
                      "--cv-k", "5", "--seed", "2", "--timestamp", "0", "--out-model", ws / "teacher.json",
                      "--report", ws / "selection.json"});
  REQUIRE(r.status == cli::kExitOk);
  CHECK(r.out.find("dt") != std::string::npos);
  CHECK(r.out.find('%') != std::string::npos);
  const auto model = load_model(ws / "teacher.json");
  CHECK(model.family() == Family::DecisionTree);
  CHECK(model.metadata.role == ModelRole::Teacher);
  const auto report = nlohmann::json::parse(std::ifstream(ws / "selection.json"));
  CHECK(report["table"].size() == 2);

  CHECK(run({"train-teacher", "--data", ws / "sensitive.csv", "--schema", ws.schema, "--cv-k", "1", "--out-model",
             ws / "x.json"})
            .status == cli::kExitUsage);
  CHECK(run({"train-teacher", "--data", ws / "sensitive.csv", "--schema", ws.schema, "--roster", "knn",
             "--out-model", ws / "x.json"})
            .status == cli::kExitUsage);
  CHECK(run({"train-student", "--data", ws / "unlabeled.csv", "--schema", ws.schema, "--out-model", ws / "x.json"})
            .status == cli::kExitUsage);
}

TEST_CASE("annotate and evaluate") {
  Workspace ws;
  REQUIRE(run({"train-teacher", "--data", ws / "sensitive.csv", "--schema", ws.schema, "--roster", "dt", "--cv-k",
               "5", "--timestamp", "0", "--out-model", ws / "teacher.json"})
              .status == 0);
  const auto r = run({"annotate", "--model", ws / "teacher.json", "--data", ws / "unlabeled.csv", "--schema",
                      ws.schema, "--out", ws / "annotated.csv"});
  REQUIRE(r.status == cli::kExitOk);
  const auto annotated = load_dataset(ws / "annotated.csv", fixtures::mixed_schema(), false);
  CHECK(annotated.size() == 300);
  CHECK(annotated == load_dataset(ws / "all.csv", fixtures::mixed_schema(), false));

  CHECK(run({"annotate", "--model", ws / "teacher.json", "--data", ws / "sensitive.csv", "--schema", ws.schema,
             "--out", ws / "x.csv"})
            .status == cli::kExitUsage);
  write_text_file(ws / "empty.csv", "");
  CHECK(run({"annotate", "--model", ws / "teacher.json", "--data", ws / "empty.csv", "--schema", ws.schema, "--out",
             ws / "x.csv"})
            .status == cli::kExitUsage);
  write_text_file(ws / "other.schema", "a:continuous\nlabel:y\nnegative:n\n");
  write_text_file(ws / "other.csv", "1\n2\n");
  CHECK(run({"annotate", "--model", ws / "teacher.json", "--data", ws / "other.csv", "--schema", ws / "other.schema",
             "--out", ws / "x.csv"})
            .status == cli::kExitUsage);

  REQUIRE(run({"train-student", "--data", ws / "annotated.csv", "--schema", ws.schema, "--roster", "nb", "--cv-k",
               "5", "--timestamp", "0", "--out-model", ws / "student.json"})
              .status == 0);
  const auto single = run({"evaluate", "--teacher", ws / "teacher.json", "--test", ws / "test.csv", "--schema",
                           ws.schema, "--report", ws / "eval.json", "--roc-dir", ws / "roc"});
  CHECK(single.status == cli::kExitOk);
  CHECK(std::filesystem::exists(ws / "roc/roc.csv"));

  const auto pair = run({"evaluate", "--teacher", ws / "teacher.json", "--student", ws / "student.json", "--test",
                         ws / "test.csv", "--schema", ws.schema, "--threshold", "0", "--report", ws / "cmp.json"});
  const auto cmp = nlohmann::json::parse(std::ifstream(ws / "cmp.json"));
  REQUIRE(cmp["relative_score_difference"].get<double>() > 0.0);
  CHECK(pair.status == cli::kExitGateFailed);

  CHECK(run({"evaluate", "--teacher", ws / "teacher.json", "--test", ws / "missing.csv", "--schema", ws.schema})
            .status == cli::kExitUsage);
}

TEST_CASE("pipeline on the fixture with DT teacher and student") {
  Workspace ws;
  const std::vector<std::string> args = {"pipeline", "--sensitive", ws / "sensitive.csv", "--unlabeled",
                                         ws / "unlabeled.csv", "--test", ws / "test.csv", "--schema", ws.schema,
                                         "--config", ws / "dt.conf", "--timestamp", "5", "--out-dir", ws / "run"};
  const auto r = run(args);
  INFO(r.err);
  REQUIRE(r.status == cli::kExitOk);
  CHECK(r.out.find("RELEASED") != std::string::npos);
  const auto report = nlohmann::json::parse(std::ifstream(ws / "run/report.json"));
  CHECK(report["relative_score_difference"] == 0.0);
  CHECK(report["released"] == true);
  for (const char* name : {"teacher.json", "student.json", "annotated.csv", "report.json", "manifest.json",
                           "roc_teacher.csv", "roc_student.csv"}) {
    CHECK(std::filesystem::exists(ws.dir / "run" / name));
  }
  CHECK(load_model(ws / "run/student.json").metadata.created_at == 5);

  const auto replay = run({"replay", "--manifest", ws / "run/manifest.json", "--out-dir", ws / "replay"});
  CHECK(replay.status == cli::kExitOk);
  CHECK(replay.out.find("identical") != std::string::npos);

  write_text_file(ws / "strict.conf", "pipeline.teacher_roster: dt\npipeline.student_roster: nb\n"
                                      "eval.k: 5\npipeline.release_threshold: 0\n");
  auto strict = args;
  strict[10] = ws / "strict.conf";
  strict.back() = ws / "strict";
  CHECK(run(strict).status == cli::kExitGateFailed);

  write_text_file(ws / "narrow.csv", "1,2,3\n4,5,6\n");
  auto narrow = args;
  narrow[4] = ws / "narrow.csv";
  narrow.back() = ws / "narrow";
  CHECK(run(narrow).status == cli::kExitData);
}

TEST_CASE("replay notices changed inputs") {
  Workspace ws;
  REQUIRE(run({"pipeline", "--sensitive", ws / "sensitive.csv", "--unlabeled", ws / "unlabeled.csv", "--test",
               ws / "test.csv", "--schema", ws.schema, "--config", ws / "dt.conf", "--timestamp", "5", "--out-dir",
               ws / "run"})
              .status == 0);
  write_text_file(ws / "test.csv", "0,1,2,SF,normal\n");
  CHECK(run({"replay", "--manifest", ws / "run/manifest.json", "--out-dir", ws / "replay"}).status ==
        cli::kExitData);
}
