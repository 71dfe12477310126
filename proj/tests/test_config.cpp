#include <doctest.h>

#include "mimic/config.hpp"
#include "mimic/error.hpp"

using namespace mimic;

TEST_CASE("config keys override the defaults") {
  const auto cfg = parse_config(
      "# run settings\n"
      "pipeline.seed: 9\n"
      "pipeline.release_threshold: 0.02\n"
      "pipeline.teacher_roster: rf, dt\n"
      "pipeline.student_roster: nb\n"
      "eval.k: 5\n"
      "eval.stratified: false\n"
      "classifiers.rf.tree_count: 7\n"
      "classifiers.rf.bootstrap: false\n"
      "classifiers.dt.max_depth: 4\n"
      "classifiers.nb.variance_floor: 1e-6\n",
      PipelineConfig::defaults(0));
  CHECK(cfg.seed == 9);
  CHECK(cfg.cv.seed == 9);
  CHECK(cfg.release_threshold == 0.02);
  REQUIRE(cfg.teacher_roster.size() == 2);
  CHECK(cfg.teacher_roster[0].family == Family::RandomForest);
  CHECK(cfg.teacher_roster[0].forest().tree_count == 7);
  CHECK_FALSE(cfg.teacher_roster[0].forest().bootstrap);
  CHECK(cfg.teacher_roster[0].seed == 9);
  CHECK(cfg.teacher_roster[1].tree().max_depth == 4);
  REQUIRE(cfg.student_roster.size() == 1);
  CHECK(cfg.student_roster[0].naive_bayes().variance_floor == 1e-6);
  CHECK(cfg.cv.k == 5);
  CHECK_FALSE(cfg.cv.stratified);
}

TEST_CASE("config text round-trips") {
  auto cfg = PipelineConfig::defaults(3);
  cfg.release_threshold = 0.005;
  cfg.timestamp = 12345;
  std::get<SvmParams>(cfg.teacher_roster[2].params).epochs = 20;
  std::get<SvmParams>(cfg.student_roster[2].params).epochs = 20;
  const auto text = config_to_text(cfg);
  const auto back = parse_config(text, PipelineConfig::defaults(0));
  CHECK(back.teacher_roster == cfg.teacher_roster);
  CHECK(back.student_roster == cfg.student_roster);
  CHECK(back.cv == cfg.cv);
  CHECK(back.release_threshold == cfg.release_threshold);
  CHECK(back.timestamp == cfg.timestamp);
  CHECK(config_to_text(back) == text);
}

TEST_CASE("config errors") {
  const auto base = PipelineConfig::defaults(0);
  CHECK_THROWS_AS(parse_config("pipeline.colour: red\n", base), ConfigError);
  CHECK_THROWS_AS(parse_config("classifiers.knn.k: 3\n", base), ConfigError);
  CHECK_THROWS_AS(parse_config("classifiers.rf.lambda: 3\n", base), ConfigError);
  CHECK_THROWS_AS(parse_config("eval.k: ten\n", base), ConfigError);
  CHECK_THROWS_AS(parse_config("eval.k: 1\n", base), ConfigError);
  CHECK_THROWS_AS(parse_config("pipeline.teacher_roster: dt,knn\n", base), ConfigError);
  CHECK_THROWS_AS(parse_config("no colon here\n", base), ConfigError);
  CHECK_THROWS_AS(parse_config("pipeline.release_threshold: -1\n", base), ConfigError);
}
