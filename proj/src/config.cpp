#include "mimic/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "mimic/data.hpp"
#include "mimic/error.hpp"

namespace mimic {

std::vector<ClassifierSpec> parse_roster(std::string_view list, std::uint64_t seed) {
  std::vector<ClassifierSpec> roster;
  std::string_view rest = list;
  while (true) {
    const auto comma = rest.find(',');
    const auto name = trim(rest.substr(0, comma));
    const auto family = parse_family(name);
    if (!family) throw ConfigError("unknown classifier '" + std::string(name) + "' (expected dt, rf, svm or nb)");
    roster.push_back(ClassifierSpec::defaults(*family, seed));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return roster;
}

std::string roster_to_string(const std::vector<ClassifierSpec>& roster) {
  std::string out;
  for (const auto& s : roster) {
    if (!out.empty()) out += ',';
    out += s.name();
  }
  return out;
}

namespace {

template <typename T>
T parse_integer(const std::string& key, std::string_view v) {
  T out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw ConfigError(key + ": expected an integer, got '" + std::string(v) + "'");
  return out;
}

double parse_double(const std::string& key, std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw ConfigError(key + ": expected a number, got '" + std::string(v) + "'");
  return out;
}

bool parse_bool(const std::string& key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + std::string(v) + "'");
}

bool apply_tree_key(TreeParams& p, const std::string& field, const std::string& key, std::string_view v) {
  if (field == "max_depth") p.max_depth = parse_integer<int>(key, v);
  else if (field == "min_samples_split") p.min_samples_split = parse_integer<int>(key, v);
  else if (field == "min_samples_leaf") p.min_samples_leaf = parse_integer<int>(key, v);
  else if (field == "ig_epsilon") p.ig_epsilon = parse_double(key, v);
  else return false;
  return true;
}

bool apply_classifier_key(ClassifierSpec& spec, const std::string& field, const std::string& key, std::string_view v) {
  switch (spec.family) {
    case Family::DecisionTree:
      return apply_tree_key(std::get<TreeParams>(spec.params), field, key, v);
    case Family::RandomForest: {
      auto& f = std::get<ForestParams>(spec.params);
      if (field == "tree_count") f.tree_count = parse_integer<int>(key, v);
      else if (field == "feature_subsample") f.feature_subsample = parse_integer<int>(key, v);
      else if (field == "bootstrap") f.bootstrap = parse_bool(key, v);
      else return apply_tree_key(f.tree, field, key, v);
      return true;
    }
    case Family::Svm: {
      auto& s = std::get<SvmParams>(spec.params);
      if (field == "lambda") s.lambda = parse_double(key, v);
      else if (field == "epochs") s.epochs = parse_integer<int>(key, v);
      else return false;
      return true;
    }
    case Family::NaiveBayes: {
      auto& nb = std::get<NaiveBayesParams>(spec.params);
      if (field == "variance_floor") nb.variance_floor = parse_double(key, v);
      else if (field == "alpha") nb.alpha = parse_double(key, v);
      else return false;
      return true;
    }
  }
  return false;
}

}  // namespace

PipelineConfig parse_config(std::string_view text, PipelineConfig base) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::size_t line_no = 0, pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key: value'");
    entries.emplace_back(std::string(trim(line.substr(0, colon))), std::string(trim(line.substr(colon + 1))));
  }

  // Rosters and seeds first so classifier keys land on the final specs.
  std::optional<std::uint64_t> seed;
  std::optional<std::string> teacher, student;
  for (const auto& [key, value] : entries) {
    if (key == "pipeline.seed") seed = parse_integer<std::uint64_t>(key, value);
    else if (key == "pipeline.teacher_roster") teacher = value;
    else if (key == "pipeline.student_roster") student = value;
  }
  if (seed) {
    base.seed = *seed;
    base.cv.seed = *seed;
    for (auto& s : base.teacher_roster) s.seed = *seed;
    for (auto& s : base.student_roster) s.seed = *seed;
  }
  if (teacher) base.teacher_roster = parse_roster(*teacher, base.seed);
  if (student) base.student_roster = parse_roster(*student, base.seed);

  for (const auto& [key, value] : entries) {
    if (key == "pipeline.seed" || key == "pipeline.teacher_roster" || key == "pipeline.student_roster") continue;
    if (key == "pipeline.release_threshold") {
      base.release_threshold = parse_double(key, value);
    } else if (key == "pipeline.timestamp") {
      base.timestamp = parse_integer<std::int64_t>(key, value);
    } else if (key == "eval.k") {
      base.cv.k = parse_integer<int>(key, value);
    } else if (key == "eval.seed") {
      base.cv.seed = parse_integer<std::uint64_t>(key, value);
    } else if (key == "eval.stratified") {
      base.cv.stratified = parse_bool(key, value);
    } else if (key.starts_with("classifiers.")) {
      const auto rest = key.substr(std::string_view("classifiers.").size());
      const auto dot = rest.find('.');
      const auto family = dot == std::string::npos ? std::nullopt : parse_family(rest.substr(0, dot));
      if (!family) throw ConfigError("unknown config key '" + key + "'");
      const std::string field = rest.substr(dot + 1);
      // Validate the key even when the family is not in either roster.
      ClassifierSpec probe = ClassifierSpec::defaults(*family);
      if (!apply_classifier_key(probe, field, key, value)) throw ConfigError("unknown config key '" + key + "'");
      for (auto* roster : {&base.teacher_roster, &base.student_roster}) {
        for (auto& s : *roster) {
          if (s.family == *family) apply_classifier_key(s, field, key, value);
        }
      }
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  base.validate();
  return base;
}

PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

std::string config_to_text(const PipelineConfig& cfg) {
  std::ostringstream out;
  out << "pipeline.seed: " << cfg.seed << "\n";
  out << "pipeline.release_threshold: " << format_number(cfg.release_threshold) << "\n";
  out << "pipeline.timestamp: " << cfg.timestamp << "\n";
  out << "pipeline.teacher_roster: " << roster_to_string(cfg.teacher_roster) << "\n";
  out << "pipeline.student_roster: " << roster_to_string(cfg.student_roster) << "\n";
  out << "eval.k: " << cfg.cv.k << "\n";
  out << "eval.seed: " << cfg.cv.seed << "\n";
  out << "eval.stratified: " << (cfg.cv.stratified ? "true" : "false") << "\n";
  std::map<Family, ClassifierSpec> seen;
  for (const auto* roster : {&cfg.teacher_roster, &cfg.student_roster}) {
    for (const auto& s : *roster) seen.emplace(s.family, s);
  }
  auto tree_keys = [&](const char* prefix, const TreeParams& p) {
    out << prefix << "max_depth: " << p.max_depth << "\n";
    out << prefix << "min_samples_split: " << p.min_samples_split << "\n";
    out << prefix << "min_samples_leaf: " << p.min_samples_leaf << "\n";
    out << prefix << "ig_epsilon: " << format_number(p.ig_epsilon) << "\n";
  };
  for (const auto& [family, s] : seen) {
    switch (family) {
      case Family::DecisionTree:
        tree_keys("classifiers.dt.", s.tree());
        break;
      case Family::RandomForest:
        out << "classifiers.rf.tree_count: " << s.forest().tree_count << "\n";
        out << "classifiers.rf.feature_subsample: " << s.forest().feature_subsample << "\n";
        out << "classifiers.rf.bootstrap: " << (s.forest().bootstrap ? "true" : "false") << "\n";
        tree_keys("classifiers.rf.", s.forest().tree);
        break;
      case Family::Svm:
        out << "classifiers.svm.lambda: " << format_number(s.svm().lambda) << "\n";
        out << "classifiers.svm.epochs: " << s.svm().epochs << "\n";
        break;
      case Family::NaiveBayes:
        out << "classifiers.nb.variance_floor: " << format_number(s.naive_bayes().variance_floor) << "\n";
        out << "classifiers.nb.alpha: " << format_number(s.naive_bayes().alpha) << "\n";
        break;
    }
  }
  return out.str();
}

}  // namespace mimic
