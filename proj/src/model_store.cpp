#include "mimic/model_store.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mimic/error.hpp"
#include "mimic/hash.hpp"

namespace mimic {

using nlohmann::json;

namespace {

std::string label_text(Label l) { return std::string(to_string(l)); }

Label parse_label(const json& j) {
  const auto s = j.get<std::string>();
  if (s == "benign") return Label::Benign;
  if (s == "malicious") return Label::Malicious;
  throw IntegrityError("unknown label '" + s + "'");
}

ColumnKind parse_kind(const std::string& s) {
  if (s == "continuous") return ColumnKind::Continuous;
  if (s == "categorical") return ColumnKind::Categorical;
  throw IntegrityError("unknown column kind '" + s + "'");
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json tree_params_json(const TreeParams& p) {
  return {{"max_depth", p.max_depth},
          {"min_samples_split", p.min_samples_split},
          {"min_samples_leaf", p.min_samples_leaf},
          {"ig_epsilon", p.ig_epsilon}};
}

TreeParams tree_params_from(const json& j) {
  TreeParams p;
  p.max_depth = j.at("max_depth").get<int>();
  p.min_samples_split = j.at("min_samples_split").get<int>();
  p.min_samples_leaf = j.at("min_samples_leaf").get<int>();
  p.ig_epsilon = j.at("ig_epsilon").get<double>();
  return p;
}

json tree_json(const DecisionTreeModel& tree) {
  json nodes = json::array();
  for (const auto& n : tree.nodes) {
    json node = {{"label", label_text(n.label)},
                 {"malicious_fraction", n.malicious_fraction},
                 {"sample_count", n.sample_count}};
    switch (n.kind) {
      case TreeNode::Kind::Leaf:
        node["kind"] = "leaf";
        break;
      case TreeNode::Kind::Threshold:
        node["kind"] = "threshold";
        node["column"] = n.column;
        node["threshold"] = n.threshold;
        node["left"] = n.left;
        node["right"] = n.right;
        break;
      case TreeNode::Kind::Categorical: {
        node["kind"] = "categorical";
        node["column"] = n.column;
        json branches = json::array();
        for (const auto& [token, child] : n.branches) branches.push_back(json::array({token, child}));
        node["branches"] = std::move(branches);
        node["fallback"] = n.fallback;
        break;
      }
    }
    nodes.push_back(std::move(node));
  }
  return {{"nodes", std::move(nodes)}};
}

DecisionTreeModel tree_from(const json& j) {
  DecisionTreeModel tree;
  for (const auto& node : j.at("nodes")) {
    TreeNode n;
    n.label = parse_label(node.at("label"));
    n.malicious_fraction = node.at("malicious_fraction").get<double>();
    n.sample_count = node.at("sample_count").get<std::uint64_t>();
    const auto kind = node.at("kind").get<std::string>();
    if (kind == "leaf") {
      n.kind = TreeNode::Kind::Leaf;
    } else if (kind == "threshold") {
      n.kind = TreeNode::Kind::Threshold;
      n.column = node.at("column").get<std::uint32_t>();
      n.threshold = node.at("threshold").get<double>();
      n.left = node.at("left").get<std::uint32_t>();
      n.right = node.at("right").get<std::uint32_t>();
    } else if (kind == "categorical") {
      n.kind = TreeNode::Kind::Categorical;
      n.column = node.at("column").get<std::uint32_t>();
      for (const auto& b : node.at("branches")) {
        n.branches.emplace_back(b.at(0).get<std::string>(), b.at(1).get<std::uint32_t>());
      }
      n.fallback = node.at("fallback").get<std::uint32_t>();
    } else {
      throw IntegrityError("unknown tree node kind '" + kind + "'");
    }
    tree.nodes.push_back(std::move(n));
  }
  return tree;
}

json token_table_json(const TokenTable& t) {
  json tokens = json::array();
  for (const auto& [token, p] : t.probabilities) tokens.push_back(json::array({token, p}));
  return {{"tokens", std::move(tokens)}, {"unseen", t.unseen}};
}

TokenTable token_table_from(const json& j) {
  TokenTable t;
  for (const auto& e : j.at("tokens")) t.probabilities.emplace_back(e.at(0).get<std::string>(), e.at(1).get<double>());
  t.unseen = j.at("unseen").get<double>();
  return t;
}

json body_json(const ModelBody& body) {
  struct Visitor {
    json operator()(const DecisionTreeModel& m) const { return tree_json(m); }
    json operator()(const RandomForestModel& m) const {
      json trees = json::array();
      for (const auto& t : m.trees) trees.push_back(tree_json(t));
      return {{"feature_subsample", m.feature_subsample}, {"trees", std::move(trees)}};
    }
    json operator()(const NaiveBayesModel& m) const {
      json columns = json::array();
      for (const auto& c : m.columns) {
        if (const auto* g = std::get_if<ContinuousLikelihood>(&c)) {
          json entry = {{"kind", "continuous"}};
          for (int k = 0; k < 2; ++k) {
            entry[label_text(static_cast<Label>(k))] = {{"mean", g->by_class[k].mean},
                                                        {"variance", g->by_class[k].variance}};
          }
          columns.push_back(std::move(entry));
        } else {
          const auto& t = std::get<CategoricalLikelihood>(c);
          json entry = {{"kind", "categorical"}};
          for (int k = 0; k < 2; ++k) entry[label_text(static_cast<Label>(k))] = token_table_json(t.by_class[k]);
          columns.push_back(std::move(entry));
        }
      }
      return {{"priors", {{"benign", m.priors[0]}, {"malicious", m.priors[1]}}}, {"columns", std::move(columns)}};
    }
    json operator()(const SvmModel& m) const {
      json encoding = json::array();
      for (const auto& e : m.encoding) {
        if (e.kind == ColumnKind::Continuous) {
          encoding.push_back({{"kind", "continuous"}, {"offset", e.offset}, {"mean", e.mean}, {"stddev", e.stddev}});
        } else {
          encoding.push_back({{"kind", "categorical"}, {"offset", e.offset}, {"tokens", e.tokens}});
        }
      }
      return {{"bias", m.bias}, {"weights", m.weights}, {"encoding", std::move(encoding)}};
    }
  };
  return std::visit(Visitor{}, body);
}

ModelBody body_from(Family family, const json& j) {
  switch (family) {
    case Family::DecisionTree:
      return tree_from(j);
    case Family::RandomForest: {
      RandomForestModel m;
      m.feature_subsample = j.at("feature_subsample").get<std::size_t>();
      for (const auto& t : j.at("trees")) m.trees.push_back(tree_from(t));
      return m;
    }
    case Family::NaiveBayes: {
      NaiveBayesModel m;
      m.priors = {j.at("priors").at("benign").get<double>(), j.at("priors").at("malicious").get<double>()};
      for (const auto& c : j.at("columns")) {
        const auto kind = parse_kind(c.at("kind").get<std::string>());
        if (kind == ColumnKind::Continuous) {
          ContinuousLikelihood g;
          for (int k = 0; k < 2; ++k) {
            const auto& s = c.at(label_text(static_cast<Label>(k)));
            g.by_class[k] = {s.at("mean").get<double>(), s.at("variance").get<double>()};
          }
          m.columns.emplace_back(g);
        } else {
          CategoricalLikelihood t;
          for (int k = 0; k < 2; ++k) t.by_class[k] = token_table_from(c.at(label_text(static_cast<Label>(k))));
          m.columns.emplace_back(std::move(t));
        }
      }
      return m;
    }
    case Family::Svm: {
      SvmModel m;
      m.bias = j.at("bias").get<double>();
      m.weights = j.at("weights").get<std::vector<double>>();
      for (const auto& e : j.at("encoding")) {
        SvmColumnEncoding enc;
        enc.kind = parse_kind(e.at("kind").get<std::string>());
        enc.offset = e.at("offset").get<std::size_t>();
        if (enc.kind == ColumnKind::Continuous) {
          enc.mean = e.at("mean").get<double>();
          enc.stddev = e.at("stddev").get<double>();
        } else {
          enc.tokens = e.at("tokens").get<std::vector<std::string>>();
        }
        m.encoding.push_back(std::move(enc));
      }
      return m;
    }
  }
  throw IntegrityError("unknown family");
}

void require(bool ok, const std::string& what) {
  if (!ok) throw IntegrityError(what);
}

void validate_tree(const DecisionTreeModel& tree, const TreeParams& params, const std::vector<ColumnKind>& kinds) {
  const auto size = tree.nodes.size();
  require(size > 0, "tree has no nodes");
  std::vector<int> parents(size, 0);
  for (std::size_t i = 0; i < size; ++i) {
    const auto& n = tree.nodes[i];
    require(std::isfinite(n.malicious_fraction) && n.malicious_fraction >= 0.0 && n.malicious_fraction <= 1.0,
            "tree node fraction out of [0,1]");
    require(n.sample_count > 0, "tree node with no samples");
    require((n.label == Label::Malicious) == (n.malicious_fraction >= 0.5), "tree node label disagrees with fraction");
    auto child = [&](std::uint32_t c) {
      require(c > i && c < size, "tree child index out of pre-order range");
      parents[c] += 1;
    };
    switch (n.kind) {
      case TreeNode::Kind::Leaf:
        require(n.sample_count >= static_cast<std::uint64_t>(params.min_samples_leaf), "leaf below min_samples_leaf");
        break;
      case TreeNode::Kind::Threshold:
        require(n.column < kinds.size() && kinds[n.column] == ColumnKind::Continuous, "bad threshold column");
        require(std::isfinite(n.threshold), "non-finite threshold");
        child(n.left);
        child(n.right);
        break;
      case TreeNode::Kind::Categorical: {
        require(n.column < kinds.size() && kinds[n.column] == ColumnKind::Categorical, "bad categorical column");
        require(!n.branches.empty(), "categorical node without branches");
        require(std::is_sorted(n.branches.begin(), n.branches.end(),
                               [](const auto& a, const auto& b) { return a.first < b.first; }),
                "categorical branches not sorted");
        bool fallback_ok = false;
        for (const auto& b : n.branches) {
          child(b.second);
          fallback_ok = fallback_ok || b.second == n.fallback;
        }
        require(fallback_ok, "categorical fallback is not one of its branches");
        break;
      }
    }
  }
  // Node statistics are integer counts: children partition their parent.
  auto malicious = [](const TreeNode& n) { return std::llround(n.malicious_fraction * static_cast<double>(n.sample_count)); };
  for (const auto& n : tree.nodes) {
    const double exact = n.malicious_fraction * static_cast<double>(n.sample_count);
    require(std::abs(exact - static_cast<double>(malicious(n))) < 1e-6, "tree node fraction is not a count ratio");
    if (n.kind == TreeNode::Kind::Leaf) continue;
    std::vector<std::uint32_t> kids;
    if (n.kind == TreeNode::Kind::Threshold) kids = {n.left, n.right};
    for (const auto& b : n.branches) kids.push_back(b.second);
    std::uint64_t count = 0;
    long long bad = 0;
    for (const auto c : kids) {
      count += tree.nodes[c].sample_count;
      bad += malicious(tree.nodes[c]);
    }
    require(count == n.sample_count && bad == malicious(n), "tree children do not partition their parent");
  }
  require(parents[0] == 0, "tree root has a parent");
  for (std::size_t i = 1; i < size; ++i) require(parents[i] == 1, "tree node reachable more than once or never");
  require(tree.depth() <= params.max_depth, "tree deeper than max_depth");
}

}  // namespace

void validate_model(const TrainedModel& model) {
  const auto& meta = model.metadata;
  try {
    meta.spec.validate();
  } catch (const ConfigError& e) {
    throw IntegrityError(std::string("invalid hyperparameters: ") + e.what());
  }
  require(model.body.index() == static_cast<std::size_t>(meta.spec.family), "body does not match family");
  const auto& kinds = meta.column_kinds;
  require(!kinds.empty(), "model has no columns");
  switch (meta.spec.family) {
    case Family::DecisionTree:
      validate_tree(std::get<DecisionTreeModel>(model.body), meta.spec.tree(), kinds);
      break;
    case Family::RandomForest: {
      const auto& f = std::get<RandomForestModel>(model.body);
      require(!f.trees.empty(), "forest has no trees");
      require(f.trees.size() == static_cast<std::size_t>(meta.spec.forest().tree_count), "forest size mismatch");
      require(f.feature_subsample >= 1 && f.feature_subsample <= kinds.size(), "bad feature_subsample");
      for (const auto& t : f.trees) validate_tree(t, meta.spec.forest().tree, kinds);
      break;
    }
    case Family::NaiveBayes: {
      const auto& nb = std::get<NaiveBayesModel>(model.body);
      require(nb.priors[0] > 0.0 && nb.priors[1] > 0.0, "non-positive prior");
      require(std::abs(nb.priors[0] + nb.priors[1] - 1.0) <= 1e-12, "priors do not sum to 1");
      require(nb.columns.size() == kinds.size(), "naive bayes column count mismatch");
      const double floor = meta.spec.naive_bayes().variance_floor;
      for (std::size_t c = 0; c < kinds.size(); ++c) {
        if (kinds[c] == ColumnKind::Continuous) {
          const auto* g = std::get_if<ContinuousLikelihood>(&nb.columns[c]);
          require(g != nullptr, "naive bayes column kind mismatch");
          for (const auto& s : g->by_class) {
            require(std::isfinite(s.mean) && std::isfinite(s.variance) && s.variance >= floor, "bad gaussian");
          }
        } else {
          const auto* t = std::get_if<CategoricalLikelihood>(&nb.columns[c]);
          require(t != nullptr, "naive bayes column kind mismatch");
          for (const auto& table : t->by_class) {
            double sum = table.unseen;
            require(table.unseen > 0.0, "non-positive unseen probability");
            for (const auto& [tok, p] : table.probabilities) {
              require(p > 0.0 && p <= 1.0, "token probability out of range");
              sum += p;
            }
            require(std::abs(sum - 1.0) <= 1e-9, "token probabilities do not sum to 1");
          }
        }
      }
      break;
    }
    case Family::Svm: {
      const auto& svm = std::get<SvmModel>(model.body);
      require(svm.encoding.size() == kinds.size(), "svm encoding column count mismatch");
      std::size_t offset = 0;
      for (std::size_t c = 0; c < kinds.size(); ++c) {
        const auto& e = svm.encoding[c];
        require(e.kind == kinds[c], "svm encoding kind mismatch");
        require(e.offset == offset, "svm encoding offsets not contiguous");
        if (e.kind == ColumnKind::Continuous) {
          require(std::isfinite(e.mean) && std::isfinite(e.stddev) && e.stddev >= kMinStddev, "bad standardization");
        } else {
          require(std::is_sorted(e.tokens.begin(), e.tokens.end()), "svm tokens not sorted");
        }
        offset += e.width();
      }
      require(svm.weights.size() == offset, "svm weight length does not match encoded dimension");
      require(std::isfinite(svm.bias), "non-finite bias");
      for (double w : svm.weights) require(std::isfinite(w), "non-finite weight");
      break;
    }
  }
}

json spec_to_json(const ClassifierSpec& spec) {
  json params;
  switch (spec.family) {
    case Family::DecisionTree:
      params = tree_params_json(spec.tree());
      break;
    case Family::RandomForest: {
      const auto& f = spec.forest();
      params = {{"tree", tree_params_json(f.tree)},
                {"tree_count", f.tree_count},
                {"feature_subsample", f.feature_subsample},
                {"bootstrap", f.bootstrap}};
      break;
    }
    case Family::Svm:
      params = {{"lambda", spec.svm().lambda}, {"epochs", spec.svm().epochs}};
      break;
    case Family::NaiveBayes:
      params = {{"variance_floor", spec.naive_bayes().variance_floor}, {"alpha", spec.naive_bayes().alpha}};
      break;
  }
  return {{"family", std::string(spec.name())}, {"hyperparams", std::move(params)}, {"seed", spec.seed}};
}

ClassifierSpec spec_from_json(const json& j) {
  const auto name = j.at("family").get<std::string>();
  const auto family = parse_family(name);
  if (!family) throw IntegrityError("unknown classifier family '" + name + "'");
  ClassifierSpec spec = ClassifierSpec::defaults(*family, j.at("seed").get<std::uint64_t>());
  const auto& p = j.at("hyperparams");
  switch (*family) {
    case Family::DecisionTree:
      spec.params = tree_params_from(p);
      break;
    case Family::RandomForest: {
      ForestParams f;
      f.tree = tree_params_from(p.at("tree"));
      f.tree_count = p.at("tree_count").get<int>();
      f.feature_subsample = p.at("feature_subsample").get<int>();
      f.bootstrap = p.at("bootstrap").get<bool>();
      spec.params = f;
      break;
    }
    case Family::Svm:
      spec.params = SvmParams{p.at("lambda").get<double>(), p.at("epochs").get<int>()};
      break;
    case Family::NaiveBayes:
      spec.params = NaiveBayesParams{p.at("variance_floor").get<double>(), p.at("alpha").get<double>()};
      break;
  }
  return spec;
}

json metadata_to_json(const ModelMetadata& meta) {
  json kinds = json::array();
  for (auto k : meta.column_kinds) kinds.push_back(std::string(to_string(k)));
  json j = spec_to_json(meta.spec);
  j["schema_fingerprint"] = meta.schema_fingerprint;
  j["column_kinds"] = std::move(kinds);
  j["training_rows"] = meta.training_rows;
  j["created_at"] = meta.created_at;
  j["role"] = std::string(role_name(meta.role));
  return j;
}

std::string model_to_string(const TrainedModel& model) {
  json body = body_json(model.body);
  json meta = metadata_to_json(model.metadata);
  meta["body_sha256"] = sha256_hex(body.dump());
  json doc = {{"format_version", kModelFormatVersion}, {"metadata", std::move(meta)}, {"body", std::move(body)}};
  return doc.dump(1) + "\n";
}

TrainedModel model_from_string(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw IntegrityError(std::string("model file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("format_version") || !doc["format_version"].is_number_integer()) {
    throw IntegrityError("model file has no format_version");
  }
  const auto version = doc["format_version"].get<std::int64_t>();
  if (version != kModelFormatVersion) {
    throw VersionError("unsupported model format_version " + std::to_string(version) + " (expected " +
                       std::to_string(kModelFormatVersion) + ")");
  }
  TrainedModel model;
  try {
    const auto& meta = doc.at("metadata");
    const auto& body = doc.at("body");
    if (sha256_hex(body.dump()) != meta.at("body_sha256").get<std::string>()) {
      throw IntegrityError("model body digest mismatch");
    }
    model.metadata.spec = spec_from_json(meta);
    model.metadata.schema_fingerprint = meta.at("schema_fingerprint").get<std::string>();
    for (const auto& k : meta.at("column_kinds")) model.metadata.column_kinds.push_back(parse_kind(k.get<std::string>()));
    model.metadata.training_rows = meta.at("training_rows").get<std::uint64_t>();
    model.metadata.created_at = meta.at("created_at").get<std::int64_t>();
    const auto role = parse_role(meta.at("role").get<std::string>());
    if (!role) throw IntegrityError("unknown model role");
    model.metadata.role = *role;
    model.body = body_from(model.metadata.spec.family, body);
  } catch (const json::exception& e) {
    throw IntegrityError(std::string("malformed model file: ") + e.what());
  }
  validate_model(model);
  return model;
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw StorageError("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw StorageError("write failed: " + path.string());
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
  write_text_file(path, model_to_string(model));
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StorageError("cannot open model file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return model_from_string(ss.str());
}

json to_json(const Rates& r) {
  return {{"acc", optional_number(r.acc)},
          {"tpr", optional_number(r.tpr)},
          {"fpr", optional_number(r.fpr)},
          {"tnr", optional_number(r.tnr)},
          {"fnr", optional_number(r.fnr)}};
}

json to_json(const EvaluationReport& report) {
  json j;
  j["rates"] = to_json(report.rates);
  j["confusion"] = {{"tp", report.confusion.tp},
                    {"tn", report.confusion.tn},
                    {"fp", report.confusion.fp},
                    {"fn", report.confusion.fn}};
  j["auc"] = optional_number(report.auc);
  j["roc_point_count"] = report.roc.size();
  return j;
}

json to_json(const CvResult& cv) {
  json folds = json::array();
  for (const auto& f : cv.per_fold) folds.push_back(to_json(f));
  return {{"per_fold", std::move(folds)},
          {"mean",
           {{"acc", optional_number(cv.mean.acc)},
            {"tpr", optional_number(cv.mean.tpr)},
            {"fpr", optional_number(cv.mean.fpr)},
            {"tnr", optional_number(cv.mean.tnr)},
            {"fnr", optional_number(cv.mean.fnr)},
            {"auc", optional_number(cv.mean.auc)}}},
          {"warnings", cv.warnings}};
}

json to_json(const Selection& selection) {
  json table = json::array();
  for (const auto& row : selection.table) table.push_back({{"spec", spec_to_json(row.spec)}, {"cv", to_json(row.cv)}});
  return {{"winner", std::string(selection.winner.name())},
          {"winner_index", selection.winner_index},
          {"table", std::move(table)}};
}

json to_json(const PipelineReport& report) {
  return {{"teacher_selection", to_json(report.teacher_selection)},
          {"teacher", metadata_to_json(report.teacher.metadata)},
          {"annotation", {{"rows", report.annotation.rows}, {"malicious_fraction", report.annotation.malicious_fraction}}},
          {"student_selection", to_json(report.student_selection)},
          {"student", metadata_to_json(report.student.metadata)},
          {"teacher_eval", to_json(report.teacher_eval)},
          {"student_eval", to_json(report.student_eval)},
          {"relative_score_difference", report.relative_score_difference},
          {"release_threshold", report.release_threshold},
          {"released", report.released}};
}

std::string dump_canonical(const json& j) { return j.dump(2) + "\n"; }

}  // namespace mimic
