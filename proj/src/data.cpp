#include "mimic/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "mimic/error.hpp"
#include "mimic/rng.hpp"

namespace mimic {

std::string_view trim(std::string_view s) {
  constexpr std::string_view kSpace = " \t\r\n\v\f";
  const auto first = s.find_first_not_of(kSpace);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(kSpace);
  return s.substr(first, last - first + 1);
}

Label normalize_label(std::string_view raw, const Schema& schema) {
  const auto token = trim(raw);
  if (token.empty()) throw LabelError("empty label token");
  const auto& vocab = schema.label_vocabulary();
  if (!vocab.empty() && std::find(vocab.begin(), vocab.end(), token) == vocab.end()) {
    throw LabelError("unknown label token '" + std::string(token) + "'");
  }
  return token == schema.negative_label() ? Label::Benign : Label::Malicious;
}

namespace {

void split_fields(std::string_view line, std::vector<std::string_view>& out) {
  out.clear();
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    out.push_back(trim(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
}

}  // namespace

Dataset parse_dataset(std::string_view text, std::shared_ptr<const Schema> schema, bool has_header) {
  const std::size_t features = schema->feature_count();
  std::optional<Dataset> ds;
  std::vector<std::string_view> fields;
  FeatureVector row;
  row.values.resize(features);

  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool header_pending = has_header;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (trim(line).empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    if (line.find('"') != std::string_view::npos) throw ParseError(line_no, "quoted fields are not supported");
    split_fields(line, fields);
    if (!ds) {
      if (fields.size() == features + 1) {
        ds.emplace(schema, true);
      } else if (fields.size() == features) {
        ds.emplace(schema, false);
      } else {
        throw ParseError(line_no, "expected " + std::to_string(features) + " or " + std::to_string(features + 1) +
                                      " fields, found " + std::to_string(fields.size()));
      }
    }
    const std::size_t expected = features + (ds->labeled() ? 1 : 0);
    if (fields.size() != expected) {
      throw ParseError(line_no, "expected " + std::to_string(expected) + " fields, found " +
                                    std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < features; ++c) {
      const auto f = fields[c];
      if (schema->column(c).kind == ColumnKind::Continuous) {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
        if (f.empty() || ec != std::errc() || ptr != f.data() + f.size() || !std::isfinite(v)) {
          throw ParseError(line_no, "column '" + schema->column(c).name + "': not a finite number: '" +
                                        std::string(f) + "'");
        }
        row.values[c] = v;
      } else {
        if (f.empty()) throw ParseError(line_no, "column '" + schema->column(c).name + "': empty token");
        row.values[c] = std::string(f);
      }
    }
    if (ds->labeled()) {
      try {
        row.label = normalize_label(fields[features], *schema);
      } catch (const LabelError& e) {
        throw LabelError("line " + std::to_string(line_no) + ": " + e.what());
      }
    } else {
      row.label.reset();
    }
    ds->append(row);
  }
  if (!ds) throw ParseError(0, "no rows");
  return std::move(*ds);
}

Dataset load_dataset(const std::filesystem::path& path, std::shared_ptr<const Schema> schema, bool has_header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(0, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_dataset(ss.str(), std::move(schema), has_header);
}

std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string format_dataset(const Dataset& ds, bool header) {
  const auto& schema = ds.schema();
  std::string out;
  if (header) {
    for (std::size_t c = 0; c < schema.feature_count(); ++c) {
      if (c) out += ',';
      out += schema.column(c).name;
    }
    if (ds.labeled()) out += "," + schema.label_column();
    out += '\n';
  }
  for (std::size_t r = 0; r < ds.size(); ++r) {
    for (std::size_t c = 0; c < schema.feature_count(); ++c) {
      if (c) out += ',';
      if (schema.column(c).kind == ColumnKind::Continuous) {
        out += format_number(ds.number(r, c));
      } else {
        out += ds.token(r, c);
      }
    }
    if (ds.labeled()) {
      out += ',';
      out += ds.label(r) == Label::Benign ? schema.negative_label() : schema.positive_label();
    }
    out += '\n';
  }
  return out;
}

void write_dataset(const std::filesystem::path& path, const Dataset& ds, bool header) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw StorageError("cannot write " + path.string());
  out << format_dataset(ds, header);
  if (!out) throw StorageError("write failed: " + path.string());
}

std::vector<std::size_t> split_order(const Dataset& source, const SplitSpec& spec) {
  std::vector<std::size_t> order(source.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(spec.seed);
  if (!spec.stratified) {
    rng.shuffle(order);
    return order;
  }
  std::vector<std::size_t> per_class[2];
  for (std::size_t i = 0; i < source.size(); ++i) per_class[static_cast<int>(source.label(i))].push_back(i);
  // Interleave so every prefix keeps the class proportions (within one row).
  struct Keyed {
    double key;
    int cls;
    std::size_t row;
  };
  std::vector<Keyed> keyed;
  keyed.reserve(source.size());
  for (int cls = 0; cls < 2; ++cls) {
    rng.shuffle(per_class[cls]);
    const double n = static_cast<double>(per_class[cls].size());
    for (std::size_t i = 0; i < per_class[cls].size(); ++i) {
      keyed.push_back({(static_cast<double>(i) + 0.5) / n, cls, per_class[cls][i]});
    }
  }
  std::stable_sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
    return a.key != b.key ? a.key < b.key : a.cls < b.cls;
  });
  for (std::size_t i = 0; i < keyed.size(); ++i) order[i] = keyed[i].row;
  return order;
}

SplitResult split_dataset(const Dataset& source, const SplitSpec& spec) {
  if (!source.labeled()) throw StateError("split: source dataset must be labeled");
  const std::size_t wanted = spec.labeled_count + spec.unlabeled_count + spec.test_count;
  if (wanted > source.size()) {
    throw SizeError("split: requested " + std::to_string(wanted) + " rows but source has " +
                    std::to_string(source.size()));
  }
  const auto order = split_order(source, spec);
  const std::span<const std::size_t> all(order);
  auto a = all.subspan(0, spec.labeled_count);
  auto b = all.subspan(spec.labeled_count, spec.unlabeled_count);
  auto c = all.subspan(spec.labeled_count + spec.unlabeled_count, spec.test_count);
  return SplitResult{source.select(a, true), source.select(b, false), source.select(c, true)};
}

ClassBalance class_balance(const Dataset& ds) {
  if (!ds.labeled()) throw StateError("class_balance: dataset is unlabeled");
  if (ds.empty()) throw StateError("class_balance: dataset is empty");
  const auto counts = count_labels(ds);
  return {counts.benign / counts.total(), counts.malicious / counts.total()};
}

}  // namespace mimic
