#include "mimic/schema.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "mimic/data.hpp"
#include "mimic/error.hpp"
#include "mimic/hash.hpp"

namespace mimic {

std::string_view to_string(ColumnKind kind) {
  return kind == ColumnKind::Continuous ? "continuous" : "categorical";
}

namespace {

bool is_reserved(std::string_view name) {
  return name == "label" || name == "negative" || name == "positive" || name == "labels";
}

}  // namespace

Schema::Schema(std::vector<ColumnSpec> columns, std::string label_column, std::string negative_label,
               std::string positive_label, std::vector<std::string> label_vocabulary)
    : columns_(std::move(columns)),
      label_column_(std::move(label_column)),
      negative_label_(std::move(negative_label)),
      positive_label_(std::move(positive_label)),
      label_vocabulary_(std::move(label_vocabulary)) {
  if (columns_.empty()) throw ConfigError("schema: at least one feature column is required");
  std::set<std::string_view> seen;
  for (const auto& c : columns_) {
    if (c.name.empty()) throw ConfigError("schema: empty column name");
    if (c.name.find_first_of(",:\n") != std::string::npos) {
      throw ConfigError("schema: invalid character in column name '" + c.name + "'");
    }
    if (is_reserved(c.name)) throw ConfigError("schema: reserved column name '" + c.name + "'");
    if (!seen.insert(c.name).second) throw ConfigError("schema: duplicate column '" + c.name + "'");
  }
  if (label_column_.empty()) throw ConfigError("schema: missing label column");
  if (seen.contains(label_column_)) {
    throw ConfigError("schema: label column '" + label_column_ + "' is also a feature column");
  }
  if (negative_label_.empty()) throw ConfigError("schema: missing negative label");
  if (positive_label_.empty()) throw ConfigError("schema: empty positive label");
  if (positive_label_ == negative_label_) {
    throw ConfigError("schema: positive and negative labels must differ");
  }
}

std::vector<ColumnKind> Schema::kinds() const {
  std::vector<ColumnKind> out;
  out.reserve(columns_.size());
  for (const auto& c : columns_) out.push_back(c.kind);
  return out;
}

std::string Schema::canonical_text() const {
  std::string out;
  for (const auto& c : columns_) {
    out += c.name;
    out += ':';
    out += to_string(c.kind);
    out += '\n';
  }
  out += "label:" + label_column_ + "\n";
  out += "negative:" + negative_label_ + "\n";
  out += "positive:" + positive_label_ + "\n";
  if (!label_vocabulary_.empty()) {
    out += "labels:";
    for (std::size_t i = 0; i < label_vocabulary_.size(); ++i) {
      if (i) out += ',';
      out += label_vocabulary_[i];
    }
    out += '\n';
  }
  return out;
}

std::string Schema::fingerprint() const { return sha256_hex(canonical_text()); }

Schema parse_schema(std::string_view text) {
  std::vector<ColumnSpec> columns;
  std::string label_column, negative, positive = "malicious";
  std::vector<std::string> vocabulary;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError(line_no, "schema: expected 'key:value'");
    const std::string key(trim(line.substr(0, colon)));
    const std::string value(trim(line.substr(colon + 1)));
    if (key.empty() || value.empty()) throw ParseError(line_no, "schema: empty key or value");
    if (key == "label") {
      label_column = value;
    } else if (key == "negative") {
      negative = value;
    } else if (key == "positive") {
      positive = value;
    } else if (key == "labels") {
      std::string_view rest = value;
      while (!rest.empty()) {
        const auto comma = rest.find(',');
        const auto tok = trim(rest.substr(0, comma));
        if (tok.empty()) throw ParseError(line_no, "schema: empty label in vocabulary");
        vocabulary.emplace_back(tok);
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
      }
    } else if (value == "continuous") {
      columns.push_back({key, ColumnKind::Continuous});
    } else if (value == "categorical") {
      columns.push_back({key, ColumnKind::Categorical});
    } else {
      throw ParseError(line_no, "schema: unknown column kind '" + value + "'");
    }
    if (end == text.size()) break;
  }
  try {
    return Schema(std::move(columns), std::move(label_column), std::move(negative), std::move(positive),
                  std::move(vocabulary));
  } catch (const ConfigError& e) {
    throw ParseError(0, e.what());
  }
}

Schema load_schema(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(0, "cannot open schema file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_schema(ss.str());
}

}  // namespace mimic
