#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <unistd.h>

#include "mimic/data.hpp"
#include "mimic/dataset.hpp"
#include "mimic/rng.hpp"
#include "mimic/schema.hpp"

namespace fixtures {

inline std::filesystem::path path(const std::string& name) { return std::filesystem::path(MIMIC_FIXTURE_DIR) / name; }

inline std::shared_ptr<const mimic::Schema> load_schema(const std::string& name) {
  return std::make_shared<const mimic::Schema>(mimic::load_schema(path(name)));
}

inline mimic::Dataset weather() {
  return mimic::load_dataset(path("weather.csv"), load_schema("weather.schema"), false);
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    dir_ = std::filesystem::temp_directory_path() /
           ("mimic-test-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(dir_);
    std::filesystem::create_directories(dir_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(dir_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return dir_; }
  std::filesystem::path operator/(const std::string& name) const { return dir_ / name; }

 private:
  std::filesystem::path dir_;
};

inline std::shared_ptr<const mimic::Schema> numeric_schema(std::size_t columns) {
  std::vector<mimic::ColumnSpec> specs;
  for (std::size_t c = 0; c < columns; ++c) specs.push_back({"x" + std::to_string(c), mimic::ColumnKind::Continuous});
  return std::make_shared<const mimic::Schema>(specs, "y", "benign");
}

// One continuous feature: Benign around -1, Malicious around +1, spread 0.1.
inline mimic::Dataset clusters_1d(std::size_t per_class, std::uint64_t seed) {
  mimic::Rng rng(seed);
  mimic::Dataset ds(numeric_schema(1), true);
  for (std::size_t i = 0; i < per_class; ++i) {
    ds.append({{rng.uniform() * 0.2 - 1.1}, mimic::Label::Benign});
    ds.append({{rng.uniform() * 0.2 + 0.9}, mimic::Label::Malicious});
  }
  return ds;
}

// Balanced XOR: Malicious iff the two coordinates have opposite signs.
inline mimic::Dataset xor_2d(std::size_t per_cell, std::uint64_t seed) {
  mimic::Rng rng(seed);
  mimic::Dataset ds(numeric_schema(2), true);
  for (std::size_t i = 0; i < per_cell; ++i) {
    for (const double sx : {-1.0, 1.0}) {
      for (const double sy : {-1.0, 1.0}) {
        const double x = sx * (0.5 + rng.uniform() * 0.5);
        const double y = sy * (0.5 + rng.uniform() * 0.5);
        ds.append({{x, y}, sx * sy < 0 ? mimic::Label::Malicious : mimic::Label::Benign});
      }
    }
  }
  return ds;
}

inline std::shared_ptr<const mimic::Schema> mixed_schema() {
  return std::make_shared<const mimic::Schema>(
      std::vector<mimic::ColumnSpec>{{"proto", mimic::ColumnKind::Categorical},
                                     {"bytes", mimic::ColumnKind::Continuous},
                                     {"count", mimic::ColumnKind::Continuous},
                                     {"flag", mimic::ColumnKind::Categorical}},
      "class", "normal");
}

// Mixed-type rows whose label is a function of (proto, bytes > 500, flag):
// consistent and separable, but only through interactions.
inline mimic::Dataset separable_mixed(std::size_t rows, std::uint64_t seed) {
  static const char* protos[] = {"tcp", "udp", "icmp"};
  static const char* flags[] = {"SF", "S0", "REJ"};
  mimic::Rng rng(seed);
  mimic::Dataset ds(mixed_schema(), true);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string proto = protos[rng.below(3)];
    const std::string flag = flags[rng.below(3)];
    const double bytes = std::round(rng.uniform() * 1000.0);
    const double count = std::round(rng.uniform() * 50.0);
    bool malicious = flag != "SF";
    if (proto == "icmp") malicious = bytes > 500.0;
    if (proto == "udp" && flag == "REJ") malicious = false;
    ds.append({{proto, bytes, count, flag}, malicious ? mimic::Label::Malicious : mimic::Label::Benign});
  }
  return ds;
}

// Random mixed rows with random labels; duplicates of a feature row are given
// the label of its first occurrence so the set stays consistent.
mimic::Dataset random_consistent(std::size_t rows, std::uint64_t seed);

}  // namespace fixtures
