#include "fixtures.hpp"

#include <map>

namespace fixtures {

mimic::Dataset random_consistent(std::size_t rows, std::uint64_t seed) {
  static const char* tokens[] = {"a", "b", "c", "d"};
  mimic::Rng rng(seed);
  mimic::Dataset ds(mixed_schema(), true);
  std::map<std::vector<mimic::FeatureValue>, mimic::Label> seen;
  for (std::size_t i = 0; i < rows; ++i) {
    std::vector<mimic::FeatureValue> values = {std::string(tokens[rng.below(4)]),
                                               static_cast<double>(rng.below(8)),
                                               std::round(rng.uniform() * 100.0) / 10.0,
                                               std::string(tokens[rng.below(3)])};
    const auto label = rng.below(2) == 1 ? mimic::Label::Malicious : mimic::Label::Benign;
    const auto [it, inserted] = seen.emplace(values, label);
    ds.append({values, it->second});
  }
  return ds;
}

}  // namespace fixtures
