#pragma once

#include <cstdint>
#include <ostream>
#include <string>

namespace mimic::kdd {

// Schema text for the 41-column KDD-Cup-99 record layout, label column
// `class`, negative token `normal`.
std::string schema_text();

/// Writes `rows` synthetic connection records in the KDD-Cup-99 column order,
/// labeled with attack names (or `normal`). Each record's traffic type and
/// field values are drawn from its own seeded stream, so the output depends
/// only on (rows, seed).
///
/// The per-type field profiles (SYN floods with S0 flags and high
/// serror rates, smurf echo replies of 520/1032 bytes, sweeps with high
/// diff_srv/rerror rates, R2L/U2R sessions that look like normal logins)
/// follow the published descriptions of the KDD attack classes. The class mix
/// follows the NSL-KDD training file: about 53% normal.
void write_csv(std::ostream& out, std::uint64_t rows, std::uint64_t seed, bool header = false);

}  // namespace mimic::kdd
