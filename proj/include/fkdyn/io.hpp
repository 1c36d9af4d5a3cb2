#pragma once

// Text and JSON forms of words, orbits, measures, block distributions and
// towers. Words over the digits 0–9 are written one character per symbol;
// anything else as whitespace-separated numbers.

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "fkdyn/gikn.hpp"
#include "fkdyn/measurekit.hpp"
#include "fkdyn/seqcore.hpp"

namespace fkdyn::io {

using json = nlohmann::json;

Word parse_word(const std::string& text);
std::string format_word(const Word& w);

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

/// Shortest decimal that reads back to the same double.
std::string format_number(double v);

/// Named systems: "full-shift", "countable-product".
MetricSystem system_by_label(const std::string& label, std::size_t depth = 64);

/// {"system": label, "block": [...]}; block entries are words (strings) or symbol arrays.
PeriodicOrbit orbit_from_json(const json& j);
json orbit_to_json(const PeriodicOrbit& orbit, const std::string& label);

/// {"support": [...], "weights": [...]} over real points.
DiscreteMeasure measure_from_json(const MetricSystem& system, const json& j);
json measure_to_json(const DiscreteMeasure& mu);

/// {"<word>": probability, ...}; all words of the same length.
BlockDistribution blocks_from_json(const json& j);
json blocks_to_json(const BlockDistribution& bd);

/// {levels: [{word, gamma, kappa, chi}], weights: {...}, alpha}
json tower_to_json(const GiknSequence& gs);
GiknSequence tower_from_json(const json& j);

/// Synthesis settings; unknown or missing keys are InvalidConfig.
/// Optional: max_tail_copies, max_repeats.
GiknConfig gikn_config_from_json(const json& j);

/// Rows u,w,mass with a header.
std::string coupling_csv(const Coupling& c);

}  // namespace fkdyn::io
