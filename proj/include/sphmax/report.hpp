#pragma once

// Serialization of experiment reports: CSV rows, a JSON summary and a
// self-contained SVG log-log plot.

#include <iosfwd>

#include "json.hpp"
#include "sphmax/experiments.hpp"

namespace sphmax {

/// Columns R,value,std_error; full precision.
void write_scan_csv(const ExperimentReport& rep, std::ostream& os);
nlohmann::json scan_summary(const ExperimentReport& rep);
/// Points with error bars, the fitted line and the reference slope.
void write_scan_svg(const ExperimentReport& rep, std::ostream& os);

nlohmann::json to_json(const Lemma2Report& rep);
nlohmann::json to_json(const SliceSurvey& rep);
nlohmann::json to_json(const DominationSurvey& rep);
nlohmann::json to_json(const DivergenceCheck& rep);

}  // namespace sphmax
