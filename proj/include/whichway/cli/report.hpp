// JSON report fragments and CSV formatting. Numbers carry 12 significant
// digits; every measurement written here parses back with
// measurement_from_json.
#pragma once

#include <string>

#include "whichway/cli/config.hpp"

namespace whichway::cli {

inline constexpr int kSignificantDigits = 12;

double round_significant(double v, int digits = kSignificantDigits);

/// %.12g, with -0 written as 0.
std::string format_number(double v);

Json number(double v);
Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j, const std::string& pointer);

/// {"outcomes", "dim", "elements": [{"weight", "direction", "matrix"}]};
/// weight and direction appear only for rank-one qubit measurements.
Json measurement_to_json(const Measurement& m);

/// Accepts the report form as well as hand-written elements carrying only
/// weight/direction or only a matrix. Directions are renormalized. Throws
/// ConfigError naming the offending field.
Measurement measurement_from_json(const Json& j, const std::string& pointer);

Json ensemble_to_json(const DetectorEnsemble& e);
Json validity_to_json(const ValidityReport& r);

}  // namespace whichway::cli
