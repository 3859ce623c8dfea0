#pragma once

#include <string>
#include <string_view>

#include "gridstress/weather_correct.hpp"

namespace gridstress {

/// Summary statistics stored alongside a model.
struct FitSummary {
    double mean_rel_error = 0.0;
    double std_rel_error = 0.0;
    double r_squared = 0.0;
    double ssr = 0.0;

    friend bool operator==(const FitSummary&, const FitSummary&) = default;
};

FitSummary summarize(const FitDiagnostics& diagnostics);

struct ModelRecord {
    DemandModel model;
    FitSummary fit;
};

/// JSON record with every parameter, the setpoints, the training window and
/// fit statistics. Doubles are written in shortest round-trip form, so
/// reading the text back restores every parameter bit for bit.
std::string model_to_json(const DemandModel& model, const FitSummary& fit);
ModelRecord model_from_json(std::string_view text);

}  // namespace gridstress
