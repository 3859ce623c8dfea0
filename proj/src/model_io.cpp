#include "gridstress/model_io.hpp"

#include "gridstress/errors.hpp"
#include "json.hpp"

namespace gridstress {

using json = nlohmann::ordered_json;

namespace {

constexpr int kFormatVersion = 1;

Date read_date(const json& j, const char* key) {
    auto d = parse_date(j.at(key).get<std::string>());
    if (!d) throw Error(ErrorKind::Config, std::string("model file: bad date in '") + key + "'");
    return *d;
}

}  // namespace

FitSummary summarize(const FitDiagnostics& diagnostics) {
    return {diagnostics.mean_rel_error, diagnostics.std_rel_error, diagnostics.r_squared,
            diagnostics.ssr};
}

std::string model_to_json(const DemandModel& model, const FitSummary& fit) {
    json j;
    j["format_version"] = kFormatVersion;
    j["heating_setpoint_degF"] = model.degree_params.heating_setpoint;
    j["cooling_setpoint_degF"] = model.degree_params.cooling_setpoint;
    j["alpha_h_mwh_per_degF2"] = model.alpha_h;
    j["alpha_c_mwh_per_degF2"] = model.alpha_c;
    j["baseload_mwh"] = json::array();
    for (double b : model.baseload) j["baseload_mwh"].push_back(b);
    j["training_window"] = {{"first", format_date(model.training_window.first)},
                            {"last", format_date(model.training_window.last)}};
    j["n_train"] = model.n_train;
    j["condition_estimate"] = model.condition_estimate;
    j["diagnostics"] = {{"mean_rel_error", fit.mean_rel_error},
                        {"std_rel_error", fit.std_rel_error},
                        {"r_squared", fit.r_squared},
                        {"ssr", fit.ssr}};
    j["warnings"] = model.warnings;
    return j.dump(2) + "\n";
}

ModelRecord model_from_json(std::string_view text) {
    ModelRecord rec;
    try {
        const json j = json::parse(text);
        if (j.at("format_version").get<int>() != kFormatVersion) {
            throw Error(ErrorKind::Config, "model file: unsupported format_version");
        }
        DemandModel& m = rec.model;
        m.degree_params = {j.at("heating_setpoint_degF").get<double>(),
                           j.at("cooling_setpoint_degF").get<double>()};
        m.alpha_h = j.at("alpha_h_mwh_per_degF2").get<double>();
        m.alpha_c = j.at("alpha_c_mwh_per_degF2").get<double>();
        const json& base = j.at("baseload_mwh");
        if (!base.is_array() || base.size() != static_cast<std::size_t>(kHoursPerWeek)) {
            throw Error(ErrorKind::Config, "model file: baseload_mwh must hold 168 values");
        }
        for (std::size_t w = 0; w < base.size(); ++w) m.baseload[w] = base[w].get<double>();
        m.training_window = {read_date(j.at("training_window"), "first"),
                             read_date(j.at("training_window"), "last")};
        m.n_train = j.at("n_train").get<std::size_t>();
        m.condition_estimate = j.at("condition_estimate").get<double>();
        m.warnings = j.value("warnings", std::vector<std::string>{});
        const json& d = j.at("diagnostics");
        rec.fit = {d.at("mean_rel_error").get<double>(), d.at("std_rel_error").get<double>(),
                   d.at("r_squared").get<double>(), d.at("ssr").get<double>()};
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Config, std::string("model file: ") + e.what());
    }
    return rec;
}

}  // namespace gridstress
