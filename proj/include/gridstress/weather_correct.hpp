#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gridstress/calendar.hpp"
#include "gridstress/series.hpp"

namespace gridstress {

inline constexpr int kHoursPerWeek = 168;
/// alpha_h, alpha_c, then one baseload per hour of week.
inline constexpr int kParameterCount = 2 + kHoursPerWeek;

/// Heating/cooling setpoints in degF. Heating must sit strictly below
/// cooling and both within [30, 100].
struct DegreeParams {
    double heating_setpoint;
    double cooling_setpoint;

    void validate() const;
    friend bool operator==(const DegreeParams&, const DegreeParams&) = default;
};

struct DegreePair {
    double cooling;  // max(T - cooling_setpoint, 0)
    double heating;  // max(heating_setpoint - T, 0)
};

DegreePair degrees(double temperature, const DegreeParams& params);

struct DegreeHours {
    std::vector<std::optional<DegreePair>> hourly;  // aligned with the input series
    double cdh = 0.0;  // degF-hour
    double hdh = 0.0;
    double cdd = 0.0;  // degF-day, cdh / 24
    double hdd = 0.0;
    std::size_t present_hours = 0;
    std::size_t missing_hours = 0;
};

DegreeHours degree_hours(const HourlySeries& temperature, const DegreeParams& params);

/// Stacked regression system d = Phi theta. Row r is
/// [(T^H)^2, (T^C)^2, one-hot(hour of week)] for the hour row_stamps[r];
/// hour-of-week w occupies column 1 + w (zero-based).
struct Design {
    Eigen::MatrixXd phi;
    Eigen::VectorXd response;
    std::vector<HourStamp> row_stamps;
    DegreeParams params{};
    std::vector<std::string> warnings;
};

/// One row per hour where both temperature and demand are present.
Design build_design(const HourlySeries& temperature, const HourlySeries& demand,
                    const DegreeParams& params);

struct DemandModel {
    double alpha_h = 0.0;  // MWh/degF^2
    double alpha_c = 0.0;  // MWh/degF^2
    std::array<double, kHoursPerWeek> baseload{};  // MWh, index = hour_of_week - 1
    DegreeParams degree_params{};
    DateRange training_window{};
    std::size_t n_train = 0;
    double condition_estimate = 0.0;
    std::vector<std::string> warnings;

    Eigen::VectorXd theta() const;
    /// alpha_h (T^H)^2 + alpha_c (T^C)^2 + b_w for the model's setpoints.
    double predict(double temperature, int hour_of_week) const;
};

struct FitDiagnostics {
    double mean_rel_error = 0.0;  // fraction
    double std_rel_error = 0.0;   // fraction
    double r_squared = 0.0;
    double ssr = 0.0;             // MWh^2
    std::vector<double> residuals;  // d - fitted, per design row
    std::vector<double> fitted;
};

struct FitResult {
    DemandModel model;
    FitDiagnostics diagnostics;
};

/// Least-squares fit by column-pivoted Householder QR of Phi. A degree
/// column that is identically zero (no heating or cooling hours observed)
/// is left out and its coefficient fixed at 0 with a warning.
FitResult fit_ols(const Design& design);

/// Counterfactual demand for new temperatures with the model's setpoints;
/// MISSING temperatures give MISSING predictions.
HourlySeries predict_counterfactual(const DemandModel& model, const HourlySeries& temperature);

/// In-sample statistics of a prediction against observations over the
/// hours where both are present.
FitDiagnostics evaluate(const HourlySeries& observed, const HourlySeries& predicted);

struct ChangePoint {
    Date date;
    double observed;        // MWh/day
    double counterfactual;  // MWh/day
    double change_pct;      // percent of the base-window daily mean
    double ci95_lo, ci95_hi;
    double ci99_lo, ci99_hi;
};

/// Mean of the observed daily values inside `base_window`; throws
/// InsufficientData below `min_days` present days.
double base_mean(const DailySeries& observed, const DateRange& base_window, int min_days = 7);

/// Daily change of observed over counterfactual as a percent of the base
/// mean, with +-2 sigma and +-3 sigma bands. `sigma_daily` is the standard
/// deviation of daily residuals in MWh/day.
std::vector<ChangePoint> change_series(const DailySeries& observed,
                                       const DailySeries& counterfactual,
                                       const DateRange& base_window, double sigma_daily);

/// Change points from a precomputed base mean.
std::vector<ChangePoint> change_series_with_base(const DailySeries& observed,
                                                 const DailySeries& counterfactual,
                                                 double base_mean_mwh, double sigma_daily);

/// Sample standard deviation of observed - predicted over days where both
/// are present. Throws InsufficientData below 2 such days.
double daily_residual_sigma(const DailySeries& observed, const DailySeries& predicted);

enum class SetpointCriterion { StdRelError, Ssr };

struct SetpointScore {
    DegreeParams params;
    std::optional<double> score;  // empty when the fit failed
    double std_rel_error = 0.0;
    double ssr = 0.0;
    double r_squared = 0.0;
    std::string failure;
};

struct SetpointSearchResult {
    DegreeParams best;
    double best_score = 0.0;
    std::vector<SetpointScore> table;  // heating-major grid order
};

/// Fits every (heating, cooling) pair with heating < cooling and returns
/// the minimiser of `criterion`. Ties go to the narrower deadband, then the
/// lower cooling setpoint. `workers` > 1 spreads fits over threads; the
/// table order does not depend on it.
SetpointSearchResult search_setpoints(const HourlySeries& temperature, const HourlySeries& demand,
                                      std::span<const double> heating_grid,
                                      std::span<const double> cooling_grid,
                                      SetpointCriterion criterion = SetpointCriterion::StdRelError,
                                      unsigned workers = 1);

/// Inclusive arithmetic grid lo, lo + step, ..., <= hi.
std::vector<double> make_grid(double lo, double hi, double step);

}  // namespace gridstress
