#include "gridstress/weather_correct.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "gridstress/errors.hpp"

namespace gridstress {

using namespace std::chrono;

namespace {

constexpr int kMaxRecommendedTrainingDays = 42;

// Shared by the in-sample fit and counterfactual prediction so both produce
// identical bits for identical inputs.
double model_value(double alpha_h, double heating_sq, double alpha_c, double cooling_sq,
                   double baseload) {
    return alpha_h * heating_sq + alpha_c * cooling_sq + baseload;
}

void require_variable(const HourlySeries& s, Variable expected, const char* what) {
    if (s.variable() != expected) {
        throw Error(ErrorKind::Type, std::string(what) + " must be a " + to_string(expected) +
                                         " series, got " + to_string(s.variable()));
    }
}

double sample_std(std::span<const double> v, double mean) {
    if (v.size() < 2) return 0.0;
    double acc = 0.0;
    for (double x : v) acc += (x - mean) * (x - mean);
    return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

double mean_of(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return v.empty() ? 0.0 : acc / static_cast<double>(v.size());
}

// Relative error and R^2 statistics from parallel observed/fitted arrays.
FitDiagnostics diagnostics_from(std::span<const double> observed, std::vector<double> fitted) {
    FitDiagnostics diag;
    diag.residuals.resize(observed.size());
    std::vector<double> rel;
    rel.reserve(observed.size());
    for (std::size_t i = 0; i < observed.size(); ++i) {
        diag.residuals[i] = observed[i] - fitted[i];
        diag.ssr += diag.residuals[i] * diag.residuals[i];
        if (observed[i] != 0.0) rel.push_back(diag.residuals[i] / observed[i]);
    }
    diag.mean_rel_error = mean_of(rel);
    diag.std_rel_error = sample_std(rel, diag.mean_rel_error);
    const double dbar = mean_of(observed);
    double sst = 0.0;
    for (double d : observed) sst += (d - dbar) * (d - dbar);
    if (sst > 0.0) {
        diag.r_squared = std::clamp(1.0 - diag.ssr / sst, 0.0, 1.0);
    } else {
        diag.r_squared = diag.ssr == 0.0 ? 1.0 : 0.0;
    }
    diag.fitted = std::move(fitted);
    return diag;
}

}  // namespace

void DegreeParams::validate() const {
    auto in_range = [](double t) { return t >= 30.0 && t <= 100.0; };
    if (!in_range(heating_setpoint) || !in_range(cooling_setpoint)) {
        throw Error(ErrorKind::Config, "setpoints must lie within [30, 100] degF");
    }
    if (!(heating_setpoint < cooling_setpoint)) {
        throw Error(ErrorKind::Config, "heating setpoint must be below the cooling setpoint");
    }
}

DegreePair degrees(double temperature, const DegreeParams& params) {
    return {std::max(temperature - params.cooling_setpoint, 0.0),
            std::max(params.heating_setpoint - temperature, 0.0)};
}

DegreeHours degree_hours(const HourlySeries& temperature, const DegreeParams& params) {
    require_variable(temperature, Variable::Temperature, "degree_hours input");
    params.validate();
    DegreeHours out;
    out.hourly.reserve(temperature.size());
    for (const Sample& t : temperature.values()) {
        if (!t) {
            out.hourly.emplace_back();
            ++out.missing_hours;
            continue;
        }
        const DegreePair p = degrees(*t, params);
        out.hourly.emplace_back(p);
        out.cdh += p.cooling;
        out.hdh += p.heating;
        ++out.present_hours;
    }
    out.cdd = out.cdh / 24.0;
    out.hdd = out.hdh / 24.0;
    return out;
}

Design build_design(const HourlySeries& temperature, const HourlySeries& demand,
                    const DegreeParams& params) {
    require_variable(temperature, Variable::Temperature, "design temperature");
    require_variable(demand, Variable::Demand, "design demand");
    params.validate();
    if (temperature.empty() || demand.empty() || temperature.end() < demand.start() ||
        demand.end() < temperature.start()) {
        throw Error(ErrorKind::NoOverlap, "temperature and demand series do not overlap");
    }
    const HourStamp first = std::max(temperature.start(), demand.start());
    const HourStamp last = std::min(temperature.end(), demand.end());

    Design design;
    design.params = params;
    std::vector<double> heating_sq, cooling_sq, response;
    for (HourStamp t = first; t <= last; t += hours{1}) {
        const Sample temp = temperature.at(t);
        const Sample d = demand.at(t);
        if (!temp || !d) continue;
        const DegreePair p = degrees(*temp, params);
        heating_sq.push_back(p.heating * p.heating);
        cooling_sq.push_back(p.cooling * p.cooling);
        response.push_back(*d);
        design.row_stamps.push_back(t);
    }
    if (design.row_stamps.empty()) {
        throw Error(ErrorKind::NoOverlap, "no hour has both temperature and demand present");
    }
    const auto overlap_hours = (last - first).count() + 1;
    if (overlap_hours < kHoursPerWeek) {
        design.warnings.push_back("overlap of " + std::to_string(overlap_hours) +
                                  " hours is shorter than one week");
    }

    const auto rows = static_cast<Eigen::Index>(response.size());
    design.phi = Eigen::MatrixXd::Zero(rows, kParameterCount);
    design.response = Eigen::Map<const Eigen::VectorXd>(response.data(), rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        design.phi(r, 0) = heating_sq[static_cast<std::size_t>(r)];
        design.phi(r, 1) = cooling_sq[static_cast<std::size_t>(r)];
        design.phi(r, 1 + hour_of_week(design.row_stamps[static_cast<std::size_t>(r)])) = 1.0;
    }
    return design;
}

Eigen::VectorXd DemandModel::theta() const {
    Eigen::VectorXd t(kParameterCount);
    t(0) = alpha_h;
    t(1) = alpha_c;
    for (int w = 0; w < kHoursPerWeek; ++w) t(2 + w) = baseload[static_cast<std::size_t>(w)];
    return t;
}

double DemandModel::predict(double temperature, int how) const {
    const DegreePair p = degrees(temperature, degree_params);
    return model_value(alpha_h, p.heating * p.heating, alpha_c, p.cooling * p.cooling,
                       baseload[static_cast<std::size_t>(how - 1)]);
}

FitResult fit_ols(const Design& design) {
    const Eigen::Index rows = design.phi.rows();
    if (design.phi.cols() != kParameterCount || design.response.size() != rows ||
        static_cast<std::size_t>(rows) != design.row_stamps.size()) {
        throw Error(ErrorKind::Config, "design matrix, response and row index disagree in shape");
    }
    if (rows < kParameterCount) {
        throw Error(ErrorKind::Underdetermined,
                    std::to_string(rows) + " rows for " + std::to_string(kParameterCount) +
                        " parameters; the model is under-determined");
    }

    std::vector<int> missing_hours;
    for (int w = 1; w <= kHoursPerWeek; ++w) {
        if (design.phi.col(1 + w).sum() == 0.0) missing_hours.push_back(w);
    }
    if (!missing_hours.empty()) {
        std::string list;
        for (int w : missing_hours) list += (list.empty() ? "" : ", ") + std::to_string(w);
        throw Error(ErrorKind::Rank, "hours of week never observed: " + list);
    }

    FitResult result;
    DemandModel& model = result.model;
    model.degree_params = design.params;

    std::vector<Eigen::Index> active;
    const char* degree_names[2] = {"heating", "cooling"};
    for (Eigen::Index c = 0; c < 2; ++c) {
        if (design.phi.col(c).cwiseAbs().maxCoeff() > 0.0) {
            active.push_back(c);
        } else {
            model.warnings.push_back(std::string("no ") + degree_names[c] +
                                     " degrees in the training data; its coefficient is fixed at 0");
        }
    }
    for (Eigen::Index c = 2; c < kParameterCount; ++c) active.push_back(c);

    const auto k = static_cast<Eigen::Index>(active.size());
    Eigen::MatrixXd a(rows, k);
    for (Eigen::Index j = 0; j < k; ++j) a.col(j) = design.phi.col(active[static_cast<std::size_t>(j)]);

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    if (qr.rank() < k) {
        throw Error(ErrorKind::Rank, "design matrix is rank deficient (rank " +
                                         std::to_string(qr.rank()) + " of " + std::to_string(k) +
                                         " columns)");
    }
    const Eigen::VectorXd solution = qr.solve(design.response);
    if (!solution.allFinite()) throw Error(ErrorKind::Numerical, "least-squares solution is not finite");

    Eigen::VectorXd theta = Eigen::VectorXd::Zero(kParameterCount);
    for (Eigen::Index j = 0; j < k; ++j) theta(active[static_cast<std::size_t>(j)]) = solution(j);
    model.alpha_h = theta(0);
    model.alpha_c = theta(1);
    for (int w = 0; w < kHoursPerWeek; ++w) model.baseload[static_cast<std::size_t>(w)] = theta(2 + w);

    const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
    const Eigen::VectorXd sv = Eigen::BDCSVD<Eigen::MatrixXd>(r).singularValues();
    model.condition_estimate = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                                       : std::numeric_limits<double>::infinity();

    model.n_train = static_cast<std::size_t>(rows);
    model.training_window = {day_of(design.row_stamps.front()), day_of(design.row_stamps.back())};
    if (model.training_window.days() > kMaxRecommendedTrainingDays) {
        model.warnings.push_back("training window spans " +
                                 std::to_string(model.training_window.days()) +
                                 " days; baseload is assumed constant across weeks, keep it to about 6 weeks");
    }
    std::vector<std::string> negatives;
    if (model.alpha_h < 0.0) negatives.emplace_back("alpha_h");
    if (model.alpha_c < 0.0) negatives.emplace_back("alpha_c");
    for (int w = 0; w < kHoursPerWeek; ++w)
        if (model.baseload[static_cast<std::size_t>(w)] < 0.0) negatives.push_back("b_" + std::to_string(w + 1));
    if (!negatives.empty()) {
        std::string list;
        for (const auto& n : negatives) list += (list.empty() ? "" : ", ") + n;
        model.warnings.push_back("negative parameter estimates: " + list);
    }

    std::vector<double> fitted(static_cast<std::size_t>(rows));
    std::vector<double> observed(static_cast<std::size_t>(rows));
    for (Eigen::Index i = 0; i < rows; ++i) {
        const int how = hour_of_week(design.row_stamps[static_cast<std::size_t>(i)]);
        fitted[static_cast<std::size_t>(i)] =
            model_value(model.alpha_h, design.phi(i, 0), model.alpha_c, design.phi(i, 1),
                        model.baseload[static_cast<std::size_t>(how - 1)]);
        observed[static_cast<std::size_t>(i)] = design.response(i);
    }
    result.diagnostics = diagnostics_from(observed, std::move(fitted));
    return result;
}

HourlySeries predict_counterfactual(const DemandModel& model, const HourlySeries& temperature) {
    require_variable(temperature, Variable::Temperature, "counterfactual temperature");
    std::vector<Sample> out(temperature.size());
    for (std::size_t i = 0; i < temperature.size(); ++i) {
        if (temperature[i]) out[i] = model.predict(*temperature[i], hour_of_week(temperature.stamp(i)));
    }
    return HourlySeries(temperature.region_id(), Variable::Demand, temperature.start(), std::move(out));
}

FitDiagnostics evaluate(const HourlySeries& observed, const HourlySeries& predicted) {
    std::vector<double> obs, fit;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const Sample p = predicted.at(observed.stamp(i));
        if (observed[i] && p) {
            obs.push_back(*observed[i]);
            fit.push_back(*p);
        }
    }
    if (obs.empty()) throw Error(ErrorKind::NoOverlap, "no hour has both observation and prediction");
    return diagnostics_from(obs, std::move(fit));
}

double base_mean(const DailySeries& observed, const DateRange& base_window, int min_days) {
    const auto values = observed.slice(base_window).present_values();
    if (values.empty()) {
        throw Error(ErrorKind::InsufficientData, "base window " + format_date(base_window.first) +
                                                     ".." + format_date(base_window.last) +
                                                     " has no covered days");
    }
    if (static_cast<int>(values.size()) < min_days) {
        throw Error(ErrorKind::InsufficientData,
                    "base window has " + std::to_string(values.size()) + " covered days; " +
                        std::to_string(min_days) + " required");
    }
    const double m = mean_of(values);
    if (!(m > 0.0)) throw Error(ErrorKind::Degenerate, "base window mean must be positive");
    return m;
}

std::vector<ChangePoint> change_series_with_base(const DailySeries& observed,
                                                 const DailySeries& counterfactual,
                                                 double base_mean_mwh, double sigma_daily) {
    if (!(sigma_daily > 0.0) || !std::isfinite(sigma_daily)) {
        throw Error(ErrorKind::Config, "sigma_daily must be positive");
    }
    if (!(base_mean_mwh > 0.0)) throw Error(ErrorKind::Degenerate, "base mean must be positive");
    const double sigma_pct = 100.0 * sigma_daily / base_mean_mwh;
    std::vector<ChangePoint> out;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const Sample obs = observed.values()[i];
        const Sample cf = counterfactual.at(observed.dates()[i]);
        if (!obs || !cf) continue;
        ChangePoint p{};
        p.date = observed.dates()[i];
        p.observed = *obs;
        p.counterfactual = *cf;
        p.change_pct = 100.0 * (*obs - *cf) / base_mean_mwh;
        p.ci95_lo = p.change_pct - 2.0 * sigma_pct;
        p.ci95_hi = p.change_pct + 2.0 * sigma_pct;
        p.ci99_lo = p.change_pct - 3.0 * sigma_pct;
        p.ci99_hi = p.change_pct + 3.0 * sigma_pct;
        out.push_back(p);
    }
    return out;
}

std::vector<ChangePoint> change_series(const DailySeries& observed,
                                       const DailySeries& counterfactual,
                                       const DateRange& base_window, double sigma_daily) {
    return change_series_with_base(observed, counterfactual, base_mean(observed, base_window),
                                   sigma_daily);
}

double daily_residual_sigma(const DailySeries& observed, const DailySeries& predicted) {
    std::vector<double> diffs;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const Sample o = observed.values()[i];
        const Sample p = predicted.at(observed.dates()[i]);
        if (o && p) diffs.push_back(*o - *p);
    }
    if (diffs.size() < 2) {
        throw Error(ErrorKind::InsufficientData,
                    "need at least 2 days with observed and predicted totals to estimate sigma");
    }
    return sample_std(diffs, mean_of(diffs));
}

SetpointSearchResult search_setpoints(const HourlySeries& temperature, const HourlySeries& demand,
                                      std::span<const double> heating_grid,
                                      std::span<const double> cooling_grid,
                                      SetpointCriterion criterion, unsigned workers) {
    auto check_grid = [](std::span<const double> g, const char* name) {
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (!std::isfinite(g[i]) || g[i] < 30.0 || g[i] > 100.0) {
                throw Error(ErrorKind::Grid, std::string(name) + " grid values must lie in [30, 100] degF");
            }
            if (i > 0 && !(g[i] > g[i - 1])) {
                throw Error(ErrorKind::Grid, std::string(name) + " grid must be strictly ascending");
            }
        }
    };
    check_grid(heating_grid, "heating");
    check_grid(cooling_grid, "cooling");

    SetpointSearchResult result;
    for (double h : heating_grid)
        for (double c : cooling_grid)
            if (h < c) result.table.push_back({{h, c}, std::nullopt, 0.0, 0.0, 0.0, {}});
    if (result.table.empty()) throw Error(ErrorKind::Grid, "no admissible (heating < cooling) setpoint pair");

    std::vector<std::exception_ptr> errors(result.table.size());
    auto run = [&](std::size_t i) {
        SetpointScore& entry = result.table[i];
        try {
            const FitResult fit = fit_ols(build_design(temperature, demand, entry.params));
            entry.std_rel_error = fit.diagnostics.std_rel_error;
            entry.ssr = fit.diagnostics.ssr;
            entry.r_squared = fit.diagnostics.r_squared;
            entry.score = criterion == SetpointCriterion::Ssr ? entry.ssr : entry.std_rel_error;
        } catch (const Error& e) {
            entry.failure = e.what();
            errors[i] = std::current_exception();
        }
    };
    const unsigned n_workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(result.table.size())));
    if (n_workers == 1) {
        for (std::size_t i = 0; i < result.table.size(); ++i) run(i);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < n_workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < result.table.size(); i += n_workers) run(i);
            });
        }
    }

    const SetpointScore* best = nullptr;
    for (const auto& entry : result.table) {
        if (!entry.score) continue;
        if (!best || *entry.score < *best->score) {
            best = &entry;
            continue;
        }
        if (*entry.score > *best->score) continue;
        const double span = entry.params.cooling_setpoint - entry.params.heating_setpoint;
        const double best_span = best->params.cooling_setpoint - best->params.heating_setpoint;
        if (span < best_span ||
            (span == best_span && entry.params.cooling_setpoint < best->params.cooling_setpoint)) {
            best = &entry;
        }
    }
    if (!best) std::rethrow_exception(errors.front());
    result.best = best->params;
    result.best_score = *best->score;
    return result;
}

std::vector<double> make_grid(double lo, double hi, double step) {
    if (!(step > 0.0) || !(hi >= lo)) throw Error(ErrorKind::Grid, "grid needs step > 0 and hi >= lo");
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = lo + step * static_cast<double>(i);
    return g;
}

}  // namespace gridstress
