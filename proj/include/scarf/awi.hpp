#pragma once

// Adjusted Water Impact: (on-site + off-site liters) x WSF, reported in
// stress-weighted liters. Flags record whether each input was reported or modeled.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scarf/consumption.hpp"
#include "scarf/error.hpp"
#include "scarf/ingest.hpp"
#include "scarf/stress_store.hpp"
#include "scarf/wsf.hpp"

namespace scarf {

namespace flag {
inline constexpr const char* kMonthlyFallback = "monthly_fallback";
inline constexpr const char* kDegenerateTrace = "degenerate_trace";
inline constexpr const char* kOnSiteReported = "on_site_reported";
inline constexpr const char* kOnSiteModeled = "on_site_modeled";
inline constexpr const char* kOffSiteModeled = "off_site_modeled";
inline constexpr const char* kOffSiteUnavailable = "off_site_unavailable";
inline constexpr const char* kEnergyFromCapacity = "energy_from_capacity";
inline constexpr const char* kExtremeStress = "extreme_stress";
} // namespace flag

struct AwiReport {
    std::string facility_id;
    BasinId basin;
    WaterVolume w_on;
    WaterVolume w_off;
    WsfValue wsf;
    double awi{0.0}; // stress-weighted liters
    StressLevel stress_level{StressLevel::low};
    std::optional<EnergyQuantity> energy_it;
    std::vector<std::string> flags;

    [[nodiscard]] bool has_flag(std::string_view f) const {
        return std::find(flags.begin(), flags.end(), f) != flags.end();
    }
};

[[nodiscard]] inline AwiReport awi(WaterVolume w_on, WaterVolume w_off, const WsfValue& wsf) {
    if (!std::isfinite(wsf.value) || wsf.value < 0.0) {
        throw Error(ErrorKind::InvariantViolation, "WSF must be finite and >= 0");
    }
    AwiReport r;
    r.basin = wsf.basin;
    r.w_on = w_on;
    r.w_off = w_off;
    r.wsf = wsf;
    r.awi = (w_on.liters() + w_off.liters()) * wsf.value;
    r.stress_level = classify(wsf.value);
    if (wsf.monthly_fallback) r.flags.emplace_back(flag::kMonthlyFallback);
    if (wsf.value > kExtremeStress) r.flags.emplace_back(flag::kExtremeStress);
    return r;
}

inline constexpr double kJoulesPerKwh = 3.6e6;

/// Mean sample power x (last - first timestamp). No idle power is subtracted.
[[nodiscard]] inline EnergyQuantity trace_energy(const PowerTrace& trace) {
    trace.validate();
    double sum_w = 0.0;
    for (const auto& s : trace.samples) sum_w += s.power_w;
    const double mean_w = sum_w / static_cast<double>(trace.samples.size());
    const double duration_s = trace.samples.back().timestamp_s - trace.samples.front().timestamp_s;
    return EnergyQuantity(mean_w * duration_s / kJoulesPerKwh);
}

[[nodiscard]] inline AwiReport per_request_awi(const PowerTrace& trace, const EfficiencyCoefficients& eff,
                                               const WsfValue& wsf) {
    const auto energy = trace_energy(trace);
    const auto raw = total_raw_water(energy, eff);
    auto r = awi(raw.on_site, raw.off_site, wsf);
    r.facility_id = trace.workload_id;
    r.energy_it = energy;
    r.flags.emplace_back(flag::kOnSiteModeled);
    r.flags.emplace_back(flag::kOffSiteModeled);
    if (trace.samples.size() == 1) r.flags.emplace_back(flag::kDegenerateTrace);
    return r;
}

struct FacilityOptions {
    double utilization{kDefaultUtilization};
    EpochCalendar calendar{};
};

/// Reported annual water supersedes the on-site model; off-site water is
/// modeled only when IT energy (given, or derived from capacity) and
/// efficiency coefficients are both known. Flags record which path produced
/// each component.
[[nodiscard]] inline AwiReport facility_annual_awi(const FacilityRecord& rec, BasinId basin, const StressStore& store,
                                                   const Horizon& horizon, const FacilityOptions& opts = {}) {
    std::optional<EnergyQuantity> energy = rec.annual_energy;
    bool from_capacity = false;
    if (!energy && rec.capacity_kw && rec.eff) {
        const CapacityEstimate cap{rec.facility_id, *rec.capacity_kw, opts.utilization, rec.facility_id};
        energy = annual_energy(cap, rec.eff->pue()).it;
        from_capacity = true;
    }
    std::vector<std::string> flags;
    WaterVolume w_on;
    WaterVolume w_off;
    const bool can_model = energy.has_value() && rec.eff.has_value();
    if (rec.annual_water) {
        w_on = *rec.annual_water;
        flags.emplace_back(flag::kOnSiteReported);
        if (can_model) {
            w_off = off_site_water(*energy, *rec.eff);
            flags.emplace_back(flag::kOffSiteModeled);
        } else {
            flags.emplace_back(flag::kOffSiteUnavailable);
        }
    } else if (can_model) {
        const auto raw = total_raw_water(*energy, *rec.eff);
        w_on = raw.on_site;
        w_off = raw.off_site;
        flags.emplace_back(flag::kOnSiteModeled);
        flags.emplace_back(flag::kOffSiteModeled);
    } else {
        throw Error(ErrorKind::InsufficientData,
                    "facility '" + rec.facility_id + "' has neither reported water nor energy with efficiency data");
    }
    if (from_capacity) flags.emplace_back(flag::kEnergyFromCapacity);

    auto r = awi(w_on, w_off, compute_wsf(store, basin, horizon, opts.calendar));
    r.facility_id = rec.facility_id;
    r.energy_it = energy;
    r.flags.insert(r.flags.begin(), flags.begin(), flags.end());
    return r;
}

struct ScenarioAwi {
    Scenario scenario;
    double awi{0.0};
};

struct SweepPoint {
    DiscountRate gamma;
    std::vector<ScenarioAwi> per_scenario; // in request order
    double median{0.0};
    double min{0.0};
    double max{0.0};
};

struct SweepResult {
    std::string facility_id;
    std::vector<SweepPoint> points; // ascending gamma, infinite last
};

/// Median of a non-empty set; mean of the two middle values for even counts.
[[nodiscard]] inline double median_of(std::vector<double> v) {
    if (v.empty()) throw Error(ErrorKind::InvariantViolation, "median of empty set");
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    return n % 2 == 1 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

/// Sorted, de-duplicated copy of a gamma grid.
[[nodiscard]] inline std::vector<DiscountRate> normalize_grid(std::span<const DiscountRate> grid) {
    std::vector<DiscountRate> g(grid.begin(), grid.end());
    std::sort(g.begin(), g.end(), [](const auto& a, const auto& b) { return a < b; });
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
}

[[nodiscard]] inline SweepResult sensitivity_sweep(const FacilityRecord& rec, BasinId basin, const StressStore& store,
                                                   std::span<const DiscountRate> gamma_grid,
                                                   std::span<const Scenario> scenarios,
                                                   const FacilityOptions& opts = {}) {
    if (gamma_grid.empty()) throw Error(ErrorKind::InvariantViolation, "discount-rate grid is empty");
    if (scenarios.empty()) throw Error(ErrorKind::InvariantViolation, "scenario list is empty");
    SweepResult out;
    out.facility_id = rec.facility_id;
    for (const auto& gamma : normalize_grid(gamma_grid)) {
        SweepPoint p;
        p.gamma = gamma;
        std::vector<double> values;
        for (auto sc : scenarios) {
            const auto r = facility_annual_awi(rec, basin, store, LongHorizon{gamma, sc}, opts);
            p.per_scenario.push_back({sc, r.awi});
            values.push_back(r.awi);
        }
        p.min = *std::min_element(values.begin(), values.end());
        p.max = *std::max_element(values.begin(), values.end());
        p.median = median_of(values);
        out.points.push_back(std::move(p));
    }
    return out;
}

/// Descending AWI; equal AWIs keep facility_id ascending.
[[nodiscard]] inline std::vector<AwiReport> rank_facilities(std::vector<AwiReport> reports) {
    std::sort(reports.begin(), reports.end(), [](const AwiReport& a, const AwiReport& b) {
        if (a.awi != b.awi) return a.awi > b.awi;
        return a.facility_id < b.facility_id;
    });
    return reports;
}

} // namespace scarf
