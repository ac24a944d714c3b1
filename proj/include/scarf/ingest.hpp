#pragma once

// Loaders for facility registries, per-request power traces and capacity site
// lists. Unit conversion to kWh, liters and kW happens here and nowhere else.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "scarf/consumption.hpp"
#include "scarf/csv.hpp"
#include "scarf/error.hpp"
#include "scarf/spatial.hpp"

namespace scarf {

struct FacilityRecord {
    std::string facility_id;
    std::string display_name;
    FacilityLocation location;
    std::optional<EfficiencyCoefficients> eff;
    std::optional<WaterVolume> annual_water;
    std::optional<EnergyQuantity> annual_energy; // IT-side
    std::optional<double> capacity_kw;

    friend bool operator==(const FacilityRecord&, const FacilityRecord&) = default;
};

struct PowerSample {
    double timestamp_s{0.0};
    double power_w{0.0};

    friend bool operator==(const PowerSample&, const PowerSample&) = default;
};

struct PowerTrace {
    std::string workload_id;
    std::vector<PowerSample> samples;
    std::vector<std::string> device_labels;

    /// Strictly increasing timestamps, non-negative power, at least one sample.
    void validate() const {
        if (samples.empty()) {
            throw Error(ErrorKind::EmptyTrace, "trace '" + workload_id + "' has no samples");
        }
        for (std::size_t i = 0; i < samples.size(); ++i) {
            if (!std::isfinite(samples[i].power_w) || samples[i].power_w < 0.0) {
                throw Error(ErrorKind::InvariantViolation, "trace '" + workload_id + "': negative power");
            }
            if (i > 0 && !(samples[i].timestamp_s > samples[i - 1].timestamp_s)) {
                throw Error(ErrorKind::NonMonotonicTimestamps,
                            "trace '" + workload_id + "': timestamp " + std::to_string(samples[i].timestamp_s) +
                                " does not follow " + std::to_string(samples[i - 1].timestamp_s));
            }
        }
    }

    friend bool operator==(const PowerTrace&, const PowerTrace&) = default;
};

inline constexpr double kLitersPerCubicMeter = 1000.0;

namespace detail {

/// Shortest representation that parses back to the same double.
inline std::string exact_number(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

struct UnitColumn {
    std::string column;
    double factor{1.0};
};

/// Finds the single `<stem>_<unit>` column and its conversion factor.
inline std::optional<UnitColumn> unit_column(const csv::Table& t, std::string_view stem,
                                             const std::map<std::string, double, std::less<>>& units) {
    std::optional<UnitColumn> found;
    const std::string prefix = std::string(stem) + "_";
    for (const auto& h : t.header) {
        if (h.rfind(prefix, 0) != 0) continue;
        const auto unit = h.substr(prefix.size());
        const auto it = units.find(unit);
        if (it == units.end()) {
            throw Error(ErrorKind::UnitError, "column '" + h + "': unknown unit tag '" + unit + "'");
        }
        if (found) {
            throw Error(ErrorKind::UnitError, "both '" + found->column + "' and '" + h + "' declared");
        }
        found = UnitColumn{h, it->second};
    }
    return found;
}

inline FacilityRecord parse_facility_row(const csv::Table& t, const csv::Row& r,
                                         const std::optional<UnitColumn>& water,
                                         const std::optional<UnitColumn>& energy,
                                         const std::optional<UnitColumn>& capacity) {
    FacilityRecord rec;
    rec.facility_id = csv::cell(t, r, "facility_id");
    if (rec.facility_id.empty()) throw ParseError(r.line, "facility_id is empty");
    rec.display_name = csv::cell(t, r, "display_name");
    rec.location.name = csv::cell(t, r, "name");
    if (const auto& a = csv::cell(t, r, "admin_region"); !a.empty()) rec.location.admin_region = a;
    rec.location.lat = csv::optional_double(t, r, "lat");
    rec.location.lon = csv::optional_double(t, r, "lon");

    const auto wue_on = csv::optional_double(t, r, "wue_on");
    const auto wue_off = csv::optional_double(t, r, "wue_off");
    const auto pue = csv::optional_double(t, r, "pue");
    const auto at_line = [&](const Error& e) {
        return Error(e.kind(), "line " + std::to_string(r.line) + " (" + rec.facility_id + "): " + e.message());
    };
    try {
        rec.location.validate();
        if (wue_on || wue_off || pue) {
            if (!(wue_on && wue_off && pue)) {
                throw Error(ErrorKind::InvariantViolation, "wue_on, wue_off and pue must be given together");
            }
            rec.eff = EfficiencyCoefficients(*wue_on, *wue_off, *pue);
        }
        if (water) {
            if (auto v = csv::optional_double(t, r, water->column)) rec.annual_water = WaterVolume(*v * water->factor);
        }
        if (energy) {
            if (auto v = csv::optional_double(t, r, energy->column)) rec.annual_energy = EnergyQuantity(*v * energy->factor);
        }
        if (capacity) {
            if (auto v = csv::optional_double(t, r, capacity->column)) {
                if (!(*v > 0.0)) throw Error(ErrorKind::InvariantViolation, "capacity must be > 0");
                rec.capacity_kw = *v * capacity->factor;
            }
        }
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw at_line(e);
    }
    return rec;
}

} // namespace detail

/// Registry CSV. Required columns: facility_id, display_name, name. Optional:
/// admin_region, lat, lon, wue_on, wue_off, pue (all three or none),
/// annual_water_{liters,m3}, annual_energy_{kwh,mwh}, capacity_{kw,mw}.
/// Other columns must start with `x_`.
inline std::vector<FacilityRecord> load_facilities(const std::filesystem::path& path) {
    return csv::with_source(path, [&] {
        const auto t = csv::read(path);
        csv::require_columns(t, {"facility_id", "display_name", "name"});
        const auto water = detail::unit_column(t, "annual_water", {{"liters", 1.0}, {"m3", kLitersPerCubicMeter}});
        const auto energy = detail::unit_column(t, "annual_energy", {{"kwh", 1.0}, {"mwh", 1000.0}});
        const auto capacity = detail::unit_column(t, "capacity", {{"kw", 1.0}, {"mw", 1000.0}});
        std::set<std::string, std::less<>> allowed{"facility_id", "display_name", "name", "admin_region", "lat",
                                                   "lon", "wue_on", "wue_off", "pue"};
        for (const auto& c : {water, energy, capacity}) {
            if (c) allowed.insert(c->column);
        }
        csv::require_known_columns(t, allowed);

        std::vector<FacilityRecord> out;
        std::map<std::string, std::size_t> seen;
        for (const auto& r : t.rows) {
            auto rec = detail::parse_facility_row(t, r, water, energy, capacity);
            if (!seen.emplace(rec.facility_id, r.line).second) {
                throw Error(ErrorKind::DuplicateFacilityId, "facility '" + rec.facility_id + "' on line " +
                                                                std::to_string(r.line) + " already defined on line " +
                                                                std::to_string(seen[rec.facility_id]));
            }
            out.push_back(std::move(rec));
        }
        return out;
    });
}

/// Writes a registry in canonical units (liters, kWh, kW) that
/// load_facilities reads back to equal records.
inline void write_facilities(std::ostream& out, const std::vector<FacilityRecord>& records) {
    out << "facility_id,display_name,name,admin_region,lat,lon,wue_on,wue_off,pue,annual_water_liters,"
           "annual_energy_kwh,capacity_kw\n";
    const auto opt = [](const std::optional<double>& v) { return v ? detail::exact_number(*v) : std::string{}; };
    for (const auto& r : records) {
        out << csv::escape(r.facility_id) << ',' << csv::escape(r.display_name) << ',' << csv::escape(r.location.name)
            << ',' << csv::escape(r.location.admin_region.value_or("")) << ',' << opt(r.location.lat) << ','
            << opt(r.location.lon) << ',';
        if (r.eff) {
            out << detail::exact_number(r.eff->wue_on()) << ',' << detail::exact_number(r.eff->wue_off()) << ','
                << detail::exact_number(r.eff->pue()) << ',';
        } else {
            out << ",,,";
        }
        out << (r.annual_water ? detail::exact_number(r.annual_water->liters()) : "") << ','
            << (r.annual_energy ? detail::exact_number(r.annual_energy->kwh()) : "") << ',' << opt(r.capacity_kw)
            << '\n';
    }
}

/// Trace CSV `timestamp_s,power_w[,device]`. Rows sharing a timestamp (one
/// per device, e.g. GPU and CPU) must be adjacent and are summed into one
/// sample. The workload id is the file stem.
inline PowerTrace load_power_trace(const std::filesystem::path& path) {
    return csv::with_source(path, [&] {
        PowerTrace trace;
        trace.workload_id = path.stem().string();
        const auto text = csv::read_file(path);
        if (text.find_first_not_of(" \t\r\n\xEF\xBB\xBF") == std::string::npos) {
            throw Error(ErrorKind::EmptyTrace, path.string() + " is empty");
        }
        const auto t = csv::parse(text);
        csv::require_columns(t, {"timestamp_s", "power_w"});
        csv::require_known_columns(t, {"timestamp_s", "power_w", "device"});
        const bool has_device = t.column("device").has_value();
        std::set<std::string> devices_at_ts;
        std::set<std::string> labels;
        for (const auto& r : t.rows) {
            const double ts = csv::parse_double(csv::cell(t, r, "timestamp_s"), r.line, "timestamp_s");
            const double w = csv::parse_double(csv::cell(t, r, "power_w"), r.line, "power_w");
            if (w < 0.0) throw ParseError(r.line, "power_w must be >= 0");
            const auto& dev = csv::cell(t, r, "device");
            if (has_device && !dev.empty()) labels.insert(dev);
            if (!trace.samples.empty() && ts == trace.samples.back().timestamp_s && has_device) {
                if (!devices_at_ts.insert(dev).second) {
                    throw ParseError(r.line, "device '" + dev + "' repeated at timestamp " + csv::cell(t, r, "timestamp_s"));
                }
                trace.samples.back().power_w += w;
                continue;
            }
            if (!trace.samples.empty() && !(ts > trace.samples.back().timestamp_s)) {
                throw Error(ErrorKind::NonMonotonicTimestamps, "line " + std::to_string(r.line) + ": timestamp " +
                                                                   csv::cell(t, r, "timestamp_s") +
                                                                   " does not increase");
            }
            devices_at_ts = {dev};
            trace.samples.push_back({ts, w});
        }
        if (trace.samples.empty()) {
            throw Error(ErrorKind::EmptyTrace, path.string() + " has no samples");
        }
        trace.device_labels.assign(labels.begin(), labels.end());
        trace.validate();
        return trace;
    });
}

/// Capacity site CSV `site_id,lat,lon,capacity_kw`.
inline std::vector<CapacitySite> load_capacity_sites(const std::filesystem::path& path) {
    return csv::with_source(path, [&] {
        const auto t = csv::read(path);
        csv::require_columns(t, {"site_id", "lat", "lon", "capacity_kw"});
        csv::require_known_columns(t, {"site_id", "lat", "lon", "capacity_kw"});
        std::vector<CapacitySite> out;
        for (const auto& r : t.rows) {
            CapacitySite s;
            s.site_id = csv::cell(t, r, "site_id");
            s.location.lat = csv::parse_double(csv::cell(t, r, "lat"), r.line, "lat");
            s.location.lon = csv::parse_double(csv::cell(t, r, "lon"), r.line, "lon");
            s.capacity_kw = csv::parse_double(csv::cell(t, r, "capacity_kw"), r.line, "capacity_kw");
            const auto where = "line " + std::to_string(r.line) + ": ";
            if (s.site_id.empty()) throw ParseError(r.line, "site_id is empty");
            if (!valid_lat(s.location.lat) || !valid_lon(s.location.lon)) {
                throw Error(ErrorKind::InvariantViolation, where + "coordinates out of range");
            }
            if (!(s.capacity_kw > 0.0)) {
                throw Error(ErrorKind::InvariantViolation, where + "capacity_kw must be > 0");
            }
            out.push_back(std::move(s));
        }
        return out;
    });
}

inline void write_capacity_sites(std::ostream& out, const std::vector<CapacitySite>& sites) {
    out << "site_id,lat,lon,capacity_kw\n";
    for (const auto& s : sites) {
        out << csv::escape(s.site_id) << ',' << detail::exact_number(s.location.lat) << ','
            << detail::exact_number(s.location.lon) << ',' << detail::exact_number(s.capacity_kw) << '\n';
    }
}

/// Proxy capacity for a registry facility; it must carry coordinates.
[[nodiscard]] inline CapacityEstimate proxy_capacity(const FacilityRecord& target,
                                                     std::span<const CapacitySite> candidates,
                                                     double radius_miles = kDefaultProxyRadiusMiles,
                                                     double utilization = kDefaultUtilization) {
    if (!target.location.has_coordinates()) {
        throw Error(ErrorKind::InsufficientData, "facility '" + target.facility_id + "' has no coordinates");
    }
    return proxy_capacity(target.facility_id, GeoPoint{*target.location.lat, *target.location.lon}, candidates,
                          radius_miles, utilization);
}

} // namespace scarf
