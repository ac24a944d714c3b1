#pragma once

// Report serialization. CSV: one row per facility (AWI) or per
// (facility, gamma, scenario) (sweep). JSON: one object per facility, schema in
// docs/awi_report.schema.json. All numbers carry 9 significant digits.

#include <cstdlib>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "scarf/awi.hpp"
#include "scarf/csv.hpp"
#include "scarf/format.hpp"

namespace scarf {

struct ReportError {
    std::string facility_id;
    ErrorKind kind{ErrorKind::IoError};
    std::string message;
};

namespace detail {

inline std::string join_flags(const std::vector<std::string>& flags) {
    std::string s;
    for (const auto& f : flags) {
        if (!s.empty()) s += ';';
        s += f;
    }
    return s;
}

inline double rounded(double v) { return std::strtod(format_number(v).c_str(), nullptr); }

} // namespace detail

inline constexpr const char* kAwiCsvHeader =
    "facility_id,basin_id,basin_level,horizon,gamma,scenario,w_on_liters,w_off_liters,wsf,awi,stress_level,flags,error";

inline void write_awi_csv(std::ostream& out, const std::vector<AwiReport>& reports,
                          const std::vector<ReportError>& errors = {}) {
    out << kAwiCsvHeader << '\n';
    for (const auto& r : reports) {
        std::string gamma;
        std::string scenario;
        if (const auto* l = std::get_if<LongHorizon>(&r.wsf.horizon)) {
            gamma = l->gamma.to_string();
            scenario = std::string(to_string(l->scenario));
        }
        out << csv::escape(r.facility_id) << ',' << r.basin.id << ',' << r.basin.level << ','
            << horizon_name(r.wsf.horizon) << ',' << gamma << ',' << scenario << ','
            << format_number(r.w_on.liters()) << ',' << format_number(r.w_off.liters()) << ','
            << format_number(r.wsf.value) << ',' << format_number(r.awi) << ',' << to_string(r.stress_level) << ','
            << detail::join_flags(r.flags) << ",\n";
    }
    for (const auto& e : errors) {
        out << csv::escape(e.facility_id) << ",,,,,,,,,,,," << csv::escape(std::string(to_string(e.kind)) + ": " + e.message)
            << '\n';
    }
}

inline nlohmann::ordered_json to_json(const AwiReport& r) {
    using nlohmann::ordered_json;
    ordered_json wsf{{"value", detail::rounded(r.wsf.value)},
                     {"horizon", std::holds_alternative<ShortHorizon>(r.wsf.horizon)     ? "short"
                                 : std::holds_alternative<MonthlyHorizon>(r.wsf.horizon) ? "monthly"
                                                                                          : "long"}};
    if (const auto* m = std::get_if<MonthlyHorizon>(&r.wsf.horizon)) {
        wsf["month"] = m->month;
    }
    if (const auto* l = std::get_if<LongHorizon>(&r.wsf.horizon)) {
        wsf["gamma"] = l->gamma.is_infinite() ? ordered_json("inf") : ordered_json(detail::rounded(l->gamma.value()));
        wsf["scenario"] = std::string(to_string(l->scenario));
    }
    wsf["monthly_fallback"] = r.wsf.monthly_fallback;
    return ordered_json{
        {"facility_id", r.facility_id},
        {"basin", {{"id", r.basin.id}, {"level", r.basin.level}}},
        {"w_on_liters", detail::rounded(r.w_on.liters())},
        {"w_off_liters", detail::rounded(r.w_off.liters())},
        {"energy_it_kwh", r.energy_it ? ordered_json(detail::rounded(r.energy_it->kwh())) : ordered_json(nullptr)},
        {"wsf", wsf},
        {"awi", detail::rounded(r.awi)},
        {"awi_unit", "stress-weighted liters"},
        {"stress_level", std::string(to_string(r.stress_level))},
        {"flags", r.flags},
    };
}

inline void write_awi_json(std::ostream& out, const std::vector<AwiReport>& reports,
                           const std::vector<ReportError>& errors = {}) {
    nlohmann::ordered_json doc;
    doc["reports"] = nlohmann::ordered_json::array();
    for (const auto& r : reports) doc["reports"].push_back(to_json(r));
    doc["errors"] = nlohmann::ordered_json::array();
    for (const auto& e : errors) {
        doc["errors"].push_back({{"facility_id", e.facility_id}, {"kind", to_string(e.kind)}, {"message", e.message}});
    }
    out << doc.dump(2) << '\n';
}

inline constexpr const char* kSweepCsvHeader = "facility,gamma,scenario,awi,median,min,max";

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepResult>& results) {
    out << kSweepCsvHeader << '\n';
    for (const auto& res : results) {
        for (const auto& p : res.points) {
            for (const auto& s : p.per_scenario) {
                out << csv::escape(res.facility_id) << ',' << p.gamma.to_string() << ',' << to_string(s.scenario)
                    << ',' << format_number(s.awi) << ',' << format_number(p.median) << ','
                    << format_number(p.min) << ',' << format_number(p.max) << '\n';
            }
        }
    }
}

} // namespace scarf
