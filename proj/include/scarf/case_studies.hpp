#pragma once

// End-to-end pipelines over shipped fixture directories:
//
//   llm         per-request AWI across serving locations, monthly variation
//   datacenter  annual long-term AWI, proxy capacity energy, gamma sweep
//   fab         annual long-term AWI of fabrication plants
//
// Each fixture directory holds facilities.csv, gazetteer.csv, stress.csv and
// a study.ini with study parameters; llm adds traces/*.csv and datacenter adds
// capacity_sites.csv. Output CSVs are named after the figure they feed.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "scarf/awi.hpp"
#include "scarf/config.hpp"
#include "scarf/consumption.hpp"
#include "scarf/format.hpp"
#include "scarf/ingest.hpp"
#include "scarf/report.hpp"
#include "scarf/spatial.hpp"
#include "scarf/stress_store.hpp"
#include "scarf/wsf.hpp"

namespace scarf {

inline constexpr std::array<std::string_view, 3> kCaseStudies{"llm", "datacenter", "fab"};

[[nodiscard]] inline bool is_case_study(std::string_view name) {
    return std::find(kCaseStudies.begin(), kCaseStudies.end(), name) != kCaseStudies.end();
}

struct CaseStudyResult {
    std::vector<std::filesystem::path> files;
    std::vector<std::string> warnings;
};

namespace detail {

class StudyContext {
  public:
    StudyContext(const std::filesystem::path& dir, const std::filesystem::path& out_dir) : dir_(dir), out_(out_dir) {
        if (!std::filesystem::is_directory(dir)) {
            throw Error(ErrorKind::IoError, "fixture directory not found: " + dir.string());
        }
        settings = KeyValueConfig::load(dir / "study.ini");
        facilities = load_facilities(dir / "facilities.csv");
        gazetteer = load_gazetteer(dir / "gazetteer.csv");
        store = load_snapshot(dir / "stress.csv");
        for (const auto& f : facilities) {
            basins.emplace(f.facility_id, gazetteer.resolve(f.location));
        }
        for (const auto& b : store.extreme_basins()) {
            result.warnings.push_back("basin " + std::to_string(b.id) + " has stress above 1.0");
        }
        std::filesystem::create_directories(out_dir);
    }

    [[nodiscard]] std::string setting(std::string_view key, std::string_view fallback) const {
        return settings.get(key).value_or(std::string(fallback));
    }

    [[nodiscard]] const FacilityRecord& facility(std::string_view id) const {
        for (const auto& f : facilities) {
            if (f.facility_id == id) return f;
        }
        throw Error(ErrorKind::NotFound, "facility '" + std::string(id) + "' not in registry");
    }

    void write(const std::string& name, const std::string& content) {
        const auto path = out_ / name;
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f) throw Error(ErrorKind::IoError, "cannot write " + path.string());
        f << content;
        if (!f) throw Error(ErrorKind::IoError, "write failed: " + path.string());
        result.files.push_back(path);
    }

    [[nodiscard]] const std::filesystem::path& dir() const { return dir_; }

    KeyValueConfig settings;
    std::vector<FacilityRecord> facilities;
    Gazetteer gazetteer;
    StressStore store;
    std::map<std::string, BasinId> basins;
    CaseStudyResult result;

  private:
    std::filesystem::path dir_;
    std::filesystem::path out_;
};

inline std::vector<PowerTrace> load_traces(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw Error(ErrorKind::IoError, "trace directory not found: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<PowerTrace> traces;
    for (const auto& f : files) traces.push_back(load_power_trace(f));
    if (traces.empty()) throw Error(ErrorKind::IoError, "no traces in " + dir.string());
    return traces;
}

inline const EfficiencyCoefficients& require_eff(const FacilityRecord& f) {
    if (!f.eff) throw Error(ErrorKind::InsufficientData, "facility '" + f.facility_id + "' lacks WUE/PUE data");
    return *f.eff;
}

inline CaseStudyResult run_llm(StudyContext& ctx) {
    const auto traces = load_traces(ctx.dir() / "traces");

    std::ostringstream fig2;
    fig2 << "facility_id,display_name,basin_id,wue_on,wue_off,pue,stress,stress_level\n";
    for (const auto& f : ctx.facilities) {
        const auto& eff = require_eff(f);
        const auto wsf = short_wsf(ctx.store, ctx.basins.at(f.facility_id));
        fig2 << csv::escape(f.facility_id) << ',' << csv::escape(f.display_name) << ',' << wsf.basin.id << ','
             << format_number(eff.wue_on()) << ',' << format_number(eff.wue_off()) << ',' << format_number(eff.pue())
             << ',' << format_number(wsf.value) << ',' << to_string(classify(wsf.value)) << '\n';
    }
    ctx.write("fig2_wue.csv", fig2.str());

    std::ostringstream fig3;
    fig3 << "workload,facility_id,energy_kwh,w_on_liters,w_off_liters,wsf,awi,flags\n";
    for (const auto& t : traces) {
        for (const auto& f : ctx.facilities) {
            const auto r = per_request_awi(t, require_eff(f), short_wsf(ctx.store, ctx.basins.at(f.facility_id)));
            fig3 << csv::escape(t.workload_id) << ',' << csv::escape(f.facility_id) << ','
                 << format_number(r.energy_it->kwh()) << ',' << format_number(r.w_on.liters()) << ','
                 << format_number(r.w_off.liters()) << ',' << format_number(r.wsf.value) << ','
                 << format_number(r.awi) << ',' << join_flags(r.flags) << '\n';
        }
    }
    ctx.write("fig3_awi_per_request.csv", fig3.str());

    std::ostringstream fig4;
    fig4 << "facility_id,month,stress,fallback\n";
    for (const auto& f : ctx.facilities) {
        for (int m = 1; m <= 12; ++m) {
            const auto w = monthly_wsf(ctx.store, ctx.basins.at(f.facility_id), m);
            fig4 << csv::escape(f.facility_id) << ',' << m << ',' << format_number(w.value) << ','
                 << (w.monthly_fallback ? "true" : "false") << '\n';
        }
    }
    ctx.write("fig4_monthly_stress.csv", fig4.str());

    const auto workload = ctx.setting("monthly_workload", traces.back().workload_id);
    const auto trace_it = std::find_if(traces.begin(), traces.end(), [&](const auto& t) { return t.workload_id == workload; });
    if (trace_it == traces.end()) throw Error(ErrorKind::NotFound, "monthly_workload '" + workload + "' has no trace");
    auto monthly_ids = split_list(ctx.setting("monthly_facilities", ""));
    if (monthly_ids.empty()) {
        for (const auto& f : ctx.facilities) monthly_ids.push_back(f.facility_id);
    }
    std::ostringstream fig5;
    fig5 << "workload,facility_id,month,wsf,awi,fallback\n";
    for (const auto& id : monthly_ids) {
        const auto& f = ctx.facility(id);
        for (int m = 1; m <= 12; ++m) {
            const auto r = per_request_awi(*trace_it, require_eff(f), monthly_wsf(ctx.store, ctx.basins.at(id), m));
            fig5 << csv::escape(workload) << ',' << csv::escape(id) << ',' << m << ',' << format_number(r.wsf.value)
                 << ',' << format_number(r.awi) << ',' << (r.wsf.monthly_fallback ? "true" : "false") << '\n';
        }
    }
    ctx.write("fig5_monthly_awi.csv", fig5.str());
    return ctx.result;
}

inline LongHorizon study_horizon(const StudyContext& ctx) {
    return LongHorizon{parse_discount_rate(ctx.setting("gamma", "0.03")),
                       parse_scenario(ctx.setting("scenario", "business_as_usual"))};
}

inline std::string level_summary(const std::vector<AwiReport>& reports) {
    std::map<StressLevel, std::pair<double, double>> by_level;
    for (auto l : {StressLevel::low, StressLevel::medium, StressLevel::high}) by_level[l] = {0.0, 0.0};
    for (const auto& r : reports) {
        by_level[r.stress_level].first += r.w_on.liters() + r.w_off.liters();
        by_level[r.stress_level].second += r.awi;
    }
    std::ostringstream out;
    out << "stress_level,total_water_liters,total_awi\n";
    for (const auto& [level, v] : by_level) {
        out << to_string(level) << ',' << format_number(v.first) << ',' << format_number(v.second) << '\n';
    }
    return out.str();
}

inline CaseStudyResult run_datacenter(StudyContext& ctx) {
    const auto sites = load_capacity_sites(ctx.dir() / "capacity_sites.csv");
    const double radius = csv::parse_double(ctx.setting("proxy_radius_miles", "100"), 0, "proxy_radius_miles");
    FacilityOptions opts;
    opts.utilization = csv::parse_double(ctx.setting("utilization", "0.7"), 0, "utilization");

    std::vector<FacilityRecord> records;
    std::ostringstream cap_csv;
    cap_csv << "facility_id,source_site_id,capacity_kw,utilization,energy_it_kwh,energy_total_kwh\n";
    for (auto f : ctx.facilities) {
        if (!f.annual_energy && !f.capacity_kw) {
            const auto est = proxy_capacity(f, sites, radius, opts.utilization);
            const auto e = annual_energy(est, require_eff(f).pue());
            f.capacity_kw = est.capacity_kw;
            cap_csv << csv::escape(f.facility_id) << ',' << csv::escape(est.source_site_id) << ','
                    << format_number(est.capacity_kw) << ',' << format_number(est.utilization) << ','
                    << format_number(e.it.kwh()) << ',' << format_number(e.total.kwh()) << '\n';
        }
        records.push_back(std::move(f));
    }
    ctx.write("datacenter_capacity.csv", cap_csv.str());

    const auto horizon = study_horizon(ctx);
    std::vector<AwiReport> reports;
    for (const auto& f : records) {
        reports.push_back(facility_annual_awi(f, ctx.basins.at(f.facility_id), ctx.store, horizon, opts));
    }
    std::ostringstream awi_csv;
    write_awi_csv(awi_csv, rank_facilities(reports));
    ctx.write("datacenter_awi.csv", awi_csv.str());
    ctx.write("datacenter_by_stress_level.csv", level_summary(reports));

    std::vector<DiscountRate> grid;
    for (const auto& g : split_list(ctx.setting("sweep_gammas", "0.014,0.03,0.07"))) grid.push_back(parse_discount_rate(g));
    std::vector<Scenario> scenarios;
    for (const auto& s : split_list(ctx.setting("sweep_scenarios", "business_as_usual,optimistic,pessimistic"))) {
        scenarios.push_back(parse_scenario(s));
    }

    std::ostringstream weights;
    weights << "gamma,epoch,year,raw_weight,weight\n";
    for (const auto& g : normalize_grid(grid)) {
        const auto s = discount_schedule(g);
        for (std::size_t i = 0; i < kAllEpochs.size(); ++i) {
            weights << g.to_string() << ',' << to_string(kAllEpochs[i]) << ',' << s.years[i] << ','
                    << format_number(s.raw_weights[i]) << ',' << format_number(s.weights[i]) << '\n';
        }
    }
    ctx.write("fig6_weights.csv", weights.str());

    std::vector<SweepResult> sweeps;
    for (const auto& f : records) {
        sweeps.push_back(sensitivity_sweep(f, ctx.basins.at(f.facility_id), ctx.store, grid, scenarios, opts));
    }
    std::ostringstream sweep_csv;
    write_sweep_csv(sweep_csv, sweeps);
    ctx.write("fig6_sweep.csv", sweep_csv.str());
    return ctx.result;
}

inline CaseStudyResult run_fab(StudyContext& ctx) {
    const auto horizon = study_horizon(ctx);
    std::vector<AwiReport> reports;
    for (const auto& f : ctx.facilities) {
        reports.push_back(facility_annual_awi(f, ctx.basins.at(f.facility_id), ctx.store, horizon));
    }
    std::ostringstream out;
    write_awi_csv(out, rank_facilities(reports));
    ctx.write("fig7_fab.csv", out.str());
    return ctx.result;
}

} // namespace detail

/// Runs `name` over `fixtures_root/name`, writing CSVs into `out_dir`.
inline CaseStudyResult run_case_study(std::string_view name, const std::filesystem::path& fixtures_root,
                                      const std::filesystem::path& out_dir) {
    if (!is_case_study(name)) {
        throw Error(ErrorKind::InvariantViolation, "unknown case study '" + std::string(name) + "'");
    }
    detail::StudyContext ctx(fixtures_root / std::string(name), out_dir);
    if (name == "llm") return detail::run_llm(ctx);
    if (name == "datacenter") return detail::run_datacenter(ctx);
    return detail::run_fab(ctx);
}

} // namespace scarf
