// scarf: command-line front end for the water impact pipeline.
//
// Exit codes: 0 success, 1 I/O or data error, 2 ambiguous location,
// 3 partial failure (some rows failed), 64 usage error.

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scarf/remote_geocoder.hpp"
#include "scarf/scarf.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitData = 1;
constexpr int kExitAmbiguous = 2;
constexpr int kExitPartial = 3;
constexpr int kExitUsage = 64;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Value lookup in precedence order: flag > SCARF_<KEY> > config file > default.
class Settings {
  public:
    std::map<std::string, std::optional<std::string>> flags;
    std::optional<std::string> config_path;

    void load_config() {
        auto path = config_path;
        if (!path) {
            if (const char* env = std::getenv("SCARF_CONFIG"); env && *env) path = env;
        }
        if (path) file_ = scarf::KeyValueConfig::load(*path);
    }

    [[nodiscard]] std::optional<std::string> get(const std::string& key) const {
        if (auto it = flags.find(key); it != flags.end() && it->second) return it->second;
        std::string env = "SCARF_";
        for (char c : key) env += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        if (const char* v = std::getenv(env.c_str()); v && *v) return std::string(v);
        return file_.get(key);
    }

    [[nodiscard]] std::string get_or(const std::string& key, const std::string& fallback) const {
        return get(key).value_or(fallback);
    }

    [[nodiscard]] std::string require(const std::string& key) const {
        auto v = get(key);
        if (!v || v->empty()) {
            throw UsageError("missing required setting '" + key + "' (flag --" + dashed(key) + ", env SCARF_" +
                             upper(key) + ", or config file)");
        }
        return *v;
    }

  private:
    static std::string dashed(std::string s) {
        for (auto& c : s) if (c == '_') c = '-';
        return s;
    }
    static std::string upper(std::string s) {
        for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        return s;
    }

    scarf::KeyValueConfig file_;
};

scarf::DiscountRate parse_gamma(const std::string& text) {
    try {
        return scarf::parse_discount_rate(text);
    } catch (const scarf::Error& e) {
        throw UsageError(e.message());
    }
}

scarf::Scenario parse_scenario(const std::string& text) {
    try {
        return scarf::parse_scenario(text);
    } catch (const scarf::Error& e) {
        throw UsageError(e.message());
    }
}

scarf::Horizon parse_horizon(const Settings& s) {
    const auto h = s.get_or("horizon", "long");
    if (h == "short") return scarf::ShortHorizon{};
    if (h == "long") {
        return scarf::LongHorizon{parse_gamma(s.get_or("gamma", "0.03")),
                                  parse_scenario(s.get_or("scenario", "business_as_usual"))};
    }
    if (h.rfind("monthly=", 0) == 0) {
        const auto m = h.substr(8);
        int month = 0;
        const auto [ptr, ec] = std::from_chars(m.data(), m.data() + m.size(), month);
        if (ec != std::errc() || ptr != m.data() + m.size()) throw UsageError("invalid month in '" + h + "'");
        return scarf::MonthlyHorizon{month};
    }
    throw UsageError("horizon must be short, long or monthly=M, got '" + h + "'");
}

bool truthy(const std::string& v) { return v == "on" || v == "true" || v == "1" || v == "yes"; }

std::unique_ptr<scarf::BasinResolver> make_resolver(const Settings& s) {
    if (truthy(s.get_or("remote", "off"))) {
        scarf::RemoteConfig rc;
        rc.base_url = s.require("remote_url");
        rc.api_key = s.get_or("api_key", "");
        const double secs = scarf::csv::parse_double(s.get_or("timeout_s", "10"), 0, "timeout_s");
        rc.timeout = std::chrono::milliseconds(static_cast<long long>(secs * 1000.0));
        return std::make_unique<scarf::RemoteGeocoder>(rc);
    }
    return std::make_unique<scarf::Gazetteer>(scarf::load_gazetteer(s.require("gazetteer")));
}

/// Writes to --out when given, stdout otherwise.
void emit(const Settings& s, const std::string& content) {
    if (const auto out = s.get("out"); out && !out->empty()) {
        std::ofstream f(*out, std::ios::binary | std::ios::trunc);
        if (!f) throw scarf::Error(scarf::ErrorKind::IoError, "cannot write " + *out);
        f << content;
        return;
    }
    std::cout << content;
}

void print_candidates(const scarf::AmbiguousLocation& e) {
    std::cout << "ambiguous location; candidates:\n";
    for (const auto& c : e.candidates()) {
        std::cout << c.basin.id << ',' << c.basin.level << ',' << c.key << '\n';
    }
}

int cmd_resolve(const Settings& s) {
    scarf::FacilityLocation loc;
    loc.name = s.get_or("name", "");
    if (auto a = s.get("admin_region"); a && !a->empty()) loc.admin_region = *a;
    if (auto lat = s.get("lat")) loc.lat = scarf::csv::parse_double(*lat, 0, "lat");
    if (auto lon = s.get("lon")) loc.lon = scarf::csv::parse_double(*lon, 0, "lon");
    if (loc.name.empty() && !loc.has_coordinates()) throw UsageError("give --name or both --lat and --lon");
    const auto resolver = make_resolver(s);
    try {
        const auto b = resolver->resolve(loc);
        std::cout << b.id << '\n';
        return kExitOk;
    } catch (const scarf::AmbiguousLocation& e) {
        print_candidates(e);
        std::cerr << "scarf: " << e.what() << '\n';
        return kExitAmbiguous;
    }
}

int cmd_wsf(const Settings& s) {
    const auto store = scarf::load_snapshot(s.require("snapshot"));
    const auto basin_text = s.require("basin");
    const scarf::BasinId basin{scarf::csv::parse_int(basin_text, 0, "basin"), 0};
    const auto w = scarf::compute_wsf(store, basin, parse_horizon(s));
    std::cout << scarf::format_number(w.value) << '\n';
    if (w.monthly_fallback) std::cerr << "scarf: no monthly data for basin " << basin.id << "; annual baseline used\n";
    return kExitOk;
}

std::vector<scarf::FacilityRecord> selected_facilities(const Settings& s, const std::vector<std::string>& filter) {
    auto all = scarf::load_facilities(s.require("registry"));
    if (filter.empty()) return all;
    std::vector<scarf::FacilityRecord> out;
    for (const auto& id : filter) {
        const auto it = std::find_if(all.begin(), all.end(), [&](const auto& f) { return f.facility_id == id; });
        if (it == all.end()) throw scarf::Error(scarf::ErrorKind::NotFound, "facility '" + id + "' not in registry");
        out.push_back(*it);
    }
    return out;
}

/// Fills capacity from proxy sites for facilities lacking energy data.
void apply_capacity_sites(const Settings& s, std::vector<scarf::FacilityRecord>& facilities) {
    const auto path = s.get("capacity_sites");
    if (!path || path->empty()) return;
    const auto sites = scarf::load_capacity_sites(*path);
    const double radius = scarf::csv::parse_double(s.get_or("proxy_radius_miles", "100"), 0, "proxy_radius_miles");
    for (auto& f : facilities) {
        if (!f.annual_energy && !f.capacity_kw && f.location.has_coordinates()) {
            f.capacity_kw = scarf::proxy_capacity(f, sites, radius).capacity_kw;
        }
    }
}

scarf::FacilityOptions facility_options(const Settings& s) {
    scarf::FacilityOptions o;
    o.utilization = scarf::csv::parse_double(s.get_or("utilization", "0.7"), 0, "utilization");
    return o;
}

int cmd_awi(const Settings& s, const std::vector<std::string>& filter) {
    const auto format = s.get_or("format", "csv");
    if (format != "csv" && format != "json") throw UsageError("format must be csv or json");
    const auto horizon = parse_horizon(s);
    auto facilities = selected_facilities(s, filter);
    apply_capacity_sites(s, facilities);
    const auto store = scarf::load_snapshot(s.require("snapshot"));
    const auto resolver = make_resolver(s);
    const auto opts = facility_options(s);

    std::vector<scarf::AwiReport> reports;
    std::vector<scarf::ReportError> errors;
    for (const auto& f : facilities) {
        try {
            reports.push_back(scarf::facility_annual_awi(f, resolver->resolve(f.location), store, horizon, opts));
        } catch (const scarf::Error& e) {
            if (e.kind() == scarf::ErrorKind::RemoteUnavailable) throw;
            errors.push_back({f.facility_id, e.kind(), e.message()});
        }
    }
    reports = scarf::rank_facilities(std::move(reports));
    std::ostringstream out;
    if (format == "json") {
        scarf::write_awi_json(out, reports, errors);
    } else {
        scarf::write_awi_csv(out, reports, errors);
    }
    emit(s, out.str());
    for (const auto& e : errors) std::cerr << "scarf: " << e.facility_id << ": " << e.message << '\n';
    return errors.empty() ? kExitOk : kExitPartial;
}

int cmd_sweep(const Settings& s, const std::vector<std::string>& filter) {
    std::vector<scarf::DiscountRate> grid;
    for (const auto& g : scarf::split_list(s.get_or("gammas", ""))) grid.push_back(parse_gamma(g));
    if (grid.empty()) throw UsageError("discount-rate grid is empty (--gammas)");
    std::vector<scarf::Scenario> scenarios;
    for (const auto& sc : scarf::split_list(s.get_or("scenarios", "business_as_usual,optimistic,pessimistic"))) {
        scenarios.push_back(parse_scenario(sc));
    }
    if (scenarios.empty()) throw UsageError("scenario list is empty (--scenarios)");

    auto facilities = selected_facilities(s, filter);
    apply_capacity_sites(s, facilities);
    const auto store = scarf::load_snapshot(s.require("snapshot"));
    const auto resolver = make_resolver(s);
    const auto opts = facility_options(s);

    std::vector<scarf::SweepResult> results;
    int failures = 0;
    for (const auto& f : facilities) {
        try {
            results.push_back(scarf::sensitivity_sweep(f, resolver->resolve(f.location), store, grid, scenarios, opts));
        } catch (const scarf::Error& e) {
            if (e.kind() == scarf::ErrorKind::RemoteUnavailable) throw;
            std::cerr << "scarf: " << f.facility_id << ": " << e.what() << '\n';
            ++failures;
        }
    }
    std::ostringstream out;
    scarf::write_sweep_csv(out, results);
    emit(s, out.str());
    return failures == 0 ? kExitOk : kExitPartial;
}

int cmd_case_study(const Settings& s, const std::string& name) {
    if (!scarf::is_case_study(name)) throw UsageError("unknown case study '" + name + "' (llm, datacenter, fab)");
    const auto fixtures = s.get_or("fixtures", "data/case_studies");
    const auto out = s.get_or("out", "out/" + name);
    const auto result = scarf::run_case_study(name, fixtures, out);
    for (const auto& w : result.warnings) std::cerr << "scarf: warning: " << w << '\n';
    for (const auto& f : result.files) std::cout << f.string() << '\n';
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stress-weighted water impact of computing facilities and workloads"};
    app.require_subcommand(1);
    Settings settings;
    app.add_option("--config", settings.config_path, "Key-value config file (also SCARF_CONFIG)");

    const auto opt = [&](CLI::App* cmd, const std::string& key, const std::string& help) {
        std::string flag = "--" + key;
        for (auto& c : flag) if (c == '_') c = '-';
        auto& slot = settings.flags[key];
        cmd->add_option_function<std::string>(flag, [&slot](const std::string& v) { slot = v; }, help);
    };

    auto* resolve = app.add_subcommand("resolve", "Map a place name or coordinates to a basin id");
    opt(resolve, "name", "Place name");
    opt(resolve, "admin_region", "Administrative region qualifying the name");
    opt(resolve, "lat", "Latitude in degrees");
    opt(resolve, "lon", "Longitude in degrees");
    opt(resolve, "gazetteer", "Gazetteer snapshot CSV");
    opt(resolve, "remote", "Use the remote geocoding service (on/off)");
    opt(resolve, "remote_url", "Remote service base URL");
    opt(resolve, "api_key", "Remote service API key");
    opt(resolve, "timeout_s", "Remote timeout in seconds (default 10)");

    auto* wsf = app.add_subcommand("wsf", "Print the water stress factor of a basin");
    opt(wsf, "snapshot", "Stress snapshot CSV");
    opt(wsf, "basin", "Basin id");
    opt(wsf, "horizon", "short | monthly=M | long (default long)");
    opt(wsf, "gamma", "Discount rate: 0.03, 3% or inf (default 0.03)");
    opt(wsf, "scenario", "business_as_usual | optimistic | pessimistic");

    std::vector<std::string> facility_filter;
    auto* awi = app.add_subcommand("awi", "Adjusted water impact report per facility");
    auto* sweep = app.add_subcommand("sweep", "AWI across a discount-rate grid and scenarios");
    for (auto* cmd : {awi, sweep}) {
        opt(cmd, "registry", "Facility registry CSV");
        opt(cmd, "snapshot", "Stress snapshot CSV");
        opt(cmd, "gazetteer", "Gazetteer snapshot CSV");
        opt(cmd, "capacity_sites", "Capacity site CSV for facilities without energy data");
        opt(cmd, "proxy_radius_miles", "Proxy capacity search radius (default 100)");
        opt(cmd, "utilization", "Average utilization of proxy capacity (default 0.7)");
        opt(cmd, "remote", "Use the remote geocoding service (on/off)");
        opt(cmd, "remote_url", "Remote service base URL");
        opt(cmd, "api_key", "Remote service API key");
        opt(cmd, "timeout_s", "Remote timeout in seconds (default 10)");
        opt(cmd, "out", "Output file (default stdout)");
        cmd->add_option("--facility", facility_filter, "Restrict to these facility ids");
    }
    opt(awi, "horizon", "short | monthly=M | long (default long)");
    opt(awi, "gamma", "Discount rate: 0.03, 3% or inf (default 0.03)");
    opt(awi, "scenario", "business_as_usual | optimistic | pessimistic");
    opt(awi, "format", "csv | json (default csv)");
    opt(sweep, "gammas", "Comma-separated discount rates, e.g. 0.014,3%,0.07");
    opt(sweep, "scenarios", "Comma-separated scenarios (default all three)");

    std::string study;
    auto* cs = app.add_subcommand("case-study", "Run a shipped case study: llm, datacenter or fab");
    cs->add_option("name", study, "Case study name")->required();
    opt(cs, "fixtures", "Fixture root directory (default data/case_studies)");
    opt(cs, "out", "Output directory (default out/<name>)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        settings.load_config();
        if (resolve->parsed()) return cmd_resolve(settings);
        if (wsf->parsed()) return cmd_wsf(settings);
        if (awi->parsed()) return cmd_awi(settings, facility_filter);
        if (sweep->parsed()) return cmd_sweep(settings, facility_filter);
        return cmd_case_study(settings, study);
    } catch (const UsageError& e) {
        std::cerr << "scarf: usage: " << e.what() << '\n';
        return kExitUsage;
    } catch (const scarf::AmbiguousLocation& e) {
        print_candidates(e);
        std::cerr << "scarf: " << e.what() << '\n';
        return kExitAmbiguous;
    } catch (const std::exception& e) {
        std::cerr << "scarf: " << e.what() << '\n';
        return kExitData;
    }
}
