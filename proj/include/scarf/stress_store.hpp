#pragma once

// Per-basin water stress: annual baseline, optional monthly baseline, and
// future projections per scenario for the 2030/2050/2080 epochs.

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scarf/csv.hpp"
#include "scarf/error.hpp"
#include "scarf/spatial.hpp"

namespace scarf {

enum class Scenario { business_as_usual, optimistic, pessimistic };

inline constexpr std::array<Scenario, 3> kAllScenarios{Scenario::business_as_usual, Scenario::optimistic,
                                                       Scenario::pessimistic};

enum class Epoch { baseline, y2030, y2050, y2080 };

inline constexpr std::array<Epoch, 4> kAllEpochs{Epoch::baseline, Epoch::y2030, Epoch::y2050, Epoch::y2080};

inline constexpr std::string_view to_string(Scenario s) {
    switch (s) {
    case Scenario::business_as_usual: return "business_as_usual";
    case Scenario::optimistic: return "optimistic";
    case Scenario::pessimistic: return "pessimistic";
    }
    return "?";
}

/// Column prefix used in the snapshot header.
inline constexpr std::string_view column_prefix(Scenario s) {
    switch (s) {
    case Scenario::business_as_usual: return "bau";
    case Scenario::optimistic: return "opt";
    case Scenario::pessimistic: return "pes";
    }
    return "?";
}

/// Accepts the full name or the short column prefix.
inline Scenario parse_scenario(std::string_view s) {
    for (auto sc : kAllScenarios) {
        if (s == to_string(sc) || s == column_prefix(sc)) {
            return sc;
        }
    }
    throw Error(ErrorKind::InvariantViolation, "unknown scenario '" + std::string(s) + "'");
}

inline constexpr std::string_view to_string(Epoch e) {
    switch (e) {
    case Epoch::baseline: return "baseline";
    case Epoch::y2030: return "2030";
    case Epoch::y2050: return "2050";
    case Epoch::y2080: return "2080";
    }
    return "?";
}

/// Index into the per-scenario projection triple; baseline has none.
inline constexpr std::size_t future_index(Epoch e) { return static_cast<std::size_t>(e) - 1; }

enum class StressLevel { low, medium, high };

inline constexpr std::string_view to_string(StressLevel l) {
    switch (l) {
    case StressLevel::low: return "low";
    case StressLevel::medium: return "medium";
    case StressLevel::high: return "high";
    }
    return "?";
}

inline constexpr double kLowStressBound = 0.1;
inline constexpr double kHighStressBound = 0.4;

/// low < 0.1 <= medium <= 0.4 < high
[[nodiscard]] inline constexpr StressLevel classify(double stress) {
    if (stress < kLowStressBound) {
        return StressLevel::low;
    }
    if (stress <= kHighStressBound) {
        return StressLevel::medium;
    }
    return StressLevel::high;
}

struct BasinStressSeries {
    BasinId basin;
    double annual_baseline{0.0};
    std::optional<std::array<double, 12>> monthly_baseline;
    std::map<Scenario, std::array<double, 3>> projections; // 2030, 2050, 2080

    [[nodiscard]] double max_value() const {
        double m = annual_baseline;
        if (monthly_baseline) {
            for (double v : *monthly_baseline) m = std::max(m, v);
        }
        for (const auto& [_, p] : projections) {
            for (double v : p) m = std::max(m, v);
        }
        return m;
    }

    friend bool operator==(const BasinStressSeries&, const BasinStressSeries&) = default;
};

struct MonthlyStress {
    double value{0.0};
    bool fallback{false}; // annual baseline stood in for missing monthly data
};

inline constexpr double kExtremeStress = 1.0;

class StressStore {
  public:
    StressStore() = default;

    /// Validates every series; duplicate basin ids are rejected.
    explicit StressStore(std::vector<BasinStressSeries> series) {
        for (auto& s : series) {
            validate(s);
            const auto id = s.basin.id;
            if (!series_.emplace(id, std::move(s)).second) {
                throw Error(ErrorKind::DuplicateBasin, "basin " + std::to_string(id) + " appears more than once");
            }
        }
    }

    [[nodiscard]] std::size_t size() const noexcept { return series_.size(); }
    [[nodiscard]] bool contains(BasinId b) const { return series_.contains(b.id); }

    /// Lookup is by basin code; the classification level is not part of the key.
    [[nodiscard]] const BasinStressSeries& series(BasinId b) const {
        const auto it = series_.find(b.id);
        if (it == series_.end()) {
            throw Error(ErrorKind::UnknownBasin, "basin " + std::to_string(b.id) + " not in stress snapshot");
        }
        return it->second;
    }

    /// Baseline ignores `scenario`.
    [[nodiscard]] double stress_at(BasinId b, Epoch epoch, Scenario scenario) const {
        const auto& s = series(b);
        if (epoch == Epoch::baseline) {
            return s.annual_baseline;
        }
        const auto it = s.projections.find(scenario);
        if (it == s.projections.end()) {
            throw Error(ErrorKind::MissingProjection, "basin " + std::to_string(b.id) + " has no " +
                                                          std::string(to_string(scenario)) + " projection for " +
                                                          std::string(to_string(epoch)));
        }
        return it->second[future_index(epoch)];
    }

    [[nodiscard]] MonthlyStress monthly_stress(BasinId b, int month) const {
        const auto& s = series(b);
        if (month < 1 || month > 12) {
            throw Error(ErrorKind::MonthOutOfRange, "month must be 1..12, got " + std::to_string(month));
        }
        if (!s.monthly_baseline) {
            return {s.annual_baseline, true};
        }
        return {(*s.monthly_baseline)[static_cast<std::size_t>(month - 1)], false};
    }

    /// Basins with any value above 1.0 (demand exceeding renewable supply).
    /// Such values are kept as-is; callers decide how to surface them.
    [[nodiscard]] std::vector<BasinId> extreme_basins() const {
        std::vector<BasinId> out;
        for (const auto& [_, s] : series_) {
            if (s.max_value() > kExtremeStress) out.push_back(s.basin);
        }
        return out;
    }

    [[nodiscard]] const std::map<long long, BasinStressSeries>& all() const noexcept { return series_; }

    friend bool operator==(const StressStore&, const StressStore&) = default;

    static void validate(const BasinStressSeries& s) {
        const auto bad = [&](const std::string& why) {
            throw Error(ErrorKind::InvariantViolation, "basin " + std::to_string(s.basin.id) + ": " + why);
        };
        const auto check = [&](double v) {
            if (!std::isfinite(v) || v < 0.0) bad("stress values must be finite and >= 0");
        };
        if (s.basin.id <= 0) bad("basin id must be > 0");
        check(s.annual_baseline);
        if (s.monthly_baseline) {
            for (double v : *s.monthly_baseline) check(v);
        }
        for (const auto& [_, p] : s.projections) {
            for (double v : p) check(v);
        }
    }

  private:
    std::map<long long, BasinStressSeries> series_;
};

namespace detail {
inline std::string month_column(int m) {
    char buf[4];
    std::snprintf(buf, sizeof buf, "m%02d", m);
    return buf;
}

inline std::string projection_column(Scenario s, Epoch e) {
    return std::string(column_prefix(s)) + "_" + std::string(to_string(e));
}

inline std::vector<std::string> snapshot_columns() {
    std::vector<std::string> cols{"basin_id", "annual_baseline"};
    for (int m = 1; m <= 12; ++m) cols.push_back(month_column(m));
    for (auto s : kAllScenarios) {
        for (auto e : {Epoch::y2030, Epoch::y2050, Epoch::y2080}) cols.push_back(projection_column(s, e));
    }
    return cols;
}

inline StressStore parse_snapshot(const csv::Table& t) {
    const auto cols = detail::snapshot_columns();
    for (const auto& c : cols) {
        if (!t.column(c)) throw ParseError(1, "missing column '" + c + "'");
    }
    csv::require_known_columns(t, std::set<std::string, std::less<>>(cols.begin(), cols.end()));

    std::vector<BasinStressSeries> series;
    std::map<long long, std::size_t> first_line;
    for (const auto& r : t.rows) {
        BasinStressSeries s;
        const auto id = csv::parse_int(csv::cell(t, r, "basin_id"), r.line, "basin_id");
        s.basin = BasinId{id, 0};
        if (!first_line.emplace(id, r.line).second) {
            throw Error(ErrorKind::DuplicateBasin, "basin " + std::to_string(id) + " on line " +
                                                       std::to_string(r.line) + " already defined on line " +
                                                       std::to_string(first_line[id]));
        }
        const auto annual = csv::optional_double(t, r, "annual_baseline");
        if (!annual) throw ParseError(r.line, "annual_baseline is required");
        s.annual_baseline = *annual;

        std::array<double, 12> months{};
        int present = 0;
        for (int m = 1; m <= 12; ++m) {
            if (auto v = csv::optional_double(t, r, detail::month_column(m))) {
                months[static_cast<std::size_t>(m - 1)] = *v;
                ++present;
            }
        }
        if (present == 12) {
            s.monthly_baseline = months;
        } else if (present != 0) {
            throw Error(ErrorKind::InvariantViolation, "line " + std::to_string(r.line) + ": basin " +
                                                           std::to_string(id) + " has " + std::to_string(present) +
                                                           " monthly values, expected 0 or 12");
        }
        for (auto sc : kAllScenarios) {
            std::array<double, 3> p{};
            int have = 0;
            for (auto e : {Epoch::y2030, Epoch::y2050, Epoch::y2080}) {
                if (auto v = csv::optional_double(t, r, detail::projection_column(sc, e))) {
                    p[future_index(e)] = *v;
                    ++have;
                }
            }
            if (have == 3) {
                s.projections.emplace(sc, p);
            } else if (have != 0) {
                throw Error(ErrorKind::InvariantViolation, "line " + std::to_string(r.line) + ": basin " +
                                                               std::to_string(id) + " has a partial " +
                                                               std::string(to_string(sc)) + " projection");
            }
        }
        if (id <= 0) throw ParseError(r.line, "basin_id must be > 0");
        try {
            StressStore::validate(s);
        } catch (const Error& e) {
            throw Error(e.kind(), "line " + std::to_string(r.line) + ": " + e.message());
        }
        series.push_back(std::move(s));
    }
    return StressStore(std::move(series));
}

} // namespace detail

/// Snapshot CSV header:
/// `basin_id,annual_baseline,m01..m12,bau_2030,bau_2050,bau_2080,opt_*,pes_*`.
/// Empty cells mean absent. Monthly values are all-or-none, as are the three
/// epochs of a scenario. Extra columns must carry the `x_` prefix.
inline StressStore load_snapshot(const std::filesystem::path& path) {
    return csv::with_source(path, [&] { return detail::parse_snapshot(csv::read(path)); });
}

} // namespace scarf
