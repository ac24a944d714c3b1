#pragma once

// Facility location -> hydrological basin. The offline path looks names and
// coordinates up in a gazetteer snapshot; a remote geocoding client
// (remote_geocoder.hpp) implements the same BasinResolver interface.

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scarf/csv.hpp"
#include "scarf/error.hpp"
#include "scarf/geo.hpp"

namespace scarf {

/// Basin code from the global hydrographic classification, with the
/// classification level it belongs to.
struct BasinId {
    long long id{0};
    int level{0};

    friend auto operator<=>(const BasinId&, const BasinId&) = default;
};

inline BasinId make_basin(long long id, int level) {
    if (id <= 0) {
        throw Error(ErrorKind::InvariantViolation, "basin id must be > 0, got " + std::to_string(id));
    }
    return {id, level};
}

struct FacilityLocation {
    std::string name;
    std::optional<std::string> admin_region;
    std::optional<double> lat;
    std::optional<double> lon;

    [[nodiscard]] bool has_coordinates() const { return lat.has_value() && lon.has_value(); }

    void validate() const {
        if (lat.has_value() != lon.has_value()) {
            throw Error(ErrorKind::InvariantViolation, "lat and lon must be given together");
        }
        if (name.empty() && !has_coordinates()) {
            throw Error(ErrorKind::InvariantViolation, "location needs a name or coordinates");
        }
        if (has_coordinates()) {
            require_valid(GeoPoint{*lat, *lon});
        }
    }

    friend bool operator==(const FacilityLocation&, const FacilityLocation&) = default;
};

/// Lowercases ASCII, strips punctuation other than '-', trims and collapses
/// whitespace. Non-ASCII bytes pass through unchanged.
[[nodiscard]] inline std::string normalize_place_name(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    bool pending_space = false;
    for (char ch : raw) {
        const auto c = static_cast<unsigned char>(ch);
        if (c < 0x80 && std::isspace(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (c < 0x80 && std::ispunct(c) && c != '-') {
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : ch);
    }
    return out;
}

struct GazetteerEntry {
    std::string key;
    BasinId basin;
    GeoPoint location;
};

struct BasinCandidate {
    BasinId basin;
    std::string key;
};

class AmbiguousLocation : public Error {
  public:
    AmbiguousLocation(const std::string& query, std::vector<BasinCandidate> candidates)
        : Error(ErrorKind::AmbiguousLocation, describe(query, candidates)), candidates_(std::move(candidates)) {}

    [[nodiscard]] const std::vector<BasinCandidate>& candidates() const noexcept { return candidates_; }

  private:
    static std::string describe(const std::string& query, const std::vector<BasinCandidate>& c) {
        std::string s = "'" + query + "' matches " + std::to_string(c.size()) + " basins:";
        for (const auto& x : c) {
            s += " " + std::to_string(x.basin.id);
        }
        return s;
    }

    std::vector<BasinCandidate> candidates_;
};

inline constexpr double kCoordinateMatchRadiusMiles = 25.0;

class BasinResolver {
  public:
    virtual ~BasinResolver() = default;
    [[nodiscard]] virtual BasinId resolve(const FacilityLocation& loc) const = 0;
};

class Gazetteer : public BasinResolver {
  public:
    Gazetteer() = default;

    explicit Gazetteer(std::vector<GazetteerEntry> entries) : entries_(std::move(entries)) {
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            auto& e = entries_[i];
            e.key = normalize_place_name(e.key);
            if (e.key.empty()) {
                throw Error(ErrorKind::InvariantViolation, "gazetteer entry with empty key");
            }
            make_basin(e.basin.id, e.basin.level);
            require_valid(e.location);
            by_key_.emplace(e.key, i);
        }
    }

    [[nodiscard]] const std::vector<GazetteerEntry>& entries() const noexcept { return entries_; }
    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }

    /// Name first (qualified by admin region when that key exists), then
    /// coordinates when the name is absent or unknown. Never guesses between
    /// distinct basins.
    [[nodiscard]] BasinId resolve(const FacilityLocation& loc) const override {
        loc.validate();
        if (!loc.name.empty()) {
            if (loc.admin_region) {
                const auto qualified = normalize_place_name(loc.name + " " + *loc.admin_region);
                if (by_key_.contains(qualified)) {
                    return by_name(qualified);
                }
            }
            const auto key = normalize_place_name(loc.name);
            if (by_key_.contains(key) || !loc.has_coordinates()) {
                return by_name(key);
            }
        }
        return by_coordinates(GeoPoint{*loc.lat, *loc.lon});
    }

    [[nodiscard]] BasinId by_name(const std::string& key) const {
        const auto [lo, hi] = by_key_.equal_range(key);
        std::vector<BasinCandidate> found;
        for (auto it = lo; it != hi; ++it) {
            const auto& e = entries_[it->second];
            if (std::none_of(found.begin(), found.end(), [&](const auto& c) { return c.basin == e.basin; })) {
                found.push_back({e.basin, e.key});
            }
        }
        if (found.empty()) {
            throw Error(ErrorKind::NotFound, "no gazetteer entry for '" + key + "'");
        }
        if (found.size() > 1) {
            std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.basin < b.basin; });
            throw AmbiguousLocation(key, std::move(found));
        }
        return found.front().basin;
    }

    [[nodiscard]] BasinId by_coordinates(const GeoPoint& p) const {
        require_valid(p);
        double best = kCoordinateMatchRadiusMiles;
        std::vector<BasinCandidate> nearest;
        for (const auto& e : entries_) {
            const double d = haversine_miles(p, e.location);
            if (d > kCoordinateMatchRadiusMiles) {
                continue;
            }
            if (nearest.empty() || d < best) {
                best = d;
                nearest.assign(1, {e.basin, e.key});
            } else if (d == best &&
                       std::none_of(nearest.begin(), nearest.end(), [&](const auto& c) { return c.basin == e.basin; })) {
                nearest.push_back({e.basin, e.key});
            }
        }
        const auto where = std::to_string(p.lat) + "," + std::to_string(p.lon);
        if (nearest.empty()) {
            throw Error(ErrorKind::NotFound, "no gazetteer entry within 25 miles of " + where);
        }
        if (nearest.size() > 1) {
            std::sort(nearest.begin(), nearest.end(), [](const auto& a, const auto& b) { return a.basin < b.basin; });
            throw AmbiguousLocation(where, std::move(nearest));
        }
        return nearest.front().basin;
    }

  private:
    std::vector<GazetteerEntry> entries_;
    std::multimap<std::string, std::size_t> by_key_;
};

/// Snapshot CSV: `key,basin_id,basin_level,lat,lon`.
inline Gazetteer load_gazetteer(const std::filesystem::path& path) {
    const auto t = csv::read(path);
    csv::require_columns(t, {"key", "basin_id", "basin_level", "lat", "lon"});
    csv::require_known_columns(t, {"key", "basin_id", "basin_level", "lat", "lon"});
    std::vector<GazetteerEntry> entries;
    entries.reserve(t.rows.size());
    for (const auto& r : t.rows) {
        GazetteerEntry e;
        e.key = csv::cell(t, r, "key");
        e.basin.id = csv::parse_int(csv::cell(t, r, "basin_id"), r.line, "basin_id");
        e.basin.level = static_cast<int>(csv::parse_int(csv::cell(t, r, "basin_level"), r.line, "basin_level"));
        e.location.lat = csv::parse_double(csv::cell(t, r, "lat"), r.line, "lat");
        e.location.lon = csv::parse_double(csv::cell(t, r, "lon"), r.line, "lon");
        if (e.basin.id <= 0) {
            throw ParseError(r.line, "basin_id must be > 0");
        }
        if (!valid_lat(e.location.lat) || !valid_lon(e.location.lon)) {
            throw ParseError(r.line, "coordinates out of range");
        }
        if (normalize_place_name(e.key).empty()) {
            throw ParseError(r.line, "empty key");
        }
        entries.push_back(std::move(e));
    }
    return Gazetteer(std::move(entries));
}

} // namespace scarf
