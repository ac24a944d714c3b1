#pragma once

// HTTP client for a remote basin geocoding service.
//
//   GET <base>/basin?name=<place>[&admin_region=<region>]
//   GET <base>/basin?lat=<deg>&lon=<deg>
//   X-Api-Key: <key>            (only when configured)
//
// 200 {"basin_id": 123, "basin_level": 6}          -> that basin
// 200 {"candidates": [{"basin_id":..,"basin_level":..,"key":..}, ...]}
//                                                  -> AmbiguousLocation when >1
// 404                                              -> NotFound
// anything else, transport failure, bad JSON       -> RemoteUnavailable
//
// There is no fallback to the gazetteer and no retry unless configured.

#include <algorithm>
#include <chrono>
#include <string>
#include <utility>

#include <httplib.h>
#include <json.hpp>

#include "scarf/format.hpp"
#include "scarf/spatial.hpp"

namespace scarf {

struct RemoteConfig {
    std::string base_url;
    std::string api_key;
    std::chrono::milliseconds timeout{std::chrono::seconds(10)};
    int retries{0};
};

class RemoteGeocoder : public BasinResolver {
  public:
    explicit RemoteGeocoder(RemoteConfig config) : config_(std::move(config)) {
        if (config_.base_url.empty()) {
            throw Error(ErrorKind::RemoteUnavailable, "no base URL configured");
        }
        split_url(config_.base_url, origin_, prefix_);
    }

    [[nodiscard]] const RemoteConfig& config() const noexcept { return config_; }

    [[nodiscard]] BasinId resolve(const FacilityLocation& loc) const override {
        loc.validate();
        httplib::Params params;
        if (!loc.name.empty()) {
            params.emplace("name", loc.name);
            if (loc.admin_region) {
                params.emplace("admin_region", *loc.admin_region);
            }
        } else {
            params.emplace("lat", format_number(*loc.lat));
            params.emplace("lon", format_number(*loc.lon));
        }
        const auto path = httplib::append_query_params(prefix_ + "/basin", params);
        const std::string query = loc.name.empty() ? path : loc.name;

        httplib::Result res;
        for (int attempt = 0; attempt <= config_.retries; ++attempt) {
            httplib::Client client(origin_);
            const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
            const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - secs);
            client.set_connection_timeout(secs.count(), usecs.count());
            client.set_read_timeout(secs.count(), usecs.count());
            httplib::Headers headers;
            if (!config_.api_key.empty()) {
                headers.emplace("X-Api-Key", config_.api_key);
            }
            res = client.Get(path, headers);
            if (res && res->status < 500) {
                break;
            }
        }
        if (!res) {
            throw Error(ErrorKind::RemoteUnavailable, "request to " + origin_ + " failed: " + httplib::to_string(res.error()));
        }
        if (res->status == 404) {
            throw Error(ErrorKind::NotFound, "remote service has no basin for '" + query + "'");
        }
        if (res->status != 200) {
            throw Error(ErrorKind::RemoteUnavailable, "remote service returned HTTP " + std::to_string(res->status));
        }
        return parse_response(res->body, query);
    }

    static BasinId parse_response(const std::string& body, const std::string& query) {
        const auto doc = nlohmann::json::parse(body, nullptr, false);
        if (doc.is_discarded() || !doc.is_object()) {
            throw Error(ErrorKind::RemoteUnavailable, "malformed JSON response");
        }
        const auto read_basin = [](const nlohmann::json& j) {
            if (!j.contains("basin_id") || !j["basin_id"].is_number_integer() || !j.contains("basin_level") ||
                !j["basin_level"].is_number_integer()) {
                throw Error(ErrorKind::RemoteUnavailable, "response lacks integer basin_id/basin_level");
            }
            const auto id = j["basin_id"].get<long long>();
            if (id <= 0) {
                throw Error(ErrorKind::RemoteUnavailable, "response basin_id must be > 0");
            }
            return BasinId{id, j["basin_level"].get<int>()};
        };
        if (doc.contains("candidates")) {
            const auto& arr = doc["candidates"];
            if (!arr.is_array()) {
                throw Error(ErrorKind::RemoteUnavailable, "candidates must be an array");
            }
            std::vector<BasinCandidate> cands;
            for (const auto& c : arr) {
                const auto b = read_basin(c);
                if (std::none_of(cands.begin(), cands.end(), [&](const auto& x) { return x.basin == b; })) {
                    cands.push_back({b, c.value("key", std::string{})});
                }
            }
            if (cands.empty()) {
                throw Error(ErrorKind::NotFound, "remote service has no basin for '" + query + "'");
            }
            if (cands.size() > 1) {
                std::sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) { return a.basin < b.basin; });
                throw AmbiguousLocation(query, std::move(cands));
            }
            return cands.front().basin;
        }
        return read_basin(doc);
    }

  private:
    static void split_url(const std::string& url, std::string& origin, std::string& prefix) {
        const auto scheme = url.find("://");
        if (scheme == std::string::npos) {
            throw Error(ErrorKind::RemoteUnavailable, "base URL needs a scheme: " + url);
        }
        const auto slash = url.find('/', scheme + 3);
        origin = url.substr(0, slash);
        prefix = slash == std::string::npos ? "" : url.substr(slash);
        while (!prefix.empty() && prefix.back() == '/') {
            prefix.pop_back();
        }
    }

    RemoteConfig config_;
    std::string origin_;
    std::string prefix_;
};

} // namespace scarf
