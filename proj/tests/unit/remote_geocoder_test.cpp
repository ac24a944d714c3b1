#include <chrono>

#include <gtest/gtest.h>

#include "fixture_server.hpp"
#include "scarf/remote_geocoder.hpp"

using namespace scarf;

namespace {
const std::string kRemote = std::string(SCARF_TEST_FIXTURES) + "/remote";

FacilityLocation named(std::string name, std::optional<std::string> admin = std::nullopt) {
    FacilityLocation loc;
    loc.name = std::move(name);
    loc.admin_region = std::move(admin);
    return loc;
}

RemoteGeocoder client(const std::string& url, std::string key = {}) {
    RemoteConfig c;
    c.base_url = url;
    c.api_key = std::move(key);
    c.timeout = std::chrono::seconds(2);
    return RemoteGeocoder(c);
}

ErrorKind kind_of(const RemoteGeocoder& g, const FacilityLocation& loc) {
    try {
        (void)g.resolve(loc);
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "resolved without error";
    return ErrorKind::IoError;
}
} // namespace

TEST(RemoteGeocoder, ResolvesNames) {
    test_support::FixtureServer server(kRemote);
    const auto g = client(server.url());
    EXPECT_EQ(g.resolve(named("Quincy", "Washington")).id, 7060000101);
    EXPECT_EQ(g.resolve(named("West Lafayette, IN")).id, 7060000202);
    EXPECT_EQ(g.resolve(named("Phoenix", "Arizona")).level, 6);
}

TEST(RemoteGeocoder, ResolvesCoordinates) {
    test_support::FixtureServer server(kRemote);
    FacilityLocation loc;
    loc.lat = 47.2343;
    loc.lon = -119.8526;
    EXPECT_EQ(client(server.url()).resolve(loc).id, 7060000101);
}

TEST(RemoteGeocoder, AmbiguousCandidatesAreSorted) {
    test_support::FixtureServer server(kRemote);
    try {
        (void)client(server.url()).resolve(named("Springfield"));
        FAIL();
    } catch (const AmbiguousLocation& e) {
        ASSERT_EQ(e.candidates().size(), 2u);
        EXPECT_EQ(e.candidates()[0].basin.id, 7060000303);
        EXPECT_EQ(e.candidates()[1].basin.id, 7060000404);
    }
}

TEST(RemoteGeocoder, NotFound) {
    test_support::FixtureServer server(kRemote);
    EXPECT_EQ(kind_of(client(server.url()), named("Nowhere")), ErrorKind::NotFound);
}

TEST(RemoteGeocoder, ApiKeyIsSent) {
    test_support::FixtureServer server(kRemote, "secret");
    EXPECT_EQ(client(server.url(), "secret").resolve(named("Quincy", "Washington")).id, 7060000101);
    EXPECT_EQ(kind_of(client(server.url(), "wrong"), named("Quincy", "Washington")), ErrorKind::RemoteUnavailable);
}

TEST(RemoteGeocoder, FailuresAreRemoteUnavailable) {
    test_support::FixtureServer server(kRemote);
    EXPECT_EQ(kind_of(client(server.url("/broken")), named("x")), ErrorKind::RemoteUnavailable);
    EXPECT_EQ(kind_of(client(server.url("/down")), named("x")), ErrorKind::RemoteUnavailable);
    // Nothing listens on port 1.
    EXPECT_EQ(kind_of(client("http://127.0.0.1:1"), named("x")), ErrorKind::RemoteUnavailable);
}

TEST(RemoteGeocoder, RetriesServerErrors) {
    test_support::FixtureServer server(kRemote);
    RemoteConfig c;
    c.base_url = server.url("/down");
    c.retries = 2;
    c.timeout = std::chrono::seconds(2);
    EXPECT_EQ(kind_of(RemoteGeocoder(c), named("x")), ErrorKind::RemoteUnavailable);
    EXPECT_EQ(server.requests(), 3);
}

TEST(RemoteGeocoder, ConfigValidation) {
    RemoteConfig c;
    EXPECT_THROW(RemoteGeocoder{c}, Error);
    c.base_url = "localhost:8080";
    EXPECT_THROW(RemoteGeocoder{c}, Error);
}

TEST(RemoteGeocoder, ParseResponse) {
    EXPECT_EQ(RemoteGeocoder::parse_response(R"({"basin_id": 5, "basin_level": 4})", "q").id, 5);
    EXPECT_EQ(RemoteGeocoder::parse_response(R"({"candidates": [{"basin_id": 5, "basin_level": 4}]})", "q").id, 5);
    EXPECT_THROW((void)RemoteGeocoder::parse_response(R"({"candidates": []})", "q"), Error);
    EXPECT_THROW((void)RemoteGeocoder::parse_response(R"({"basin_id": "5"})", "q"), Error);
    EXPECT_THROW((void)RemoteGeocoder::parse_response(R"([1,2])", "q"), Error);
}
