#include <algorithm>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "scarf/consumption.hpp"
#include "scarf/ingest.hpp"

using namespace scarf;

TEST(OnSiteWater, ZeroEnergyGivesZero) {
    EXPECT_EQ(on_site_water(EnergyQuantity(0.0), EfficiencyCoefficients(0.55, 1.0, 1.2)).liters(), 0.0);
}

TEST(OnSiteWater, IdentityCoefficient) {
    EXPECT_EQ(on_site_water(EnergyQuantity(1.0), EfficiencyCoefficients(1.0, 0.0, 1.0)).liters(), 1.0);
}

TEST(OnSiteWater, PowerTimesRuntime) {
    // 0.7 kW for 0.01 h at 0.55 L/kWh
    const auto e = EnergyQuantity::from_power(0.7, 0.01);
    EXPECT_NEAR(e.kwh(), 0.007, 1e-15);
    EXPECT_NEAR(on_site_water(e, EfficiencyCoefficients(0.55, 0.0, 1.0)).liters(), 0.00385, 1e-15);
}

TEST(OffSiteWater, ZeroAndIdentity) {
    EXPECT_EQ(off_site_water(EnergyQuantity(0.0), EfficiencyCoefficients(0.0, 3.0, 1.5)).liters(), 0.0);
    EXPECT_EQ(off_site_water(EnergyQuantity(1.0), EfficiencyCoefficients(0.0, 1.0, 1.0)).liters(), 1.0);
}

TEST(OffSiteWater, AppliesPue) {
    // 2 kWh x 1.2 x 3.142
    EXPECT_NEAR(off_site_water(EnergyQuantity(2.0), EfficiencyCoefficients(0.0, 3.142, 1.2)).liters(), 7.5408, 1e-12);
}

TEST(TotalRawWater, Pair) {
    const auto r = total_raw_water(EnergyQuantity(1.0), EfficiencyCoefficients(0.5, 2.0, 1.5));
    EXPECT_DOUBLE_EQ(r.on_site.liters(), 0.5);
    EXPECT_DOUBLE_EQ(r.off_site.liters(), 3.0);
    EXPECT_DOUBLE_EQ(r.total_liters(), 3.5);

    const auto z = total_raw_water(EnergyQuantity(0.0), EfficiencyCoefficients(0.5, 2.0, 1.5));
    EXPECT_EQ(z.total_liters(), 0.0);
    const auto zc = total_raw_water(EnergyQuantity(10.0), EfficiencyCoefficients(0.0, 0.0, 1.3));
    EXPECT_EQ(zc.on_site.liters(), 0.0);
    EXPECT_EQ(zc.off_site.liters(), 0.0);
}

TEST(DomainTypes, RejectInvalidValues) {
    EXPECT_THROW(EnergyQuantity(-1.0), Error);
    EXPECT_THROW(WaterVolume(-0.5), Error);
    EXPECT_THROW(EfficiencyCoefficients(0.5, 1.0, 0.99), Error);
    EXPECT_THROW(EfficiencyCoefficients(-0.1, 1.0, 1.1), Error);
    EXPECT_THROW(EfficiencyCoefficients(0.1, -1.0, 1.1), Error);
    try {
        EfficiencyCoefficients(0.5, 1.0, 0.9);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvariantViolation);
    }
}

TEST(ConsumptionProperties, LinearMonotoneAndOffSiteDominates) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (int i = 0; i < 500; ++i) {
        const double e = u(rng);
        const double a = u(rng);
        const EfficiencyCoefficients eff(u(rng), u(rng), 1.0 + u(rng));
        const double base = on_site_water(EnergyQuantity(e), eff).liters();
        const double scaled = on_site_water(EnergyQuantity(a * e), eff).liters();
        EXPECT_NEAR(scaled, a * base, 1e-12 * std::max(1.0, std::abs(a * base)));

        const double e2 = e + u(rng);
        EXPECT_LE(total_raw_water(EnergyQuantity(e), eff).total_liters(),
                  total_raw_water(EnergyQuantity(e2), eff).total_liters());
        const EfficiencyCoefficients bigger(eff.wue_on() + 0.1, eff.wue_off() + 0.1, eff.pue() + 0.1);
        EXPECT_LE(total_raw_water(EnergyQuantity(e), eff).total_liters(),
                  total_raw_water(EnergyQuantity(e), bigger).total_liters());

        if (e > 0.0) {
            const double w = 0.1 + u(rng);
            const EfficiencyCoefficients same(w, w, 1.0 + 0.01 + u(rng));
            EXPECT_GT(off_site_water(EnergyQuantity(e), same).liters(), on_site_water(EnergyQuantity(e), same).liters());
        }
    }
}

namespace {
// Due north of (40, -100): 50 mi and 120 mi (tests/oracles/haversine_oracle.py).
std::vector<CapacitySite> two_sites() {
    return {{"north-50", {40.7236508476, -100.0}, 30000.0}, {"north-120", {41.7367620343, -100.0}, 90000.0}};
}
} // namespace

TEST(Haversine, MatchesOracleDistances) {
    const GeoPoint target{40.0, -100.0};
    EXPECT_NEAR(haversine_miles(target, {40.72, -100.0}), 49.7477479881, 1e-6);
    EXPECT_NEAR(haversine_miles(target, {41.74, -100.0}), 120.223724305, 1e-6);
    EXPECT_NEAR(haversine_miles(target, {40.0, -101.88}), 99.5049520556, 1e-6);
    EXPECT_NEAR(haversine_miles(target, {38.53, -100.0}), 101.568318809, 1e-6);
    EXPECT_EQ(haversine_miles(target, target), 0.0);
}

TEST(ProxyCapacity, PicksLargestWithinRadius) {
    const auto sites = two_sites();
    const auto est = proxy_capacity("T", {40.0, -100.0}, sites, 100.0);
    EXPECT_EQ(est.capacity_kw, 30000.0);
    EXPECT_EQ(est.source_site_id, "north-50");
    EXPECT_EQ(est.site_id, "T");
    EXPECT_EQ(est.utilization, 0.7);
}

TEST(ProxyCapacity, ColocatedSite) {
    const std::vector<CapacitySite> sites{{"here", {10.0, 20.0}, 5000.0}};
    EXPECT_EQ(proxy_capacity("T", {10.0, 20.0}, sites, 100.0).capacity_kw, 5000.0);
}

TEST(ProxyCapacity, NoCandidateInRadius) {
    const std::vector<CapacitySite> sites{{"far", {41.7367620343, -100.0}, 1.0}};
    try {
        (void)proxy_capacity("T", {40.0, -100.0}, sites, 100.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NoCandidateInRadius);
    }
    EXPECT_THROW((void)proxy_capacity("T", {40.0, -100.0}, {}, 100.0), Error);
    EXPECT_THROW((void)proxy_capacity("T", {40.0, -100.0}, sites, 0.0), Error);
}

TEST(ProxyCapacity, PermutationInvariantWithIdTieBreak) {
    std::vector<CapacitySite> sites{{"c", {40.1, -100.0}, 500.0},
                                    {"b", {40.2, -100.0}, 700.0},
                                    {"a", {40.3, -100.0}, 700.0},
                                    {"d", {45.0, -100.0}, 900.0}};
    std::sort(sites.begin(), sites.end(), [](const auto& x, const auto& y) { return x.site_id < y.site_id; });
    do {
        const auto est = proxy_capacity("T", {40.0, -100.0}, sites, 100.0);
        EXPECT_EQ(est.source_site_id, "a");
        EXPECT_EQ(est.capacity_kw, 700.0);
    } while (std::next_permutation(sites.begin(), sites.end(),
                                   [](const auto& x, const auto& y) { return x.site_id < y.site_id; }));
}

TEST(ProxyCapacity, FacilityWithoutCoordinatesIsInsufficient) {
    FacilityRecord rec;
    rec.facility_id = "X";
    rec.location.name = "Somewhere";
    try {
        (void)proxy_capacity(rec, two_sites());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InsufficientData);
    }
}

TEST(AnnualEnergy, CapacityHeuristic) {
    const auto e = annual_energy({"T", 100000.0, 0.7, "S"}, 1.0);
    EXPECT_EQ(e.it.kwh(), 613200000.0);
    EXPECT_EQ(annual_energy({"T", 1.0, 1.0, "S"}, 1.0).it.kwh(), 8760.0);
    const auto withpue = annual_energy({"T", 1.0, 0.7, "S"}, 1.1);
    EXPECT_NEAR(withpue.it.kwh(), 6132.0, 1e-9);
    EXPECT_NEAR(withpue.total.kwh(), 6745.2, 1e-9);
}

TEST(AnnualEnergy, RejectsInvalidEstimate) {
    EXPECT_THROW((void)annual_energy({"T", 0.0, 0.7, "S"}, 1.1), Error);
    EXPECT_THROW((void)annual_energy({"T", 1.0, 0.0, "S"}, 1.1), Error);
    EXPECT_THROW((void)annual_energy({"T", 1.0, 1.5, "S"}, 1.1), Error);
    EXPECT_THROW((void)annual_energy({"T", 1.0, 0.7, "S"}, 0.5), Error);
}
