#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "scarf/awi.hpp"

using namespace scarf;

namespace {
constexpr BasinId kA{1, 6};
constexpr BasinId kB{2, 6};

WsfValue wsf_of(double v) { return WsfValue{v, ShortHorizon{}, kA, false}; }

// Basin A rises 0.2 -> 0.8 under bau; basin B is flat at 0.35.
StressStore crossing_store() {
    BasinStressSeries a;
    a.basin = kA;
    a.annual_baseline = 0.2;
    a.projections[Scenario::business_as_usual] = {0.4, 0.6, 0.8};
    a.projections[Scenario::optimistic] = {0.35, 0.5, 0.65};
    a.projections[Scenario::pessimistic] = {0.45, 0.7, 0.9};
    BasinStressSeries b;
    b.basin = kB;
    b.annual_baseline = 0.35;
    for (auto sc : kAllScenarios) b.projections[sc] = {0.35, 0.35, 0.35};
    return StressStore({a, b});
}

FacilityRecord modeled(const std::string& id, double kwh) {
    FacilityRecord r;
    r.facility_id = id;
    r.location.name = id;
    r.eff = EfficiencyCoefficients(1.0, 0.0, 1.0);
    r.annual_energy = EnergyQuantity(kwh);
    return r;
}
} // namespace

TEST(Awi, Formula) {
    EXPECT_DOUBLE_EQ(awi(WaterVolume(10.0), WaterVolume(5.0), wsf_of(0.2)).awi, 3.0);
    EXPECT_EQ(awi(WaterVolume(10.0), WaterVolume(5.0), wsf_of(0.0)).awi, 0.0);
    EXPECT_EQ(awi(WaterVolume(0.0), WaterVolume(0.0), wsf_of(0.9)).awi, 0.0);
    EXPECT_THROW((void)awi(WaterVolume(1.0), WaterVolume(1.0), wsf_of(-0.1)), Error);
    EXPECT_THROW((void)awi(WaterVolume(1.0), WaterVolume(1.0), wsf_of(NAN)), Error);
}

TEST(Awi, StressLevelAndFlags) {
    const auto hi = awi(WaterVolume(1.0), WaterVolume(0.0), wsf_of(1.3));
    EXPECT_EQ(hi.stress_level, StressLevel::high);
    EXPECT_TRUE(hi.has_flag(flag::kExtremeStress));
    auto fb = wsf_of(0.05);
    fb.monthly_fallback = true;
    const auto lo = awi(WaterVolume(1.0), WaterVolume(0.0), fb);
    EXPECT_EQ(lo.stress_level, StressLevel::low);
    EXPECT_TRUE(lo.has_flag(flag::kMonthlyFallback));
}

TEST(Awi, RatioBetweenFacilities) {
    // 100 L at 0.3 against 30 L at 0.5
    const auto a = awi(WaterVolume(100.0), WaterVolume(0.0), wsf_of(0.3));
    const auto b = awi(WaterVolume(30.0), WaterVolume(0.0), wsf_of(0.5));
    EXPECT_NEAR(a.awi / b.awi, 2.0, 1e-12);
}

TEST(Awi, Properties) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 100.0);
    std::uniform_real_distribution<double> s(0.0, 1.2);
    for (int k = 0; k < 500; ++k) {
        const double on = u(rng);
        const double off = u(rng);
        const double w = s(rng);
        const double x = u(rng);
        const auto base = awi(WaterVolume(on), WaterVolume(off), wsf_of(w)).awi;
        EXPECT_GE(base, 0.0);
        EXPECT_NEAR(awi(WaterVolume(x * on), WaterVolume(x * off), wsf_of(w)).awi, x * base,
                    1e-9 * std::max(1.0, x * base));
        EXPECT_LE(base, awi(WaterVolume(on), WaterVolume(off), wsf_of(w + 0.01)).awi);
    }
}

TEST(TraceEnergy, MeanPowerTimesDuration) {
    PowerTrace t{"w", {{0.0, 100.0}, {0.2, 200.0}, {0.4, 300.0}}, {}};
    EXPECT_NEAR(trace_energy(t).kwh(), 200.0 * 0.4 / 3.6e6, 1e-18);
}

TEST(TraceEnergy, SingleSampleIsZeroAndFlagged) {
    PowerTrace t{"w", {{1.0, 500.0}}, {}};
    EXPECT_EQ(trace_energy(t).kwh(), 0.0);
    const auto r = per_request_awi(t, EfficiencyCoefficients(1.0, 1.0, 1.1), wsf_of(0.5));
    EXPECT_EQ(r.awi, 0.0);
    EXPECT_TRUE(r.has_flag(flag::kDegenerateTrace));
}

TEST(TraceEnergy, EmptyTraceRejected) {
    PowerTrace t{"w", {}, {}};
    try {
        (void)trace_energy(t);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::EmptyTrace);
    }
}

TEST(PerRequestAwi, CombinesModelAndWsf) {
    PowerTrace t{"w", {{0.0, 3.6e6}, {1.0, 3.6e6}}, {}}; // exactly 1 kWh
    const auto r = per_request_awi(t, EfficiencyCoefficients(0.5, 2.0, 1.5), wsf_of(0.4));
    EXPECT_DOUBLE_EQ(r.w_on.liters(), 0.5);
    EXPECT_DOUBLE_EQ(r.w_off.liters(), 3.0);
    EXPECT_DOUBLE_EQ(r.awi, 3.5 * 0.4);
    EXPECT_EQ(r.facility_id, "w");
}

TEST(FacilityAnnualAwi, ReportedWaterWithoutEnergy) {
    FacilityRecord r;
    r.facility_id = "G";
    r.location.name = "x";
    r.annual_water = WaterVolume(1000.0);
    const auto store = crossing_store();
    const auto rep = facility_annual_awi(r, kB, store, ShortHorizon{});
    EXPECT_DOUBLE_EQ(rep.awi, 350.0);
    EXPECT_TRUE(rep.has_flag(flag::kOnSiteReported));
    EXPECT_TRUE(rep.has_flag(flag::kOffSiteUnavailable));
    EXPECT_EQ(rep.w_off.liters(), 0.0);
}

TEST(FacilityAnnualAwi, CapacityDerivedEnergy) {
    FacilityRecord r;
    r.facility_id = "G";
    r.location.name = "x";
    r.annual_water = WaterVolume(1000.0);
    r.capacity_kw = 100000.0;
    r.eff = EfficiencyCoefficients(0.0, 1.0, 1.0);
    const auto rep = facility_annual_awi(r, kB, crossing_store(), ShortHorizon{});
    ASSERT_TRUE(rep.energy_it.has_value());
    EXPECT_EQ(rep.energy_it->kwh(), 613200000.0);
    EXPECT_TRUE(rep.has_flag(flag::kEnergyFromCapacity));
    EXPECT_TRUE(rep.has_flag(flag::kOffSiteModeled));
    EXPECT_DOUBLE_EQ(rep.w_off.liters(), 613200000.0);
}

TEST(FacilityAnnualAwi, InsufficientData) {
    FacilityRecord r;
    r.facility_id = "G";
    r.location.name = "x";
    r.annual_energy = EnergyQuantity(5.0);
    try {
        (void)facility_annual_awi(r, kB, crossing_store(), ShortHorizon{});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InsufficientData);
    }
}

TEST(RankFacilities, DescendingWithIdTieBreak) {
    std::vector<AwiReport> v(3);
    v[0].facility_id = "b";
    v[0].awi = 1.0;
    v[1].facility_id = "a";
    v[1].awi = 1.0;
    v[2].facility_id = "c";
    v[2].awi = 2.0;
    const auto r = rank_facilities(v);
    EXPECT_EQ(r[0].facility_id, "c");
    EXPECT_EQ(r[1].facility_id, "a");
    EXPECT_EQ(r[2].facility_id, "b");
}

TEST(RankFacilities, InvariantUnderCommonScaling) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (int k = 0; k < 50; ++k) {
        std::vector<AwiReport> base;
        std::vector<AwiReport> scaled;
        const double factor = 0.1 + u(rng);
        for (int i = 0; i < 6; ++i) {
            const double on = u(rng);
            const double w = u(rng) / 10.0;
            auto a = awi(WaterVolume(on), WaterVolume(0.0), wsf_of(w));
            auto b = awi(WaterVolume(on * factor), WaterVolume(0.0), wsf_of(w));
            a.facility_id = b.facility_id = std::string(1, static_cast<char>('a' + i));
            base.push_back(a);
            scaled.push_back(b);
        }
        const auto ra = rank_facilities(base);
        const auto rb = rank_facilities(scaled);
        for (std::size_t i = 0; i < ra.size(); ++i) EXPECT_EQ(ra[i].facility_id, rb[i].facility_id);
    }
}

TEST(Sweep, RankingCrossesWithDiscountRate) {
    const auto store = crossing_store();
    const auto fa = modeled("A", 1000.0);
    const auto fb = modeled("B", 1000.0);
    const auto at = [&](double g, const FacilityRecord& f, BasinId b) {
        return facility_annual_awi(f, b, store, LongHorizon{DiscountRate(g), Scenario::business_as_usual}).awi;
    };
    EXPECT_GT(at(0.005, fa, kA), at(0.005, fb, kB));
    EXPECT_LT(at(0.10, fa, kA), at(0.10, fb, kB));
    EXPECT_NEAR(at(0.005, fa, kA) / 1000.0, 0.47523845016668834, 1e-12);
    EXPECT_NEAR(at(0.10, fa, kA) / 1000.0, 0.26597261425873843, 1e-12);
}

TEST(Sweep, MedianMinMaxAcrossScenarios) {
    const auto store = crossing_store();
    const std::vector<DiscountRate> grid{DiscountRate(0.10), DiscountRate(0.005), DiscountRate(0.10),
                                         DiscountRate::infinite()};
    const auto res = sensitivity_sweep(modeled("A", 1.0), kA, store, grid, kAllScenarios);
    ASSERT_EQ(res.points.size(), 3u);
    EXPECT_EQ(res.points[0].gamma, DiscountRate(0.005));
    EXPECT_TRUE(res.points[2].gamma.is_infinite());
    const auto& p = res.points[0];
    EXPECT_NEAR(p.median, 0.47523845016668834, 1e-12);
    EXPECT_NEAR(p.min, 0.40642883762501625, 1e-12);
    EXPECT_NEAR(p.max, 0.53363187410382979, 1e-12);
    for (const auto& pt : res.points) {
        EXPECT_LE(pt.min, pt.median);
        EXPECT_LE(pt.median, pt.max);
    }
    EXPECT_EQ(res.points[2].min, res.points[2].max);
}

TEST(Sweep, RejectsEmptyInputs) {
    const auto store = crossing_store();
    EXPECT_THROW((void)sensitivity_sweep(modeled("A", 1.0), kA, store, {}, kAllScenarios), Error);
    const std::vector<DiscountRate> grid{DiscountRate(0.03)};
    EXPECT_THROW((void)sensitivity_sweep(modeled("A", 1.0), kA, store, grid, {}), Error);
}

TEST(MedianOf, EvenAndOdd) {
    EXPECT_EQ(median_of({3.0, 1.0, 2.0}), 2.0);
    EXPECT_EQ(median_of({4.0, 1.0}), 2.5);
    EXPECT_THROW((void)median_of({}), Error);
}
