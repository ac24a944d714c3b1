#pragma once

// Raw water consumption: on-site (cooling, humidification) and off-site
// (electricity generation) volumes from IT energy and facility efficiency
// coefficients, plus the capacity-based annual energy heuristic used when a
// facility does not disclose its energy use.

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <utility>

#include "scarf/error.hpp"
#include "scarf/geo.hpp"

namespace scarf {

namespace detail {
inline double require_non_negative(double v, const char* what) {
    if (!std::isfinite(v) || v < 0.0) {
        throw Error(ErrorKind::InvariantViolation, std::string(what) + " must be finite and >= 0, got " + std::to_string(v));
    }
    return v;
}
} // namespace detail

/// Energy in kilowatt-hours.
class EnergyQuantity {
  public:
    constexpr EnergyQuantity() = default;
    explicit EnergyQuantity(double kwh) : kwh_(detail::require_non_negative(kwh, "energy (kWh)")) {}

    /// Average power (kW) held for a runtime (hours).
    static EnergyQuantity from_power(double kw, double hours) {
        return EnergyQuantity(detail::require_non_negative(kw, "power (kW)") *
                              detail::require_non_negative(hours, "runtime (h)"));
    }

    [[nodiscard]] constexpr double kwh() const noexcept { return kwh_; }

    friend bool operator==(const EnergyQuantity&, const EnergyQuantity&) = default;

  private:
    double kwh_{0.0};
};

/// Water volume in liters.
class WaterVolume {
  public:
    constexpr WaterVolume() = default;
    explicit WaterVolume(double liters) : liters_(detail::require_non_negative(liters, "water volume (L)")) {}

    [[nodiscard]] constexpr double liters() const noexcept { return liters_; }

    friend WaterVolume operator+(WaterVolume a, WaterVolume b) { return WaterVolume(a.liters_ + b.liters_); }
    friend bool operator==(const WaterVolume&, const WaterVolume&) = default;

  private:
    double liters_{0.0};
};

/// WUE values are liters per kWh; PUE is total facility energy over IT energy.
class EfficiencyCoefficients {
  public:
    EfficiencyCoefficients(double wue_on, double wue_off, double pue)
        : wue_on_(detail::require_non_negative(wue_on, "wue_on")),
          wue_off_(detail::require_non_negative(wue_off, "wue_off")),
          pue_(pue) {
        if (!std::isfinite(pue) || pue < 1.0) {
            throw Error(ErrorKind::InvariantViolation, "pue must be >= 1, got " + std::to_string(pue));
        }
    }

    [[nodiscard]] double wue_on() const noexcept { return wue_on_; }
    [[nodiscard]] double wue_off() const noexcept { return wue_off_; }
    [[nodiscard]] double pue() const noexcept { return pue_; }

    friend bool operator==(const EfficiencyCoefficients&, const EfficiencyCoefficients&) = default;

  private:
    double wue_on_;
    double wue_off_;
    double pue_;
};

[[nodiscard]] inline WaterVolume on_site_water(EnergyQuantity energy_it, const EfficiencyCoefficients& eff) {
    return WaterVolume(energy_it.kwh() * eff.wue_on());
}

[[nodiscard]] inline WaterVolume off_site_water(EnergyQuantity energy_it, const EfficiencyCoefficients& eff) {
    return WaterVolume(energy_it.kwh() * eff.pue() * eff.wue_off());
}

struct RawWater {
    WaterVolume on_site;
    WaterVolume off_site;

    [[nodiscard]] double total_liters() const { return on_site.liters() + off_site.liters(); }
};

[[nodiscard]] inline RawWater total_raw_water(EnergyQuantity energy_it, const EfficiencyCoefficients& eff) {
    return {on_site_water(energy_it, eff), off_site_water(energy_it, eff)};
}

/// A site with a published power capacity, used as a proxy for facilities
/// that do not disclose their own.
struct CapacitySite {
    std::string site_id;
    GeoPoint location;
    double capacity_kw{0.0};

    friend bool operator==(const CapacitySite&, const CapacitySite&) = default;
};

inline constexpr double kDefaultUtilization = 0.7;
inline constexpr double kDefaultProxyRadiusMiles = 100.0;

struct CapacityEstimate {
    std::string site_id;
    double capacity_kw{0.0};
    double utilization{kDefaultUtilization};
    std::string source_site_id;

    void validate() const {
        if (!(capacity_kw > 0.0) || !std::isfinite(capacity_kw)) {
            throw Error(ErrorKind::InvariantViolation, "capacity_kw must be > 0");
        }
        if (!(utilization > 0.0 && utilization <= 1.0)) {
            throw Error(ErrorKind::InvariantViolation, "utilization must be in (0,1]");
        }
    }
};

/// Largest capacity among candidates within `radius_miles` of the target.
/// Equal capacities resolve to the lexicographically smallest site_id, so the
/// result does not depend on candidate order.
[[nodiscard]] inline CapacityEstimate proxy_capacity(const std::string& target_id, const GeoPoint& target,
                                                     std::span<const CapacitySite> candidates, double radius_miles,
                                                     double utilization = kDefaultUtilization) {
    if (!(radius_miles > 0.0)) {
        throw Error(ErrorKind::InvariantViolation, "radius_miles must be > 0");
    }
    require_valid(target);
    const CapacitySite* best = nullptr;
    for (const auto& c : candidates) {
        require_valid(c.location);
        if (haversine_miles(target, c.location) > radius_miles) {
            continue;
        }
        if (best == nullptr || c.capacity_kw > best->capacity_kw ||
            (c.capacity_kw == best->capacity_kw && c.site_id < best->site_id)) {
            best = &c;
        }
    }
    if (best == nullptr) {
        throw Error(ErrorKind::NoCandidateInRadius,
                    "no capacity site within " + std::to_string(radius_miles) + " miles of " + target_id);
    }
    CapacityEstimate est{target_id, best->capacity_kw, utilization, best->site_id};
    est.validate();
    return est;
}

struct AnnualEnergy {
    EnergyQuantity it;    // feeds on-site water
    EnergyQuantity total; // it x PUE
};

inline constexpr double kHoursPerYear = 24.0 * 365.0;

/// capacity x 8760 h x utilization, with PUE applied on top for the total.
[[nodiscard]] inline AnnualEnergy annual_energy(const CapacityEstimate& cap, double pue) {
    cap.validate();
    if (!std::isfinite(pue) || pue < 1.0) {
        throw Error(ErrorKind::InvariantViolation, "pue must be >= 1");
    }
    const double it = cap.capacity_kw * 24.0 * 365.0 * cap.utilization;
    return {EnergyQuantity(it), EnergyQuantity(it * pue)};
}

} // namespace scarf
