#pragma once

// Water Stress Factor: the current (short-term) stress of a basin, a monthly
// variant, and a long-term factor that averages epoch stresses with
// discount weights w'_t = (1 + gamma)^-(t - t0), normalized to sum to 1.

#include <array>
#include <charconv>
#include <cmath>
#include <compare>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "scarf/error.hpp"
#include "scarf/format.hpp"
#include "scarf/stress_store.hpp"

namespace scarf {

/// Non-negative discount rate as a decimal fraction, or exactly infinite.
class DiscountRate {
  public:
    constexpr DiscountRate() = default;

    explicit DiscountRate(double gamma) : gamma_(gamma) {
        if (std::isnan(gamma) || gamma < 0.0) {
            throw Error(ErrorKind::InvariantViolation, "discount rate must be >= 0");
        }
        if (std::isinf(gamma)) {
            infinite_ = true;
            gamma_ = 0.0;
        }
    }

    static constexpr DiscountRate infinite() {
        DiscountRate r;
        r.infinite_ = true;
        return r;
    }

    [[nodiscard]] constexpr bool is_infinite() const noexcept { return infinite_; }
    /// Finite value; 0 for the infinite rate.
    [[nodiscard]] constexpr double value() const noexcept { return gamma_; }

    [[nodiscard]] std::string to_string() const { return infinite_ ? "inf" : format_number(gamma_); }

    friend constexpr bool operator==(const DiscountRate&, const DiscountRate&) = default;
    friend constexpr std::partial_ordering operator<=>(const DiscountRate& a, const DiscountRate& b) {
        if (a.infinite_ || b.infinite_) {
            return a.infinite_ <=> b.infinite_;
        }
        return a.gamma_ <=> b.gamma_;
    }

  private:
    double gamma_{0.0};
    bool infinite_{false};
};

/// Accepts `0.03`, `3%`, `inf` (also `infinity`, `∞`). Percent is divided by 100.
inline DiscountRate parse_discount_rate(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    if (s == "inf" || s == "infinity" || s == "Inf" || s == "∞") {
        return DiscountRate::infinite();
    }
    bool percent = false;
    if (!s.empty() && s.back() == '%') {
        percent = true;
        s.remove_suffix(1);
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v) || v < 0.0) {
        throw Error(ErrorKind::InvariantViolation, "invalid discount rate '" + std::string(text) + "'");
    }
    return DiscountRate(percent ? v / 100.0 : v);
}

/// Calendar years of the baseline and the three projection epochs.
struct EpochCalendar {
    std::array<int, 4> years{2019, 2030, 2050, 2080};

    [[nodiscard]] int year(Epoch e) const { return years[static_cast<std::size_t>(e)]; }
};

struct DiscountSchedule {
    std::vector<int> years;
    std::vector<double> raw_weights;
    std::vector<double> weights;
};

/// `years` must be strictly increasing; the first entry is the baseline t0.
[[nodiscard]] inline DiscountSchedule discount_schedule(DiscountRate gamma, std::span<const int> years) {
    if (years.empty()) {
        throw Error(ErrorKind::InvariantViolation, "epoch list is empty");
    }
    for (std::size_t i = 1; i < years.size(); ++i) {
        if (years[i] <= years[i - 1]) {
            throw Error(ErrorKind::InvariantViolation, "epoch years must be strictly increasing");
        }
    }
    DiscountSchedule s;
    s.years.assign(years.begin(), years.end());
    s.raw_weights.resize(years.size(), 0.0);
    s.weights.resize(years.size(), 0.0);
    if (gamma.is_infinite()) {
        s.raw_weights[0] = 1.0;
        s.weights[0] = 1.0;
        return s;
    }
    const int t0 = years.front();
    double sum = 0.0;
    for (std::size_t i = 0; i < years.size(); ++i) {
        s.raw_weights[i] = std::pow(1.0 + gamma.value(), -static_cast<double>(years[i] - t0));
        sum += s.raw_weights[i];
    }
    for (std::size_t i = 0; i < years.size(); ++i) {
        s.weights[i] = s.raw_weights[i] / sum;
    }
    return s;
}

[[nodiscard]] inline DiscountSchedule discount_schedule(DiscountRate gamma, const EpochCalendar& cal = {}) {
    return discount_schedule(gamma, std::span<const int>(cal.years));
}

struct ShortHorizon {
    friend bool operator==(const ShortHorizon&, const ShortHorizon&) = default;
};
struct MonthlyHorizon {
    int month{1};
    friend bool operator==(const MonthlyHorizon&, const MonthlyHorizon&) = default;
};
struct LongHorizon {
    DiscountRate gamma;
    Scenario scenario{Scenario::business_as_usual};
    friend bool operator==(const LongHorizon&, const LongHorizon&) = default;
};

using Horizon = std::variant<ShortHorizon, MonthlyHorizon, LongHorizon>;

inline std::string horizon_name(const Horizon& h) {
    if (std::holds_alternative<ShortHorizon>(h)) return "short";
    if (const auto* m = std::get_if<MonthlyHorizon>(&h)) return "monthly=" + std::to_string(m->month);
    return "long";
}

struct WsfValue {
    double value{0.0};
    Horizon horizon;
    BasinId basin;
    bool monthly_fallback{false};
};

[[nodiscard]] inline WsfValue short_wsf(const StressStore& store, BasinId basin) {
    return {store.stress_at(basin, Epoch::baseline, Scenario::business_as_usual), ShortHorizon{}, basin, false};
}

[[nodiscard]] inline WsfValue monthly_wsf(const StressStore& store, BasinId basin, int month) {
    const auto m = store.monthly_stress(basin, month);
    return {m.value, MonthlyHorizon{month}, basin, m.fallback};
}

/// Every epoch's projection must exist for `scenario`, even those whose
/// weight is zero, so the error behaviour does not depend on gamma.
[[nodiscard]] inline WsfValue long_wsf(const StressStore& store, BasinId basin, DiscountRate gamma, Scenario scenario,
                                       const EpochCalendar& cal = {}) {
    const auto sched = discount_schedule(gamma, cal);
    double value = 0.0;
    for (std::size_t i = 0; i < kAllEpochs.size(); ++i) {
        value += sched.weights[i] * store.stress_at(basin, kAllEpochs[i], scenario);
    }
    return {value, LongHorizon{gamma, scenario}, basin, false};
}

[[nodiscard]] inline WsfValue compute_wsf(const StressStore& store, BasinId basin, const Horizon& horizon,
                                          const EpochCalendar& cal = {}) {
    if (std::holds_alternative<ShortHorizon>(horizon)) {
        return short_wsf(store, basin);
    }
    if (const auto* m = std::get_if<MonthlyHorizon>(&horizon)) {
        return monthly_wsf(store, basin, m->month);
    }
    const auto& l = std::get<LongHorizon>(horizon);
    return long_wsf(store, basin, l.gamma, l.scenario, cal);
}

} // namespace scarf
