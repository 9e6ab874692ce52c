#pragma once

#include <optional>

namespace napsched {

/// @brief Power characteristics of a single speed-scalable processor with a
/// sleep state.
///
/// While awake the processor draws power speed^alpha + beta; the static term
/// beta is paid even when idling at speed zero. Asleep it draws nothing, but
/// every sleep-to-awake transition costs a fixed wake-up energy gamma.
struct PowerModel {
    double alpha = 2.0;                 ///< dynamic-power exponent, >= 2
    double beta = 1.0;                  ///< static power while awake, >= 0
    double gamma = 1.0;                 ///< energy per wake-up, >= 0
    std::optional<double> max_speed{};  ///< hard speed cap, > 0 when present

    /// @throws std::invalid_argument if any parameter is out of range.
    void validate() const;
};

/// @brief Power drawn while awake at the given speed: speed^alpha + beta.
/// @throws std::domain_error for negative speeds.
double power(const PowerModel& m, double speed);

/// @brief The speed minimising energy per unit of work,
/// (beta / (alpha - 1))^(1/alpha); zero when beta is zero.
///
/// Running slower than this wastes static power; running work below it is
/// never worthwhile for an awake processor.
double critical_speed(const PowerModel& m);

/// @brief Energy spent per unit of work at the given speed, power/speed.
/// Minimised at critical_speed(m).
/// @throws std::domain_error unless speed > 0.
double per_work_cost(const PowerModel& m, double speed);

/// @brief Value per unit of work, value/work; +infinity when work is zero.
double value_density(double value, double work);

/// @brief Highest speed at which running work of this density can still pay
/// for its dynamic energy: density^(1/(alpha-1)), taken against the
/// beta-free power curve. +infinity when work is zero.
double profitable_speed(const PowerModel& m, double value, double work);

}  // namespace napsched
