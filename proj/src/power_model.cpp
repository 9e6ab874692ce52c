#include "napsched/power_model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace napsched {

void PowerModel::validate() const {
    if (!(alpha >= 2.0)) throw std::invalid_argument("power model: alpha must be >= 2");
    if (!(beta >= 0.0)) throw std::invalid_argument("power model: beta must be >= 0");
    if (!(gamma >= 0.0)) throw std::invalid_argument("power model: gamma must be >= 0");
    if (max_speed && !(*max_speed > 0.0))
        throw std::invalid_argument("power model: max_speed must be > 0 when set");
}

double power(const PowerModel& m, double speed) {
    if (speed < 0.0) throw std::domain_error("power: speed must be >= 0");
    return std::pow(speed, m.alpha) + m.beta;
}

double critical_speed(const PowerModel& m) {
    if (m.beta == 0.0) return 0.0;
    return std::pow(m.beta / (m.alpha - 1.0), 1.0 / m.alpha);
}

double per_work_cost(const PowerModel& m, double speed) {
    if (!(speed > 0.0)) throw std::domain_error("per_work_cost: speed must be > 0");
    return power(m, speed) / speed;
}

double value_density(double value, double work) {
    if (work == 0.0) return std::numeric_limits<double>::infinity();
    return value / work;
}

double profitable_speed(const PowerModel& m, double value, double work) {
    if (work == 0.0) return std::numeric_limits<double>::infinity();
    return std::pow(value / work, 1.0 / (m.alpha - 1.0));
}

}  // namespace napsched
