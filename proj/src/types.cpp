#include "vent/types.hpp"

#include <sstream>
#include <stdexcept>

namespace vent {

Occupancy::Occupancy(int count) : n_p(count) {
    if (count < 0) {
        throw std::invalid_argument("occupancy must be >= 0, got " + std::to_string(count));
    }
}

namespace {

Verdict fail(const char* kind, int index, double value, const char* which, double limit) {
    std::ostringstream os;
    os << kind << "[" << index << "]=" << value << " " << which << " " << kind
       << " bound " << limit;
    return Verdict{false, os.str()};
}

}  // namespace

Verdict validate_control(const ControlAction& action, const ControlBounds& bounds) {
    for (int i = 0; i < 6; ++i) {
        const double r = action.rates[static_cast<size_t>(i)];
        if (r < bounds.rate_min) return fail("rate", i, r, "below", bounds.rate_min);
        if (r > bounds.rate_max) return fail("rate", i, r, "above", bounds.rate_max);
    }
    for (int i = 0; i < 6; ++i) {
        const double a = action.angles[static_cast<size_t>(i)];
        if (a < bounds.angle_min) return fail("angle", i, a, "below", bounds.angle_min);
        if (a > bounds.angle_max) return fail("angle", i, a, "above", bounds.angle_max);
    }
    return Verdict{};
}

}  // namespace vent
