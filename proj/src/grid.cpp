#include "spinsync/grid.hpp"

#include <cmath>

#include "spinsync/error.hpp"

namespace spinsync {

std::vector<double> linspace(double min, double max, int points) {
    if (points < 2) {
        throw Error(ErrorKind::InvalidArgument, "axis needs at least two points");
    }
    std::vector<double> v(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        v[static_cast<std::size_t>(i)] = min + (max - min) * i / (points - 1);
    }
    v.back() = max;
    return v;
}

std::vector<double> logspace(double min, double max, int points) {
    if (!(min > 0.0 && max > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "log axis needs a positive range");
    }
    std::vector<double> v = linspace(std::log10(min), std::log10(max), points);
    for (auto& x : v) {
        x = std::pow(10.0, x);
    }
    v.front() = min;
    v.back() = max;
    return v;
}

std::vector<double> Axis::values() const {
    return scale == AxisScale::Log ? logspace(min, max, points) : linspace(min, max, points);
}

}  // namespace spinsync
