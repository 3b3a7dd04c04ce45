#pragma once

#include <string>
#include <vector>

namespace spinsync {

enum class AxisScale { Linear, Log };

struct Axis {
    std::string name;
    double min = 0.0;
    double max = 1.0;
    int points = 2;
    AxisScale scale = AxisScale::Linear;

    /// Sample points including both end points. Throws InvalidArgument for
    /// fewer than two points or a non-positive log range.
    std::vector<double> values() const;
};

std::vector<double> linspace(double min, double max, int points);
std::vector<double> logspace(double min, double max, int points);

}  // namespace spinsync
