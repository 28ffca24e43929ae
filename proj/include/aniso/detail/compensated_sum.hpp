#pragma once

#include <cmath>

namespace aniso::detail {

/// Neumaier's variant of Kahan summation.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) noexcept {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    [[nodiscard]] double value() const noexcept { return sum + comp; }
};

}  // namespace aniso::detail
