#pragma once

#include <cstddef>
#include <span>

namespace metastab {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    std::size_t points = 0;
};

// Ordinary least squares y = intercept + slope * x. Needs two or more
// distinct x values; the standard error needs three or more points.
LineFit fit_line(std::span<const double> xs, std::span<const double> ys);

// log(sum exp(v)) without overflow.
double log_sum_exp(std::span<const double> values);

}  // namespace metastab
