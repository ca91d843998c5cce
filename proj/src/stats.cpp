#include "metastab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "metastab/common.hpp"

namespace metastab {

LineFit fit_line(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw InputError("fit_line: size mismatch");
    const std::size_t n = xs.size();
    if (n < 2) throw InputError("fit_line: need at least two points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (!(sxx > 0.0)) throw InputError("fit_line: x values are all equal");
    LineFit fit;
    fit.points = n;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (n > 2) {
        double rss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = ys[i] - fit.intercept - fit.slope * xs[i];
            rss += r * r;
        }
        fit.slope_stderr = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
    }
    return fit;
}

double log_sum_exp(std::span<const double> values) {
    double hi = -std::numeric_limits<double>::infinity();
    for (double v : values) hi = std::max(hi, v);
    if (!std::isfinite(hi)) return hi;
    double s = 0.0;
    for (double v : values) s += std::exp(v - hi);
    return hi + std::log(s);
}

}  // namespace metastab
