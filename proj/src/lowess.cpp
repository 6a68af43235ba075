#include <algorithm>
#include <cmath>
#include <numeric>

#include "relmix/error.hpp"
#include "relmix/evaluation.hpp"

namespace relmix::eval {

namespace {

double tricube(double t) {
    t = std::abs(t);
    if (t >= 1.0) return 0.0;
    const double c = 1.0 - t * t * t;
    return c * c * c;
}

// Weighted least-squares line through (x, y), evaluated at x0.
double localLinear(std::span<const double> x, std::span<const double> y, std::span<const double> w, double x0) {
    double sw = 0, sx = 0, sy = 0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        sw += w[j];
        sx += w[j] * x[j];
        sy += w[j] * y[j];
    }
    if (sw <= 0) return std::numeric_limits<double>::quiet_NaN();
    const double mx = sx / sw, my = sy / sw;
    double sxx = 0, sxy = 0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        sxx += w[j] * (x[j] - mx) * (x[j] - mx);
        sxy += w[j] * (x[j] - mx) * (y[j] - my);
    }
    const double scale = std::max(std::abs(mx), 1.0);
    if (sxx <= 1e-24 * scale * scale * sw) return my;
    return my + sxy / sxx * (x0 - mx);
}

}  // namespace

std::vector<double> lowess(std::span<const double> xs, std::span<const double> ys, const LowessOptions& options) {
    const std::size_t n = xs.size();
    if (ys.size() != n) throw DomainError("lowess inputs differ in length");
    if (!(options.span > 0.0 && options.span <= 1.0)) throw DomainError("lowess span must lie in (0, 1]");
    for (std::size_t i = 0; i < n; ++i)
        if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) throw DomainError("lowess input not finite");
    if (n < 2 || std::all_of(xs.begin(), xs.end(), [&](double v) { return v == xs[0]; }))
        throw DomainError("lowess needs at least two distinct x values");
    const auto k = static_cast<std::size_t>(options.span * static_cast<double>(n));
    if (k < 2) throw DomainError("lowess span covers fewer than two points");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return xs[a] < xs[b]; });
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = xs[order[i]];
        y[i] = ys[order[i]];
    }

    // Window [lo, lo + k) of the k nearest points, slid rightwards as i grows.
    std::vector<std::size_t> windowStart(n);
    std::vector<std::vector<double>> distanceWeights(n, std::vector<double>(k));
    std::size_t lo = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (lo + k < n && x[lo + k] - x[i] < x[i] - x[lo]) ++lo;
        windowStart[i] = lo;
        const double width = std::max(x[i] - x[lo], x[lo + k - 1] - x[i]);
        for (std::size_t j = 0; j < k; ++j)
            distanceWeights[i][j] = width > 0 ? tricube((x[lo + j] - x[i]) / width) : 1.0;
    }

    std::vector<double> robustness(n, 1.0), fitted(n), w(k);
    for (unsigned iter = 0; iter <= options.iterations; ++iter) {
        if (iter > 0) {
            std::vector<double> residuals(n);
            for (std::size_t i = 0; i < n; ++i) residuals[i] = std::abs(y[i] - fitted[i]);
            std::vector<double> sorted = residuals;
            std::sort(sorted.begin(), sorted.end());
            const double median =
                n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
            if (median <= 0) break;  // exact fit: reweighting would change nothing
            for (std::size_t i = 0; i < n; ++i) {
                const double u = residuals[i] / (6.0 * median);
                robustness[i] = u >= 1.0 ? 0.0 : (1.0 - u * u) * (1.0 - u * u);
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t s = windowStart[i];
            for (std::size_t j = 0; j < k; ++j) w[j] = distanceWeights[i][j] * robustness[s + j];
            double v = localLinear(std::span(x).subspan(s, k), std::span(y).subspan(s, k), w, x[i]);
            if (std::isnan(v)) v = localLinear(std::span(x).subspan(s, k), std::span(y).subspan(s, k), distanceWeights[i], x[i]);
            fitted[i] = v;
        }
    }

    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[order[i]] = fitted[i];
    return out;
}

}  // namespace relmix::eval
