// upsilon.hpp — scalar calculus around Upsilon(x) = e^x - 1 - x and the
// optimal quadratic lower-bound constants C(r) of the associated ratio
// nu_{r,r-1}(w) / w^2.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace hybridcd {

// Upsilon(x) = e^x - 1 - x.  Nonnegative for all real x; grows like e^x for
// x -> +inf and like |x| for x -> -inf.  expm1 keeps the small-|x| regime
// accurate.
inline double upsilon(double x) {
    return std::expm1(x) - x;
}

// Upsilon'(x) = e^x - 1.  Same sign as x.
inline double upsilon_prime(double x) {
    return std::expm1(x);
}

// nu_{r,s}(w) = r * Upsilon'(w) * w + Upsilon(-w) - s * Upsilon(w).
inline double nu(double r, double s, double w) {
    return r * upsilon_prime(w) * w + upsilon(-w) - s * upsilon(w);
}

// nu_{r,r-1}(w) / w^2 with the removable singularity at w = 0 filled by the
// analytic limit 1 + r/2.  Direct evaluation loses all significant digits as
// w -> 0 (the numerator is O(w^2)), so |w| < 1e-3 switches to the Taylor
// expansion of the numerator:
//   nu_{r,r-1}(w) = sum_{k>=2} [ r (k-1)/k! + (1 + (-1)^k)/k! ] w^k.
inline double nu_ratio(double r, double w) {
    if (std::abs(w) < 1e-3) {
        const double c2 = 1.0 + r / 2.0;
        const double c3 = r / 3.0;
        const double c4 = r / 8.0 + 1.0 / 12.0;
        const double c5 = r / 30.0;
        const double c6 = r / 144.0 + 1.0 / 360.0;
        const double c7 = r / 840.0;
        const double c8 = r / 5760.0 + 1.0 / 20160.0;
        return c2 + w * (c3 + w * (c4 + w * (c5 + w * (c6 + w * (c7 + w * c8)))));
    }
    return nu(r, r - 1.0, w) / (w * w);
}

// Result of a 1-D ratio minimisation: the infimum estimate, its location,
// the bracket the refinement ran on and the location tolerance used.
struct RatioMinimizationResult {
    double value = std::numeric_limits<double>::quiet_NaN();
    double argmin = std::numeric_limits<double>::quiet_NaN();
    std::pair<double, double> bracket{0.0, 0.0};
    double tolerance = 0.0;
};

namespace detail {

// Golden-section minimisation of f on [lo, hi]; every probe is folded into
// (best_x, best_f) so the reported value never exceeds a visited sample.
template <class F>
inline void golden_section(F&& f, double lo, double hi, double tol,
                           double& best_x, double& best_f) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    auto consider = [&](double x, double v) {
        if (v < best_f) { best_f = v; best_x = x; }
    };
    consider(c, fc);
    consider(d, fd);
    int guard = 0;
    while (std::abs(b - a) > tol && ++guard < 400) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
            consider(c, fc);
        } else {
            a = c; c = d; fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
            consider(d, fd);
        }
    }
}

} // namespace detail

// C(r) = inf_w nu_{r,r-1}(w) / w^2 for r >= 0, estimated by a coarse
// log-spaced scan of [-50, 50] followed by golden-section refinement of the
// best bracket.  Outside [-50, 50] the exponential terms dominate and the
// ratio exceeds 1e15, so no interior minimum is missed.  The ratio extends
// analytically through w = 0 (value 1 + r/2), which is where the infimum
// sits for small r.
inline RatioMinimizationResult c_of_r(double r, double tol = 1e-8) {
    if (!(r >= 0.0))
        throw std::invalid_argument("c_of_r: r must be >= 0");
    if (!(tol > 0.0))
        throw std::invalid_argument("c_of_r: tol must be > 0");

    auto f = [r](double w) { return nu_ratio(r, w); };

    // Probe magnitudes 1e-4 .. 50, log-spaced, both signs, plus w = 0.
    std::vector<double> grid;
    const int per_decade = 200;
    const double lg_lo = -4.0, lg_hi = std::log10(50.0);
    const int steps = static_cast<int>((lg_hi - lg_lo) * per_decade);
    grid.reserve(2 * steps + 3);
    for (int i = 0; i <= steps; ++i) {
        const double mag = std::pow(10.0, lg_lo + (lg_hi - lg_lo) * i / steps);
        grid.push_back(-mag);
        grid.push_back(mag);
    }
    grid.push_back(0.0);
    std::sort(grid.begin(), grid.end());

    std::size_t best_i = 0;
    double best_f = std::numeric_limits<double>::infinity();
    double best_x = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double v = f(grid[i]);
        if (v < best_f) { best_f = v; best_x = grid[i]; best_i = i; }
    }

    const double lo = grid[best_i > 0 ? best_i - 1 : 0];
    const double hi = grid[best_i + 1 < grid.size() ? best_i + 1 : grid.size() - 1];
    detail::golden_section(f, lo, hi, tol, best_x, best_f);

    RatioMinimizationResult res;
    res.value = best_f;
    res.argmin = best_x;
    res.bracket = {lo, hi};
    res.tolerance = tol;
    return res;
}

// Cached C(2); it enters every dimension bound for regular graphs.
inline double c2() {
    static const double value = c_of_r(2.0).value;
    return value;
}

} // namespace hybridcd
