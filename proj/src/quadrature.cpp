#include "reginv/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "reginv/errors.hpp"

namespace reginv {
namespace {

// QUADPACK qk21 abscissae and weights. Odd indices are the 10-point Gauss nodes.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525452754, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Interval {
    double a = 0.0;
    double b = 0.0;
    std::vector<double> value;
    std::vector<double> error;
};

Interval apply_rule(const VectorIntegrand& f, std::size_t n, double a, double b) {
    constexpr double kEps = std::numeric_limits<double>::epsilon();
    constexpr double kUflow = std::numeric_limits<double>::min();

    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    // fv[k][c]: samples at center + half * x (k < 10 mirrored pairs, k == 10 center)
    std::vector<double> plus(11 * n), minus(10 * n);
    for (std::size_t k = 0; k < 10; ++k) {
        f(center + half * kXgk[k], std::span<double>(plus.data() + k * n, n));
        f(center - half * kXgk[k], std::span<double>(minus.data() + k * n, n));
    }
    f(center, std::span<double>(plus.data() + 10 * n, n));

    Interval out{a, b, std::vector<double>(n), std::vector<double>(n)};
    for (std::size_t c = 0; c < n; ++c) {
        const double fc = plus[10 * n + c];
        double kron = kWgk[10] * fc;
        double gauss = 0.0;
        double resabs = kWgk[10] * std::abs(fc);
        for (std::size_t k = 0; k < 10; ++k) {
            const double f1 = plus[k * n + c];
            const double f2 = minus[k * n + c];
            kron += kWgk[k] * (f1 + f2);
            resabs += kWgk[k] * (std::abs(f1) + std::abs(f2));
            if (k % 2 == 1) gauss += kWg[k / 2] * (f1 + f2);
        }
        const double mean = 0.5 * kron;
        double resasc = kWgk[10] * std::abs(fc - mean);
        for (std::size_t k = 0; k < 10; ++k) {
            resasc += kWgk[k] * (std::abs(plus[k * n + c] - mean) + std::abs(minus[k * n + c] - mean));
        }
        const double len = std::abs(half);
        double err = std::abs((kron - gauss) * half);
        resabs *= len;
        resasc *= len;
        if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
        if (resabs > kUflow / (50.0 * kEps)) err = std::max(50.0 * kEps * resabs, err);
        out.value[c] = kron * half;
        out.error[c] = err;
    }
    return out;
}

}  // namespace

VectorIntegral integrate_vector(const VectorIntegrand& f, std::size_t components, double a, double b,
                                double rel_tol, double abs_floor, int max_intervals) {
    const std::size_t n = components;
    std::vector<Interval> intervals;
    intervals.push_back(apply_rule(f, n, a, b));

    std::vector<double> total(n), total_err(n), tol(n);
    while (true) {
        std::fill(total.begin(), total.end(), 0.0);
        std::fill(total_err.begin(), total_err.end(), 0.0);
        for (const auto& iv : intervals) {
            for (std::size_t c = 0; c < n; ++c) {
                total[c] += iv.value[c];
                total_err[c] += iv.error[c];
            }
        }
        bool converged = true;
        for (std::size_t c = 0; c < n; ++c) {
            tol[c] = std::max(rel_tol * std::abs(total[c]), abs_floor);
            if (total_err[c] > tol[c]) converged = false;
        }
        if (converged) break;
        if (static_cast<int>(intervals.size()) >= max_intervals) {
            throw QuadratureError("adaptive quadrature did not converge within " +
                                      std::to_string(max_intervals) + " intervals",
                                  *std::max_element(total_err.begin(), total_err.end()));
        }

        // Tolerance-normalised badness of each interval over unconverged components.
        std::vector<double> badness(intervals.size(), 0.0);
        double max_bad = 0.0;
        for (std::size_t i = 0; i < intervals.size(); ++i) {
            for (std::size_t c = 0; c < n; ++c) {
                if (total_err[c] > tol[c]) badness[i] = std::max(badness[i], intervals[i].error[c] / tol[c]);
            }
            max_bad = std::max(max_bad, badness[i]);
        }

        std::vector<Interval> next;
        next.reserve(intervals.size() * 2);
        const double cutoff = 0.25 * max_bad;
        std::size_t count = intervals.size();
        for (std::size_t i = 0; i < intervals.size(); ++i) {
            const Interval& iv = intervals[i];
            const double mid = 0.5 * (iv.a + iv.b);
            const bool splittable = mid > iv.a && mid < iv.b;
            if (badness[i] >= cutoff && badness[i] > 0.0 && splittable &&
                static_cast<int>(count) < max_intervals) {
                ++count;
                next.push_back(apply_rule(f, n, iv.a, mid));
                next.push_back(apply_rule(f, n, mid, iv.b));
            } else {
                next.push_back(iv);
            }
        }
        if (next.size() == intervals.size()) {
            throw QuadratureError("adaptive quadrature stalled: intervals can no longer be bisected",
                                  *std::max_element(total_err.begin(), total_err.end()));
        }
        intervals = std::move(next);
    }

    VectorIntegral result;
    result.value = std::move(total);
    result.error = std::move(total_err);
    result.intervals = static_cast<int>(intervals.size());
    return result;
}

double integrate(const std::function<double(double)>& f, double a, double b, const QuadratureConfig& config,
                 double* error) {
    auto wrapped = [&f](double x, std::span<double> out) { out[0] = f(x); };
    VectorIntegral r = integrate_vector(wrapped, 1, a, b, config.rel_tol, config.abs_tol, config.max_intervals);
    if (error != nullptr) *error = r.error[0];
    return r.value[0];
}

}  // namespace reginv
