#pragma once

#include <functional>
#include <span>
#include <vector>

namespace reginv {

/// Accuracy knobs shared by every quadrature in the library.
struct QuadratureConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_intervals = 4000;
};

/// Integrand filling one value per component at abscissa `x`.
using VectorIntegrand = std::function<void(double x, std::span<double> out)>;

struct VectorIntegral {
    std::vector<double> value;
    std::vector<double> error;  // per-component error estimate
    int intervals = 0;
};

/// Adaptive 21-point Gauss–Kronrod over [a, b] for a vector of integrands that
/// share abscissae. Component c is converged when its summed error estimate is
/// at most max(rel_tol * |I_c|, abs_floor); the interval with the worst
/// tolerance-normalised error is bisected until every component converges.
/// Throws QuadratureError when `max_intervals` is reached first.
VectorIntegral integrate_vector(const VectorIntegrand& f, std::size_t components, double a, double b,
                                double rel_tol, double abs_floor, int max_intervals);

/// Scalar convenience wrapper; `error` receives the final estimate if non-null.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureConfig& config, double* error = nullptr);

}  // namespace reginv
