#pragma once

#include <functional>
#include <map>
#include <random>
#include <string>
#include <variant>

#include "reginv/quadrature.hpp"

namespace reginv {

// Delivery-delay families. Times are in model time units, rates in 1/time.
struct PointMass {
    double T = 1.0;
    friend bool operator==(const PointMass&, const PointMass&) = default;
};
struct Exponential {
    double rate = 1.0;
    friend bool operator==(const Exponential&, const Exponential&) = default;
};
struct GammaDelay {
    double shape = 1.0;
    double scale = 1.0;
    friend bool operator==(const GammaDelay&, const GammaDelay&) = default;
};
struct UniformDelay {
    double a = 0.0;
    double b = 1.0;
    friend bool operator==(const UniformDelay&, const UniformDelay&) = default;
};

using DelayFamily = std::variant<PointMass, Exponential, GammaDelay, UniformDelay>;

/// Throws ValidationError (tagged with `field`) if parameters are out of range.
void validate(const DelayFamily& family, const std::string& field = "delay");

std::string family_name(const DelayFamily& family);
double mean(const DelayFamily& family);
double variance(const DelayFamily& family);
/// Density h(y) for continuous families (Boost routes, used by verification paths).
double density(const DelayFamily& family, double y);
/// 1 - H(y).
double survival(const DelayFamily& family, double y);
double sample(const DelayFamily& family, std::mt19937_64& rng);
/// Smallest y with 1 - H(y) <= tail.
double upper_quantile(const DelayFamily& family, double tail);


/// A continuous family's law pushed onto t in (0, 1): dH(y) = exp(log_weight) dt.
struct MappedPoint {
    double y;
    double log_weight;
};

/// Distribution-aware substitution. Exponential and Gamma are scaled to unit
/// scale and mapped with u = w / (1 - w); Gamma with shape < 1 additionally uses
/// u = v^(1/shape) to remove the origin singularity. Uniform maps linearly.
/// Not defined for PointMass (throws InvariantViolation).
MappedPoint map_point(const DelayFamily& family, double t);

/// H_r, optionally overridden per reorder level. Immutable after construction.
class DelaySpec {
public:
    explicit DelaySpec(DelayFamily base, std::map<int, DelayFamily> per_r = {});

    const DelayFamily& at(int r) const;
    const DelayFamily& base() const noexcept { return base_; }
    const std::map<int, DelayFamily>& per_r() const noexcept { return per_r_; }

    friend bool operator==(const DelaySpec&, const DelaySpec&) = default;

private:
    DelayFamily base_;
    std::map<int, DelayFamily> per_r_;
};

/// Stieltjes expectation of g against one family. PointMass is evaluated
/// exactly; continuous families go through adaptive quadrature.
double expect_g(const DelayFamily& family, const std::function<double(double)>& g,
                const QuadratureConfig& config = {});
double expect_g(const DelaySpec& spec, int r, const std::function<double(double)>& g,
                const QuadratureConfig& config = {});

double mean_delay(const DelaySpec& spec, int r);

/// Quadrature of the survival function, an independent route to the mean.
double survival_integral(const DelayFamily& family, const QuadratureConfig& config = {});

}  // namespace reginv
