#include "reginv/distributions.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <utility>

#include "reginv/errors.hpp"

namespace reginv {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

namespace {

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

void validate(const DelayFamily& family, const std::string& field) {
    std::visit(Overloaded{
                   [&](const PointMass& d) {
                       if (!positive_finite(d.T)) throw ValidationError(field + ".T", "must be finite and > 0");
                   },
                   [&](const Exponential& d) {
                       if (!positive_finite(d.rate))
                           throw ValidationError(field + ".rate", "must be finite and > 0");
                   },
                   [&](const GammaDelay& d) {
                       if (!positive_finite(d.shape))
                           throw ValidationError(field + ".shape", "must be finite and > 0");
                       if (!positive_finite(d.scale))
                           throw ValidationError(field + ".scale", "must be finite and > 0");
                   },
                   [&](const UniformDelay& d) {
                       if (!std::isfinite(d.a) || d.a < 0.0)
                           throw ValidationError(field + ".a", "must be finite and >= 0");
                       if (!std::isfinite(d.b) || !(d.b > d.a))
                           throw ValidationError(field + ".b", "must be finite and > a");
                   },
               },
               family);
}

std::string family_name(const DelayFamily& family) {
    return std::visit(Overloaded{
                          [](const PointMass&) { return std::string("point_mass"); },
                          [](const Exponential&) { return std::string("exponential"); },
                          [](const GammaDelay&) { return std::string("gamma"); },
                          [](const UniformDelay&) { return std::string("uniform"); },
                      },
                      family);
}

double mean(const DelayFamily& family) {
    return std::visit(Overloaded{
                          [](const PointMass& d) { return d.T; },
                          [](const Exponential& d) { return 1.0 / d.rate; },
                          [](const GammaDelay& d) { return d.shape * d.scale; },
                          [](const UniformDelay& d) { return 0.5 * (d.a + d.b); },
                      },
                      family);
}

double variance(const DelayFamily& family) {
    return std::visit(Overloaded{
                          [](const PointMass&) { return 0.0; },
                          [](const Exponential& d) { return 1.0 / (d.rate * d.rate); },
                          [](const GammaDelay& d) { return d.shape * d.scale * d.scale; },
                          [](const UniformDelay& d) { return (d.b - d.a) * (d.b - d.a) / 12.0; },
                      },
                      family);
}

double density(const DelayFamily& family, double y) {
    if (y < 0.0) return 0.0;
    return std::visit(Overloaded{
                          [](const PointMass&) -> double {
                              throw InvariantViolation("density: point mass has no density");
                          },
                          [y](const Exponential& d) { return d.rate * std::exp(-d.rate * y); },
                          [y](const GammaDelay& d) {
                              return boost::math::gamma_p_derivative(d.shape, y / d.scale) / d.scale;
                          },
                          [y](const UniformDelay& d) { return (y >= d.a && y <= d.b) ? 1.0 / (d.b - d.a) : 0.0; },
                      },
                      family);
}

double survival(const DelayFamily& family, double y) {
    if (y < 0.0) return 1.0;
    return std::visit(Overloaded{
                          [y](const PointMass& d) { return y < d.T ? 1.0 : 0.0; },
                          [y](const Exponential& d) { return std::exp(-d.rate * y); },
                          [y](const GammaDelay& d) { return boost::math::gamma_q(d.shape, y / d.scale); },
                          [y](const UniformDelay& d) {
                              if (y <= d.a) return 1.0;
                              if (y >= d.b) return 0.0;
                              return (d.b - y) / (d.b - d.a);
                          },
                      },
                      family);
}

double sample(const DelayFamily& family, std::mt19937_64& rng) {
    return std::visit(Overloaded{
                          [](const PointMass& d) { return d.T; },
                          [&rng](const Exponential& d) { return std::exponential_distribution<double>(d.rate)(rng); },
                          [&rng](const GammaDelay& d) {
                              return std::gamma_distribution<double>(d.shape, d.scale)(rng);
                          },
                          [&rng](const UniformDelay& d) {
                              return std::uniform_real_distribution<double>(d.a, d.b)(rng);
                          },
                      },
                      family);
}

double upper_quantile(const DelayFamily& family, double tail) {
    return std::visit(Overloaded{
                          [](const PointMass& d) { return d.T; },
                          [tail](const Exponential& d) { return -std::log(tail) / d.rate; },
                          [tail](const GammaDelay& d) { return d.scale * boost::math::gamma_q_inv(d.shape, tail); },
                          [](const UniformDelay& d) { return d.b; },
                      },
                      family);
}

MappedPoint map_point(const DelayFamily& family, double t) {
    return std::visit(
        Overloaded{
            [](const PointMass&) -> MappedPoint {
                throw InvariantViolation("map_point: point mass has no density");
            },
            [t](const Exponential& d) {
                const double w = t / (1.0 - t);
                // e^{-w} dw, dw = dt / (1 - t)^2
                return MappedPoint{w / d.rate, -w - 2.0 * std::log1p(-t)};
            },
            [t](const GammaDelay& d) {
                const double w = t / (1.0 - t);
                const double log_jac = -2.0 * std::log1p(-t);
                if (d.shape >= 1.0) {
                    const double lw = (d.shape - 1.0) * std::log(w) - w - std::lgamma(d.shape) + log_jac;
                    return MappedPoint{d.scale * w, lw};
                }
                // u = w^{1/k}: u^{k-1} e^{-u} du / Gamma(k) = e^{-u} dw / Gamma(k + 1)
                const double u = std::pow(w, 1.0 / d.shape);
                return MappedPoint{d.scale * u, -u - std::lgamma(d.shape + 1.0) + log_jac};
            },
            [t](const UniformDelay& d) { return MappedPoint{d.a + (d.b - d.a) * t, 0.0}; },
        },
        family);
}

DelaySpec::DelaySpec(DelayFamily base, std::map<int, DelayFamily> per_r)
    : base_(std::move(base)), per_r_(std::move(per_r)) {
    validate(base_, "delay");
    for (const auto& [r, fam] : per_r_) validate(fam, "delay.per_r[" + std::to_string(r) + "]");
}

const DelayFamily& DelaySpec::at(int r) const {
    auto it = per_r_.find(r);
    return it == per_r_.end() ? base_ : it->second;
}

double expect_g(const DelayFamily& family, const std::function<double(double)>& g, const QuadratureConfig& config) {
    if (const auto* pm = std::get_if<PointMass>(&family)) return g(pm->T);
    auto integrand = [&](double t) {
        const MappedPoint p = map_point(family, t);
        const double w = std::exp(p.log_weight);
        if (w == 0.0) return 0.0;
        return g(p.y) * w;
    };
    return integrate(integrand, 0.0, 1.0, config);
}

double expect_g(const DelaySpec& spec, int r, const std::function<double(double)>& g, const QuadratureConfig& config) {
    return expect_g(spec.at(r), g, config);
}

double mean_delay(const DelaySpec& spec, int r) { return mean(spec.at(r)); }

double survival_integral(const DelayFamily& family, const QuadratureConfig& config) {
    return std::visit(Overloaded{
                          [](const PointMass& d) { return d.T; },
                          [&](const UniformDelay& d) {
                              auto s = [&](double y) { return survival(family, y); };
                              return d.a + integrate(s, d.a, d.b, config);
                          },
                          [&](const auto&) {
                              const double scale = mean(family);
                              auto s = [&](double t) {
                                  const double w = t / (1.0 - t);
                                  return survival(family, scale * w) * scale / ((1.0 - t) * (1.0 - t));
                              };
                              return integrate(s, 0.0, 1.0, config);
                          },
                      },
                      family);
}

}  // namespace reginv
