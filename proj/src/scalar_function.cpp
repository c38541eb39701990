#include "sampcent/scalar_function.hpp"

#include <cmath>
#include <string>

#include "sampcent/error.hpp"

namespace sampcent {

std::string_view to_string(FunctionKind kind) noexcept {
    return kind == FunctionKind::exp_minus_one ? "exp_minus_one" : "resolvent_minus_one";
}

FunctionKind parse_function_kind(std::string_view text) {
    if (text == "exp_minus_one" || text == "exp") {
        return FunctionKind::exp_minus_one;
    }
    if (text == "resolvent_minus_one" || text == "resolvent") {
        return FunctionKind::resolvent_minus_one;
    }
    throw ConfigError("unknown function kind '" + std::string(text) + "'");
}

ScalarFunction ScalarFunction::exp_minus_one(double gamma) {
    if (!(gamma > 0.0)) {
        throw ConfigError("gamma must be positive");
    }
    return {FunctionKind::exp_minus_one, gamma};
}

ScalarFunction ScalarFunction::resolvent_minus_one(double gamma) {
    if (!(gamma > 0.0)) {
        throw ConfigError("gamma must be positive");
    }
    return {FunctionKind::resolvent_minus_one, gamma};
}

double ScalarFunction::operator()(double t) const {
    if (kind == FunctionKind::exp_minus_one) {
        return std::expm1(gamma * t);
    }
    return gamma * t / (1.0 - gamma * t);
}

std::complex<double> ScalarFunction::operator()(std::complex<double> t) const {
    const auto z = gamma * t;
    if (kind == FunctionKind::exp_minus_one) {
        // exp(z) - 1 = expm1(x) cos y - 2 sin^2(y/2) + i exp(x) sin y, without cancellation.
        const double x = z.real();
        const double y = z.imag();
        const double s = std::sin(0.5 * y);
        return {std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y)};
    }
    return z / (1.0 - z);
}

double ScalarFunction::divided(double t) const {
    const double z = gamma * t;
    if (kind == FunctionKind::exp_minus_one) {
        return z == 0.0 ? gamma : gamma * std::expm1(z) / z;
    }
    return gamma / (1.0 - z);
}

} // namespace sampcent
