#pragma once

#include <complex>
#include <string_view>

namespace sampcent {

enum class FunctionKind { exp_minus_one, resolvent_minus_one };

std::string_view to_string(FunctionKind kind) noexcept;
FunctionKind parse_function_kind(std::string_view text);

/// f(t) = exp(gamma t) - 1 or f(t) = 1 / (1 - gamma t) - 1. Both vanish at 0.
struct ScalarFunction {
    FunctionKind kind = FunctionKind::exp_minus_one;
    double gamma = 1.0;

    static ScalarFunction exp_minus_one(double gamma);
    static ScalarFunction resolvent_minus_one(double gamma);

    double operator()(double t) const;
    std::complex<double> operator()(std::complex<double> t) const;

    /// g(t) = f(t) / t, continued by g(0) = gamma.
    double divided(double t) const;
};

} // namespace sampcent
