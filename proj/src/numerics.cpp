/*
   Copyright 2026 The ICIC Lab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "icic/numerics.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace icic::numerics {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

[[noreturn]] void domain_error(const std::string& what)
{
    throw std::domain_error(what);
}

// Series E1(x) = -gamma - ln x - sum_{k>=1} (-x)^k / (k k!), for 0 < x <= 1.
double e1_series(double x)
{
    double sum = 0.0;
    double term = 1.0;
    for (int k = 1; k < 200; ++k) {
        term *= -x / k;
        const double add = term / k;
        sum += add;
        if (std::abs(add) < kEps * std::abs(sum)) {
            break;
        }
    }
    return -std::numbers::egamma - std::log(x) - sum;
}

// Modified Lentz evaluation of e^x E_n(x), valid for x > 1 (any n >= 1).
double en_scaled_continued_fraction(int n, double x)
{
    constexpr double tiny = 1e-300;
    double b = x + n;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -static_cast<double>(i) * (n - 1 + i);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        const double del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < kEps) {
            return h;
        }
    }
    domain_error("exp_integral_en_scaled: continued fraction did not converge");
}

double binomial(int m, int i)
{
    double c = 1.0;
    for (int k = 1; k <= i; ++k) {
        c = c * (m - i + k) / k;
    }
    return c;
}

double factorial(int m)
{
    double f = 1.0;
    for (int k = 2; k <= m; ++k) {
        f *= k;
    }
    return f;
}

void check_ab(const char* name, double a, double b)
{
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
        domain_error(std::string(name) + ": requires a > 0 and b > 0");
    }
}

void check_mn(const char* name, int m, int n)
{
    if (m < 0 || n < 0) {
        domain_error(std::string(name) + ": requires m >= 0 and n >= 0");
    }
}

template <typename F>
double integrate_fallback(F integrand, double characteristic_scale)
{
    boost::math::quadrature::exp_sinh<double> integrator;
    double error = 0.0;
    double l1 = 0.0;
    const double value = integrator.integrate(
        integrand, 0.0, std::numeric_limits<double>::infinity(), 1e-13, &error, &l1);
    if (std::isfinite(value) && error <= 1e-10 * std::abs(value)) {
        return value;
    }
    // exp_sinh struggles with integrands whose bulk sits far from x ~ 1;
    // retry with a rescaled Gauss-Kronrod sweep.
    QuadratureSpec spec{1e-300, 1e-12, 20000};
    const auto r = integrate_to_infinity(integrand, 0.0, spec, characteristic_scale);
    return r.value;
}

double bulk_scale(double a, double b, int m)
{
    return std::max({(m + 1.0) / a, b, 1e-3});
}

// Closed-form I2 with its condition estimate; never falls back.
IntegralValue i2_closed_form(double a, double b, int m, int n)
{
    if (n == 0) {
        return {factorial(m) / std::pow(a, m + 1), 1.0, false};
    }
    double sum = 0.0;
    double magnitude = 0.0;
    for (int i = 0; i <= m; ++i) {
        const double term = binomial(m, i) * std::pow(-b, m - i) *
                            integral_i3_scaled(a, b, i - n);
        sum += term;
        magnitude += std::abs(term);
    }
    const double condition = sum != 0.0 ? magnitude / std::abs(sum)
                                        : std::numeric_limits<double>::infinity();
    return {sum, condition, false};
}

// x^m e^{-ax} / (x+b)^n in log form so large x underflows cleanly to 0.
double i2_integrand(double x, double a, double b, int m, int n)
{
    if (x <= 0.0) {
        return m == 0 ? std::pow(b, -n) : 0.0;
    }
    return std::exp(m * std::log(x) - a * x - n * std::log(x + b));
}

bool acceptable(const IntegralValue& v)
{
    return std::isfinite(v.value) && v.value > 0.0 &&
           v.condition <= kClosedFormConditionLimit;
}

} // namespace

double exp_integral_e1_scaled(double x)
{
    if (!(x > 0.0)) {
        domain_error("exp_integral_e1: requires x > 0");
    }
    if (x <= 1.0) {
        return std::exp(x) * e1_series(x);
    }
    return en_scaled_continued_fraction(1, x);
}

double exp_integral_e1(double x)
{
    if (!(x > 0.0)) {
        domain_error("exp_integral_e1: requires x > 0");
    }
    if (x <= 1.0) {
        return e1_series(x);
    }
    return std::exp(-x) * en_scaled_continued_fraction(1, x);
}

double exp_integral_en_scaled(int n, double x)
{
    if (n < 1) {
        domain_error("exp_integral_en_scaled: requires n >= 1");
    }
    if (!(x > 0.0)) {
        domain_error("exp_integral_en_scaled: requires x > 0");
    }
    if (x > 1.0) {
        return en_scaled_continued_fraction(n, x);
    }
    // Upward recurrence e^x E_{k+1} = (1 - x e^x E_k) / k; each step damps
    // errors by x / k <= 1.
    double s = exp_integral_e1_scaled(x);
    for (int k = 1; k < n; ++k) {
        s = (1.0 - x * s) / k;
    }
    return s;
}

double upper_gamma_neg_int(int k, double x)
{
    if (k < 0) {
        domain_error("upper_gamma_neg_int: requires k >= 0");
    }
    // Gamma(-k, x) = x^{-k} E_{k+1}(x)
    return std::pow(x, -k) * std::exp(-x) * exp_integral_en_scaled(k + 1, x);
}

double integral_i3_scaled(double a, double b, int m)
{
    if (!(a > 0.0) || !(b >= 0.0)) {
        domain_error("integral_i3: requires a > 0 and b >= 0");
    }
    if (m >= 0) {
        // sum_{i=0}^m m!/i! b^i / a^{m-i+1}
        double sum = 0.0;
        double fact_ratio = 1.0;
        for (int i = m; i >= 0; --i) {
            sum += fact_ratio * std::pow(b, i) / std::pow(a, m - i + 1);
            fact_ratio *= i;
        }
        return sum;
    }
    if (!(b > 0.0)) {
        domain_error("integral_i3: m <= -1 requires b > 0");
    }
    if (m == -1) {
        return exp_integral_e1_scaled(a * b);
    }
    const int n = -m;
    return std::pow(b, 1 - n) * exp_integral_en_scaled(n, a * b);
}

double integral_i3(double a, double b, int m)
{
    const double scaled = integral_i3_scaled(a, b, m);
    return std::exp(-a * b) * scaled;
}

IntegralValue integral_i2_detail(double a, double b, int m, int n)
{
    check_ab("integral_i2", a, b);
    check_mn("integral_i2", m, n);
    IntegralValue v = i2_closed_form(a, b, m, n);
    if (acceptable(v)) {
        return v;
    }
    auto integrand = [=](double x) { return i2_integrand(x, a, b, m, n); };
    v.value = integrate_fallback(integrand, bulk_scale(a, b, m));
    v.quadrature_fallback = true;
    return v;
}

double integral_i2(double a, double b, int m, int n)
{
    return integral_i2_detail(a, b, m, n).value;
}

IntegralValue integral_i1_detail(double a, double b, int m, int n)
{
    check_ab("integral_i1", a, b);
    check_mn("integral_i1", m, n);
    if (b == 1.0) {
        // x^m e^{-ax} / (x+1)^{n+1}
        return integral_i2_detail(a, 1.0, m, n + 1);
    }

    // Partial fractions in 1/((x+b)^n (x+1)).
    const IntegralValue tail = i2_closed_form(a, 1.0, m, 1);
    double sum = tail.value / std::pow(b - 1.0, n);
    double magnitude = std::abs(sum) * std::max(1.0, tail.condition);
    for (int i = 1; i <= n; ++i) {
        const IntegralValue part = i2_closed_form(a, b, m, n - i + 1);
        const double sign = (i % 2 == 1) ? 1.0 : -1.0;
        const double term = sign * part.value / std::pow(1.0 - b, i);
        sum += term;
        magnitude += std::abs(term) * std::max(1.0, part.condition);
    }
    IntegralValue v{sum,
                    sum != 0.0 ? magnitude / std::abs(sum)
                               : std::numeric_limits<double>::infinity(),
                    false};
    if (acceptable(v)) {
        return v;
    }
    auto integrand = [=](double x) { return i2_integrand(x, a, b, m, n) / (x + 1.0); };
    v.value = integrate_fallback(integrand, bulk_scale(a, b, m));
    v.quadrature_fallback = true;
    return v;
}

double integral_i1(double a, double b, int m, int n)
{
    return integral_i1_detail(a, b, m, n).value;
}

// ---------------------------------------------------------------------------
// Oracle

namespace {

int dof_param(double value)
{
    const int m = static_cast<int>(std::lround(value));
    if (m < 1 || std::abs(value - m) > 1e-12) {
        throw std::invalid_argument("expected_log_oracle: shape M must be an integer >= 1");
    }
    return m;
}

void check_nonneg(double v, const char* what)
{
    if (!(v >= 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument(std::string("expected_log_oracle: ") + what +
                                    " must be finite and >= 0");
    }
}

// E[log2(1 + g Z)], Z ~ Gamma(M, 1), by direct integration against the density.
QuadratureResult pure_gamma_oracle(double g, int m, const QuadratureSpec& spec)
{
    if (g == 0.0) {
        return {0.0, 0.0, 0, true};
    }
    const double log_norm = std::lgamma(static_cast<double>(m));
    auto integrand = [=](double z) {
        if (z <= 0.0) {
            return 0.0;
        }
        const double density = std::exp((m - 1) * std::log(z) - z - log_norm);
        return std::log1p(g * z) * density;
    };
    QuadratureResult r = integrate_to_infinity(integrand, 0.0, spec, static_cast<double>(m));
    r.value *= std::numbers::log2e;
    r.error_estimate *= std::numbers::log2e;
    return r;
}

// Density of d1 Y1 + d2 Y2 for unit exponentials Y1, Y2 (d1, d2 > 0);
// stays finite as d1 -> d2.
double hypoexponential_density(double u, double d1, double d2)
{
    const double lo = std::min(d1, d2);
    const double hi = std::max(d1, d2);
    const double c = (hi - lo) / (lo * hi);
    const double g = (c * u == 0.0) ? u : -std::expm1(-u * c) / c;
    return std::exp(-u / hi) * g / (lo * hi);
}

} // namespace

QuadratureResult expected_log_oracle(DensityKind kind, std::span<const double> params,
                                     const QuadratureSpec& spec)
{
    spec.validate();
    switch (kind) {
    case DensityKind::pure_gamma: {
        if (params.size() != 2) {
            throw std::invalid_argument("expected_log_oracle(pure_gamma): params {g, M}");
        }
        check_nonneg(params[0], "g");
        return pure_gamma_oracle(params[0], dof_param(params[1]), spec);
    }
    case DensityKind::gamma_ratio_1: {
        if (params.size() != 3) {
            throw std::invalid_argument("expected_log_oracle(gamma_ratio_1): params {g1, g2, M}");
        }
        const double g1 = params[0];
        const double g2 = params[1];
        check_nonneg(g1, "g1");
        check_nonneg(g2, "g2");
        const int m = dof_param(params[2]);
        if (g2 == 0.0) {
            return pure_gamma_oracle(g1, m, spec);
        }
        bool converged = true;
        auto outer = [&](double y) {
            const auto inner = pure_gamma_oracle(g1 / (1.0 + g2 * y), m, spec);
            converged = converged && inner.converged;
            return std::exp(-y) * inner.value;
        };
        QuadratureResult r = integrate_to_infinity(outer, 0.0, spec, 1.0);
        r.converged = r.converged && converged;
        return r;
    }
    case DensityKind::gamma_ratio_2: {
        if (params.size() != 4) {
            throw std::invalid_argument(
                "expected_log_oracle(gamma_ratio_2): params {a, d1, d2, M}");
        }
        const double a = params[0];
        const double d1 = params[1];
        const double d2 = params[2];
        check_nonneg(a, "a");
        check_nonneg(d1, "d1");
        check_nonneg(d2, "d2");
        const int m = dof_param(params[3]);
        if (d1 == 0.0 || d2 == 0.0) {
            const double reduced[] = {a, d1 + d2, static_cast<double>(m)};
            return expected_log_oracle(DensityKind::gamma_ratio_1, reduced, spec);
        }
        bool converged = true;
        auto outer = [&](double u) {
            const auto inner = pure_gamma_oracle(a / (1.0 + u), m, spec);
            converged = converged && inner.converged;
            return hypoexponential_density(u, d1, d2) * inner.value;
        };
        QuadratureResult r = integrate_to_infinity(outer, 0.0, spec, d1 + d2);
        r.converged = r.converged && converged;
        return r;
    }
    }
    throw std::invalid_argument("expected_log_oracle: unknown density kind");
}

} // namespace icic::numerics
