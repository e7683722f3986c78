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

#include "icic/rate_engine.hpp"

#include "icic/numerics.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace icic {

namespace {

void check_snr(double v, const char* what)
{
    if (!(v >= 0.0) || !std::isfinite(v)) {
        throw std::domain_error(std::string(what) + " must be finite and >= 0");
    }
}

void check_dof(int m)
{
    if (m < 1) {
        throw std::domain_error("signal degrees of freedom must be >= 1");
    }
}

double inverse_factorial(int k)
{
    double f = 1.0;
    for (int i = 2; i <= k; ++i) {
        f *= i;
    }
    return 1.0 / f;
}

// log2(e) sum_{i<M} sum_{l<=i} g1^{l+1-i} / (g2 (i-l)!) I1(1/g1, g1/g2, i, l+1)
double rate_i2_closed_form(double g1, double g2, int m)
{
    const double a = 1.0 / g1;
    const double b = g1 / g2;
    double sum = 0.0;
    for (int i = 0; i < m; ++i) {
        for (int l = 0; l <= i; ++l) {
            sum += std::pow(g1, l + 1 - i) * inverse_factorial(i - l) *
                   numerics::integral_i1(a, b, i, l + 1);
        }
    }
    return std::numbers::log2e * sum / g2;
}

// Same double sum with the bracketed difference of I1 terms over (d1 - d2).
double rate_i3_closed_form(double alpha, double d1, double d2, int m)
{
    const double a = 1.0 / alpha;
    double sum = 0.0;
    for (int i = 0; i < m; ++i) {
        for (int l = 0; l <= i; ++l) {
            const double diff = numerics::integral_i1(a, alpha / d1, i, l + 1) -
                                numerics::integral_i1(a, alpha / d2, i, l + 1);
            sum += std::pow(alpha, l - i + 1) * inverse_factorial(i - l) * diff;
        }
    }
    return std::numbers::log2e * sum / (d1 - d2);
}

} // namespace

void RateParams::validate() const
{
    if (!(signal_snr >= 0.0) || !std::isfinite(signal_snr)) {
        throw std::invalid_argument("RateParams: signal SNR must be finite and >= 0");
    }
    if (signal_dof < 1) {
        throw std::invalid_argument("RateParams: signal_dof must be >= 1");
    }
    if (interferer_snrs.size() > 2) {
        throw std::invalid_argument("RateParams: at most two interferers are supported");
    }
    for (double v : interferer_snrs) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument("RateParams: interferer SNRs must be finite and >= 0");
        }
    }
}

double rate_bf(double snr, int m)
{
    if (!(snr > 0.0) || !std::isfinite(snr)) {
        throw std::domain_error("rate_bf: snr must be positive and finite");
    }
    check_dof(m);
    if (snr < 1e-12) {
        return 0.0;
    }
    // e^{1/g} Gamma(-k, 1/g) / g^k = e^x E_{k+1}(x) with x = 1/g.
    const double x = 1.0 / snr;
    double sum = 0.0;
    for (int k = 0; k < m; ++k) {
        sum += numerics::exp_integral_en_scaled(k + 1, x);
    }
    return std::numbers::log2e * sum;
}

double rate_i2(double signal_snr, double interferer_snr, int m)
{
    if (!(signal_snr > 0.0) || !std::isfinite(signal_snr)) {
        throw std::domain_error("rate_i2: signal snr must be positive and finite");
    }
    check_snr(interferer_snr, "rate_i2: interferer snr");
    check_dof(m);
    if (signal_snr < 1e-12) {
        return 0.0;
    }
    if (interferer_snr < kInterferenceFloor) {
        return rate_bf(signal_snr, m);
    }
    return rate_i2_closed_form(signal_snr, interferer_snr, m);
}

double rate_i3(double signal_snr, double d1, double d2, int m)
{
    if (!(signal_snr > 0.0) || !std::isfinite(signal_snr)) {
        throw std::domain_error("rate_i3: signal snr must be positive and finite");
    }
    check_snr(d1, "rate_i3: interferer snr");
    check_snr(d2, "rate_i3: interferer snr");
    check_dof(m);
    if (signal_snr < 1e-12) {
        return 0.0;
    }
    if (d1 < kInterferenceFloor) {
        return rate_i2(signal_snr, d2, m);
    }
    if (d2 < kInterferenceFloor) {
        return rate_i2(signal_snr, d1, m);
    }
    if (std::abs(d1 - d2) < kEqualInterfererGap * std::max(d1, d2)) {
        // The expectation is smooth in (d1, d2); only the algebraic form is
        // singular on the diagonal. Average both orderings of a symmetric
        // split so the result stays exactly symmetric.
        const double mid = 0.5 * (d1 + d2);
        const double h = kEqualInterfererGap * mid;
        return 0.5 * (rate_i3_closed_form(signal_snr, mid + h, mid - h, m) +
                      rate_i3_closed_form(signal_snr, mid - h, mid + h, m));
    }
    return rate_i3_closed_form(signal_snr, d1, d2, m);
}

double rate(const RateParams& p)
{
    p.validate();
    if (p.signal_snr < 1e-12) {
        return 0.0;
    }
    switch (p.interferer_snrs.size()) {
    case 0:
        return rate_bf(p.signal_snr, p.signal_dof);
    case 1:
        return rate_i2(p.signal_snr, p.interferer_snrs[0], p.signal_dof);
    default:
        return rate_i3(p.signal_snr, p.interferer_snrs[0], p.interferer_snrs[1], p.signal_dof);
    }
}

double quantization_xi(int bits, int nt)
{
    if (nt < 2) {
        throw std::domain_error("quantization_xi: nt must be >= 2");
    }
    if (bits < 0) {
        throw std::domain_error("quantization_xi: bits must be >= 0");
    }
    const double y = static_cast<double>(nt) / (nt - 1);
    const double size = std::exp2(static_cast<double>(bits));
    // L beta(L, y) = L Gamma(y) Gamma(L) / Gamma(L + y)
    const double l_beta =
        size * std::tgamma(y) * boost::math::tgamma_delta_ratio(size, y);
    return 1.0 - l_beta;
}

double residual_kappa(int bits, int nt)
{
    if (nt < 2) {
        throw std::domain_error("residual_kappa: nt must be >= 2");
    }
    if (bits < 0) {
        throw std::domain_error("residual_kappa: bits must be >= 0");
    }
    return std::exp2(-static_cast<double>(bits) / (nt - 1));
}

FeedbackFactors feedback_factors(int bits, int nt)
{
    return {quantization_xi(bits, nt), residual_kappa(bits, nt)};
}

RateParams user_rate_params(const StrategyProfile& profile, const LinkBudget& budget, int nt,
                            int user, const FeedbackConfig* fb)
{
    const int k = profile.cells();
    if (k != budget.cells) {
        throw std::invalid_argument("user_rate: profile and link budget disagree on cell count");
    }
    if (user < 0 || user >= k) {
        throw std::invalid_argument("user_rate: user index out of range");
    }
    if (k > 3) {
        throw std::invalid_argument("user_rate: at most three coordinated cells");
    }
    profile.validate(nt);
    if (fb) {
        fb->validate();
        if (fb->cells != k) {
            throw std::invalid_argument("user_rate: feedback config has the wrong cell count");
        }
        if (nt < 2) {
            throw std::invalid_argument("user_rate: limited feedback needs nt >= 2");
        }
    }

    RateParams p;
    const Strategy& own = profile.per_bs[static_cast<std::size_t>(user)];
    p.signal_dof = nt - own.victim_count();
    p.signal_snr = budget(user, user);
    if (fb) {
        p.signal_snr *= quantization_xi(fb->at(user, user), nt);
    }
    for (int j = 0; j < k; ++j) {
        if (j == user) {
            continue;
        }
        const bool cancels = profile.per_bs[static_cast<std::size_t>(j)].cancels(user);
        if (!fb) {
            if (!cancels) {
                p.interferer_snrs.push_back(budget(user, j));
            }
        } else {
            const double leak = cancels ? residual_kappa(fb->at(user, j), nt) : 1.0;
            p.interferer_snrs.push_back(leak * budget(user, j));
        }
    }
    return p;
}

double user_rate(const StrategyProfile& profile, const LinkBudget& budget, int nt, int user)
{
    return rate(user_rate_params(profile, budget, nt, user));
}

double user_rate_2cell(const StrategyProfile& profile, const LinkBudget& budget, int nt,
                       int user)
{
    if (profile.cells() != 2) {
        throw std::invalid_argument("user_rate_2cell: needs a two-cell profile");
    }
    return user_rate(profile, budget, nt, user);
}

double user_rate_3cell(const StrategyProfile& profile, const LinkBudget& budget, int nt,
                       int user)
{
    if (profile.cells() != 3) {
        throw std::invalid_argument("user_rate_3cell: needs a three-cell profile");
    }
    return user_rate(profile, budget, nt, user);
}

double user_rate_lfb(const StrategyProfile& profile, const LinkBudget& budget,
                     const FeedbackConfig& fb, int nt, int user)
{
    return rate(user_rate_params(profile, budget, nt, user, &fb));
}

double user_rate_3cell_lfb(const StrategyProfile& profile, const LinkBudget& budget,
                           const FeedbackConfig& fb, int nt, int user)
{
    if (profile.cells() != 3) {
        throw std::invalid_argument("user_rate_3cell_lfb: needs a three-cell profile");
    }
    return user_rate_lfb(profile, budget, fb, nt, user);
}

} // namespace icic
