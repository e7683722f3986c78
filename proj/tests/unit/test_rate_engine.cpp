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

#include "icic/network_model.hpp"
#include "icic/numerics.hpp"
#include "icic/rate_engine.hpp"
#include "icic/rng.hpp"
#include "icic/strategy.hpp"

#include "../support/oracles.hpp"
#include "doctest.h"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/expint.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

using namespace icic;
using icic::testing::oracle_rate;
using icic::testing::relative_error;

namespace {

double log_uniform(CounterRng& rng, double lo, double hi)
{
    return lo * std::pow(hi / lo, rng.uniform());
}

int uniform_int(CounterRng& rng, int lo, int hi)
{
    return lo + static_cast<int>(rng.uniform() * (hi - lo + 1));
}

double oracle(numerics::DensityKind kind, std::vector<double> params)
{
    const auto r = numerics::expected_log_oracle(kind, params);
    REQUIRE(r.converged);
    return r.value;
}

StrategyProfile two_cell(Strategy s1, Strategy s2)
{
    return {{s1, s2}};
}

const Strategy BF = Strategy::beamforming();

LinkBudget fixed_budget(Layout layout, std::vector<Point> users, double p0_db)
{
    PlacementSpec spec;
    spec.users = std::move(users);
    return build_scenario(layout, spec, p0_db, 3.7, 4, 1).budget;
}

} // namespace

TEST_CASE("beamforming rate examples")
{
    const double expected = std::numbers::log2e * std::exp(1.0) * boost::math::expint(1, 1.0);
    CHECK(rate_bf(1.0, 1) == doctest::Approx(expected).epsilon(1e-13));
    CHECK(rate_bf(10.0, 4) > rate_bf(10.0, 3));
    CHECK(rate_bf(1e-13, 4) == 0.0);
    CHECK(rate_bf(1e-6, 1) == doctest::Approx(1e-6 * std::numbers::log2e).epsilon(1e-5));
    CHECK_THROWS_AS(rate_bf(0.0, 1), std::domain_error);
    CHECK_THROWS_AS(rate_bf(-1.0, 1), std::domain_error);
    CHECK_THROWS_AS(rate_bf(1.0, 0), std::domain_error);
}

TEST_CASE("one-interferer rate examples")
{
    CHECK(rate_i2(7.0, 0.0, 3) == rate_bf(7.0, 3));
    CHECK(rate_i2(7.0, 1e-11, 3) == rate_bf(7.0, 3));
    CHECK(relative_error(rate_i2(1.0, 1.0, 1),
                         oracle(numerics::DensityKind::gamma_ratio_1, {1.0, 1.0, 1.0})) < 1e-9);
    CHECK(rate_i2(10.0, 10.0, 4) < rate_bf(10.0, 4));
    CHECK_THROWS_AS(rate_i2(1.0, -1.0, 1), std::domain_error);
    CHECK_THROWS_AS(rate_i2(0.0, 1.0, 1), std::domain_error);
}

TEST_CASE("two-interferer rate examples")
{
    CHECK(rate_i3(10.0, 2.0, 0.0, 4) == rate_i2(10.0, 2.0, 4));
    CHECK(rate_i3(10.0, 0.0, 2.0, 4) == rate_i2(10.0, 2.0, 4));
    CHECK(rate_i3(10.0, 1.0, 2.0, 4) == rate_i3(10.0, 2.0, 1.0, 4));

    const double equal = rate_i3(10.0, 2.0, 2.0, 4);
    CHECK(std::isfinite(equal));
    CHECK(relative_error(equal, oracle(numerics::DensityKind::gamma_ratio_2,
                                       {10.0, 2.0, 2.0, 4.0})) < 1e-8);
    // Continuous across the perturbation threshold.
    for (double gap : {1e-7, 2e-6, 1e-5, 1e-4}) {
        CAPTURE(gap);
        CHECK(relative_error(rate_i3(10.0, 2.0, 2.0 * (1 + gap), 4), equal) < 0.5 * gap + 1e-9);
    }
    CHECK_THROWS_AS(rate_i3(1.0, 1.0, -1.0, 1), std::domain_error);
}

TEST_CASE("rate params validation and dispatch")
{
    RateParams p{4.0, {}, 2};
    CHECK(rate(p) == rate_bf(4.0, 2));
    p.interferer_snrs = {1.5};
    CHECK(rate(p) == rate_i2(4.0, 1.5, 2));
    p.interferer_snrs = {1.5, 0.5};
    CHECK(rate(p) == rate_i3(4.0, 1.5, 0.5, 2));
    p.signal_snr = 0.0;
    CHECK(rate(p) == 0.0);

    CHECK_THROWS_AS(rate(RateParams{1.0, {1.0, 1.0, 1.0}, 1}), std::invalid_argument);
    CHECK_THROWS_AS(rate(RateParams{1.0, {}, 0}), std::invalid_argument);
    CHECK_THROWS_AS(rate(RateParams{-1.0, {}, 1}), std::invalid_argument);
    CHECK_THROWS_AS(rate(RateParams{1.0, {NAN}, 1}), std::invalid_argument);
}

TEST_CASE("closed-form rates match the quadrature oracle on random parameters")
{
    CounterRng rng(99, 0, 2);
    for (int k = 0; k < 200; ++k) {
        const double g = log_uniform(rng, 0.01, 100.0);
        const double d1 = log_uniform(rng, 0.01, 100.0);
        const double d2 = log_uniform(rng, 0.01, 100.0);
        const int m = uniform_int(rng, 1, 8);
        CAPTURE(g);
        CAPTURE(d1);
        CAPTURE(d2);
        CAPTURE(m);
        CHECK(relative_error(rate_bf(g, m),
                             oracle(numerics::DensityKind::pure_gamma, {g, double(m)})) < 1e-8);
        CHECK(relative_error(rate_i2(g, d1, m),
                             oracle(numerics::DensityKind::gamma_ratio_1, {g, d1, double(m)})) <
              1e-7);
        CHECK(relative_error(rate_i3(g, d1, d2, m), oracle(numerics::DensityKind::gamma_ratio_2,
                                                           {g, d1, d2, double(m)})) < 1e-7);
    }
}

TEST_CASE("closed-form rates match the tail-probability oracle")
{
    CounterRng rng(5, 0, 3);
    for (int k = 0; k < 6; ++k) {
        const double g = log_uniform(rng, 0.05, 50.0);
        const double d1 = log_uniform(rng, 0.05, 50.0);
        const double d2 = log_uniform(rng, 0.05, 50.0);
        const int m = uniform_int(rng, 1, 6);
        CAPTURE(g);
        CAPTURE(d1);
        CAPTURE(d2);
        CAPTURE(m);
        CHECK(relative_error(rate_bf(g, m), oracle_rate(g, {}, m)) < 1e-9);
        CHECK(relative_error(rate_i2(g, d1, m), oracle_rate(g, {d1}, m)) < 1e-8);
        CHECK(relative_error(rate_i3(g, d1, d2, m), oracle_rate(g, {d1, d2}, m)) < 1e-8);
    }
}

TEST_CASE("rates are monotone in signal, interference and degrees of freedom")
{
    CounterRng rng(11, 0, 4);
    for (int k = 0; k < 200; ++k) {
        const double g = log_uniform(rng, 0.01, 100.0);
        const double d1 = log_uniform(rng, 0.01, 100.0);
        const double d2 = log_uniform(rng, 0.01, 100.0);
        const int m = uniform_int(rng, 1, 7);
        const double up = 1.1;
        CAPTURE(g);
        CAPTURE(d1);
        CAPTURE(d2);
        CAPTURE(m);
        const double base = rate_i3(g, d1, d2, m);
        CHECK(rate_i3(g * up, d1, d2, m) > base);
        CHECK(rate_i3(g, d1 * up, d2, m) < base);
        CHECK(rate_i3(g, d1, d2 * up, m) < base);
        CHECK(rate_i3(g, d1, d2, m + 1) > base);
        CHECK(rate_i2(g * up, d1, m) > rate_i2(g, d1, m));
        CHECK(rate_i2(g, d1 * up, m) < rate_i2(g, d1, m));
        CHECK(rate_bf(g * up, m) > rate_bf(g, m));
        CHECK(rate_bf(g, m + 1) > rate_bf(g, m));
    }
}

TEST_CASE("reduction chain and interferer symmetry")
{
    CounterRng rng(12, 0, 5);
    for (int k = 0; k < 200; ++k) {
        const double g = log_uniform(rng, 0.01, 100.0);
        const double d1 = log_uniform(rng, 0.01, 100.0);
        const double d2 = log_uniform(rng, 0.01, 100.0);
        const int m = uniform_int(rng, 1, 8);
        CHECK(rate_i3(g, d1, 0.0, m) == rate_i2(g, d1, m));
        CHECK(rate_i2(g, 0.0, m) == rate_bf(g, m));
        CHECK(rate_i3(g, d1, d2, m) == rate_i3(g, d2, d1, m));
        // Interference just above the floor is already negligible.
        CHECK(relative_error(rate_i2(g, 1e-9, m), rate_bf(g, m)) < 1e-7);
    }
}

TEST_CASE("quantization factor")
{
    CHECK(quantization_xi(1, 2) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    for (int nt = 2; nt <= 8; ++nt) {
        // One codeword: E[cos^2] of a random direction is 1/nt.
        CHECK(quantization_xi(0, nt) == doctest::Approx(1.0 / nt).epsilon(1e-13));
        double prev = quantization_xi(0, nt);
        for (int b = 1; b <= 40; ++b) {
            const double xi = quantization_xi(b, nt);
            CHECK(xi > prev);
            CHECK(xi < 1.0);
            if (b <= 12) {
                const double size = std::exp2(b);
                const double ref =
                    1.0 - size * boost::math::beta(size, static_cast<double>(nt) / (nt - 1));
                CHECK(xi == doctest::Approx(ref).epsilon(1e-12));
            }
            prev = xi;
        }
    }
    // Large L: 1 - xi -> Gamma(y) L^{1 - y}.
    CHECK(1.0 - quantization_xi(60, 4) ==
          doctest::Approx(std::tgamma(4.0 / 3.0) * std::exp2(-20.0)).epsilon(1e-6));
    CHECK_THROWS_AS(quantization_xi(4, 1), std::domain_error);
    CHECK_THROWS_AS(quantization_xi(-1, 4), std::domain_error);
}

TEST_CASE("residual interference factor")
{
    CHECK(residual_kappa(0, 4) == 1.0);
    CHECK(residual_kappa(18, 4) == 0.015625);
    CHECK(residual_kappa(10, 4) == doctest::Approx(0.09921).epsilon(1e-4));
    CHECK(residual_kappa(10, 4) == std::exp2(-10.0 / 3.0));
    const auto f = feedback_factors(10, 4);
    CHECK(f.xi == quantization_xi(10, 4));
    CHECK(f.kappa == residual_kappa(10, 4));
    CHECK_THROWS_AS(residual_kappa(3, 1), std::domain_error);
}

TEST_CASE("two-cell user rates follow the four strategy cases")
{
    const LinkBudget b = fixed_budget(Layout::two_cell, {{-0.1, 0.0}, {0.4, 0.0}}, 10.0);
    const Strategy IC = Strategy::cancel({1});
    const Strategy IC0 = Strategy::cancel({0});
    const double p11 = b(0, 0);
    const double p12 = b(0, 1);
    CHECK(user_rate_2cell(two_cell(BF, BF), b, 4, 0) == rate_i2(p11, p12, 4));
    CHECK(user_rate_2cell(two_cell(BF, IC0), b, 4, 0) == rate_bf(p11, 4));
    CHECK(user_rate_2cell(two_cell(IC, IC0), b, 4, 0) == rate_bf(p11, 3));
    CHECK(user_rate_2cell(two_cell(IC, BF), b, 4, 0) == rate_i2(p11, p12, 3));
    CHECK_THROWS_AS(user_rate_2cell(two_cell(IC, BF), b, 1, 0), std::invalid_argument);
    CHECK_THROWS_AS(user_rate_2cell(two_cell(BF, BF), b, 4, 2), std::invalid_argument);
}

TEST_CASE("swapping users of a mirrored two-cell placement swaps the rates")
{
    const LinkBudget b = fixed_budget(Layout::two_cell, {{-0.3, 0.0}, {0.7, 0.0}}, 5.0);
    const LinkBudget mirrored = fixed_budget(Layout::two_cell, {{-0.7, 0.0}, {0.3, 0.0}}, 5.0);
    const Strategy IC1 = Strategy::cancel({1});
    const Strategy IC0 = Strategy::cancel({0});
    const StrategyProfile p = two_cell(IC1, BF);
    const StrategyProfile q = two_cell(BF, IC0);
    CHECK(user_rate(p, b, 4, 0) == doctest::Approx(user_rate(q, mirrored, 4, 1)).epsilon(1e-13));
    CHECK(user_rate(p, b, 4, 1) == doctest::Approx(user_rate(q, mirrored, 4, 0)).epsilon(1e-13));
}

TEST_CASE("three-cell user rates follow the strategy cases")
{
    PlacementSpec spec;
    spec.mode = PlacementSpec::Mode::random_shadow;
    const LinkBudget b = build_scenario(Layout::three_cell, spec, 10.0, 3.7, 4, 17).budget;
    const StrategyProfile all_bf{{BF, BF, BF}};
    CHECK(user_rate_3cell(all_bf, b, 4, 0) == rate_i3(b(0, 0), b(0, 1), b(0, 2), 4));

    const StrategyProfile both_help{{BF, Strategy::cancel({0}), Strategy::cancel({0})}};
    CHECK(user_rate_3cell(both_help, b, 4, 0) == rate_bf(b(0, 0), 4));

    const StrategyProfile one_help{{Strategy::cancel({1, 2}), Strategy::cancel({0}), BF}};
    CHECK(user_rate_3cell(one_help, b, 4, 0) == rate_i2(b(0, 0), b(0, 2), 2));
    CHECK(user_rate_3cell(one_help, b, 4, 2) == rate_i3(b(2, 2), b(2, 1), 0.0, 4));

    CHECK_THROWS_AS(user_rate_3cell(one_help, b, 2, 0), std::invalid_argument);
    CHECK_THROWS_AS(user_rate_3cell(StrategyProfile{{BF, BF}}, b, 4, 0), std::invalid_argument);
}

TEST_CASE("limited-feedback rates")
{
    PlacementSpec spec;
    spec.mode = PlacementSpec::Mode::random_shadow;
    const LinkBudget b = build_scenario(Layout::three_cell, spec, 10.0, 3.7, 3, 23).budget;
    const StrategyProfile profile{{Strategy::cancel({1}), Strategy::cancel({0, 2}), BF}};

    SUBCASE("signal scaled by xi, canceled links leak kappa, others leak fully")
    {
        const FeedbackConfig fb = FeedbackConfig::uniform(3, 7, 9);
        const RateParams p = user_rate_params(profile, b, 3, 0, &fb);
        CHECK(p.signal_snr == b(0, 0) * quantization_xi(7, 3));
        CHECK(p.signal_dof == 2);
        REQUIRE(p.interferer_snrs.size() == 2);
        CHECK(p.interferer_snrs[0] == residual_kappa(9, 3) * b(0, 1));
        CHECK(p.interferer_snrs[1] == b(0, 2));
    }

    SUBCASE("fine quantization recovers the perfect-CSI rate")
    {
        const FeedbackConfig fb = FeedbackConfig::uniform(3, 30, 30);
        for (int u = 0; u < 3; ++u) {
            CHECK(std::abs(user_rate_3cell_lfb(profile, b, fb, 3, u) -
                           user_rate_3cell(profile, b, 3, u)) < 1e-3);
        }
    }

    SUBCASE("any finite feedback loses rate")
    {
        for (int bits : {0, 2, 6, 12, 20}) {
            const FeedbackConfig fb = FeedbackConfig::uniform(3, bits, bits);
            for (int u = 0; u < 3; ++u) {
                CHECK(user_rate_3cell_lfb(profile, b, fb, 3, u) <
                      user_rate_3cell(profile, b, 3, u));
            }
        }
    }

    SUBCASE("two-cell variant drops the missing interferer slot")
    {
        const LinkBudget b2 = fixed_budget(Layout::two_cell, {{-0.1, 0.0}, {0.5, 0.0}}, 10.0);
        const FeedbackConfig fb = FeedbackConfig::uniform(2, 10, 10);
        const StrategyProfile p{{Strategy::cancel({1}), Strategy::cancel({0})}};
        const double expected =
            rate_i2(quantization_xi(10, 4) * b2(0, 0), residual_kappa(10, 4) * b2(0, 1), 3);
        CHECK(user_rate_lfb(p, b2, fb, 4, 0) == expected);
    }

    SUBCASE("bad feedback configs are rejected")
    {
        FeedbackConfig fb = FeedbackConfig::uniform(2, 4, 4);
        CHECK_THROWS_AS(user_rate_lfb(profile, b, fb, 3, 0), std::invalid_argument);
        fb = FeedbackConfig::uniform(3, 4, 4);
        fb.at(0, 1) = -2;
        CHECK_THROWS_AS(user_rate_lfb(profile, b, fb, 3, 0), std::invalid_argument);
    }
}
