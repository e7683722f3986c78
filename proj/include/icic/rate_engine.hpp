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

#pragma once

#include "icic/network_model.hpp"
#include "icic/strategy.hpp"

#include <vector>

// Closed-form ergodic rates E[log2(1 + SINR)] in bps/Hz. Signal power is
// Gamma(M, 1) (M unit-mean exponentials), each interferer a unit exponential,
// noise unit power; every SNR argument is linear.

namespace icic {

/// Interference below this (linear) is treated as absent.
inline constexpr double kInterferenceFloor = 1e-10;
/// Interferer pairs closer than this relative gap are evaluated by symmetric
/// perturbation.
inline constexpr double kEqualInterfererGap = 1e-6;

struct RateParams {
    double signal_snr = 0.0;
    std::vector<double> interferer_snrs;
    int signal_dof = 1;

    void validate() const;
};

/// E[log2(1 + snr Z)], Z ~ Gamma(m, 1). Zero for snr < 1e-12.
double rate_bf(double snr, int m);

/// E[log2(1 + g1 Z / (1 + g2 Y))].
double rate_i2(double signal_snr, double interferer_snr, int m);

/// E[log2(1 + a Z / (1 + d1 Y1 + d2 Y2))]. Symmetric in (d1, d2).
double rate_i3(double signal_snr, double interferer1, double interferer2, int m);

/// Dispatches on the number of interferers (0, 1, or 2).
double rate(const RateParams& params);

/// Mean squared alignment E[cos^2 theta] of a B-bit RVQ codeword with the
/// channel direction: 1 - L beta(L, nt/(nt-1)), L = 2^bits.
double quantization_xi(int bits, int nt);

/// Mean residual leakage after zero-forcing on B-bit quantized CDI,
/// 2^{-bits/(nt-1)}.
double residual_kappa(int bits, int nt);

struct FeedbackFactors {
    double xi = 1.0;
    double kappa = 0.0;
};

FeedbackFactors feedback_factors(int bits, int nt);

/// Perfect-CSI ergodic rate of `user` under `profile` (either layout).
double user_rate(const StrategyProfile& profile, const LinkBudget& budget, int nt, int user);

/// Same with the 2-cell contract checked (exactly two cells).
double user_rate_2cell(const StrategyProfile& profile, const LinkBudget& budget, int nt,
                       int user);

/// Same with the 3-cell contract checked (exactly three cells).
double user_rate_3cell(const StrategyProfile& profile, const LinkBudget& budget, int nt,
                       int user);

/// Limited-feedback approximation: signal SNR scaled by xi_{i,i}, a
/// canceling neighbour leaks kappa_{i,j} P_{i,j}, a non-canceling neighbour
/// interferes with full P_{i,j}. Works for two or three cells.
double user_rate_lfb(const StrategyProfile& profile, const LinkBudget& budget,
                     const FeedbackConfig& fb, int nt, int user);

/// Three-cell contract checked.
double user_rate_3cell_lfb(const StrategyProfile& profile, const LinkBudget& budget,
                           const FeedbackConfig& fb, int nt, int user);

/// The RateParams `user_rate` / `user_rate_lfb` evaluate. Exposed so the
/// Monte Carlo side and tests can see exactly which case was dispatched.
RateParams user_rate_params(const StrategyProfile& profile, const LinkBudget& budget, int nt,
                            int user, const FeedbackConfig* fb = nullptr);

} // namespace icic
