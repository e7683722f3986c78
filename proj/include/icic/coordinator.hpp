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

#include <span>
#include <utility>
#include <vector>

namespace icic {

struct RateReport {
    StrategyProfile profile;
    std::vector<double> user_rates;
    double sum_rate = 0.0;
    int csi_cost = 0;

    double min_rate() const;
};

/// The neighbour of `bs` whose user receives the most power from it;
/// ties go to the lower index. Three-cell only.
int nearest_victim(const LinkBudget& budget, int bs);

/// Candidate strategies of one BS: {BF, IC} with two cells, {BF,
/// IC(nearest victim), IC(both neighbours)} with three. Strategies needing
/// more than nt - 1 nulls are left out.
std::vector<Strategy> candidate_strategies(const LinkBudget& budget, int nt, int bs);

/// Cartesian product of the per-BS candidate sets, BS 0 varying slowest.
std::vector<StrategyProfile> enumerate_profiles(const LinkBudget& budget, int nt);

StrategyProfile all_beamforming(int cells);
/// Every BS cancels toward every neighbour. Needs nt >= cells.
StrategyProfile all_cancel(int cells);

/// Per-user rates of one profile: closed form for perfect CSI, the
/// limited-feedback approximation when `fb` is given.
RateReport evaluate_profile(const StrategyProfile& profile, const LinkBudget& budget, int nt,
                            const FeedbackConfig* fb = nullptr);

/// Exhaustive sum-rate argmax over enumerate_profiles(). Ties (within 1e-12
/// relative) go to fewer zero-forcing constraints, then to the
/// lexicographically smaller vector of victim masks.
RateReport select_joint(const LinkBudget& budget, int nt, const FeedbackConfig* fb = nullptr);

/// Same search restricted to `candidates` (all must be feasible).
RateReport select_among(std::span<const StrategyProfile> candidates, const LinkBudget& budget,
                        int nt, const FeedbackConfig* fb = nullptr);

/// Single pass, no message exchange: each BS scores its own candidates
/// assuming every other BS beamforms, with outer-cluster interference
/// folded into the noise (noise power 1 + outer_noise_floor), and keeps its
/// best. Same tie-break as select_joint.
StrategyProfile select_distributed(const LinkBudget& budget, int nt,
                                   double outer_noise_floor = 0.0);

/// Channel directions fed back: one per user for its home BS plus one per
/// (user, helper BS) pair where the helper cancels toward that user.
int csi_cost(const StrategyProfile& profile);

/// Smallest B with (nt - 1) log2(2 p0 / (delta_r - 1)) <= B, clamped at 0.
/// p0 linear, delta_r linear (> 1).
int bstar_bits(double p0_linear, int nt, double delta_r);

struct BitAllocation {
    int home_bits = 0;
    int helper_bits = 0;
    RateReport report;
};

/// Exhaustive search over (B_s, B_I) pairs and strategy profiles using the
/// limited-feedback rates. Every pair must satisfy B_s + (cells - 1) B_I =
/// total_bits. Ties go to the larger B_s.
BitAllocation allocate_bits(const LinkBudget& budget, int nt, int total_bits,
                            std::span<const std::pair<int, int>> allowed_pairs);

} // namespace icic
