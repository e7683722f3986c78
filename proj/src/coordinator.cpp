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

#include "icic/coordinator.hpp"

#include "icic/rate_engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace icic {

namespace {

// A user's rate only depends on (signal dof, which neighbours interfere and
// how strongly), so the 27 three-cell profiles share at most 12 distinct
// evaluations per user.
class RateCache {
public:
    double get(const RateParams& p)
    {
        for (const auto& [key, value] : entries_) {
            if (key.signal_dof == p.signal_dof && key.signal_snr == p.signal_snr &&
                key.interferer_snrs == p.interferer_snrs) {
                return value;
            }
        }
        const double value = rate(p);
        entries_.emplace_back(p, value);
        return value;
    }

private:
    std::vector<std::pair<RateParams, double>> entries_;
};

RateReport evaluate_cached(const StrategyProfile& profile, const LinkBudget& budget, int nt,
                           const FeedbackConfig* fb, std::vector<RateCache>& caches)
{
    RateReport report;
    report.profile = profile;
    report.csi_cost = csi_cost(profile);
    for (int i = 0; i < profile.cells(); ++i) {
        const double r =
            caches[static_cast<std::size_t>(i)].get(user_rate_params(profile, budget, nt, i, fb));
        report.user_rates.push_back(r);
        report.sum_rate += r;
    }
    return report;
}

std::vector<std::uint32_t> masks(const StrategyProfile& p)
{
    std::vector<std::uint32_t> out;
    for (const auto& s : p.per_bs) {
        out.push_back(s.victim_mask());
    }
    return out;
}

// True if `a` should replace the incumbent `b`.
bool better(double rate_a, const StrategyProfile& a, double rate_b, const StrategyProfile& b)
{
    const double tol = 1e-12 * std::max(std::abs(rate_a), std::abs(rate_b));
    if (rate_a > rate_b + tol) {
        return true;
    }
    if (rate_a < rate_b - tol) {
        return false;
    }
    if (a.ic_constraints() != b.ic_constraints()) {
        return a.ic_constraints() < b.ic_constraints();
    }
    return masks(a) < masks(b);
}

void check_budget(const LinkBudget& budget, int nt)
{
    if (budget.cells != 2 && budget.cells != 3) {
        throw std::invalid_argument("coordinator: two or three cells are supported");
    }
    if (nt < 1) {
        throw std::invalid_argument("coordinator: nt must be >= 1");
    }
}

} // namespace

double RateReport::min_rate() const
{
    return user_rates.empty() ? 0.0 : *std::min_element(user_rates.begin(), user_rates.end());
}

int nearest_victim(const LinkBudget& budget, int bs)
{
    if (budget.cells != 3) {
        throw std::invalid_argument("nearest_victim: three-cell layout required");
    }
    if (bs < 0 || bs >= 3) {
        throw std::invalid_argument("nearest_victim: BS index out of range");
    }
    int best = -1;
    for (int k = 0; k < 3; ++k) {
        if (k == bs) {
            continue;
        }
        if (best < 0 || budget(k, bs) > budget(best, bs)) {
            best = k;
        }
    }
    return best;
}

std::vector<Strategy> candidate_strategies(const LinkBudget& budget, int nt, int bs)
{
    check_budget(budget, nt);
    std::vector<Strategy> out{Strategy::beamforming()};
    if (nt < 2) {
        return out;
    }
    if (budget.cells == 2) {
        out.push_back(Strategy::cancel({1 - bs}));
        return out;
    }
    out.push_back(Strategy::cancel({nearest_victim(budget, bs)}));
    if (nt >= 3) {
        out.push_back(Strategy::cancel({(bs + 1) % 3, (bs + 2) % 3}));
    }
    return out;
}

std::vector<StrategyProfile> enumerate_profiles(const LinkBudget& budget, int nt)
{
    check_budget(budget, nt);
    std::vector<StrategyProfile> out{StrategyProfile{}};
    for (int bs = 0; bs < budget.cells; ++bs) {
        const auto options = candidate_strategies(budget, nt, bs);
        std::vector<StrategyProfile> next;
        for (const auto& partial : out) {
            for (const auto& s : options) {
                StrategyProfile p = partial;
                p.per_bs.push_back(s);
                next.push_back(std::move(p));
            }
        }
        out = std::move(next);
    }
    return out;
}

StrategyProfile all_beamforming(int cells)
{
    StrategyProfile p;
    p.per_bs.assign(static_cast<std::size_t>(cells), Strategy::beamforming());
    return p;
}

StrategyProfile all_cancel(int cells)
{
    StrategyProfile p;
    const std::uint32_t all = (1u << cells) - 1u;
    for (int j = 0; j < cells; ++j) {
        p.per_bs.push_back(Strategy::from_mask(all & ~(1u << j)));
    }
    return p;
}

RateReport evaluate_profile(const StrategyProfile& profile, const LinkBudget& budget, int nt,
                            const FeedbackConfig* fb)
{
    std::vector<RateCache> caches(static_cast<std::size_t>(profile.cells()));
    return evaluate_cached(profile, budget, nt, fb, caches);
}

RateReport select_among(std::span<const StrategyProfile> candidates, const LinkBudget& budget,
                        int nt, const FeedbackConfig* fb)
{
    if (candidates.empty()) {
        throw std::invalid_argument("select_among: no candidate profiles");
    }
    std::vector<RateCache> caches(static_cast<std::size_t>(budget.cells));
    RateReport best;
    bool have = false;
    for (const auto& p : candidates) {
        RateReport r = evaluate_cached(p, budget, nt, fb, caches);
        if (!have || better(r.sum_rate, r.profile, best.sum_rate, best.profile)) {
            best = std::move(r);
            have = true;
        }
    }
    return best;
}

RateReport select_joint(const LinkBudget& budget, int nt, const FeedbackConfig* fb)
{
    const auto profiles = enumerate_profiles(budget, nt);
    RateReport best = select_among(profiles, budget, nt, fb);
    best.profile.mode = SelectionMode::joint;
    return best;
}

StrategyProfile select_distributed(const LinkBudget& budget, int nt, double outer_noise_floor)
{
    check_budget(budget, nt);
    if (!(outer_noise_floor >= 0.0) || !std::isfinite(outer_noise_floor)) {
        throw std::invalid_argument("select_distributed: outer noise floor must be >= 0");
    }
    // Dividing every SNR by the inflated noise power is the same as raising
    // the noise.
    LinkBudget local = budget;
    for (double& v : local.received_snr) {
        v /= 1.0 + outer_noise_floor;
    }

    StrategyProfile chosen = all_beamforming(budget.cells);
    chosen.mode = SelectionMode::distributed;
    for (int bs = 0; bs < budget.cells; ++bs) {
        StrategyProfile best_trial;
        double best_rate = 0.0;
        bool have = false;
        for (const auto& s : candidate_strategies(local, nt, bs)) {
            StrategyProfile trial = all_beamforming(budget.cells);
            trial.per_bs[static_cast<std::size_t>(bs)] = s;
            const double r = evaluate_profile(trial, local, nt).sum_rate;
            if (!have || better(r, trial, best_rate, best_trial)) {
                best_trial = trial;
                best_rate = r;
                have = true;
            }
        }
        chosen.per_bs[static_cast<std::size_t>(bs)] =
            best_trial.per_bs[static_cast<std::size_t>(bs)];
    }
    return chosen;
}

int csi_cost(const StrategyProfile& profile)
{
    return profile.cells() + profile.ic_constraints();
}

int bstar_bits(double p0_linear, int nt, double delta_r)
{
    if (!(delta_r > 1.0)) {
        throw std::domain_error("bstar_bits: delta_r must exceed 1");
    }
    if (!(p0_linear > 0.0) || !std::isfinite(p0_linear)) {
        throw std::domain_error("bstar_bits: p0 must be positive and finite");
    }
    if (nt < 2) {
        throw std::domain_error("bstar_bits: nt must be >= 2");
    }
    const double bound = (nt - 1) * std::log2(2.0 * p0_linear / (delta_r - 1.0));
    // The slack keeps an exact integer bound from rounding up by one ulp.
    return std::max(0, static_cast<int>(std::ceil(bound - 1e-9)));
}

BitAllocation allocate_bits(const LinkBudget& budget, int nt, int total_bits,
                            std::span<const std::pair<int, int>> allowed_pairs)
{
    check_budget(budget, nt);
    if (allowed_pairs.empty()) {
        throw std::invalid_argument("allocate_bits: no allowed bit pairs");
    }
    const int helpers = budget.cells - 1;
    BitAllocation best;
    bool have = false;
    for (const auto& [bs_bits, bi_bits] : allowed_pairs) {
        if (bs_bits < 0 || bi_bits < 0 || bs_bits + helpers * bi_bits != total_bits) {
            throw std::invalid_argument("allocate_bits: pair (" + std::to_string(bs_bits) + "," +
                                        std::to_string(bi_bits) +
                                        ") does not meet the bit budget");
        }
        const FeedbackConfig fb = FeedbackConfig::uniform(budget.cells, bs_bits, bi_bits);
        RateReport r = select_joint(budget, nt, &fb);
        const double tol = 1e-12 * std::max(std::abs(r.sum_rate), std::abs(best.report.sum_rate));
        const bool wins = !have || r.sum_rate > best.report.sum_rate + tol ||
                          (r.sum_rate >= best.report.sum_rate - tol && bs_bits > best.home_bits);
        if (wins) {
            best = {bs_bits, bi_bits, std::move(r)};
            have = true;
        }
    }
    return best;
}

} // namespace icic
