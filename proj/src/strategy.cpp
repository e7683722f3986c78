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

#include "icic/strategy.hpp"

#include <cmath>
#include <stdexcept>

namespace icic {

Strategy Strategy::cancel(std::initializer_list<int> victims)
{
    std::uint32_t mask = 0;
    for (int v : victims) {
        if (v < 0 || v >= 32) {
            throw std::invalid_argument("Strategy::cancel: victim index out of range");
        }
        mask |= 1u << v;
    }
    return from_mask(mask);
}

std::string Strategy::label(int cells) const
{
    if (is_beamforming()) {
        return "BF";
    }
    if (cells == 2) {
        return "IC";
    }
    std::string out = "IC(";
    bool first = true;
    for (int v = 0; v < 32; ++v) {
        if (cancels(v)) {
            out += first ? "" : ",";
            out += std::to_string(v + 1);
            first = false;
        }
    }
    return out + ")";
}

int StrategyProfile::ic_constraints() const
{
    int total = 0;
    for (const auto& s : per_bs) {
        total += s.victim_count();
    }
    return total;
}

void StrategyProfile::validate(int nt) const
{
    const int k = cells();
    if (k < 1) {
        throw std::invalid_argument("StrategyProfile: empty profile");
    }
    for (int j = 0; j < k; ++j) {
        const Strategy& s = per_bs[static_cast<std::size_t>(j)];
        if (s.cancels(j)) {
            throw std::invalid_argument("StrategyProfile: BS " + std::to_string(j + 1) +
                                        " lists its own user as victim");
        }
        if ((s.victim_mask() >> k) != 0) {
            throw std::invalid_argument("StrategyProfile: victim outside the cluster");
        }
        if (s.victim_count() > nt - 1) {
            throw std::invalid_argument("StrategyProfile: BS " + std::to_string(j + 1) +
                                        " cancels toward " + std::to_string(s.victim_count()) +
                                        " users with only " + std::to_string(nt) +
                                        " antennas");
        }
    }
}

std::string StrategyProfile::label() const
{
    std::string out = "(";
    for (std::size_t j = 0; j < per_bs.size(); ++j) {
        out += (j ? "," : "") + per_bs[j].label(cells());
    }
    return out + ")";
}

FeedbackConfig FeedbackConfig::uniform(int cells, int home_bits, int helper_bits)
{
    FeedbackConfig fb;
    fb.cells = cells;
    fb.bits.assign(static_cast<std::size_t>(cells * cells), helper_bits);
    for (int i = 0; i < cells; ++i) {
        fb.at(i, i) = home_bits;
    }
    fb.validate();
    return fb;
}

double FeedbackConfig::codebook_size(int user, int bs) const
{
    return std::exp2(static_cast<double>(at(user, bs)));
}

void FeedbackConfig::validate() const
{
    if (cells < 1 || bits.size() != static_cast<std::size_t>(cells * cells)) {
        throw std::invalid_argument("FeedbackConfig: bits must be a cells x cells matrix");
    }
    for (int b : bits) {
        if (b < 0) {
            throw std::invalid_argument("FeedbackConfig: feedback bits must be >= 0");
        }
    }
}

} // namespace icic
