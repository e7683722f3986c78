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

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace icic {

/// Transmission strategy of one BS: selfish beamforming (empty victim set)
/// or zero-forcing toward the users of the cells in the victim set.
/// Cell and user indices are 0-based; labels print them 1-based.
class Strategy {
public:
    Strategy() = default;

    static Strategy beamforming() { return {}; }
    static Strategy cancel(std::initializer_list<int> victims);
    static Strategy from_mask(std::uint32_t mask)
    {
        Strategy s;
        s.victims_ = mask;
        return s;
    }

    bool is_beamforming() const { return victims_ == 0; }
    bool cancels(int user) const { return (victims_ >> user) & 1u; }
    int victim_count() const { return std::popcount(victims_); }
    std::uint32_t victim_mask() const { return victims_; }

    /// "BF", "IC" (two-cell), or "IC(2)" / "IC(2,3)".
    std::string label(int cells) const;

    friend bool operator==(const Strategy&, const Strategy&) = default;

private:
    std::uint32_t victims_ = 0;
};

enum class SelectionMode { joint, distributed };

struct StrategyProfile {
    std::vector<Strategy> per_bs;
    SelectionMode mode = SelectionMode::joint;

    int cells() const { return static_cast<int>(per_bs.size()); }

    /// Total number of zero-forcing constraints across all BSs.
    int ic_constraints() const;

    /// Throws std::invalid_argument if a BS lists itself or a nonexistent
    /// cell as victim, or spends more than nt - 1 degrees of freedom.
    void validate(int nt) const;

    /// "(IC,BF)" or "(BF,IC(1),IC(1,2))".
    std::string label() const;

    friend bool operator==(const StrategyProfile& a, const StrategyProfile& b)
    {
        return a.per_bs == b.per_bs;
    }
};

/// Per-link CDI feedback bits B_{i,j} (user i quantizing its channel from
/// BS j). Helper entries are only consumed when BS j cancels toward user i.
struct FeedbackConfig {
    int cells = 0;
    std::vector<int> bits;

    static FeedbackConfig uniform(int cells, int home_bits, int helper_bits);

    int at(int user, int bs) const { return bits[static_cast<std::size_t>(user * cells + bs)]; }
    int& at(int user, int bs) { return bits[static_cast<std::size_t>(user * cells + bs)]; }
    int home_bits(int user) const { return at(user, user); }

    /// Codebook size L_{i,j} = 2^{B_{i,j}}.
    double codebook_size(int user, int bs) const;

    void validate() const;
};

} // namespace icic
