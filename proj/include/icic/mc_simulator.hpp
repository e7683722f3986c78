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
#include "icic/rng.hpp"
#include "icic/strategy.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace icic {

inline constexpr int kMaxAntennas = 8;

using cdouble = std::complex<double>;

/// Complex column vector with at most kMaxAntennas entries, stored inline so
/// the trial loop never touches the heap.
struct AntennaVector {
    std::array<cdouble, kMaxAntennas> v{};
    int size = 0;

    AntennaVector() = default;
    explicit AntennaVector(int n);

    cdouble& operator[](int k) { return v[static_cast<std::size_t>(k)]; }
    const cdouble& operator[](int k) const { return v[static_cast<std::size_t>(k)]; }

    double norm_squared() const;
    double norm() const;

    /// Entries i.i.d. CN(0, 1).
    static AntennaVector complex_gaussian(int n, CounterRng& rng);
    static AntennaVector basis(int n, int k);
};

/// a^H b.
cdouble inner(const AntennaVector& a, const AntennaVector& b);
/// |a^H b|^2.
double gain(const AntennaVector& a, const AntennaVector& b);

/// h / ||h||. Throws std::invalid_argument for the zero vector.
AntennaVector beamformer_eigen(const AntennaVector& h_own);

/// Normalized projection of h_own onto the orthogonal complement of the
/// victim channels (modified Gram-Schmidt, two passes). Throws if there are
/// no victims, nt or more of them, a rank-deficient victim set, or h_own in
/// their span.
AntennaVector beamformer_zf(const AntennaVector& h_own, std::span<const AntennaVector> victims);

/// Random vector quantization codebook: L = 2^bits isotropic unit vectors,
/// real and imaginary parts stored component-major (entry n of codeword k at
/// n * L + k).
class Codebook {
public:
    Codebook(int nt, int bits, std::uint64_t seed, std::uint64_t link);

    /// Builds a codebook from explicit codewords (normalized on entry).
    static Codebook from_vectors(std::span<const AntennaVector> words);

    int nt() const { return nt_; }
    std::size_t size() const { return size_; }
    std::uint64_t seed() const { return seed_; }
    AntennaVector word(std::size_t k) const;

    struct Match {
        std::size_t index = 0;
        double alignment = 0.0;  // |h~^H c_k|^2 in [0, 1]
        AntennaVector direction;
    };

    /// argmax_k |h~^H c_k|, lowest index on ties. Throws for h = 0.
    Match quantize(const AntennaVector& h) const;

private:
    Codebook() = default;
    int nt_ = 0;
    std::size_t size_ = 0;
    std::uint64_t seed_ = 0;
    std::vector<double> re_;
    std::vector<double> im_;
};

/// Free-function form.
Codebook::Match rvq_quantize(const AntennaVector& h, const Codebook& codebook);

/// One fading draw h_{i,j} for every (user, BS) pair, CN(0, I) entries.
/// Link (i, j) of trial t comes from substream (seed, t, i * cells + j).
struct ChannelRealization {
    int cells = 0;
    int nt = 0;
    std::vector<AntennaVector> h;  // row-major (user, bs)

    const AntennaVector& at(int user, int bs) const
    {
        return h[static_cast<std::size_t>(user * cells + bs)];
    }

    static ChannelRealization draw(int cells, int nt, std::uint64_t seed, std::uint64_t trial);
};

struct McEstimate {
    double mean = 0.0;
    double half_width_95 = 0.0;  // 1.96 std / sqrt(trials)
    double std = 0.0;            // sample standard deviation
    std::int64_t trials = 0;

    double half_width(double z) const;
};

enum class Execution { serial, parallel };

struct McConfig {
    std::int64_t trials = 10000;
    std::uint64_t seed = 1;
    /// Trials per reduction block. Part of the result's identity: the same
    /// (seed, trials, block_size) gives bit-identical estimates whatever the
    /// thread count.
    int block_size = 1024;
    Execution execution = Execution::parallel;

    void validate() const;
};

struct McBatchResult {
    std::vector<StrategyProfile> profiles;
    std::vector<std::vector<McEstimate>> user;  // [profile][user]
    std::vector<McEstimate> sum;                // [profile]
};

/// Ergodic rates of several profiles on common fading draws. Precoders use
/// true channel directions, or the RVQ-quantized ones when `fb` is given
/// (per-link codebooks of 2^{B_{i,j}} words drawn from the seed).
McBatchResult mc_ergodic_batch(const LinkBudget& budget, int nt,
                               std::span<const StrategyProfile> profiles,
                               const FeedbackConfig* fb, const McConfig& config);

/// Per-user estimates for one profile.
std::vector<McEstimate> mc_ergodic_rate(const LinkBudget& budget, int nt,
                                        const StrategyProfile& profile,
                                        const FeedbackConfig* fb, const McConfig& config);

/// |f^H h_own|^2 samples with f eigen-beamforming (victims = 0) or ZF
/// against `victims` independent channels.
std::vector<double> sample_signal_power(int nt, int victims, std::int64_t samples,
                                        const McConfig& config);

/// |f_j^H h_{i,j}|^2 samples where f_j beamforms to BS j's own user.
std::vector<double> sample_interference_power(int nt, std::int64_t samples,
                                              const McConfig& config);

struct LeakageSamples {
    std::vector<double> leakage;          // |h^H f|^2, f ZF on the quantized h
    std::vector<double> misalignment;     // sin^2 of the quantization angle
};

/// Residual interference after zero-forcing on B-bit RVQ-quantized victim
/// CDI. One fixed codebook per run, fresh channels per sample.
LeakageSamples sample_rvq_leakage(int nt, int bits, std::int64_t samples,
                                  const McConfig& config);

} // namespace icic
