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

#include "icic/mc_simulator.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace icic {

namespace {

constexpr std::uint32_t kCodebookStream = 0xC0DE0000u;
constexpr std::uint32_t kSignalStream = 0x51600000u;
constexpr std::uint32_t kInterferenceStream = 0x1F000000u;
constexpr std::uint32_t kLeakageStream = 0x1EA00000u;
constexpr double kRankTolerance = 1e-12;

void check_nt(int nt)
{
    if (nt < 1 || nt > kMaxAntennas) {
        throw std::invalid_argument("nt must be in [1, " + std::to_string(kMaxAntennas) + "]");
    }
}

AntennaVector scaled(const AntennaVector& a, double s)
{
    AntennaVector out(a.size);
    for (int k = 0; k < a.size; ++k) {
        out[k] = a[k] * s;
    }
    return out;
}

// w -= q (q^H w)
void remove_component(AntennaVector& w, const AntennaVector& q)
{
    const cdouble c = inner(q, w);
    for (int k = 0; k < w.size; ++k) {
        w[k] -= q[k] * c;
    }
}

// Non-throwing core of beamformer_zf; false on a rank-deficient problem.
bool zf_direction(const AntennaVector& h, const AntennaVector* const* victims, int m,
                  AntennaVector& out)
{
    std::array<AntennaVector, kMaxAntennas> basis;
    for (int v = 0; v < m; ++v) {
        AntennaVector w = *victims[v];
        const double original = w.norm();
        for (int pass = 0; pass < 2; ++pass) {
            for (int q = 0; q < v; ++q) {
                remove_component(w, basis[static_cast<std::size_t>(q)]);
            }
        }
        const double n = w.norm();
        if (!(n > kRankTolerance * original)) {
            return false;
        }
        basis[static_cast<std::size_t>(v)] = scaled(w, 1.0 / n);
    }
    AntennaVector f = h;
    const double original = f.norm();
    for (int pass = 0; pass < 2; ++pass) {
        for (int q = 0; q < m; ++q) {
            remove_component(f, basis[static_cast<std::size_t>(q)]);
        }
    }
    const double n = f.norm();
    if (!(n > kRankTolerance * original)) {
        return false;
    }
    out = scaled(f, 1.0 / n);
    return true;
}

struct Moments {
    double n = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x)
    {
        n += 1.0;
        const double d = x - mean;
        mean += d / n;
        m2 += d * (x - mean);
    }

    // Chan et al. pairwise combination.
    void merge(const Moments& o)
    {
        if (o.n == 0.0) {
            return;
        }
        if (n == 0.0) {
            *this = o;
            return;
        }
        const double total = n + o.n;
        const double d = o.mean - mean;
        mean += d * o.n / total;
        m2 += o.m2 + d * d * n * o.n / total;
        n = total;
    }

    McEstimate estimate() const
    {
        McEstimate e;
        e.mean = mean;
        e.trials = static_cast<std::int64_t>(n);
        e.std = n > 1.0 ? std::sqrt(m2 / (n - 1.0)) : 0.0;
        e.half_width_95 = e.half_width(1.96);
        return e;
    }
};

// Everything the trial loop needs, fixed before sampling starts.
struct BatchPlan {
    int cells = 0;
    int nt = 0;
    std::uint64_t seed = 0;
    std::vector<double> snr;                          // (user, bs)
    std::vector<std::vector<std::uint32_t>> masks;    // distinct victim masks per BS
    std::vector<std::vector<int>> choice;             // [profile][bs] -> index into masks[bs]
    std::vector<std::optional<Codebook>> codebooks;   // (user, bs); empty for perfect CSI
    std::vector<char> link_needed;                    // (user, bs) direction used by some precoder

    std::size_t profiles() const { return choice.size(); }
};

struct BlockMoments {
    std::vector<Moments> user;  // [profile * cells + user]
    std::vector<Moments> sum;   // [profile]

    explicit BlockMoments(const BatchPlan& plan)
        : user(plan.profiles() * static_cast<std::size_t>(plan.cells)), sum(plan.profiles())
    {
    }

    void merge(const BlockMoments& o)
    {
        for (std::size_t k = 0; k < user.size(); ++k) {
            user[k].merge(o.user[k]);
        }
        for (std::size_t k = 0; k < sum.size(); ++k) {
            sum[k].merge(o.sum[k]);
        }
    }
};

void run_trial(const BatchPlan& plan, std::uint64_t trial, BlockMoments& acc,
               std::vector<double>& gains)
{
    const int k = plan.cells;
    const ChannelRealization ch = ChannelRealization::draw(k, plan.nt, plan.seed, trial);

    // Directions the transmitters believe in.
    std::array<AntennaVector, 9> dir;
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            const std::size_t link = static_cast<std::size_t>(i * k + j);
            if (!plan.link_needed[link]) {
                continue;
            }
            dir[link] = plan.codebooks.empty() ? ch.h[link]
                                               : plan.codebooks[link]->quantize(ch.h[link]).direction;
        }
    }

    // gains[(i * k + j) * stride + c] = |h_{i,j}^H f_j(c)|^2
    const std::size_t stride = 4;
    for (int j = 0; j < k; ++j) {
        const auto& masks = plan.masks[static_cast<std::size_t>(j)];
        for (std::size_t c = 0; c < masks.size(); ++c) {
            const AntennaVector& own = dir[static_cast<std::size_t>(j * k + j)];
            AntennaVector f;
            const std::uint32_t mask = masks[c];
            bool ok = true;
            if (mask == 0) {
                f = scaled(own, 1.0 / own.norm());
            } else {
                std::array<const AntennaVector*, kMaxAntennas> victims{};
                int m = 0;
                for (int v = 0; v < k; ++v) {
                    if ((mask >> v) & 1u) {
                        victims[static_cast<std::size_t>(m++)] =
                            &dir[static_cast<std::size_t>(v * k + j)];
                    }
                }
                ok = zf_direction(own, victims.data(), m, f);
            }
            for (int i = 0; i < k; ++i) {
                const std::size_t link = static_cast<std::size_t>(i * k + j);
                // A degenerate projection has probability zero; treat it as
                // a silent BS rather than aborting a parallel region.
                gains[link * stride + c] = ok ? gain(f, ch.h[link]) : 0.0;
            }
        }
    }

    for (std::size_t p = 0; p < plan.profiles(); ++p) {
        const auto& choice = plan.choice[p];
        double total = 0.0;
        for (int i = 0; i < k; ++i) {
            double signal = 0.0;
            double denom = 1.0;
            for (int j = 0; j < k; ++j) {
                const std::size_t link = static_cast<std::size_t>(i * k + j);
                const double power =
                    plan.snr[link] *
                    gains[link * stride + static_cast<std::size_t>(choice[static_cast<std::size_t>(j)])];
                if (j == i) {
                    signal = power;
                } else {
                    denom += power;
                }
            }
            const double r = std::log2(1.0 + signal / denom);
            acc.user[p * static_cast<std::size_t>(k) + static_cast<std::size_t>(i)].add(r);
            total += r;
        }
        acc.sum[p].add(total);
    }
}

BlockMoments run_block(const BatchPlan& plan, std::int64_t first, std::int64_t last)
{
    BlockMoments acc(plan);
    std::vector<double> gains(static_cast<std::size_t>(plan.cells * plan.cells) * 4, 0.0);
    for (std::int64_t t = first; t < last; ++t) {
        run_trial(plan, static_cast<std::uint64_t>(t), acc, gains);
    }
    return acc;
}

BlockMoments reduce_serial(const BatchPlan& plan, const McConfig& cfg)
{
    BlockMoments total(plan);
    for (std::int64_t first = 0; first < cfg.trials; first += cfg.block_size) {
        total.merge(run_block(plan, first, std::min(cfg.trials, first + cfg.block_size)));
    }
    return total;
}

BlockMoments reduce_parallel(const BatchPlan& plan, const McConfig& cfg)
{
    const std::int64_t blocks = (cfg.trials + cfg.block_size - 1) / cfg.block_size;
    std::vector<BlockMoments> partial(static_cast<std::size_t>(blocks), BlockMoments(plan));
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t b = 0; b < blocks; ++b) {
        const std::int64_t first = b * cfg.block_size;
        partial[static_cast<std::size_t>(b)] =
            run_block(plan, first, std::min(cfg.trials, first + cfg.block_size));
    }
    // Block order, not completion order.
    BlockMoments total(plan);
    for (const auto& p : partial) {
        total.merge(p);
    }
    return total;
}

BatchPlan make_plan(const LinkBudget& budget, int nt, std::span<const StrategyProfile> profiles,
                    const FeedbackConfig* fb, const McConfig& cfg)
{
    check_nt(nt);
    cfg.validate();
    const int k = budget.cells;
    if (k < 2 || k > 3) {
        throw std::invalid_argument("mc_ergodic: two or three cells are supported");
    }
    if (profiles.empty()) {
        throw std::invalid_argument("mc_ergodic: no profiles");
    }
    BatchPlan plan;
    plan.cells = k;
    plan.nt = nt;
    plan.seed = cfg.seed;
    plan.snr = budget.received_snr;
    plan.masks.assign(static_cast<std::size_t>(k), {});
    plan.link_needed.assign(static_cast<std::size_t>(k * k), 0);
    for (int i = 0; i < k; ++i) {
        plan.link_needed[static_cast<std::size_t>(i * k + i)] = 1;
    }
    for (const auto& p : profiles) {
        if (p.cells() != k) {
            throw std::invalid_argument("mc_ergodic: profile cell count mismatch");
        }
        p.validate(nt);
        std::vector<int> choice;
        for (int j = 0; j < k; ++j) {
            const std::uint32_t mask = p.per_bs[static_cast<std::size_t>(j)].victim_mask();
            auto& masks = plan.masks[static_cast<std::size_t>(j)];
            auto it = std::find(masks.begin(), masks.end(), mask);
            if (it == masks.end()) {
                masks.push_back(mask);
                it = masks.end() - 1;
            }
            choice.push_back(static_cast<int>(it - masks.begin()));
            for (int v = 0; v < k; ++v) {
                if ((mask >> v) & 1u) {
                    plan.link_needed[static_cast<std::size_t>(v * k + j)] = 1;
                }
            }
        }
        plan.choice.push_back(std::move(choice));
    }
    for (const auto& masks : plan.masks) {
        if (masks.size() > 4) {
            throw std::invalid_argument("mc_ergodic: at most four strategies per BS in one batch");
        }
    }
    if (fb) {
        fb->validate();
        if (fb->cells != k) {
            throw std::invalid_argument("mc_ergodic: feedback config has the wrong cell count");
        }
        plan.codebooks.resize(static_cast<std::size_t>(k * k));
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k; ++j) {
                const std::size_t link = static_cast<std::size_t>(i * k + j);
                if (plan.link_needed[link]) {
                    plan.codebooks[link].emplace(nt, fb->at(i, j), cfg.seed, link);
                }
            }
        }
    }
    return plan;
}

} // namespace

AntennaVector::AntennaVector(int n) : size(n)
{
    check_nt(n);
}

double AntennaVector::norm_squared() const
{
    double s = 0.0;
    for (int k = 0; k < size; ++k) {
        s += std::norm(v[static_cast<std::size_t>(k)]);
    }
    return s;
}

double AntennaVector::norm() const
{
    return std::sqrt(norm_squared());
}

AntennaVector AntennaVector::complex_gaussian(int n, CounterRng& rng)
{
    AntennaVector out(n);
    for (int k = 0; k < n; ++k) {
        out[k] = rng.complex_normal();
    }
    return out;
}

AntennaVector AntennaVector::basis(int n, int k)
{
    AntennaVector out(n);
    if (k < 0 || k >= n) {
        throw std::invalid_argument("AntennaVector::basis: index out of range");
    }
    out[k] = 1.0;
    return out;
}

cdouble inner(const AntennaVector& a, const AntennaVector& b)
{
    cdouble s = 0.0;
    for (int k = 0; k < a.size; ++k) {
        s += std::conj(a[k]) * b[k];
    }
    return s;
}

double gain(const AntennaVector& a, const AntennaVector& b)
{
    return std::norm(inner(a, b));
}

AntennaVector beamformer_eigen(const AntennaVector& h_own)
{
    const double n = h_own.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw std::invalid_argument("beamformer_eigen: zero or non-finite channel");
    }
    return scaled(h_own, 1.0 / n);
}

AntennaVector beamformer_zf(const AntennaVector& h_own, std::span<const AntennaVector> victims)
{
    const int nt = h_own.size;
    const int m = static_cast<int>(victims.size());
    if (m < 1) {
        throw std::invalid_argument("beamformer_zf: at least one victim channel required");
    }
    if (m >= nt) {
        throw std::invalid_argument("beamformer_zf: can null toward at most nt - 1 users");
    }
    std::array<const AntennaVector*, kMaxAntennas> ptr{};
    for (int v = 0; v < m; ++v) {
        if (victims[static_cast<std::size_t>(v)].size != nt) {
            throw std::invalid_argument("beamformer_zf: victim dimension mismatch");
        }
        ptr[static_cast<std::size_t>(v)] = &victims[static_cast<std::size_t>(v)];
    }
    if (!(h_own.norm() > 0.0)) {
        throw std::invalid_argument("beamformer_zf: zero own channel");
    }
    AntennaVector f;
    if (!zf_direction(h_own, ptr.data(), m, f)) {
        throw std::invalid_argument("beamformer_zf: victim channels are rank deficient or span "
                                    "the own channel");
    }
    return f;
}

Codebook::Codebook(int nt, int bits, std::uint64_t seed, std::uint64_t link)
    : nt_(nt), seed_(seed)
{
    check_nt(nt);
    if (bits < 0 || bits > 24) {
        throw std::invalid_argument("Codebook: bits must be in [0, 24]");
    }
    size_ = std::size_t{1} << bits;
    re_.resize(size_ * static_cast<std::size_t>(nt));
    im_.resize(size_ * static_cast<std::size_t>(nt));
    CounterRng rng(seed, link, kCodebookStream | static_cast<std::uint32_t>(bits));
    for (std::size_t k = 0; k < size_; ++k) {
        AntennaVector w = AntennaVector::complex_gaussian(nt, rng);
        w = scaled(w, 1.0 / w.norm());
        for (int n = 0; n < nt; ++n) {
            re_[static_cast<std::size_t>(n) * size_ + k] = w[n].real();
            im_[static_cast<std::size_t>(n) * size_ + k] = w[n].imag();
        }
    }
}

Codebook Codebook::from_vectors(std::span<const AntennaVector> words)
{
    if (words.empty()) {
        throw std::invalid_argument("Codebook: empty codeword list");
    }
    Codebook cb;
    cb.nt_ = words[0].size;
    check_nt(cb.nt_);
    cb.size_ = words.size();
    cb.re_.resize(cb.size_ * static_cast<std::size_t>(cb.nt_));
    cb.im_.resize(cb.size_ * static_cast<std::size_t>(cb.nt_));
    for (std::size_t k = 0; k < cb.size_; ++k) {
        if (words[k].size != cb.nt_) {
            throw std::invalid_argument("Codebook: codeword dimension mismatch");
        }
        const AntennaVector w = beamformer_eigen(words[k]);
        for (int n = 0; n < cb.nt_; ++n) {
            cb.re_[static_cast<std::size_t>(n) * cb.size_ + k] = w[n].real();
            cb.im_[static_cast<std::size_t>(n) * cb.size_ + k] = w[n].imag();
        }
    }
    return cb;
}

AntennaVector Codebook::word(std::size_t k) const
{
    if (k >= size_) {
        throw std::out_of_range("Codebook::word: index out of range");
    }
    AntennaVector w(nt_);
    for (int n = 0; n < nt_; ++n) {
        w[n] = {re_[static_cast<std::size_t>(n) * size_ + k],
                im_[static_cast<std::size_t>(n) * size_ + k]};
    }
    return w;
}

Codebook::Match Codebook::quantize(const AntennaVector& h) const
{
    if (h.size != nt_) {
        throw std::invalid_argument("Codebook::quantize: dimension mismatch");
    }
    const double hn2 = h.norm_squared();
    if (!(hn2 > 0.0)) {
        throw std::invalid_argument("Codebook::quantize: zero channel");
    }
    std::array<double, kMaxAntennas> hr{};
    std::array<double, kMaxAntennas> hi{};
    for (int n = 0; n < nt_; ++n) {
        hr[static_cast<std::size_t>(n)] = h[n].real();
        hi[static_cast<std::size_t>(n)] = h[n].imag();
    }
    double best = -1.0;
    std::size_t best_k = 0;
    for (std::size_t k = 0; k < size_; ++k) {
        // h^H c
        double ar = 0.0;
        double ai = 0.0;
        for (int n = 0; n < nt_; ++n) {
            const double cr = re_[static_cast<std::size_t>(n) * size_ + k];
            const double ci = im_[static_cast<std::size_t>(n) * size_ + k];
            ar += hr[static_cast<std::size_t>(n)] * cr + hi[static_cast<std::size_t>(n)] * ci;
            ai += hr[static_cast<std::size_t>(n)] * ci - hi[static_cast<std::size_t>(n)] * cr;
        }
        const double score = ar * ar + ai * ai;
        if (score > best) {
            best = score;
            best_k = k;
        }
    }
    return {best_k, std::min(1.0, best / hn2), word(best_k)};
}

Codebook::Match rvq_quantize(const AntennaVector& h, const Codebook& codebook)
{
    return codebook.quantize(h);
}

ChannelRealization ChannelRealization::draw(int cells, int nt, std::uint64_t seed,
                                            std::uint64_t trial)
{
    check_nt(nt);
    if (cells < 1 || cells > 3) {
        throw std::invalid_argument("ChannelRealization: one to three cells");
    }
    ChannelRealization ch;
    ch.cells = cells;
    ch.nt = nt;
    ch.h.reserve(static_cast<std::size_t>(cells * cells));
    for (int link = 0; link < cells * cells; ++link) {
        CounterRng rng(seed, trial, static_cast<std::uint32_t>(link));
        ch.h.push_back(AntennaVector::complex_gaussian(nt, rng));
    }
    return ch;
}

double McEstimate::half_width(double z) const
{
    return trials > 0 ? z * std / std::sqrt(static_cast<double>(trials)) : 0.0;
}

void McConfig::validate() const
{
    if (trials < 1) {
        throw std::invalid_argument("McConfig: trials must be >= 1");
    }
    if (block_size < 1) {
        throw std::invalid_argument("McConfig: block_size must be >= 1");
    }
}

McBatchResult mc_ergodic_batch(const LinkBudget& budget, int nt,
                               std::span<const StrategyProfile> profiles,
                               const FeedbackConfig* fb, const McConfig& config)
{
    const BatchPlan plan = make_plan(budget, nt, profiles, fb, config);
    const BlockMoments total = config.execution == Execution::serial
                                   ? reduce_serial(plan, config)
                                   : reduce_parallel(plan, config);
    McBatchResult out;
    out.profiles.assign(profiles.begin(), profiles.end());
    const auto k = static_cast<std::size_t>(plan.cells);
    for (std::size_t p = 0; p < plan.profiles(); ++p) {
        std::vector<McEstimate> users;
        for (std::size_t i = 0; i < k; ++i) {
            users.push_back(total.user[p * k + i].estimate());
        }
        out.user.push_back(std::move(users));
        out.sum.push_back(total.sum[p].estimate());
    }
    return out;
}

std::vector<McEstimate> mc_ergodic_rate(const LinkBudget& budget, int nt,
                                        const StrategyProfile& profile,
                                        const FeedbackConfig* fb, const McConfig& config)
{
    return mc_ergodic_batch(budget, nt, std::span(&profile, 1), fb, config).user.front();
}

std::vector<double> sample_signal_power(int nt, int victims, std::int64_t samples,
                                        const McConfig& config)
{
    check_nt(nt);
    if (victims < 0 || victims >= nt) {
        throw std::invalid_argument("sample_signal_power: victims must be in [0, nt - 1]");
    }
    if (samples < 1) {
        throw std::invalid_argument("sample_signal_power: samples must be >= 1");
    }
    std::vector<double> out(static_cast<std::size_t>(samples));
    const bool parallel = config.execution == Execution::parallel;
#pragma omp parallel for schedule(static) if (parallel)
    for (std::int64_t s = 0; s < samples; ++s) {
        CounterRng rng(config.seed, static_cast<std::uint64_t>(s), kSignalStream);
        const AntennaVector h = AntennaVector::complex_gaussian(nt, rng);
        std::array<AntennaVector, kMaxAntennas> vic;
        std::array<const AntennaVector*, kMaxAntennas> ptr{};
        for (int v = 0; v < victims; ++v) {
            vic[static_cast<std::size_t>(v)] = AntennaVector::complex_gaussian(nt, rng);
            ptr[static_cast<std::size_t>(v)] = &vic[static_cast<std::size_t>(v)];
        }
        AntennaVector f;
        if (victims == 0) {
            f = scaled(h, 1.0 / h.norm());
        } else if (!zf_direction(h, ptr.data(), victims, f)) {
            f = AntennaVector(nt);
        }
        out[static_cast<std::size_t>(s)] = gain(f, h);
    }
    return out;
}

std::vector<double> sample_interference_power(int nt, std::int64_t samples,
                                              const McConfig& config)
{
    check_nt(nt);
    if (samples < 1) {
        throw std::invalid_argument("sample_interference_power: samples must be >= 1");
    }
    std::vector<double> out(static_cast<std::size_t>(samples));
    const bool parallel = config.execution == Execution::parallel;
#pragma omp parallel for schedule(static) if (parallel)
    for (std::int64_t s = 0; s < samples; ++s) {
        CounterRng rng(config.seed, static_cast<std::uint64_t>(s), kInterferenceStream);
        const AntennaVector own = AntennaVector::complex_gaussian(nt, rng);    // h_{j,j}
        const AntennaVector cross = AntennaVector::complex_gaussian(nt, rng);  // h_{i,j}
        out[static_cast<std::size_t>(s)] = gain(scaled(own, 1.0 / own.norm()), cross);
    }
    return out;
}

LeakageSamples sample_rvq_leakage(int nt, int bits, std::int64_t samples, const McConfig& config)
{
    check_nt(nt);
    if (nt < 2) {
        throw std::invalid_argument("sample_rvq_leakage: nt must be >= 2");
    }
    if (samples < 1) {
        throw std::invalid_argument("sample_rvq_leakage: samples must be >= 1");
    }
    const Codebook codebook(nt, bits, config.seed, 0);
    LeakageSamples out;
    out.leakage.resize(static_cast<std::size_t>(samples));
    out.misalignment.resize(static_cast<std::size_t>(samples));
    const bool parallel = config.execution == Execution::parallel;
#pragma omp parallel for schedule(static) if (parallel)
    for (std::int64_t s = 0; s < samples; ++s) {
        CounterRng rng(config.seed, static_cast<std::uint64_t>(s), kLeakageStream);
        const AntennaVector victim = AntennaVector::complex_gaussian(nt, rng);  // h_{i,j}
        const AntennaVector own = AntennaVector::complex_gaussian(nt, rng);     // h_{j,j}
        const Codebook::Match q = codebook.quantize(victim);
        const AntennaVector* ptr[1] = {&q.direction};
        AntennaVector f;
        const bool ok = zf_direction(own, ptr, 1, f);
        out.leakage[static_cast<std::size_t>(s)] = ok ? gain(f, victim) : 0.0;
        out.misalignment[static_cast<std::size_t>(s)] = 1.0 - q.alignment;
    }
    return out;
}

} // namespace icic
