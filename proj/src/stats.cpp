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

#include "icic/stats.hpp"

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace icic::stats {

double ks_statistic(std::vector<double>& samples, const std::function<double(double)>& cdf)
{
    if (samples.empty()) {
        throw std::invalid_argument("ks_statistic: no samples");
    }
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const double f = cdf(samples[k]);
        d = std::max({d, (k + 1) / n - f, f - k / n});
    }
    return d;
}

double gamma_cdf(double shape, double x)
{
    return x <= 0.0 ? 0.0 : boost::math::gamma_p(shape, x);
}

double percentile(std::vector<double> values, double p)
{
    if (values.empty()) {
        throw std::invalid_argument("percentile: no values");
    }
    if (!(p >= 0.0 && p <= 100.0)) {
        throw std::invalid_argument("percentile: p must be in [0, 100]");
    }
    std::sort(values.begin(), values.end());
    const double pos = p / 100.0 * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    const double w = pos - static_cast<double>(lo);
    return values[lo] + w * (values[hi] - values[lo]);
}

Summary summarize(std::span<const double> values)
{
    Summary s;
    s.count = values.size();
    if (values.empty()) {
        return s;
    }
    double mean = 0.0;
    for (double v : values) {
        mean += v;
    }
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) {
        ss += (v - mean) * (v - mean);
    }
    s.mean = mean;
    s.std = values.size() > 1 ? std::sqrt(ss / static_cast<double>(values.size() - 1)) : 0.0;
    s.half_width_95 = 1.96 * s.std / std::sqrt(static_cast<double>(values.size()));
    return s;
}

int binomial_upper_quantile(int n, double p, double alpha)
{
    if (n < 0 || !(p >= 0.0 && p <= 1.0) || !(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("binomial_upper_quantile: bad arguments");
    }
    const boost::math::binomial_distribution<double> dist(n, p);
    for (int k = 0; k <= n; ++k) {
        if (boost::math::cdf(dist, static_cast<double>(k)) >= 1.0 - alpha) {
            return k;
        }
    }
    return n;
}

} // namespace icic::stats
