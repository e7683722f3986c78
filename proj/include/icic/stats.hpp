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

#include <functional>
#include <span>
#include <vector>

namespace icic::stats {

/// One-sample Kolmogorov-Smirnov statistic sup |F_n - F|. Sorts `samples`.
double ks_statistic(std::vector<double>& samples, const std::function<double(double)>& cdf);

/// CDF of Gamma(shape, 1).
double gamma_cdf(double shape, double x);

/// Linear-interpolated percentile (p in [0, 100]) of unsorted data.
double percentile(std::vector<double> values, double p);

struct Summary {
    double mean = 0.0;
    double std = 0.0;
    double half_width_95 = 0.0;
    std::size_t count = 0;
};

Summary summarize(std::span<const double> values);

/// Smallest k with P[Bin(n, p) <= k] >= 1 - alpha.
int binomial_upper_quantile(int n, double p, double alpha);

} // namespace icic::stats
