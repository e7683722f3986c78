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

#include "icic/quadrature.hpp"

#include <span>

// Special functions and the integral family
//
//   I3(a, b, m)    = int_b^inf x^m e^{-ax} dx
//   I2(a, b, m, n) = int_0^inf x^m e^{-ax} / (x + b)^n dx
//   I1(a, b, m, n) = int_0^inf x^m e^{-ax} / ((x + b)^n (x + 1)) dx
//
// that the ergodic-rate closed forms reduce to. I2 and I1 are alternating
// sums; each evaluation carries a condition estimate and switches to
// numerical integration when the sum would lose too many digits.

namespace icic::numerics {

/// E1(x) = int_x^inf e^{-t}/t dt for x > 0. Underflows to 0 past x ~ 700;
/// use exp_integral_e1_scaled there.
double exp_integral_e1(double x);

/// e^x * E1(x). Finite for every x > 0.
double exp_integral_e1_scaled(double x);

/// e^x * E_n(x), E_n(x) = int_1^inf e^{-xt} t^{-n} dt, for n >= 1 and x > 0.
/// Series/recurrence below x = 1, Lentz continued fraction above.
double exp_integral_en_scaled(int n, double x);

/// Upper incomplete gamma with non-positive integer order, Gamma(-k, x).
double upper_gamma_neg_int(int k, double x);

/// Relative condition estimate above which a closed-form alternating sum is
/// abandoned in favour of quadrature (~5 of 16 digits lost).
inline constexpr double kClosedFormConditionLimit = 1e5;

/// A closed-form value together with how it was obtained.
struct IntegralValue {
    double value = 0.0;
    /// sum |terms| / |value| of the alternating sum (1 when no cancellation).
    double condition = 1.0;
    bool quadrature_fallback = false;
};

double integral_i3(double a, double b, int m);

/// e^{ab} * I3(a, b, m); avoids overflow of the e^{ab} prefactor in I2.
double integral_i3_scaled(double a, double b, int m);

IntegralValue integral_i2_detail(double a, double b, int m, int n);
double integral_i2(double a, double b, int m, int n);

IntegralValue integral_i1_detail(double a, double b, int m, int n);
double integral_i1(double a, double b, int m, int n);

/// Random variables whose E[log2(1 + X)] the oracle integrates.
///   pure_gamma:      X = g Z,                         params {g, M}
///   gamma_ratio_1:   X = g1 Z / (1 + g2 Y),           params {g1, g2, M}
///   gamma_ratio_2:   X = a Z / (1 + d1 Y1 + d2 Y2),   params {a, d1, d2, M}
/// with Z ~ Gamma(M, 1) and Y, Y1, Y2 unit exponentials, all independent.
enum class DensityKind { pure_gamma, gamma_ratio_1, gamma_ratio_2 };

/// Direct numerical integration of E[log2(1 + X)] over the densities above
/// (nested quadrature for the ratio kinds). Independent of the closed forms;
/// used as the reference they are tested against. `converged` is false if
/// the subdivision limit was hit anywhere.
QuadratureResult expected_log_oracle(DensityKind kind,
                                     std::span<const double> params,
                                     const QuadratureSpec& spec = {});

} // namespace icic::numerics
