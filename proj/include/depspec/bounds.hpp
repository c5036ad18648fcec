// Copyright 2026 The depspec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "depspec/core.hpp"
#include "depspec/sources.hpp"
#include "depspec/spectral.hpp"

namespace depspec {

/// Spectrum-based bounds on P(e(X^n) != f(Y^n)).
///
///   T1 = 2 sqrt(sum P_i) sqrt(sum Q_i)
///   T2 = 2 sum_i (1 - 2 eps)^|i| sqrt(P_i Q_i)
///   lower = T1 - T2,  upper = 1 - T1 + T2
///
/// Raw values are kept; they can leave [0, 1] for extreme spectra.
struct BoundPair {
    double lower = 0.0;
    double upper = 1.0;
    double t1 = 0.0;
    double t2 = 0.0;
    bool outside_proven_regime = false;  // eps > 1/2

    double lower_display() const { return std::clamp(lower, 0.0, 1.0); }
    double upper_display() const { return std::clamp(upper, 0.0, 1.0); }
};

/// C_i = (1 - 2 eps)^|i|.
inline double coefficient_C(double eps, SubsetMask m) {
    if (!(eps >= 0.0 && eps <= 1.0)) {
        throw std::invalid_argument("eps must lie in [0, 1]");
    }
    return std::pow(1.0 - 2.0 * eps, m.weight());
}

inline BoundPair theorem1_bounds(const DependencySpectrum &P, const DependencySpectrum &Q, double eps) {
    if (P.n != Q.n) {
        throw std::invalid_argument("spectra have different n");
    }
    if (!(eps >= 0.0 && eps <= 1.0)) {
        throw std::invalid_argument("eps must lie in [0, 1]");
    }
    const double rho = 1.0 - 2.0 * eps;
    std::vector<double> powers(P.n + 1, 1.0);
    for (int k = 1; k <= P.n; ++k) {
        powers[k] = powers[k - 1] * rho;
    }
    double shared = 0.0;
    for (uint32_t m = 1; m < P.P.size(); ++m) {
        if (P.P[m] > 0.0 && Q.P[m] > 0.0) {
            shared += powers[std::popcount(m)] * std::sqrt(P.P[m] * Q.P[m]);
        }
    }
    BoundPair out;
    out.t1 = 2.0 * std::sqrt(std::max(P.total(), 0.0)) * std::sqrt(std::max(Q.total(), 0.0));
    out.t2 = 2.0 * shared;
    out.lower = out.t1 - out.t2;
    out.upper = 1.0 - out.lower;
    out.outside_proven_regime = eps > 0.5;
    return out;
}

/// (1 - 2 eps) sqrt(E g^2) sqrt(E h^2) - E[g(X) h(Y)] for single-coordinate zero-mean g, h.
/// A nonnegative margin means the single-letter correlation inequality holds.
inline double lemma4_check(const RealTable &g, const RealTable &h, const PairSource &s) {
    if (g.n() != 1 || h.n() != 1) {
        throw std::invalid_argument("lemma4_check takes single-coordinate tables");
    }
    const BinarySource x = s.x_source();
    const BinarySource y = s.y_source();
    const double mean_g = x.prob(false) * g[0] + x.prob(true) * g[1];
    const double mean_h = y.prob(false) * h[0] + y.prob(true) * h[1];
    if (std::abs(mean_g) > 1e-12 || std::abs(mean_h) > 1e-12) {
        throw std::invalid_argument("lemma4_check needs zero-mean inputs");
    }
    const double eg2 = x.prob(false) * g[0] * g[0] + x.prob(true) * g[1] * g[1];
    const double eh2 = y.prob(false) * h[0] * h[0] + y.prob(true) * h[1] * h[1];
    double cross = 0.0;
    for (int xv = 0; xv < 2; ++xv) {
        for (int yv = 0; yv < 2; ++yv) {
            cross += s.pi(xv, yv) * g[xv] * h[yv];
        }
    }
    return (1.0 - 2.0 * s.eps()) * std::sqrt(eg2) * std::sqrt(eh2) - cross;
}

/// Pointwise 1 XOR f; its embedding is the negated embedding of f.
inline BooleanFunction complement(const BooleanFunction &f) { return ~f; }

}  // namespace depspec
