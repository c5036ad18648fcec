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

// Orthogonal decomposition of a real function of n i.i.d. bits into components
// that each depend on exactly one coordinate subset, and the component
// variances (the dependency spectrum).
//
// Two routes are provided and must agree:
//   * a reference route following conditional expectations over the subset
//     lattice (decompose_mobius, spectrum_recursive), materializing full tables;
//   * a fast route (coefficients_fast) that maps the table to the coefficients
//     c_i of the product basis prod_{t in i} h(X_t) with n in-place two-point
//     passes, O(n 2^n).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "depspec/core.hpp"
#include "depspec/sources.hpp"

namespace depspec {

/// A function {0,1}^n -> R weighted by the product measure of `measure`.
class RealTable {
   public:
    RealTable(int n, BinarySource measure) : n_(n), values_(size_t{1} << n, 0.0), measure_(measure) {}
    RealTable(int n, std::vector<double> values, BinarySource measure)
        : n_(n), values_(std::move(values)), measure_(measure) {
        if (values_.size() != (size_t{1} << n)) {
            throw std::invalid_argument("real table size must be 2^n");
        }
    }

    int n() const { return n_; }
    size_t size() const { return values_.size(); }
    const BinarySource &measure() const { return measure_; }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }
    double operator[](size_t idx) const { return values_[idx]; }
    double &operator[](size_t idx) { return values_[idx]; }

    RealTable operator-() const {
        RealTable out = *this;
        for (double &v : out.values_) {
            v = -v;
        }
        return out;
    }

   private:
    int n_;
    std::vector<double> values_;
    BinarySource measure_;
};

/// The coefficients c_i of a table in the basis prod_{t in i} h(X_t); c at mask 0 is the mean.
struct CoefficientVector {
    int n = 0;
    std::vector<double> c;
    double p = 0.5;

    double operator[](SubsetMask m) const { return c[m.bits]; }
};

/// Component variances P_i indexed by mask; P at mask 0 is always 0.
struct DependencySpectrum {
    int n = 0;
    std::vector<double> P;

    double operator[](SubsetMask m) const { return P[m.bits]; }
    double total() const {
        double sum = 0.0;
        for (double v : P) {
            sum += v;
        }
        return sum;
    }
};

/// Spectrum mass aggregated by mask weight.
struct WeightProfile {
    std::vector<double> W;  // W[k] = sum of P_i over masks of weight k, k = 0..n
    std::optional<int> min_effective_length;
    std::optional<double> mean_effective_length;  // undefined for a zero spectrum

    double total() const {
        double sum = 0.0;
        for (double v : W) {
            sum += v;
        }
        return sum;
    }
};

namespace detail {

/// Calls op(a, b) on every pair of entries that differ only in `coordinate` (0-based),
/// a at x = 0 and b at x = 1.
template <class Op>
void for_each_pair(std::span<double> values, int coordinate, Op &&op) {
    const size_t stride = size_t{1} << coordinate;
    for (size_t base = 0; base < values.size(); base += 2 * stride) {
        for (size_t j = base; j < base + stride; ++j) {
            op(values[j], values[j + stride]);
        }
    }
}

}  // namespace detail

/// E[t] under the product measure.
inline double expectation(const RealTable &t) {
    const double p = t.measure().p();
    std::vector<double> work(t.values().begin(), t.values().end());
    for (size_t len = work.size(); len > 1; len /= 2) {
        const size_t half = len / 2;
        for (size_t j = 0; j < half; ++j) {
            work[j] = (1.0 - p) * work[2 * j] + p * work[2 * j + 1];
        }
    }
    return work[0];
}

/// E[a * b] for two tables over the same measure.
inline double inner_product(const RealTable &a, const RealTable &b) {
    if (a.n() != b.n()) {
        throw std::invalid_argument("inner product of tables with different n");
    }
    RealTable prod(a.n(), a.measure());
    for (size_t i = 0; i < a.size(); ++i) {
        prod[i] = a[i] * b[i];
    }
    return expectation(prod);
}

inline double variance(const RealTable &t) {
    const double mean = expectation(t);
    return inner_product(t, t) - mean * mean;
}

/// q = P(e = 1) under the product measure of `src`.
inline double bias(const BooleanFunction &e, const BinarySource &src) {
    RealTable indicator(e.n(), src);
    for (uint64_t i = 0; i < e.size(); ++i) {
        indicator[i] = e[i] ? 1.0 : 0.0;
    }
    return expectation(indicator);
}

/// The zero-mean real embedding: 1 - q where e = 1 and -q elsewhere.
inline RealTable embed(const BooleanFunction &e, const BinarySource &src) {
    const double q = bias(e, src);
    RealTable out(e.n(), src);
    if (q == 0.0 || q == 1.0) {
        return out;
    }
    for (uint64_t i = 0; i < e.size(); ++i) {
        out[i] = e[i] ? 1.0 - q : -q;
    }
    return out;
}

/// E[t | X_m], stored at full resolution (constant along coordinates outside m).
inline RealTable conditional_expectation(const RealTable &t, SubsetMask m) {
    const double p = t.measure().p();
    RealTable out = t;
    for (int s = 0; s < t.n(); ++s) {
        if (m.has(s + 1)) {
            continue;
        }
        detail::for_each_pair(out.values(), s, [p](double &a, double &b) {
            const double avg = (1.0 - p) * a + p * b;
            a = avg;
            b = avg;
        });
    }
    return out;
}

/// Components e_i = E[t | X_i] - sum_{j strictly within i} e_j, one full table per mask,
/// computed in increasing weight order. Memory is 4^n doubles; intended for n <= 12.
inline std::vector<RealTable> decompose_mobius(const RealTable &t) {
    const int n = t.n();
    std::vector<RealTable> comps(size_t{1} << n, RealTable(n, t.measure()));
    for (SubsetMask m : masks_by_weight(n)) {
        RealTable comp = conditional_expectation(t, m);
        for (SubsetMask j : proper_subsets(m)) {
            const auto sub = comps[j.bits].values();
            auto dst = comp.values();
            for (size_t x = 0; x < dst.size(); ++x) {
                dst[x] -= sub[x];
            }
        }
        comps[m.bits] = std::move(comp);
    }
    return comps;
}

/// Coefficients in the biased product basis. Each pass maps (a at x_t = 0, b at x_t = 1) to
/// (mean (1-p)a + pb, difference b - a). With `threads` > 1 each pass is striped across
/// workers; every pair update is independent, so the output is bit-identical.
inline CoefficientVector coefficients_fast(const RealTable &t, unsigned threads = 1) {
    const double p = t.measure().p();
    CoefficientVector out{t.n(), std::vector<double>(t.values().begin(), t.values().end()), p};
    std::span<double> v(out.c);
    auto pass = [&](int s, size_t lo, size_t hi) {
        const size_t stride = size_t{1} << s;
        for (size_t base = lo; base < hi; base += 2 * stride) {
            for (size_t j = base; j < base + stride; ++j) {
                const double a = v[j];
                const double b = v[j + stride];
                v[j] = (1.0 - p) * a + p * b;
                v[j + stride] = b - a;
            }
        }
    };
    for (int s = 0; s < t.n(); ++s) {
        const size_t block = size_t{2} << s;
        const size_t blocks = v.size() / block;
        const unsigned workers = static_cast<unsigned>(std::min<size_t>(std::max(threads, 1u), blocks));
        if (workers <= 1) {
            pass(s, 0, v.size());
            continue;
        }
        std::vector<std::thread> pool;
        const size_t per = (blocks + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const size_t lo = std::min(blocks, w * per) * block;
            const size_t hi = std::min(blocks, (w + 1) * per) * block;
            if (lo < hi) {
                pool.emplace_back(pass, s, lo, hi);
            }
        }
        for (auto &th : pool) {
            th.join();
        }
    }
    return out;
}

/// The product-form component c_i prod_{t in i} h(X_t) as a full table.
inline RealTable component(const CoefficientVector &c, SubsetMask m) {
    const BinarySource src(c.p);
    RealTable out(c.n, src);
    for (size_t x = 0; x < out.size(); ++x) {
        double v = c.c[m.bits];
        for (int t = 1; t <= c.n; ++t) {
            if (m.has(t)) {
                v *= src.h((x >> (t - 1)) & 1u);
            }
        }
        out[x] = v;
    }
    return out;
}

/// P_i = c_i^2 (p(1-p))^|i|, with P at mask 0 fixed to 0 (a constant has no variance).
inline DependencySpectrum spectrum(const CoefficientVector &c) {
    const double var1 = c.p * (1.0 - c.p);
    std::vector<double> powers(c.n + 1, 1.0);
    for (int k = 1; k <= c.n; ++k) {
        powers[k] = powers[k - 1] * var1;
    }
    DependencySpectrum out{c.n, std::vector<double>(c.c.size(), 0.0)};
    for (uint32_t m = 1; m < c.c.size(); ++m) {
        out.P[m] = c.c[m] * c.c[m] * powers[std::popcount(m)];
    }
    return out;
}

/// P_i = E[E[t | X_i]^2] - sum_{j strictly within i} P_j with P_0 = 0; t must be zero mean.
/// Costs O(n 4^n); a reference route for moderate n.
inline DependencySpectrum spectrum_recursive(const RealTable &t) {
    const int n = t.n();
    DependencySpectrum out{n, std::vector<double>(size_t{1} << n, 0.0)};
    for (SubsetMask m : masks_by_weight(n)) {
        if (m.bits == 0) {
            continue;
        }
        const RealTable cond = conditional_expectation(t, m);
        double value = inner_product(cond, cond);
        for (SubsetMask j : proper_subsets(m)) {
            value -= out.P[j.bits];
        }
        out.P[m.bits] = value;
    }
    return out;
}

/// Aggregates a spectrum by weight. Weights whose mass is at most `rel_tol` times the total
/// count as empty when locating the minimal effective length.
inline WeightProfile weight_profile(const DependencySpectrum &s, double rel_tol = 1e-12) {
    WeightProfile out;
    out.W.assign(s.n + 1, 0.0);
    for (uint32_t m = 0; m < s.P.size(); ++m) {
        out.W[std::popcount(m)] += s.P[m];
    }
    const double total = out.total();
    if (total <= 0.0) {
        return out;
    }
    double moment = 0.0;
    for (int k = 1; k <= s.n; ++k) {
        moment += k * out.W[k];
        if (!out.min_effective_length && out.W[k] > rel_tol * total) {
            out.min_effective_length = k;
        }
    }
    out.mean_effective_length = moment / total;
    return out;
}

/// Spectrum of a Boolean function under `src` via the fast route.
inline DependencySpectrum dependency_spectrum(const BooleanFunction &e, const BinarySource &src) {
    return spectrum(coefficients_fast(embed(e, src)));
}

}  // namespace depspec
