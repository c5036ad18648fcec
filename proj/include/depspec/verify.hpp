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

// Oracles for sigma = P(e(X^n) != f(Y^n)) and the harness that checks the
// spectrum bounds against them.
//
//   exact_brute     sums the product joint over all 4^n input pairs
//   exact_spectral  sigma = q + r - 2qr - 2 E[e~ f~], where E[e~ f~] = sum_i c_i d_i kappa^|i|
//   monte_carlo     sampled estimate with normal-approximation standard error

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "depspec/bounds.hpp"
#include "depspec/core.hpp"
#include "depspec/sources.hpp"
#include "depspec/spectral.hpp"

namespace depspec {

/// Largest n for the 4^n enumeration.
inline constexpr int kBruteMaxN = 13;
/// Default oracle picks brute force up to this n and the spectral oracle above it.
inline constexpr int kBruteDefaultMaxN = 10;

/// Degenerate (constant) function where a nonzero variance is required.
struct DegenerateFunctionError : std::domain_error {
    using std::domain_error::domain_error;
};

/// The four output-pair probabilities.
struct JointCells {
    double a = 0.0;  // P(e = 1, f = 1)
    double b = 0.0;  // P(e = 0, f = 1)
    double c = 0.0;  // P(e = 1, f = 0)
    double d = 0.0;  // P(e = 0, f = 0)

    double sigma() const { return b + c; }
    double q() const { return a + c; }
    double r() const { return a + b; }
    double total() const { return a + b + c + d; }
};

struct MCEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    uint64_t samples = 0;
    uint64_t seed = 0;
};

enum class Oracle { automatic, brute, spectral, mc };

inline std::string_view to_string(Oracle o) {
    switch (o) {
        case Oracle::automatic:
            return "auto";
        case Oracle::brute:
            return "brute";
        case Oracle::spectral:
            return "spectral";
        case Oracle::mc:
            return "mc";
    }
    return "unknown";
}

namespace detail {

inline void check_same_n(const BooleanFunction &e, const BooleanFunction &f) {
    if (e.n() != f.n()) {
        throw std::invalid_argument("e and f must have the same number of inputs");
    }
}

/// Joint weights prod_t pi(x_t, y_t) over a block of `bits` coordinates, keyed by x | y << bits.
inline std::vector<double> block_weights(const PairSource &s, int bits) {
    std::vector<double> w(size_t{1} << (2 * bits), 1.0);
    for (size_t key = 0; key < w.size(); ++key) {
        const size_t x = key & ((size_t{1} << bits) - 1);
        const size_t y = key >> bits;
        double v = 1.0;
        for (int t = 0; t < bits; ++t) {
            v *= s.pi((x >> t) & 1u, (y >> t) & 1u);
        }
        w[key] = v;
    }
    return w;
}

}  // namespace detail

/// Enumerates all (x, y) pairs. n <= 13.
inline JointCells exact_brute(const BooleanFunction &e, const BooleanFunction &f, const PairSource &s) {
    detail::check_same_n(e, f);
    const int n = e.n();
    const int cap = effective_cap(kBruteMaxN);
    if (n > cap) {
        throw CapacityError("brute-force oracle supports n <= " + std::to_string(cap) + ", got " +
                            std::to_string(n));
    }
    const int lo_bits = n / 2;
    const int hi_bits = n - lo_bits;
    const auto lo = detail::block_weights(s, lo_bits);
    const auto hi = detail::block_weights(s, hi_bits);
    const uint64_t lo_mask = (uint64_t{1} << lo_bits) - 1;
    const uint64_t size = e.size();

    double cells[4] = {0.0, 0.0, 0.0, 0.0};  // index e * 2 + f
    for (uint64_t x = 0; x < size; ++x) {
        const uint64_t xl = x & lo_mask, xh = x >> lo_bits;
        double row[2] = {0.0, 0.0};
        for (uint64_t y = 0; y < size; ++y) {
            const uint64_t yl = y & lo_mask, yh = y >> lo_bits;
            row[f[y]] += lo[xl | (yl << lo_bits)] * hi[xh | (yh << hi_bits)];
        }
        const int ex = e[x] ? 2 : 0;
        cells[ex] += row[0];
        cells[ex + 1] += row[1];
    }
    return JointCells{cells[3], cells[1], cells[2], cells[0]};
}

/// E[e~(X^n) f~(Y^n)] through the product-basis coefficients of both embeddings.
inline double cross_moment(const BooleanFunction &e, const BooleanFunction &f, const PairSource &s) {
    detail::check_same_n(e, f);
    const CoefficientVector c = coefficients_fast(embed(e, s.x_source()));
    const CoefficientVector d = coefficients_fast(embed(f, s.y_source()));
    const double kappa = s.kappa();
    std::vector<double> powers(e.n() + 1, 1.0);
    for (int k = 1; k <= e.n(); ++k) {
        powers[k] = powers[k - 1] * kappa;
    }
    double total = 0.0;
    for (uint32_t m = 1; m < c.c.size(); ++m) {
        total += c.c[m] * d.c[m] * powers[std::popcount(m)];
    }
    return total;
}

inline double exact_spectral(const BooleanFunction &e, const BooleanFunction &f, const PairSource &s) {
    const double q = bias(e, s.x_source());
    const double r = bias(f, s.y_source());
    return q + r - 2.0 * q * r - 2.0 * cross_moment(e, f, s);
}

/// Pearson correlation of e(X^n) and f(Y^n). Throws for constant functions.
inline double pearson(const BooleanFunction &e, const BooleanFunction &f, const PairSource &s) {
    const double q = bias(e, s.x_source());
    const double r = bias(f, s.y_source());
    const double denom = q * (1.0 - q) * r * (1.0 - r);
    if (!(denom > 0.0)) {
        throw DegenerateFunctionError("Pearson correlation is undefined for a constant function");
    }
    return cross_moment(e, f, s) / std::sqrt(denom);
}

/// Fraction of sampled pairs with e(x) != f(y). Shards run on up to `threads` workers;
/// counts are integers, so the estimate does not depend on the thread count.
inline MCEstimate monte_carlo(const BooleanFunction &e, const BooleanFunction &f, const PairSource &s,
                              uint64_t samples, uint64_t seed, unsigned threads = 1) {
    detail::check_same_n(e, f);
    if (samples < 1) {
        throw std::invalid_argument("sample count must be at least 1");
    }
    const uint64_t shards = (samples + kSamplesPerShard - 1) / kSamplesPerShard;
    std::vector<uint64_t> disagreements(shards, 0);
    auto run_shard = [&](uint64_t shard) {
        PairSampler sampler(s, e.n(), seed, shard);
        const uint64_t begin = shard * kSamplesPerShard;
        const uint64_t end = std::min(samples, begin + kSamplesPerShard);
        uint64_t count = 0;
        for (uint64_t i = begin; i < end; ++i) {
            const auto [x, y] = sampler.next();
            count += e[x] != f[y];
        }
        disagreements[shard] = count;
    };
    const unsigned workers = static_cast<unsigned>(std::min<uint64_t>(std::max(threads, 1u), shards));
    if (workers <= 1) {
        for (uint64_t k = 0; k < shards; ++k) {
            run_shard(k);
        }
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (uint64_t k = w; k < shards; k += workers) {
                    run_shard(k);
                }
            });
        }
        for (auto &th : pool) {
            th.join();
        }
    }
    uint64_t total = 0;
    for (uint64_t v : disagreements) {
        total += v;
    }
    MCEstimate out;
    out.samples = samples;
    out.seed = seed;
    out.estimate = static_cast<double>(total) / static_cast<double>(samples);
    out.std_error = std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(samples));
    return out;
}

struct SandwichOptions {
    Oracle oracle = Oracle::automatic;
    std::optional<uint64_t> samples;  // Monte Carlo runs only when samples and seed are both set
    std::optional<uint64_t> seed;
    unsigned threads = 1;
    double tolerance = 1e-9;
};

struct DisagreementReport {
    int n = 0;
    double q = 0.0;
    double r = 0.0;
    double sigma_exact = 0.0;
    Oracle oracle = Oracle::spectral;
    std::optional<double> cross_check_sigma;  // the other exact oracle, when it ran
    Oracle cross_check_oracle = Oracle::brute;
    BoundPair bounds;
    DependencySpectrum spectrum_e;
    DependencySpectrum spectrum_f;
    std::optional<MCEstimate> mc;
    std::optional<double> pearson;
    bool sandwich_ok = false;
    bool oracles_agree = true;
    bool outside_proven_regime = false;
};

/// Spectra, bounds, exact sigma and optional Monte Carlo estimate for one (e, f, source).
/// With Oracle::mc the Monte Carlo estimate stands in for sigma and the sandwich verdict
/// is advisory.
inline DisagreementReport sandwich_report(const BooleanFunction &e, const BooleanFunction &f, const PairSource &s,
                                          const SandwichOptions &options = {}) {
    detail::check_same_n(e, f);
    DisagreementReport rep;
    rep.n = e.n();
    rep.q = bias(e, s.x_source());
    rep.r = bias(f, s.y_source());
    rep.spectrum_e = dependency_spectrum(e, s.x_source());
    rep.spectrum_f = dependency_spectrum(f, s.y_source());
    rep.bounds = theorem1_bounds(rep.spectrum_e, rep.spectrum_f, s.eps());
    rep.outside_proven_regime = s.outside_proven_regime();

    Oracle oracle = options.oracle;
    if (oracle == Oracle::automatic) {
        oracle = rep.n <= effective_cap(kBruteDefaultMaxN) ? Oracle::brute : Oracle::spectral;
    }
    if (options.samples && options.seed) {
        rep.mc = monte_carlo(e, f, s, *options.samples, *options.seed, options.threads);
    } else if (oracle == Oracle::mc) {
        throw std::invalid_argument("the Monte Carlo oracle needs both a sample count and a seed");
    }

    const double spectral = exact_spectral(e, f, s);
    switch (oracle) {
        case Oracle::brute:
            rep.sigma_exact = exact_brute(e, f, s).sigma();
            rep.cross_check_sigma = spectral;
            rep.cross_check_oracle = Oracle::spectral;
            break;
        case Oracle::spectral:
            rep.sigma_exact = spectral;
            if (rep.n <= effective_cap(kBruteMaxN)) {
                rep.cross_check_sigma = exact_brute(e, f, s).sigma();
                rep.cross_check_oracle = Oracle::brute;
            }
            break;
        case Oracle::mc:
            rep.sigma_exact = rep.mc->estimate;
            rep.cross_check_sigma = spectral;
            rep.cross_check_oracle = Oracle::spectral;
            break;
        case Oracle::automatic:
            break;
    }
    rep.oracle = oracle;
    if (rep.cross_check_sigma && oracle != Oracle::mc) {
        rep.oracles_agree = std::abs(*rep.cross_check_sigma - rep.sigma_exact) <= options.tolerance;
    }
    rep.sandwich_ok = rep.bounds.lower - options.tolerance <= rep.sigma_exact &&
                      rep.sigma_exact <= rep.bounds.upper + options.tolerance;
    try {
        rep.pearson = pearson(e, f, s);
    } catch (const DegenerateFunctionError &) {
        rep.pearson.reset();
    }
    return rep;
}

}  // namespace depspec
