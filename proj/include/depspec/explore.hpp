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

// Searches for function pairs that maximize agreement 1 - sigma while every
// function keeps its spectrum on masks of weight >= L, and eps sweeps of the
// bound envelope.
//
// The objective is one concrete reading of the tension between correlated
// outputs and long effective lengths; it is not an optimality certificate.

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "depspec/bounds.hpp"
#include "depspec/core.hpp"
#include "depspec/sources.hpp"
#include "depspec/spectral.hpp"
#include "depspec/verify.hpp"

namespace depspec {

inline constexpr int kExhaustiveMaxNPairs = 3;
inline constexpr int kExhaustiveMaxNSame = 4;
inline constexpr int kAnnealMaxN = 12;
/// Absolute tolerance for "no spectrum mass below weight L".
inline constexpr double kConstraintTol = 1e-12;

enum class SearchMode { exhaustive, annealing };

struct AnnealSchedule {
    double initial_temperature = 0.05;
    double cooling = 0.999;  // geometric: T <- cooling * T after every iteration
};

struct SearchConstraint {
    int n = 2;
    int min_len = 1;
    double eps = 0.1;
    double bias = 0.5;
    SearchMode mode = SearchMode::exhaustive;
    bool same_fn = false;  // restrict to e = f
    uint64_t seed = 0;
    uint64_t iterations = 10000;
    unsigned chains = 1;
    AnnealSchedule schedule;
};

struct SearchResult {
    BooleanFunction best_e;
    BooleanFunction best_f;
    double sigma = 0.5;
    double agreement = 0.5;
    double lower_bound_at_best = 0.0;
    std::vector<double> trace;  // best agreement after each iteration (annealing only)
    uint64_t candidates = 0;    // admissible functions (exhaustive) or accepted moves (annealing)
};

struct SweepGrid {
    double start = 0.0;
    double stop = 0.5;
    double step = 0.1;

    /// Grid points start + k * step for k = 0 .. round((stop - start) / step).
    std::vector<double> points() const {
        if (!(step > 0.0) || stop < start) {
            throw std::invalid_argument("sweep grid needs step > 0 and stop >= start");
        }
        const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
        std::vector<double> out;
        out.reserve(count);
        for (long k = 0; k < count; ++k) {
            // rounded to 12 decimals
            out.push_back(std::round((start + static_cast<double>(k) * step) * 1e12) / 1e12);
        }
        return out;
    }
};

struct SweepRow {
    double eps = 0.0;
    double lower = 0.0;
    double upper = 1.0;
    double sigma_exact = 0.0;
    std::optional<MCEstimate> mc;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<std::string> warnings;
};

namespace detail {

/// An admissible candidate with its cached decomposition.
struct Candidate {
    BooleanFunction fn;
    double q = 0.0;
    CoefficientVector coeffs;
    DependencySpectrum spectrum;
};

inline std::optional<Candidate> admit(const BooleanFunction &fn, const BinarySource &src, int min_len) {
    const double q = bias(fn, src);
    if (q == 0.0 || q == 1.0) {
        return std::nullopt;
    }
    CoefficientVector coeffs = coefficients_fast(embed(fn, src));
    DependencySpectrum spec = spectrum(coeffs);
    for (uint32_t m = 1; m < spec.P.size(); ++m) {
        if (std::popcount(m) < min_len && spec.P[m] > kConstraintTol) {
            return std::nullopt;
        }
    }
    return Candidate{fn, q, std::move(coeffs), std::move(spec)};
}

/// sigma from cached coefficients: q + r - 2qr - 2 sum_i c_i d_i kappa^|i|.
inline double pair_sigma(const Candidate &e, const Candidate &f, std::span<const double> kappa_powers) {
    double cross = 0.0;
    for (uint32_t m = 1; m < e.coeffs.c.size(); ++m) {
        cross += e.coeffs.c[m] * f.coeffs.c[m] * kappa_powers[std::popcount(m)];
    }
    return e.q + f.q - 2.0 * e.q * f.q - 2.0 * cross;
}

inline std::vector<double> kappa_powers(const PairSource &s, int n) {
    std::vector<double> out(n + 1, 1.0);
    for (int k = 1; k <= n; ++k) {
        out[k] = out[k - 1] * s.kappa();
    }
    return out;
}

/// Lower sigma wins; sigmas within 1e-12 tie and fall back to the table values of e, then f.
inline bool better(double sigma, const BooleanFunction &e, const BooleanFunction &f, double best_sigma,
                   const BooleanFunction &best_e, const BooleanFunction &best_f) {
    if (sigma < best_sigma - 1e-12) {
        return true;
    }
    if (sigma > best_sigma + 1e-12) {
        return false;
    }
    const auto ce = compare_table_value(e, best_e);
    if (ce != 0) {
        return ce < 0;
    }
    return compare_table_value(f, best_f) < 0;
}

inline void validate(const SearchConstraint &c) {
    if (c.min_len < 1 || c.min_len > c.n) {
        throw std::invalid_argument("min effective length must lie in [1, n]");
    }
}

inline SearchResult finish(const BooleanFunction &e, const BooleanFunction &f, const PairSource &s) {
    SearchResult out{.best_e = e, .best_f = f, .trace = {}};
    out.sigma = exact_spectral(e, f, s);
    out.agreement = 1.0 - out.sigma;
    out.lower_bound_at_best =
        theorem1_bounds(dependency_spectrum(e, s.x_source()), dependency_spectrum(f, s.y_source()), s.eps()).lower;
    return out;
}

}  // namespace detail

/// True when f is non-constant and carries no spectrum mass on masks of weight 1..L-1.
inline bool satisfies_constraint(const BooleanFunction &f, const BinarySource &src, int min_len) {
    return detail::admit(f, src, min_len).has_value();
}

/// Enumerates every admissible function (n <= 3 for free pairs, n <= 4 with e = f).
inline SearchResult search_exhaustive(const SearchConstraint &c) {
    detail::validate(c);
    const int cap = effective_cap(c.same_fn ? kExhaustiveMaxNSame : kExhaustiveMaxNPairs);
    if (c.n > cap) {
        throw CapacityError("exhaustive search supports n <= " + std::to_string(cap) +
                            (c.same_fn ? " with e = f" : " for free pairs") + ", got " + std::to_string(c.n));
    }
    const PairSource s = PairSource::from_eps(c.bias, c.eps);
    const BinarySource src = s.x_source();
    const uint64_t table_bits = uint64_t{1} << c.n;
    const uint64_t functions = uint64_t{1} << table_bits;

    std::vector<detail::Candidate> pool;
    for (uint64_t v = 0; v < functions; ++v) {
        auto cand = detail::admit(BooleanFunction::from_words(c.n, {v}), src, c.min_len);
        if (cand) {
            pool.push_back(std::move(*cand));
        }
    }
    if (pool.empty()) {
        throw ModelError("no admissible function for n = " + std::to_string(c.n) +
                         ", min length = " + std::to_string(c.min_len));
    }
    const auto powers = detail::kappa_powers(s, c.n);
    const detail::Candidate *best_e = nullptr;
    const detail::Candidate *best_f = nullptr;
    double best_sigma = 2.0;
    for (const auto &e : pool) {
        if (c.same_fn) {
            const double sigma = detail::pair_sigma(e, e, powers);
            if (!best_e || detail::better(sigma, e.fn, e.fn, best_sigma, best_e->fn, best_f->fn)) {
                best_e = best_f = &e;
                best_sigma = sigma;
            }
            continue;
        }
        for (const auto &f : pool) {
            const double sigma = detail::pair_sigma(e, f, powers);
            if (!best_e || detail::better(sigma, e.fn, f.fn, best_sigma, best_e->fn, best_f->fn)) {
                best_e = &e;
                best_f = &f;
                best_sigma = sigma;
            }
        }
    }
    SearchResult out = detail::finish(best_e->fn, best_f->fn, s);
    out.candidates = pool.size();
    return out;
}

namespace detail {

inline std::optional<Candidate> starting_point(int n, const BinarySource &src, int min_len, std::mt19937_64 &gen) {
    const BooleanFunction seeds[] = {min_len == 1 ? dictator(n, 1) : parity(n, SubsetMask::full(n)),
                                     parity(n, SubsetMask::full(n))};
    for (const auto &fn : seeds) {
        if (auto cand = admit(fn, src, min_len)) {
            return cand;
        }
    }
    std::vector<uint64_t> words(n >= 6 ? size_t{1} << (n - 6) : 1);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        for (auto &w : words) {
            w = gen();
        }
        if (n < 6) {
            words[0] &= (uint64_t{1} << (uint64_t{1} << n)) - 1;
        }
        if (auto cand = admit(BooleanFunction::from_words(n, words), src, min_len)) {
            return cand;
        }
    }
    return std::nullopt;
}

inline SearchResult anneal_chain(const SearchConstraint &c, const PairSource &s, uint64_t chain_seed) {
    const BinarySource src = s.x_source();
    std::mt19937_64 gen(chain_seed);
    auto start = starting_point(c.n, src, c.min_len, gen);
    if (!start) {
        throw ModelError("annealing found no admissible starting point");
    }
    const auto powers = kappa_powers(s, c.n);
    Candidate cur_e = *start;
    Candidate cur_f = *start;
    double cur_sigma = pair_sigma(cur_e, cur_f, powers);
    BooleanFunction best_e = cur_e.fn, best_f = cur_f.fn;
    double best_sigma = cur_sigma;
    double temperature = c.schedule.initial_temperature;
    const uint64_t table_size = uint64_t{1} << c.n;

    SearchResult out{.best_e = best_e, .best_f = best_f, .trace = {}};
    out.trace.reserve(c.iterations);
    for (uint64_t it = 0; it < c.iterations; ++it) {
        const bool move_f = !c.same_fn && (gen() & 1u);
        const uint64_t idx = gen() % table_size;
        const BooleanFunction &base = move_f ? cur_f.fn : cur_e.fn;
        auto proposal = admit(base.with_flipped(idx), src, c.min_len);
        if (proposal) {
            const Candidate &e = (c.same_fn || !move_f) ? *proposal : cur_e;
            const Candidate &f = (c.same_fn || move_f) ? *proposal : cur_f;
            const double sigma = pair_sigma(e, f, powers);
            const double delta = sigma - cur_sigma;
            if (delta <= 0.0 || (temperature > 0.0 && unit_uniform(gen) < std::exp(-delta / temperature))) {
                if (c.same_fn) {
                    cur_e = *proposal;
                    cur_f = std::move(*proposal);
                } else if (move_f) {
                    cur_f = std::move(*proposal);
                } else {
                    cur_e = std::move(*proposal);
                }
                cur_sigma = sigma;
                ++out.candidates;
                if (better(cur_sigma, cur_e.fn, cur_f.fn, best_sigma, best_e, best_f)) {
                    best_e = cur_e.fn;
                    best_f = cur_f.fn;
                    best_sigma = cur_sigma;
                }
            }
        }
        temperature *= c.schedule.cooling;
        out.trace.push_back(1.0 - best_sigma);
    }
    out.best_e = best_e;
    out.best_f = best_f;
    out.sigma = best_sigma;
    return out;
}

}  // namespace detail

/// Stochastic local search over truth-table bit flips; proposals that break the constraint
/// are rejected. Chain k runs on shard_seed(seed, k); chains merge by best sigma with the
/// exhaustive tie-break. The returned trace belongs to the winning chain.
inline SearchResult search_anneal(const SearchConstraint &c) {
    detail::validate(c);
    const int cap = effective_cap(kAnnealMaxN);
    if (c.n > cap) {
        throw CapacityError("annealing supports n <= " + std::to_string(cap) + ", got " + std::to_string(c.n));
    }
    if (c.iterations < 1) {
        throw std::invalid_argument("annealing needs at least one iteration");
    }
    const PairSource s = PairSource::from_eps(c.bias, c.eps);
    std::optional<SearchResult> best;
    for (unsigned k = 0; k < std::max(c.chains, 1u); ++k) {
        SearchResult r = detail::anneal_chain(c, s, shard_seed(c.seed, k));
        if (!best || detail::better(r.sigma, r.best_e, r.best_f, best->sigma, best->best_e, best->best_f)) {
            best = std::move(r);
        }
    }
    SearchResult out = detail::finish(best->best_e, best->best_f, s);
    out.trace = std::move(best->trace);
    out.candidates = best->candidates;
    return out;
}

inline SearchResult search(const SearchConstraint &c) {
    return c.mode == SearchMode::exhaustive ? search_exhaustive(c) : search_anneal(c);
}

/// One row per feasible grid point; infeasible points are skipped with a warning.
/// Monte Carlo columns are filled when both `samples` and `seed` are set.
inline SweepResult eps_sweep(const BooleanFunction &e, const BooleanFunction &f, double p, const SweepGrid &grid,
                             std::optional<uint64_t> samples = std::nullopt,
                             std::optional<uint64_t> seed = std::nullopt) {
    if (e.n() != f.n()) {
        throw std::invalid_argument("e and f must have the same number of inputs");
    }
    const BinarySource src(p);
    const DependencySpectrum P = dependency_spectrum(e, src);
    const DependencySpectrum Q = dependency_spectrum(f, src);
    SweepResult out;
    for (double eps : grid.points()) {
        std::optional<PairSource> s;
        try {
            s = PairSource::from_eps(p, eps);
        } catch (const ModelError &err) {
            out.warnings.push_back("skipping eps = " + std::to_string(eps) + ": " + err.what());
            continue;
        }
        SweepRow row;
        row.eps = eps;
        const BoundPair b = theorem1_bounds(P, Q, eps);
        row.lower = b.lower;
        row.upper = b.upper;
        row.sigma_exact = exact_spectral(e, f, *s);
        if (samples && seed) {
            row.mc = monte_carlo(e, f, *s, *samples, *seed);
        }
        if (s->outside_proven_regime()) {
            out.warnings.push_back("eps = " + std::to_string(eps) + " is outside the proven regime" +
                                   (eps > 0.5 ? " (eps > 1/2)" : " (per-letter correlation exceeds 1 - 2 eps)"));
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

}  // namespace depspec
