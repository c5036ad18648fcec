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

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "depspec/core.hpp"

namespace depspec {

/// A binary memoryless source with P(X = 1) = p, 0 < p < 1.
class BinarySource {
   public:
    explicit BinarySource(double p) : p_(p) {
        if (!(p > 0.0 && p < 1.0)) {
            throw ModelError("source bias must lie strictly between 0 and 1, got " + std::to_string(p));
        }
    }

    double p() const { return p_; }
    /// Probability of a single symbol.
    double prob(bool x) const { return x ? p_ : 1.0 - p_; }
    /// The zero-mean basis function: 1 - p at x = 1, -p at x = 0.
    double h(bool x) const { return x ? 1.0 - p_ : -p_; }
    /// Var h(X) = p(1 - p).
    double basis_variance() const { return p_ * (1.0 - p_); }

   private:
    double p_;
};

/// One coordinate of an i.i.d. pair source (X, Y), given by its 2x2 joint pi(x, y).
class PairSource {
   public:
    /// Symmetric-flip coupling: both marginals p, P(X != Y) = eps.
    static PairSource from_eps(double p, double eps) {
        if (!(p > 0.0 && p < 1.0)) {
            throw ModelError("source bias must lie strictly between 0 and 1, got " + std::to_string(p));
        }
        if (!(eps >= 0.0 && eps <= 2.0 * std::min(p, 1.0 - p))) {
            throw ModelError("eps = " + std::to_string(eps) + " is infeasible for bias " + std::to_string(p) +
                             " (need 0 <= eps <= " + std::to_string(2.0 * std::min(p, 1.0 - p)) + ")");
        }
        return PairSource({1.0 - p - eps / 2.0, eps / 2.0, eps / 2.0, p - eps / 2.0});
    }

    /// Raw joint in row-major order: pi(0,0), pi(0,1), pi(1,0), pi(1,1).
    static PairSource from_joint(double a, double b, double c, double d) { return PairSource({a, b, c, d}); }

    double pi(bool x, bool y) const { return pi_[(x ? 2 : 0) + (y ? 1 : 0)]; }
    const std::array<double, 4> &joint() const { return pi_; }

    double p_x() const { return pi_[2] + pi_[3]; }
    double p_y() const { return pi_[1] + pi_[3]; }
    BinarySource x_source() const { return BinarySource(p_x()); }
    BinarySource y_source() const { return BinarySource(p_y()); }
    double eps() const { return pi_[1] + pi_[2]; }

    /// Cross moment E[h_X(X) h_Y(Y)] of the two zero-mean basis functions.
    double kappa() const {
        const BinarySource x = x_source();
        const BinarySource y = y_source();
        double total = 0.0;
        for (int xv = 0; xv < 2; ++xv) {
            for (int yv = 0; yv < 2; ++yv) {
                total += pi(xv, yv) * x.h(xv) * y.h(yv);
            }
        }
        return total;
    }

    /// Past 1/2 the per-coordinate correlation factor (1 - 2 eps) turns negative.
    /// Correlation of a single letter pair, kappa / sqrt(Var h(X) Var h(Y)).
    double letter_correlation() const {
        return kappa() / std::sqrt(x_source().basis_variance() * y_source().basis_variance());
    }

    /// The per-letter inequality |corr| <= 1 - 2 eps behind the disagreement bounds. A biased
    /// symmetric coupling can break it below eps = 1/2 once kappa turns negative.
    bool single_letter_premise() const { return std::abs(letter_correlation()) <= 1.0 - 2.0 * eps() + 1e-12; }

    bool outside_proven_regime() const { return eps() > 0.5 || !single_letter_premise(); }

   private:
    explicit PairSource(std::array<double, 4> pi) : pi_(pi) {
        double sum = 0.0;
        for (double v : pi_) {
            if (!(v >= 0.0)) {
                throw ModelError("joint probabilities must be nonnegative");
            }
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-12) {
            throw ModelError("joint probabilities must sum to 1, got " + std::to_string(sum));
        }
        const double px = pi_[2] + pi_[3];
        const double py = pi_[1] + pi_[3];
        if (!(px > 0.0 && px < 1.0 && py > 0.0 && py < 1.0)) {
            throw ModelError("both marginals must lie strictly between 0 and 1");
        }
    }

    std::array<double, 4> pi_;
};

/// SplitMix64 finalizer.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Seed of shard `shard` under base seed `seed`: splitmix64(seed ^ splitmix64(shard)).
/// Every sampler in the library derives per-shard generators this way, so results do
/// not depend on how shards are scheduled.
inline uint64_t shard_seed(uint64_t seed, uint64_t shard) { return splitmix64(seed ^ splitmix64(shard)); }

/// Samples per shard of a sampling run.
inline constexpr uint64_t kSamplesPerShard = uint64_t{1} << 16;

/// Uniform double in [0, 1) from the top 53 bits.
inline double unit_uniform(std::mt19937_64 &gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

/// Draws n-letter pairs (x, y) as input indices (coordinate t in bit t-1).
class PairSampler {
   public:
    PairSampler(const PairSource &source, int n, uint64_t seed, uint64_t shard = 0)
        : n_(n), gen_(shard_seed(seed, shard)) {
        const auto &pi = source.joint();
        cut_[0] = pi[0];
        cut_[1] = pi[0] + pi[1];
        cut_[2] = pi[0] + pi[1] + pi[2];
    }

    std::pair<uint32_t, uint32_t> next() {
        uint32_t x = 0, y = 0;
        for (int t = 0; t < n_; ++t) {
            const double u = unit_uniform(gen_);
            // cells in row-major order: (0,0) (0,1) (1,0) (1,1)
            const uint32_t cell = u < cut_[0] ? 0u : u < cut_[1] ? 1u : u < cut_[2] ? 2u : 3u;
            x |= (cell >> 1) << t;
            y |= (cell & 1u) << t;
        }
        return {x, y};
    }

   private:
    int n_;
    std::mt19937_64 gen_;
    std::array<double, 3> cut_{};
};

/// Calls visit(x, y) for `count` pairs. Shard k covers samples [k * kSamplesPerShard, ...)
/// and uses shard_seed(seed, k); the stream is fully determined by (seed, count, n).
template <class Visit>
void sample_pairs(const PairSource &source, int n, uint64_t seed, uint64_t count, Visit &&visit) {
    if (count < 1) {
        throw std::invalid_argument("sample count must be at least 1");
    }
    for (uint64_t shard = 0; shard * kSamplesPerShard < count; ++shard) {
        PairSampler sampler(source, n, seed, shard);
        const uint64_t end = std::min(count, (shard + 1) * kSamplesPerShard);
        for (uint64_t i = shard * kSamplesPerShard; i < end; ++i) {
            const auto [x, y] = sampler.next();
            visit(x, y);
        }
    }
}

inline std::vector<std::pair<uint32_t, uint32_t>> sample_pair(const PairSource &source, int n, uint64_t seed,
                                                              uint64_t count) {
    std::vector<std::pair<uint32_t, uint32_t>> out;
    out.reserve(count);
    sample_pairs(source, n, seed, count, [&](uint32_t x, uint32_t y) { out.emplace_back(x, y); });
    return out;
}

}  // namespace depspec
