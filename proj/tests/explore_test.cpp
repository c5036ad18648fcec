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

#include "depspec/explore.hpp"

#include <cmath>

#include "gtest/gtest.h"

#include "depspec/funlang.hpp"
#include "oracles.hpp"

using namespace depspec;

namespace {

SearchConstraint constraint(int n, int len, double eps, bool same) {
    SearchConstraint c;
    c.n = n;
    c.min_len = len;
    c.eps = eps;
    c.same_fn = same;
    return c;
}

// Brute-force maximum of agreement over identical admissible pairs, straight from enumeration.
double best_same_agreement(int n, int len, double eps) {
    const auto s = PairSource::from_eps(0.5, eps);
    double pi[4];
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            pi[x * 2 + y] = s.pi(x, y);
        }
    }
    double best = 0.0;
    for (uint64_t v = 1; v + 1 < (uint64_t{1} << (1u << n)); ++v) {
        const auto f = BooleanFunction::from_words(n, {v});
        if (satisfies_constraint(f, BinarySource(0.5), len)) {
            best = std::max(best, 1.0 - ref::oracle_sigma(f, f, pi));
        }
    }
    return best;
}

}  // namespace

TEST(explore, exhaustive_length_one) {
    const auto r = search_exhaustive(constraint(2, 1, 0.1, true));
    // a dictator reaches 0.9, but AND-type functions do slightly better at 0.905
    EXPECT_NEAR(r.agreement, best_same_agreement(2, 1, 0.1), 1e-12);
    EXPECT_NEAR(r.agreement, 0.905, 1e-12);
    EXPECT_GE(r.agreement, 0.9 - 1e-12);
    EXPECT_EQ(r.best_e, r.best_f);
    EXPECT_NEAR(exact_spectral(dictator(2, 1), dictator(2, 1), PairSource::from_eps(0.5, 0.1)), 0.1, 1e-15);
}

TEST(explore, exhaustive_length_two_is_parity) {
    const auto r = search_exhaustive(constraint(2, 2, 0.1, true));
    EXPECT_NEAR(r.agreement, 0.82, 1e-12);
    EXPECT_EQ(format(r.best_e), "hex:6@2");
    EXPECT_NEAR(r.agreement, best_same_agreement(2, 2, 0.1), 1e-12);
}

TEST(explore, exhaustive_noiseless) {
    for (bool same : {true, false}) {
        const auto r = search_exhaustive(constraint(2, 1, 0.0, same));
        EXPECT_NEAR(r.agreement, 1.0, 1e-12);
        EXPECT_EQ(r.best_e, r.best_f);
    }
}

TEST(explore, results_reverify) {
    for (int len = 1; len <= 3; ++len) {
        const auto r = search_exhaustive(constraint(3, len, 0.15, false));
        const auto s = PairSource::from_eps(0.5, 0.15);
        EXPECT_NEAR(1.0 - exact_brute(r.best_e, r.best_f, s).sigma(), r.agreement, 1e-12);
        EXPECT_TRUE(satisfies_constraint(r.best_e, BinarySource(0.5), len));
        EXPECT_TRUE(satisfies_constraint(r.best_f, BinarySource(0.5), len));
    }
}

TEST(explore, agreement_non_increasing_in_length) {
    for (double eps : {0.05, 0.1, 0.2, 0.3, 0.4}) {
        double prev = 1.0;
        for (int len = 1; len <= 3; ++len) {
            const double a = search_exhaustive(constraint(3, len, eps, false)).agreement;
            EXPECT_LE(a, prev + 1e-12) << eps << " " << len;
            prev = a;
        }
    }
}

TEST(explore, exhaustive_capacity) {
    EXPECT_THROW(search_exhaustive(constraint(4, 1, 0.1, false)), CapacityError);
    EXPECT_THROW(search_exhaustive(constraint(5, 1, 0.1, true)), CapacityError);
    EXPECT_THROW(search_exhaustive(constraint(3, 4, 0.1, true)), std::invalid_argument);
}

TEST(explore, same_fn_n4_runs) {
    const auto r = search_exhaustive(constraint(4, 4, 0.1, true));
    EXPECT_NEAR(r.agreement, (1 + std::pow(0.8, 4)) / 2, 1e-12);
}

TEST(explore, anneal_reaches_dictator_floor) {
    auto c = constraint(4, 1, 0.1, false);
    c.mode = SearchMode::annealing;
    c.seed = 1234;
    c.iterations = 10000;
    const auto r = search(c);
    EXPECT_GE(r.agreement, 0.9 - 1e-9);
    EXPECT_EQ(r.trace.size(), 10000u);
    EXPECT_NEAR(r.trace.back(), r.agreement, 1e-12);
}

TEST(explore, anneal_parity_ceiling) {
    auto c = constraint(3, 3, 0.2, false);
    c.mode = SearchMode::annealing;
    c.seed = 5;
    c.iterations = 3000;
    const auto r = search(c);
    EXPECT_LE(r.agreement, (1 + std::pow(0.6, 3)) / 2 + 1e-9);
    EXPECT_TRUE(satisfies_constraint(r.best_e, BinarySource(0.5), 3));
    EXPECT_TRUE(satisfies_constraint(r.best_f, BinarySource(0.5), 3));
}

TEST(explore, anneal_is_repeatable) {
    auto c = constraint(5, 2, 0.15, false);
    c.mode = SearchMode::annealing;
    c.seed = 77;
    c.iterations = 2000;
    c.chains = 2;
    const auto a = search(c), b = search(c);
    EXPECT_EQ(a.trace, b.trace);
    EXPECT_EQ(a.best_e, b.best_e);
    EXPECT_EQ(a.best_f, b.best_f);
}

TEST(explore, anneal_never_beats_exhaustive) {
    for (int len = 1; len <= 3; ++len) {
        for (double eps : {0.1, 0.3}) {
            auto c = constraint(3, len, eps, false);
            const double exact = search_exhaustive(c).agreement;
            c.mode = SearchMode::annealing;
            c.seed = 100 + len;
            c.iterations = 2000;
            EXPECT_LE(search(c).agreement, exact + 1e-12);
        }
    }
}

TEST(explore, anneal_capacity) {
    auto c = constraint(13, 1, 0.1, false);
    c.mode = SearchMode::annealing;
    EXPECT_THROW(search(c), CapacityError);
}

TEST(explore, sweep_dictator_lower_equals_eps) {
    const auto d = dictator(3, 2);
    const auto res = eps_sweep(d, d, 0.5, SweepGrid{0.0, 0.5, 0.1});
    ASSERT_EQ(res.rows.size(), 6u);
    for (const auto &row : res.rows) {
        EXPECT_NEAR(row.lower, row.eps, 1e-15);
        EXPECT_NEAR(row.sigma_exact, row.eps, 1e-15);
    }
    EXPECT_TRUE(res.warnings.empty());
}

TEST(explore, sweep_parity_gap_closes) {
    const auto f = parity(2, SubsetMask(0b11));
    const auto res = eps_sweep(f, f, 0.5, SweepGrid{0.5, 0.5, 0.1});
    ASSERT_EQ(res.rows.size(), 1u);
    EXPECT_NEAR(res.rows[0].lower, 0.5, 1e-15);
    EXPECT_NEAR(res.rows[0].upper, 0.5, 1e-15);
}

TEST(explore, sweep_noiseless_row) {
    const auto f = majority(3);
    const auto res = eps_sweep(f, f, 0.5, SweepGrid{0.0, 0.0, 0.1});
    ASSERT_EQ(res.rows.size(), 1u);
    EXPECT_EQ(res.rows[0].eps, 0.0);
    EXPECT_NEAR(res.rows[0].lower, 0.0, 1e-15);
    EXPECT_NEAR(res.rows[0].upper, 1.0, 1e-15);
    EXPECT_NEAR(res.rows[0].sigma_exact, 0.0, 1e-15);
}

TEST(explore, sweep_skips_infeasible_points) {
    const auto f = dictator(2, 1);
    const auto res = eps_sweep(f, f, 0.1, SweepGrid{0.0, 0.5, 0.1});
    EXPECT_EQ(res.rows.size(), 3u);  // eps <= 2 * 0.1
    EXPECT_EQ(res.warnings.size(), 3u);
}

TEST(explore, sweep_row_sandwich_with_mc) {
    const auto e = majority(5), f = threshold(5, 2);
    const auto res = eps_sweep(e, f, 0.5, SweepGrid{0.0, 0.5, 0.05}, 20000, 9);
    ASSERT_EQ(res.rows.size(), 11u);
    for (const auto &row : res.rows) {
        EXPECT_LE(row.lower - 1e-9, row.sigma_exact);
        EXPECT_LE(row.sigma_exact, row.upper + 1e-9);
        ASSERT_TRUE(row.mc.has_value());
    }
}
