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

#include "depspec/sources.hpp"

#include <cmath>

#include "gtest/gtest.h"

using namespace depspec;

TEST(sources, pair_from_eps_joint) {
    const auto s = PairSource::from_eps(0.5, 0.1);
    EXPECT_DOUBLE_EQ(s.pi(0, 0), 0.45);
    EXPECT_DOUBLE_EQ(s.pi(0, 1), 0.05);
    EXPECT_DOUBLE_EQ(s.pi(1, 0), 0.05);
    EXPECT_DOUBLE_EQ(s.pi(1, 1), 0.45);

    const auto id = PairSource::from_eps(0.5, 0.0);
    EXPECT_EQ(id.pi(0, 0), 0.5);
    EXPECT_EQ(id.pi(1, 1), 0.5);
    EXPECT_EQ(id.pi(0, 1), 0.0);

    EXPECT_THROW(PairSource::from_eps(0.1, 0.5), ModelError);
    EXPECT_THROW(PairSource::from_eps(0.0, 0.0), ModelError);
    EXPECT_THROW(PairSource::from_eps(1.0, 0.0), ModelError);
    EXPECT_THROW(PairSource::from_eps(0.5, -0.1), ModelError);
}

TEST(sources, eps_round_trips) {
    for (double p : {0.05, 0.2, 0.5, 0.7}) {
        for (double e : {0.0, 0.01, 0.05, 0.1}) {
            EXPECT_EQ(PairSource::from_eps(p, e).eps(), e);
        }
    }
}

TEST(sources, raw_joint_validation) {
    EXPECT_NO_THROW(PairSource::from_joint(0.4, 0.1, 0.2, 0.3));
    EXPECT_THROW(PairSource::from_joint(0.4, 0.1, 0.2, 0.2), ModelError);
    EXPECT_THROW(PairSource::from_joint(-0.1, 0.5, 0.3, 0.3), ModelError);
    EXPECT_THROW(PairSource::from_joint(0.5, 0.5, 0.0, 0.0), ModelError);  // X is constant
    const auto s = PairSource::from_joint(0.4, 0.1, 0.2, 0.3);
    EXPECT_DOUBLE_EQ(s.p_x(), 0.5);
    EXPECT_DOUBLE_EQ(s.p_y(), 0.4);
    EXPECT_DOUBLE_EQ(s.eps(), 0.3);
}

TEST(sources, kappa_examples) {
    // direct 4-cell sums worked by hand:
    // p = .5, eps = .1: .45*.25 + .45*.25 - .05*.25 - .05*.25 = 0.2
    EXPECT_NEAR(PairSource::from_eps(0.5, 0.1).kappa(), 0.2, 1e-15);
    EXPECT_NEAR(PairSource::from_eps(0.5, 0.0).kappa(), 0.25, 1e-15);
    // p = .1, eps = .1: .85*.01 + .05*.81 + 2*.05*(-.09) = 0.0085 + 0.0405 - 0.009 = 0.04
    EXPECT_NEAR(PairSource::from_eps(0.1, 0.1).kappa(), 0.04, 1e-15);
}

TEST(sources, kappa_closed_form_for_symmetric_flips) {
    for (double p = 0.05; p < 0.96; p += 0.05) {
        for (double e = 0.0; e <= 2 * std::min(p, 1 - p); e += 0.01) {
            EXPECT_NEAR(PairSource::from_eps(p, e).kappa(), p * (1 - p) - e / 2, 1e-14);
        }
    }
}

TEST(sources, kappa_below_letter_bound_on_grid) {
    for (int i = 1; i <= 19; ++i) {
        const double p = 0.05 * i;
        const double max_eps = std::min(0.5, 2 * std::min(p, 1 - p));
        for (double e = 0.0; e <= max_eps + 1e-12; e += 0.01) {
            const auto s = PairSource::from_eps(p, std::min(e, max_eps));
            const double bound =
                (1 - 2 * s.eps()) * std::sqrt(s.p_x() * (1 - s.p_x())) * std::sqrt(s.p_y() * (1 - s.p_y()));
            EXPECT_LE(s.kappa(), bound + 1e-15) << "p=" << p << " eps=" << e;
        }
    }
}

TEST(sources, letter_premise) {
    EXPECT_NEAR(PairSource::from_eps(0.5, 0.1).letter_correlation(), 0.8, 1e-15);
    for (int i = 1; i <= 19; ++i) {
        const double p = 0.05 * i;
        for (double e = 0.0; e <= std::min(0.5, 2 * std::min(p, 1 - p)); e += 0.01) {
            const auto s = PairSource::from_eps(p, e);
            // closed form of |kappa| <= (1 - 2 eps) p (1 - p) for the symmetric coupling
            const bool want = e / (1 - e) <= 4 * p * (1 - p) + 1e-12;
            EXPECT_EQ(s.single_letter_premise(), want) << p << " " << e;
            EXPECT_EQ(s.outside_proven_regime(), !want);
        }
    }
    EXPECT_TRUE(PairSource::from_eps(0.5, 0.6).outside_proven_regime());
    EXPECT_FALSE(PairSource::from_eps(0.5, 0.5).outside_proven_regime());
}

TEST(sources, sampling_extremes) {
    const auto same = PairSource::from_eps(0.3, 0.0);
    sample_pairs(same, 10, 7, 20000, [](uint32_t x, uint32_t y) { ASSERT_EQ(x, y); });
    const auto flip = PairSource::from_eps(0.5, 1.0);
    sample_pairs(flip, 10, 7, 20000, [](uint32_t x, uint32_t y) { ASSERT_EQ(x, ~y & 0x3FFu); });
}

TEST(sources, sampling_disagreement_rate) {
    const auto s = PairSource::from_eps(0.5, 0.1);
    uint64_t flips = 0;
    const uint64_t count = 1'000'000;
    sample_pairs(s, 10, 12345, count, [&](uint32_t x, uint32_t y) { flips += std::popcount(x ^ y); });
    const double rate = static_cast<double>(flips) / (10.0 * count);
    EXPECT_NEAR(rate, 0.1, 4 * std::sqrt(0.1 * 0.9 / 1e7));
}

TEST(sources, sampling_is_deterministic) {
    const auto s = PairSource::from_eps(0.3, 0.2);
    EXPECT_EQ(sample_pair(s, 8, 99, 100000), sample_pair(s, 8, 99, 100000));
    EXPECT_NE(sample_pair(s, 8, 99, 1000), sample_pair(s, 8, 100, 1000));
    // a prefix of a longer run equals the shorter run
    const auto longer = sample_pair(s, 8, 99, 70000);
    const auto shorter = sample_pair(s, 8, 99, 65536 + 10);
    EXPECT_TRUE(std::equal(shorter.begin(), shorter.end(), longer.begin()));
}

TEST(sources, shard_seeds_differ) {
    EXPECT_NE(shard_seed(1, 0), shard_seed(1, 1));
    EXPECT_NE(shard_seed(1, 0), shard_seed(2, 0));
    EXPECT_EQ(shard_seed(5, 3), shard_seed(5, 3));
}
