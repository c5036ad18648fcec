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

#include "depspec/core.hpp"

#include <set>
#include <vector>

#include "gtest/gtest.h"

#include "depspec/funlang.hpp"

using namespace depspec;

TEST(core, eval_and) {
    const auto f = conjunction(2);
    const std::vector<uint8_t> x11{1, 1}, x01{0, 1};
    EXPECT_TRUE(f.eval(x11));
    EXPECT_FALSE(f.eval(x01));
}

TEST(core, eval_parity) {
    const auto f = parity(2, SubsetMask(0b11));
    const std::vector<uint8_t> x{1, 0};
    EXPECT_TRUE(f.eval(x));
}

TEST(core, eval_length_mismatch) {
    const auto f = conjunction(2);
    const std::vector<uint8_t> x{1, 1, 1};
    EXPECT_THROW(f.eval(x), std::invalid_argument);
}

TEST(core, family_tables) {
    EXPECT_EQ(conjunction(2).words()[0], 0x8u);
    EXPECT_EQ(dictator(3, 1).words()[0], 0xAAu);
    EXPECT_EQ(parity(2, SubsetMask(0b11)).words()[0], 0x6u);
    EXPECT_EQ(disjunction(2).words()[0], 0xEu);
    EXPECT_EQ(majority(3).words()[0], 0xE8u);
    // tribes(2, 2) = (x1 & x2) | (x3 & x4)
    EXPECT_EQ(tribes(2, 2), parse("(x1 & x2) | (x3 & x4)"));
    EXPECT_EQ(threshold(4, 2).count_ones(), 11u);
}

TEST(core, make_family_params) {
    const std::vector<int> dict{3, 1};
    EXPECT_EQ(make_family("dictator", dict), dictator(3, 1));
    const std::vector<int> par{2, 1, 2};
    EXPECT_EQ(make_family("parity", par), parity(2, SubsetMask(0b11)));
    const std::vector<int> even{4};
    EXPECT_THROW(make_family("majority", even), std::invalid_argument);
    const std::vector<int> bad_coord{3, 4};
    EXPECT_THROW(make_family("dictator", bad_coord), std::invalid_argument);
    EXPECT_THROW(make_family("unknown", dict), std::invalid_argument);
    EXPECT_THROW(parity(3, SubsetMask(0)), std::invalid_argument);
}

TEST(core, large_variables_use_word_patterns) {
    const auto f = dictator(9, 8);
    for (uint64_t idx = 0; idx < f.size(); ++idx) {
        ASSERT_EQ(f[idx], ((idx >> 7) & 1u) != 0) << idx;
    }
}

TEST(core, weight) {
    EXPECT_EQ(weight(SubsetMask(0b101)), 2);
    EXPECT_EQ(weight(SubsetMask(0)), 0);
    EXPECT_EQ(weight(SubsetMask::full(5)), 5);
}

TEST(core, proper_subsets_examples) {
    auto collect = [](uint32_t m) {
        std::set<uint32_t> out;
        for (SubsetMask j : proper_subsets(SubsetMask(m))) {
            out.insert(j.bits);
        }
        return out;
    };
    EXPECT_EQ(collect(0b11), (std::set<uint32_t>{0b00, 0b01, 0b10}));
    EXPECT_TRUE(collect(0).empty());
    EXPECT_EQ(collect(0b101), (std::set<uint32_t>{0, 0b001, 0b100}));
}

TEST(core, proper_subsets_count_and_containment) {
    for (uint32_t m = 0; m < 1024; ++m) {
        const SubsetMask mask(m);
        std::set<uint32_t> seen;
        for (SubsetMask j : proper_subsets(mask)) {
            ASSERT_TRUE(j.strictly_within(mask));
            ASSERT_TRUE(seen.insert(j.bits).second) << "duplicate subset";
        }
        ASSERT_EQ(seen.size(), (size_t{1} << mask.weight()) - 1) << m;
    }
}

TEST(core, input_index_is_bijection) {
    const int n = 6;
    std::set<uint64_t> seen;
    for (uint64_t v = 0; v < (1u << n); ++v) {
        std::vector<uint8_t> x(n);
        for (int t = 0; t < n; ++t) {
            x[t] = (v >> t) & 1u;
        }
        const uint64_t idx = input_index(x);
        EXPECT_EQ(idx, v);
        seen.insert(idx);
    }
    EXPECT_EQ(seen.size(), size_t{1} << n);
}

TEST(core, singleton_parity_is_dictator) {
    for (int n = 1; n <= 8; ++n) {
        for (int t = 1; t <= n; ++t) {
            EXPECT_EQ(parity(n, SubsetMask::single(t)), dictator(n, t));
        }
    }
}

TEST(core, masks_by_weight_order) {
    const auto order = masks_by_weight(4);
    ASSERT_EQ(order.size(), 16u);
    for (size_t i = 1; i < order.size(); ++i) {
        const auto a = order[i - 1], b = order[i];
        EXPECT_TRUE(a.weight() < b.weight() || (a.weight() == b.weight() && a.bits < b.bits));
    }
}

TEST(core, cap_rejects_large_n) {
    EXPECT_THROW(BooleanFunction(kMaxVars + 1), CapacityError);
    EXPECT_THROW(BooleanFunction(0), std::invalid_argument);
}

TEST(core, complement_and_compare) {
    const auto f = conjunction(2);
    EXPECT_EQ((~f).words()[0], 0x7u);
    EXPECT_EQ(~~f, f);
    EXPECT_TRUE(compare_table_value(parity(2, SubsetMask(3)), ~parity(2, SubsetMask(3))) < 0);
}
