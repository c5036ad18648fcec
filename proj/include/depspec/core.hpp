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
#include <bit>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <iterator>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace depspec {

/// Largest supported coordinate count. A real table at this size is 512 MiB.
inline constexpr int kMaxVars = 26;

/// The requested model cannot be built (infeasible coupling, degenerate bias, ...).
struct ModelError : std::domain_error {
    using std::domain_error::domain_error;
};

/// The instance exceeds the capacity of the chosen method.
struct CapacityError : std::length_error {
    using std::length_error::length_error;
};

/// Returns `default_cap`, lowered by the DEPSPEC_MAX_N environment variable when set.
/// The variable can never raise a cap.
inline int effective_cap(int default_cap) {
    const char *env = std::getenv("DEPSPEC_MAX_N");
    if (env == nullptr || *env == '\0') {
        return default_cap;
    }
    char *end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 0) {
        return default_cap;
    }
    return static_cast<int>(std::min<long>(v, default_cap));
}

/// A subset of coordinates {1..n}; coordinate t is present iff bit t-1 is set.
struct SubsetMask {
    uint32_t bits = 0;

    constexpr SubsetMask() = default;
    constexpr explicit SubsetMask(uint32_t b) : bits(b) {}

    constexpr int weight() const { return std::popcount(bits); }
    constexpr bool has(int coordinate) const { return (bits >> (coordinate - 1)) & 1u; }
    /// j.within(i) iff every coordinate of j is in i.
    constexpr bool within(SubsetMask other) const { return (bits & other.bits) == bits; }
    constexpr bool strictly_within(SubsetMask other) const { return within(other) && bits != other.bits; }

    static constexpr SubsetMask full(int n) { return SubsetMask(n >= 32 ? ~0u : (1u << n) - 1u); }
    static constexpr SubsetMask single(int coordinate) { return SubsetMask(1u << (coordinate - 1)); }

    friend constexpr bool operator==(SubsetMask, SubsetMask) = default;
    friend constexpr auto operator<=>(SubsetMask, SubsetMask) = default;
};

constexpr int weight(SubsetMask m) { return m.weight(); }

/// Range over every proper subset of a mask, each exactly once, in decreasing numeric order.
class ProperSubsets {
   public:
    class iterator {
       public:
        using iterator_category = std::input_iterator_tag;
        using value_type = SubsetMask;
        using difference_type = std::ptrdiff_t;
        using pointer = void;
        using reference = SubsetMask;

        iterator() = default;
        iterator(uint32_t mask, uint32_t current, bool done) : mask_(mask), current_(current), done_(done) {}

        SubsetMask operator*() const { return SubsetMask(current_); }
        iterator &operator++() {
            if (current_ == 0) {
                done_ = true;
            } else {
                current_ = (current_ - 1) & mask_;
            }
            return *this;
        }
        iterator operator++(int) {
            auto old = *this;
            ++*this;
            return old;
        }
        friend bool operator==(const iterator &a, const iterator &b) {
            return a.done_ == b.done_ && (a.done_ || a.current_ == b.current_);
        }

       private:
        uint32_t mask_ = 0;
        uint32_t current_ = 0;
        bool done_ = true;
    };

    explicit ProperSubsets(SubsetMask m) : mask_(m.bits) {}

    iterator begin() const {
        if (mask_ == 0) {
            return end();
        }
        return iterator(mask_, (mask_ - 1) & mask_, false);
    }
    iterator end() const { return iterator(mask_, 0, true); }

   private:
    uint32_t mask_;
};

inline ProperSubsets proper_subsets(SubsetMask m) { return ProperSubsets(m); }

/// All 2^n masks ordered by increasing weight, ties by numeric value.
inline std::vector<SubsetMask> masks_by_weight(int n) {
    std::vector<SubsetMask> out;
    out.reserve(size_t{1} << n);
    for (uint32_t m = 0; m < (uint32_t{1} << n); ++m) {
        out.emplace_back(m);
    }
    std::stable_sort(out.begin(), out.end(), [](SubsetMask a, SubsetMask b) { return a.weight() < b.weight(); });
    return out;
}

/// Index of an input vector; x[0] is coordinate 1 and lands in the least significant bit.
inline uint64_t input_index(std::span<const uint8_t> x) {
    uint64_t idx = 0;
    for (size_t t = 0; t < x.size(); ++t) {
        if (x[t] > 1) {
            throw std::invalid_argument("input bits must be 0 or 1");
        }
        idx |= uint64_t{x[t]} << t;
    }
    return idx;
}

/// A Boolean function e: {0,1}^n -> {0,1} stored as a packed truth table.
///
/// Entry idx(x) = sum_t x_t 2^(t-1) lives in bit (idx % 64) of word (idx / 64).
/// Bits past 2^n in the last word are always zero.
class BooleanFunction {
   public:
    /// The constant-zero function of n variables.
    explicit BooleanFunction(int n) : n_(n) {
        if (n < 1) {
            throw std::invalid_argument("a Boolean function needs at least one variable");
        }
        if (n > effective_cap(kMaxVars)) {
            throw CapacityError("n = " + std::to_string(n) + " exceeds the supported maximum of " +
                                std::to_string(effective_cap(kMaxVars)));
        }
        words_.assign(word_count(n), 0);
    }

    static BooleanFunction constant(int n, bool value) {
        BooleanFunction f(n);
        if (value) {
            std::fill(f.words_.begin(), f.words_.end(), ~uint64_t{0});
            f.trim();
        }
        return f;
    }

    /// The function x_t (coordinates are 1-based).
    static BooleanFunction variable(int n, int t) {
        if (t < 1 || t > n) {
            throw std::invalid_argument("variable index out of range");
        }
        static constexpr uint64_t kPatterns[6] = {
            0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
            0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull,
        };
        BooleanFunction f(n);
        for (size_t w = 0; w < f.words_.size(); ++w) {
            if (t <= 6) {
                f.words_[w] = kPatterns[t - 1];
            } else {
                f.words_[w] = ((w >> (t - 7)) & 1u) ? ~uint64_t{0} : 0;
            }
        }
        f.trim();
        return f;
    }

    template <class Predicate>
    static BooleanFunction from_predicate(int n, Predicate &&pred) {
        BooleanFunction f(n);
        for (uint64_t idx = 0; idx < f.size(); ++idx) {
            if (pred(idx)) {
                f.words_[idx >> 6] |= uint64_t{1} << (idx & 63);
            }
        }
        return f;
    }

    /// Builds from packed words; bits past 2^n must be zero.
    static BooleanFunction from_words(int n, std::vector<uint64_t> words) {
        BooleanFunction f(n);
        if (words.size() != f.words_.size()) {
            throw std::invalid_argument("truth table word count does not match n");
        }
        f.words_ = std::move(words);
        if (n < 6 && (f.words_[0] >> (uint64_t{1} << n)) != 0) {
            throw std::invalid_argument("truth table has bits past 2^n");
        }
        return f;
    }

    int n() const { return n_; }
    uint64_t size() const { return uint64_t{1} << n_; }
    std::span<const uint64_t> words() const { return words_; }

    bool operator[](uint64_t idx) const { return (words_[idx >> 6] >> (idx & 63)) & 1u; }

    bool eval(std::span<const uint8_t> x) const {
        if (x.size() != static_cast<size_t>(n_)) {
            throw std::invalid_argument("input length " + std::to_string(x.size()) + " does not match n = " +
                                        std::to_string(n_));
        }
        return (*this)[input_index(x)];
    }

    uint64_t count_ones() const {
        uint64_t total = 0;
        for (uint64_t w : words_) {
            total += std::popcount(w);
        }
        return total;
    }

    BooleanFunction with_flipped(uint64_t idx) const {
        BooleanFunction out = *this;
        out.words_[idx >> 6] ^= uint64_t{1} << (idx & 63);
        return out;
    }

    BooleanFunction operator~() const {
        BooleanFunction out = *this;
        for (auto &w : out.words_) {
            w = ~w;
        }
        out.trim();
        return out;
    }

    friend BooleanFunction operator&(const BooleanFunction &a, const BooleanFunction &b) {
        return combine(a, b, [](uint64_t x, uint64_t y) { return x & y; });
    }
    friend BooleanFunction operator|(const BooleanFunction &a, const BooleanFunction &b) {
        return combine(a, b, [](uint64_t x, uint64_t y) { return x | y; });
    }
    friend BooleanFunction operator^(const BooleanFunction &a, const BooleanFunction &b) {
        return combine(a, b, [](uint64_t x, uint64_t y) { return x ^ y; });
    }

    friend bool operator==(const BooleanFunction &a, const BooleanFunction &b) {
        return a.n_ == b.n_ && a.words_ == b.words_;
    }

    /// Orders by n, then by the truth table read as an unsigned integer.
    friend std::strong_ordering compare_table_value(const BooleanFunction &a, const BooleanFunction &b) {
        if (a.n_ != b.n_) {
            return a.n_ <=> b.n_;
        }
        for (size_t w = a.words_.size(); w-- > 0;) {
            if (a.words_[w] != b.words_[w]) {
                return a.words_[w] <=> b.words_[w];
            }
        }
        return std::strong_ordering::equal;
    }

   private:
    static size_t word_count(int n) { return n >= 6 ? size_t{1} << (n - 6) : 1; }

    void trim() {
        if (n_ < 6) {
            words_[0] &= (uint64_t{1} << (uint64_t{1} << n_)) - 1;
        }
    }

    template <class Op>
    static BooleanFunction combine(const BooleanFunction &a, const BooleanFunction &b, Op op) {
        if (a.n_ != b.n_) {
            throw std::invalid_argument("cannot combine functions of different arity");
        }
        BooleanFunction out = a;
        for (size_t w = 0; w < out.words_.size(); ++w) {
            out.words_[w] = op(a.words_[w], b.words_[w]);
        }
        out.trim();
        return out;
    }

    int n_;
    std::vector<uint64_t> words_;
};

/// e = x_t.
inline BooleanFunction dictator(int n, int t) { return BooleanFunction::variable(n, t); }

/// e = XOR of x_t over the coordinates in mask (the additive functions).
inline BooleanFunction parity(int n, SubsetMask mask) {
    if (mask.bits == 0) {
        throw std::invalid_argument("parity needs a nonempty coordinate set");
    }
    if (!mask.within(SubsetMask::full(n))) {
        throw std::invalid_argument("parity mask references a coordinate beyond n");
    }
    BooleanFunction f(n);
    for (int t = 1; t <= n; ++t) {
        if (mask.has(t)) {
            f = f ^ BooleanFunction::variable(n, t);
        }
    }
    return f;
}

/// e = 1 iff at least k inputs are 1.
inline BooleanFunction threshold(int n, int k) {
    if (k < 0 || k > n + 1) {
        throw std::invalid_argument("threshold k must lie in [0, n+1]");
    }
    return BooleanFunction::from_predicate(n, [k](uint64_t idx) { return std::popcount(idx) >= k; });
}

inline BooleanFunction majority(int n) {
    if (n % 2 == 0) {
        throw std::invalid_argument("majority needs an odd number of inputs");
    }
    return threshold(n, (n + 1) / 2);
}

inline BooleanFunction conjunction(int n) { return threshold(n, n); }
inline BooleanFunction disjunction(int n) { return threshold(n, 1); }

/// OR of `count` disjoint ANDs, each over `width` consecutive coordinates; n = width * count.
inline BooleanFunction tribes(int width, int count) {
    if (width < 1 || count < 1) {
        throw std::invalid_argument("tribes needs positive width and count");
    }
    const int n = width * count;
    const uint64_t block = (uint64_t{1} << width) - 1;
    return BooleanFunction::from_predicate(n, [=](uint64_t idx) {
        for (int b = 0; b < count; ++b) {
            if (((idx >> (b * width)) & block) == block) {
                return true;
            }
        }
        return false;
    });
}

/// Builds a named family member. `params[0]` is n (the block width for tribes); the rest are
/// family arguments: dictator n t | parity n t1 t2 ... (all coordinates when omitted) |
/// majority n | and n | or n | threshold n k | tribes width count.
inline BooleanFunction make_family(std::string_view name, std::span<const int> params) {
    auto arity = [&](size_t lo, size_t hi) {
        if (params.size() < lo || params.size() > hi) {
            throw std::invalid_argument("wrong number of parameters for family '" + std::string(name) + "'");
        }
    };
    if (params.empty()) {
        arity(1, 1);
    }
    const int n = params[0];
    if (name == "dictator") {
        arity(2, 2);
        if (params[1] < 1 || params[1] > n) {
            throw std::invalid_argument("dictator coordinate must lie in [1, n]");
        }
        return dictator(n, params[1]);
    }
    if (name == "parity") {
        if (params.size() == 1) {
            return parity(n, SubsetMask::full(n));
        }
        SubsetMask mask;
        for (size_t i = 1; i < params.size(); ++i) {
            if (params[i] < 1 || params[i] > n) {
                throw std::invalid_argument("parity coordinate must lie in [1, n]");
            }
            mask.bits |= SubsetMask::single(params[i]).bits;
        }
        return parity(n, mask);
    }
    if (name == "majority") {
        arity(1, 1);
        return majority(n);
    }
    if (name == "and") {
        arity(1, 1);
        return conjunction(n);
    }
    if (name == "or") {
        arity(1, 1);
        return disjunction(n);
    }
    if (name == "threshold") {
        arity(2, 2);
        return threshold(n, params[1]);
    }
    if (name == "tribes") {
        arity(2, 2);
        return tribes(params[0], params[1]);
    }
    throw std::invalid_argument("unknown function family '" + std::string(name) + "'");
}

inline bool is_known_family(std::string_view name) {
    for (std::string_view k : {"dictator", "parity", "majority", "and", "or", "threshold", "tribes"}) {
        if (name == k) {
            return true;
        }
    }
    return false;
}

}  // namespace depspec
