#pragma once

#include <bit>
#include <cstdint>
#include <cstddef>
#include <vector>

namespace zolaw {

// Fixed-size dynamic bitset over 64-bit words. Bits past `size()` are kept zero.
class Bitset {
public:
    Bitset() = default;
    explicit Bitset(std::size_t n, bool fill = false) : n_(n), words_((n + 63) / 64, fill ? ~0ull : 0ull) {
        trim();
    }

    std::size_t size() const { return n_; }

    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i) { words_[i >> 6] |= (1ull << (i & 63)); }
    void reset(std::size_t i) { words_[i >> 6] &= ~(1ull << (i & 63)); }
    void assign(std::size_t i, bool v) { v ? set(i) : reset(i); }

    void clear() { for (auto& w : words_) w = 0; }
    void fill() { for (auto& w : words_) w = ~0ull; trim(); }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += std::popcount(w);
        return c;
    }
    bool any() const {
        for (auto w : words_) if (w) return true;
        return false;
    }
    bool none() const { return !any(); }

    Bitset& operator&=(const Bitset& o) { for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i]; return *this; }
    Bitset& operator|=(const Bitset& o) { for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i]; return *this; }
    Bitset& operator^=(const Bitset& o) { for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i]; return *this; }
    Bitset& subtract(const Bitset& o) { for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i]; return *this; }
    Bitset& flip() { for (auto& w : words_) w = ~w; trim(); return *this; }

    friend Bitset operator&(Bitset a, const Bitset& b) { a &= b; return a; }
    friend Bitset operator|(Bitset a, const Bitset& b) { a |= b; return a; }
    friend Bitset operator^(Bitset a, const Bitset& b) { a ^= b; return a; }
    friend Bitset operator~(Bitset a) { a.flip(); return a; }

    bool operator==(const Bitset& o) const { return n_ == o.n_ && words_ == o.words_; }

    bool is_subset_of(const Bitset& o) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~o.words_[i]) return false;
        return true;
    }
    std::size_t intersect_count(const Bitset& o) const {
        std::size_t c = 0;
        for (std::size_t i = 0; i < words_.size(); ++i) c += std::popcount(words_[i] & o.words_[i]);
        return c;
    }

    // Index of lowest set bit, or size() if none.
    std::size_t first() const { return next(0); }
    std::size_t next(std::size_t from) const {
        if (from >= n_) return n_;
        std::size_t wi = from >> 6;
        std::uint64_t w = words_[wi] & (~0ull << (from & 63));
        while (true) {
            if (w) return (wi << 6) + std::countr_zero(w);
            if (++wi == words_.size()) return n_;
            w = words_[wi];
        }
    }

    std::vector<int> to_vector() const {
        std::vector<int> out;
        for (std::size_t i = first(); i < n_; i = next(i + 1)) out.push_back(static_cast<int>(i));
        return out;
    }

    std::uint64_t word(std::size_t wi) const { return words_[wi]; }
    std::size_t word_count() const { return words_.size(); }

private:
    void trim() {
        if (n_ & 63) words_.back() &= (~0ull >> (64 - (n_ & 63)));
        if (n_ == 0 && !words_.empty()) words_.assign(words_.size(), 0);
    }

    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

} // namespace zolaw
