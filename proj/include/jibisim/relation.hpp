#pragma once

#include "jibisim/lts.hpp"

#include <cstdint>
#include <vector>

namespace jibisim {

/// Dense bit matrix; rows are left states, columns right states.
class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols, bool value = false)
        : rows_(rows), cols_(cols),
          words_per_row_((cols + 63) / 64),
          bits_(rows * words_per_row_, value ? ~std::uint64_t{0} : 0) {
        if (value) clear_padding();
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    bool get(std::size_t r, std::size_t c) const {
        return (bits_[r * words_per_row_ + (c >> 6)] >> (c & 63)) & 1u;
    }
    void set(std::size_t r, std::size_t c, bool v) {
        auto& w = bits_[r * words_per_row_ + (c >> 6)];
        const std::uint64_t mask = std::uint64_t{1} << (c & 63);
        if (v)
            w |= mask;
        else
            w &= ~mask;
    }

    std::size_t count() const {
        std::size_t n = 0;
        for (auto w : bits_) n += static_cast<std::size_t>(__builtin_popcountll(w));
        return n;
    }

    bool operator==(const BitMatrix& other) const = default;

private:
    void clear_padding() {
        const std::size_t used = cols_ & 63;
        if (used == 0 || words_per_row_ == 0) return;
        const std::uint64_t mask = (std::uint64_t{1} << used) - 1;
        for (std::size_t r = 0; r < rows_; ++r)
            bits_[r * words_per_row_ + words_per_row_ - 1] &= mask;
    }

    std::size_t rows_ = 0, cols_ = 0, words_per_row_ = 0;
    std::vector<std::uint64_t> bits_;
};

/// A set of state pairs between a left and a right LTS (which may be the
/// same system). Membership is O(1); the structural checks below are meant
/// for the test suites and for debug assertions on small systems.
class Relation {
public:
    Relation() = default;
    Relation(std::size_t left_states, std::size_t right_states, bool full = false)
        : bits_(left_states, right_states, full) {}

    std::size_t left_size() const { return bits_.rows(); }
    std::size_t right_size() const { return bits_.cols(); }

    bool contains(StateId s, StateId t) const { return bits_.get(s, t); }
    void insert(StateId s, StateId t) { bits_.set(s, t, true); }
    void erase(StateId s, StateId t) { bits_.set(s, t, false); }
    std::size_t size() const { return bits_.count(); }

    /// Pairs in row-major order, the canonical order everywhere.
    std::vector<std::pair<StateId, StateId>> pairs() const {
        std::vector<std::pair<StateId, StateId>> out;
        for (StateId s = 0; s < bits_.rows(); ++s)
            for (StateId t = 0; t < bits_.cols(); ++t)
                if (bits_.get(s, t)) out.emplace_back(s, t);
        return out;
    }

    Relation converse() const {
        Relation out(right_size(), left_size());
        for (StateId s = 0; s < left_size(); ++s)
            for (StateId t = 0; t < right_size(); ++t)
                if (contains(s, t)) out.insert(t, s);
        return out;
    }

    bool is_reflexive() const {
        if (left_size() != right_size()) return false;
        for (StateId s = 0; s < left_size(); ++s)
            if (!contains(s, s)) return false;
        return true;
    }

    bool is_symmetric() const {
        if (left_size() != right_size()) return false;
        for (StateId s = 0; s < left_size(); ++s)
            for (StateId t = 0; t < right_size(); ++t)
                if (contains(s, t) != contains(t, s)) return false;
        return true;
    }

    bool is_transitive() const {
        if (left_size() != right_size()) return false;
        for (StateId s = 0; s < left_size(); ++s)
            for (StateId t = 0; t < left_size(); ++t) {
                if (!contains(s, t)) continue;
                for (StateId u = 0; u < left_size(); ++u)
                    if (contains(t, u) && !contains(s, u)) return false;
            }
        return true;
    }

    bool is_preorder() const { return is_reflexive() && is_transitive(); }
    bool is_equivalence() const { return is_preorder() && is_symmetric(); }

    /// Subset test against a relation of identical shape.
    bool subset_of(const Relation& other) const {
        for (StateId s = 0; s < left_size(); ++s)
            for (StateId t = 0; t < right_size(); ++t)
                if (contains(s, t) && !other.contains(s, t)) return false;
        return true;
    }

    bool operator==(const Relation& other) const = default;

private:
    BitMatrix bits_;
};

} // namespace jibisim
