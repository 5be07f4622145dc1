#pragma once

#include "booldyn/rational.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace booldyn {

// Exact rational row space in reduced echelon form over a dynamically
// discovered, totally ordered key space. Every basis row remembers the linear
// combination of originally inserted vectors that produced it, so membership
// answers come with checkable certificates. Pivots are the least key of each
// row under Compare; choosing Compare so that "uninteresting" keys sort first
// makes the rows whose pivot is an "interesting" key a basis of the row space
// intersected with the interesting coordinate subspace.
template <class Key, class Compare = std::less<Key>>
class RowSpace {
public:
    using Vec = std::map<Key, Rational, Compare>;
    using Combo = std::map<std::size_t, Rational>; // inserted index -> coefficient

    struct Row {
        Vec vec;     // pivot coefficient normalized to 1
        Combo combo; // vec == sum combo[i] * inserted_i
        Key pivot;
    };

    explicit RowSpace(Compare cmp = Compare()) : cmp_(std::move(cmp)) {}

    const Compare& compare() const { return cmp_; }
    std::size_t rank() const { return rows_.size(); }
    std::size_t inserted() const { return inserted_; }
    const std::vector<Row>& rows() const { return rows_; }

    Vec make_vec() const { return Vec(cmp_); }

    struct Reduction {
        Vec remainder;
        Combo combo; // remainder == v - sum combo[i] * inserted_i
    };

    // Reduce v against the basis. Basis rows carry no other row's pivot, so a
    // single pass is complete.
    Reduction reduce(Vec v) const {
        Combo combo;
        for (const Row& row : rows_) {
            auto it = v.find(row.pivot);
            if (it == v.end()) continue;
            Rational f = it->second;
            axpy(v, -f, row.vec);
            for (const auto& [i, c] : row.combo) add_to(combo, i, f * c);
        }
        return {std::move(v), std::move(combo)};
    }

    // Insert one vector; returns whether the rank grew. Dependent vectors
    // still consume an index (combinations refer to insertion order).
    bool insert(Vec v) {
        const std::size_t idx = inserted_++;
        Reduction red = reduce(std::move(v));
        if (red.remainder.empty()) return false;
        Row row;
        row.vec = std::move(red.remainder);
        row.pivot = row.vec.begin()->first;
        Rational lead = row.vec.begin()->second;
        Rational inv = Rational(1) / lead;
        for (auto& [k, c] : row.vec) c *= inv;
        // row = (v - sum red.combo * inserted) / lead
        row.combo[idx] = inv;
        for (const auto& [i, c] : red.combo) add_to(row.combo, i, -inv * c);
        // keep full reduction: eliminate the new pivot everywhere else
        for (Row& other : rows_) {
            auto it = other.vec.find(row.pivot);
            if (it == other.vec.end()) continue;
            Rational f = it->second;
            axpy(other.vec, -f, row.vec);
            for (const auto& [i, c] : row.combo) add_to(other.combo, i, -f * c);
        }
        rows_.push_back(std::move(row));
        return true;
    }

    // If v lies in the span, return coefficients over inserted vectors.
    std::optional<Combo> solve(Vec v) const {
        Reduction red = reduce(std::move(v));
        if (!red.remainder.empty()) return std::nullopt;
        return std::move(red.combo);
    }

    bool contains(Vec v) const { return solve(std::move(v)).has_value(); }

private:
    Compare cmp_;
    std::vector<Row> rows_;
    std::size_t inserted_ = 0;

    static void add_to(Combo& m, std::size_t i, Rational c) {
        if (c == 0) return;
        auto it = m.find(i);
        if (it == m.end()) {
            m.emplace(i, std::move(c));
        } else {
            it->second += c;
            if (it->second == 0) m.erase(it);
        }
    }

    // dst += f * src
    static void axpy(Vec& dst, const Rational& f, const Vec& src) {
        if (f == 0) return;
        for (const auto& [k, c] : src) {
            auto it = dst.find(k);
            if (it == dst.end()) {
                dst.emplace(k, f * c);
            } else {
                it->second += f * c;
                if (it->second == 0) dst.erase(it);
            }
        }
    }
};

} // namespace booldyn
