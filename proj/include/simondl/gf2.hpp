#pragma once

#include <optional>
#include <vector>

#include "simondl/cipher.hpp"

namespace simondl::gf2 {

// offset + span(basis). Basis vectors are kept in reduced echelon form
// (distinct leading bits, each leading bit cleared in the others and in offset),
// so offset is the minimum element and enumeration never repeats.
struct AffineSpace {
    Word offset = 0;
    std::vector<Word> basis;

    int dim() const { return static_cast<int>(basis.size()); }
    bool contains(Word x) const;

    // Calls fn(x) for each of the 2^dim elements in Gray-code order.
    template <class Fn>
    void for_each(Fn&& fn) const {
        Word x = offset;
        fn(x);
        const std::uint64_t count = std::uint64_t{1} << basis.size();
        for (std::uint64_t i = 1; i < count; ++i) {
            x ^= basis[__builtin_ctzll(i)];
            fn(x);
        }
    }
    std::vector<Word> elements() const;
};

// A single equation <row, x> = rhs over GF(2).
struct Equation {
    Word row;
    int rhs;
};

// Solutions in {0,1}^n of the given system, or nullopt if inconsistent.
std::optional<AffineSpace> solve(const std::vector<Equation>& eqs, int n);

// Kernel of the n x n matrix whose row i is rows[i] (x -> bits i with parity(rows[i] & x)).
std::vector<Word> kernel(const std::vector<Word>& rows, int n);

}  // namespace simondl::gf2
