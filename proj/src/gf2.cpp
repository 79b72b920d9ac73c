#include "simondl/gf2.hpp"

#include <algorithm>

namespace simondl::gf2 {

namespace {

int lead(Word x) { return 63 - __builtin_clzll(x); }

// Reduced echelon form of a set of vectors (row space), leading bit = highest set bit.
std::vector<Word> echelon(std::vector<Word> v) {
    std::vector<Word> out;
    for (Word x : v) {
        for (Word b : out)
            if ((x >> lead(b)) & 1) x ^= b;
        if (!x) continue;
        for (Word& b : out)
            if ((b >> lead(x)) & 1) b ^= x;
        out.push_back(x);
    }
    std::sort(out.begin(), out.end(), [](Word p, Word q) { return lead(p) > lead(q); });
    return out;
}

}  // namespace

bool AffineSpace::contains(Word x) const {
    x ^= offset;
    for (Word b : basis)
        if ((x >> lead(b)) & 1) x ^= b;
    return x == 0;
}

std::vector<Word> AffineSpace::elements() const {
    std::vector<Word> out;
    out.reserve(std::size_t{1} << basis.size());
    for_each([&](Word x) { out.push_back(x); });
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<AffineSpace> solve(const std::vector<Equation>& eqs, int n) {
    // Gaussian elimination on augmented rows; bit n holds the rhs.
    std::vector<std::pair<Word, int>> rows;
    std::vector<int> pivot_of_col(n, -1);
    for (const auto& e : eqs) {
        Word r = e.row;
        int rhs = e.rhs & 1;
        for (int col = 0; col < n; ++col) {
            if (!((r >> col) & 1) || pivot_of_col[col] < 0) continue;
            r ^= rows[pivot_of_col[col]].first;
            rhs ^= rows[pivot_of_col[col]].second;
        }
        if (!r) {
            if (rhs) return std::nullopt;
            continue;
        }
        int col = __builtin_ctzll(r);
        for (auto& [row, b] : rows)
            if ((row >> col) & 1) {
                row ^= r;
                b ^= rhs;
            }
        pivot_of_col[col] = static_cast<int>(rows.size());
        rows.push_back({r, rhs});
    }
    // Back-substitute so that each pivot row has only its pivot among pivot columns.
    Word pivots = 0;
    for (int col = 0; col < n; ++col)
        if (pivot_of_col[col] >= 0) pivots |= Word{1} << col;
    AffineSpace s;
    for (int col = 0; col < n; ++col) {
        if (pivot_of_col[col] < 0) continue;
        if (rows[pivot_of_col[col]].second) s.offset |= Word{1} << col;
    }
    std::vector<Word> basis;
    for (int free = 0; free < n; ++free) {
        if ((pivots >> free) & 1) continue;
        Word v = Word{1} << free;
        for (int col = 0; col < n; ++col) {
            int p = pivot_of_col[col];
            if (p >= 0 && ((rows[p].first >> free) & 1)) v |= Word{1} << col;
        }
        basis.push_back(v);
    }
    s.basis = echelon(std::move(basis));
    for (Word b : s.basis)
        if ((s.offset >> lead(b)) & 1) s.offset ^= b;
    return s;
}

std::vector<Word> kernel(const std::vector<Word>& rows, int n) {
    std::vector<Equation> eqs;
    eqs.reserve(rows.size());
    for (Word r : rows) eqs.push_back({r, 0});
    return solve(eqs, n)->basis;
}

}  // namespace simondl::gf2
