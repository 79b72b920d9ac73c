#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "simondl/cipher.hpp"
#include "simondl/gf2.hpp"

namespace simondl {

// Differential and linear trails through Simon-like rounds share one shape.
// With s_k = alpha^k (differences, forward) or s_k = lambda^k (masks),
//   s_{k+2} = s_k ^ v,   v in step(s_{k+1}),   round cost weight(s_{k+1}),
// and s_1 .. s_R must differ from 1^n. Running a mask trail backwards from
// its output pair uses the same recurrence on the reversed sequence.
enum class PropKind { Differential, Linear };

class Propagation {
public:
    Propagation(const CipherSpec& spec, PropKind kind);

    const CipherSpec& spec() const { return spec_; }
    PropKind kind() const { return kind_; }
    bool allowed(Word x) const { return x != spec_.mask(); }

    int weight(Word x) const;
    // Affine set of v with s_{k+2} = s_k ^ v; cached per word, not thread-safe.
    const gf2::AffineSpace& step(Word x) const;
    // Allowed words of weight <= K, ordered by (weight, value).
    std::vector<Word> words(int K) const;
    // Minimal weight of any nontrivial trail over `rounds` rounds.
    int bound(int rounds) const;
    // Seed the bound table with known values (e.g. from a previous run).
    void set_bound(int rounds, int w) const;

private:
    void build_words(int K) const;

    CipherSpec spec_;
    PropKind kind_;
    mutable std::unordered_map<Word, gf2::AffineSpace> steps_;
    mutable std::vector<Word> words_;  // sorted by (weight, value)
    mutable std::vector<int> word_weight_;
    mutable int words_k_ = -1;
    mutable std::vector<int> bounds_{0};
};

std::optional<gf2::AffineSpace> translate(const gf2::AffineSpace& s, Word by);

struct SearchTrail {
    std::vector<Word> s;  // s_0 .. s_{R+1}
    int weight = 0;
    int rounds() const { return static_cast<int>(s.size()) - 2; }
};

// How to fill a free end word: the smallest by (popcount, value) or every choice.
enum class EndChoice { Canonical, All };

struct FreeSearchOptions {
    bool rotation_canonical = true;  // only one representative per rotation class
    EndChoice first = EndChoice::Canonical;
    EndChoice last = EndChoice::Canonical;
};

using TrailVisitor = std::function<bool(const SearchTrail&)>;  // false stops the walk

// Every trail with weight <= T whose start pair (s_1, s_0) is nonzero.
void for_each_free_trail(const Propagation& p, int R, int T, const FreeSearchOptions& opt,
                         const TrailVisitor& fn);
// Every trail with weight <= T starting at the fixed pair (s_1, s_0).
void for_each_trail_from(const Propagation& p, Word s1, Word s0, int R, int T, EndChoice last,
                         const TrailVisitor& fn);

// Minimal-weight trails; ties resolved to the lexicographically smallest sequence.
std::optional<SearchTrail> best_free_trail(const Propagation& p, int R, int cap);
std::optional<SearchTrail> best_trail_from(const Propagation& p, Word s1, Word s0, int R, int cap);
// A trail between two fixed pairs with weight exactly `weight`, meet-in-the-middle.
// Gives up (nullopt) once either half exceeds node_budget visited trails.
std::optional<SearchTrail> connect(const Propagation& p, Word s1, Word s0, Word end_hi, Word end_lo,
                                   int R, int weight, std::size_t node_budget = 50'000'000);

// Shared by the per-module validators: recomputes the weight, nullopt if invalid.
std::optional<int> trail_weight(const Propagation& p, const std::vector<Word>& s);

}  // namespace simondl
