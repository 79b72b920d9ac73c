#pragma once

#include <optional>
#include <vector>

#include "simondl/cipher.hpp"
#include "simondl/gf2.hpp"
#include "simondl/propagation.hpp"

namespace simondl {

struct DiffTransition {
    Word alpha = 0;
    Word beta = 0;
    int weight = 0;
    auto operator<=>(const DiffTransition&) const = default;
};

// -log2 Pr[f(x) ^ f(x ^ alpha) = beta], nullopt when impossible.
std::optional<int> diff_round_weight(const CipherSpec& spec, Word alpha, Word beta);
// Weight shared by every possible output difference of alpha.
int diff_weight(const CipherSpec& spec, Word alpha);
// All beta reachable from alpha.
gf2::AffineSpace diff_output_space(const CipherSpec& spec, Word alpha);
// Ordered by (weight, beta).
std::vector<DiffTransition> enumerate_transitions(const CipherSpec& spec, Word alpha, int weight_cap);

struct DiffTrail {
    CipherSpec spec;
    std::vector<Word> alpha;  // alpha^0 .. alpha^{R+1}
    int weight = 0;

    int rounds() const { return static_cast<int>(alpha.size()) - 2; }
    WordPair input() const { return {alpha[1], alpha[0]}; }
    WordPair output() const { return {alpha[alpha.size() - 1], alpha[alpha.size() - 2]}; }
};

// Throws NotFound when nothing lies within weight_cap.
DiffTrail search_best_diff_trail(const CipherSpec& spec, int rounds, int weight_cap,
                                 std::optional<WordPair> input = std::nullopt);
// Recomputed weight of a trail, nullopt if some round is impossible or it is trivial.
std::optional<int> validate(const DiffTrail& t);

// A solver loop adds an output difference once per model solution. PerTrail keeps one
// entry per trail; DistinctPerWeight keeps one entry per distinct (output, weight).
enum class Multiplicity { PerTrail, DistinctPerWeight };

struct Endpoint {
    WordPair pair;
    int weight = 0;
    auto operator<=>(const Endpoint&) const = default;
};

// Output differences of all R-round trails from `input` with weight <= bound,
// sorted by (weight, pair).
std::vector<Endpoint> enumerate_diff_trails_from(const CipherSpec& spec, WordPair input, int rounds, int bound,
                                                 Multiplicity mode = Multiplicity::PerTrail);

}  // namespace simondl
