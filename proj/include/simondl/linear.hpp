#pragma once

#include <optional>
#include <vector>

#include "simondl/cipher.hpp"
#include "simondl/diff.hpp"
#include "simondl/gf2.hpp"

namespace simondl {

// Correlation weight of the round l0,l1 -> l1,l2 (the three masks lambda^r,
// lambda^{r+1}, lambda^{r+2}); nullopt when the correlation is zero.
// Magnitudes only: the sign of the round correlation is not tracked.
std::optional<int> lin_round_weight(const CipherSpec& spec, Word l0, Word l1, Word l2);
// Weight of every nonzero-correlation approximation with output mask lout.
int lin_weight(const CipherSpec& spec, Word lout);
// Input masks of the AND part (lambda_in) with nonzero correlation to lout.
gf2::AffineSpace lin_input_space(const CipherSpec& spec, Word lout);

struct MaskPredecessor {
    Word mask = 0;  // lambda^r
    int weight = 0;
    auto operator<=>(const MaskPredecessor&) const = default;
};

// All lambda^r for the output pair (lambda^{r+1}, lambda^{r+2}), ordered by (weight, mask).
std::vector<MaskPredecessor> enumerate_mask_predecessors(const CipherSpec& spec, WordPair out, int weight_cap);

struct LinTrail {
    CipherSpec spec;
    std::vector<Word> lambda;  // lambda^0 .. lambda^{R+1}
    int weight = 0;

    int rounds() const { return static_cast<int>(lambda.size()) - 2; }
    WordPair input() const { return {lambda[0], lambda[1]}; }
    WordPair output() const { return {lambda[lambda.size() - 2], lambda[lambda.size() - 1]}; }
};

LinTrail search_best_lin_trail(const CipherSpec& spec, int rounds, int weight_cap,
                               std::optional<WordPair> output = std::nullopt);
std::optional<int> validate(const LinTrail& t);

// Input mask pairs (lambda^0, lambda^1) of all trails ending in `output` with
// weight <= bound, sorted by (weight, pair).
std::vector<Endpoint> enumerate_lin_trails_to(const CipherSpec& spec, WordPair output, int rounds, int bound,
                                              Multiplicity mode = Multiplicity::PerTrail);

// Mask sequence <-> generic backward sequence (s_k = lambda^{R+1-k}).
std::vector<Word> reversed(std::vector<Word> s);

}  // namespace simondl
