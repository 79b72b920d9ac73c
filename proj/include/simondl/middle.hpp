#pragma once

#include <vector>

#include "simondl/cipher.hpp"

namespace simondl {

// Continuous difference: entry i = 2 Pr[difference bit i = 0] - 1.
struct ContState {
    std::vector<double> left, right;
};

ContState init_from_difference(const CipherSpec& spec, WordPair delta);
// Applies `rounds` rounds of the AND rule; rounds = 0 is the identity.
ContState propagate(const CipherSpec& spec, ContState s, int rounds);
// States after 0, 1, ..., rounds rounds.
std::vector<ContState> propagate_trace(const CipherSpec& spec, ContState s, int rounds);
// Signed product of the entries selected by the mask; exactly 0 if any is 0.
double middle_correlation(const ContState& s, WordPair lambda);

}  // namespace simondl
