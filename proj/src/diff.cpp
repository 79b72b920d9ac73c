#include "simondl/diff.hpp"

#include <algorithm>
#include <climits>

namespace simondl {

namespace {

struct DiffBits {
    Word varibits, doublebits;
};

DiffBits diff_bits(const CipherSpec& s, Word alpha) {
    const int a = s.a(), b = s.b();
    return {s.rot(alpha, a) | s.rot(alpha, b), s.rot(alpha, b) & ~s.rot(alpha, a) & s.rot(alpha, 2 * a - b)};
}

}  // namespace

std::optional<int> diff_round_weight(const CipherSpec& s, Word alpha, Word beta) {
    const Word gamma = (beta ^ s.rot(alpha, s.c())) & s.mask();
    if (alpha == s.mask()) {
        if (popcount(gamma) % 2 == 0) return s.width() - 1;
        return std::nullopt;
    }
    auto [vb, db] = diff_bits(s, alpha);
    if (gamma & ~vb) return std::nullopt;
    if ((gamma ^ s.rot(gamma, s.a() - s.b())) & db) return std::nullopt;
    return popcount(vb ^ db);
}

int diff_weight(const CipherSpec& s, Word alpha) {
    if (alpha == s.mask()) return s.width() - 1;
    auto [vb, db] = diff_bits(s, alpha);
    return popcount(vb ^ db);
}

gf2::AffineSpace diff_output_space(const CipherSpec& s, Word alpha) {
    const int n = s.width();
    std::vector<gf2::Equation> eqs;
    if (alpha == s.mask()) {
        eqs.push_back({s.mask(), 0});
    } else {
        auto [vb, db] = diff_bits(s, alpha);
        const int d = s.a() - s.b();
        for (int i = 0; i < n; ++i) {
            if (!((vb >> i) & 1)) eqs.push_back({Word{1} << i, 0});
            // gamma_i = gamma_{i-d} on doublebits
            else if ((db >> i) & 1) eqs.push_back({(Word{1} << i) ^ (Word{1} << (((i - d) % n + n) % n)), 0});
        }
    }
    return *translate(*gf2::solve(eqs, n), s.rot(alpha, s.c()));
}

std::vector<DiffTransition> enumerate_transitions(const CipherSpec& s, Word alpha, int weight_cap) {
    std::vector<DiffTransition> out;
    const int w = diff_weight(s, alpha);
    if (w > weight_cap) return out;
    diff_output_space(s, alpha).for_each([&](Word beta) { out.push_back({alpha, beta, w}); });
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.beta < y.beta; });
    return out;
}

DiffTrail search_best_diff_trail(const CipherSpec& spec, int rounds, int weight_cap, std::optional<WordPair> input) {
    if (rounds < 1) throw ConfigError("differential trail needs at least one round");
    Propagation p(spec, PropKind::Differential);
    std::optional<SearchTrail> t;
    if (input) {
        if (input->left == 0 && input->right == 0) throw ConfigError("input difference must be nonzero");
        t = best_trail_from(p, input->left, input->right, rounds, weight_cap);
    } else {
        t = best_free_trail(p, rounds, weight_cap);
    }
    if (!t) throw NotFound("no " + std::to_string(rounds) + "-round differential trail within weight " +
                           std::to_string(weight_cap));
    return {spec, t->s, t->weight};
}

std::optional<int> validate(const DiffTrail& t) {
    return trail_weight(Propagation(t.spec, PropKind::Differential), t.alpha);
}

std::vector<Endpoint> enumerate_diff_trails_from(const CipherSpec& spec, WordPair input, int rounds, int bound,
                                                 Multiplicity mode) {
    if (input.left == 0 && input.right == 0) throw ConfigError("input difference must be nonzero");
    Propagation p(spec, PropKind::Differential);
    std::vector<Endpoint> out;
    const int R = rounds;
    for_each_trail_from(p, input.left, input.right, R, bound, EndChoice::All, [&](const SearchTrail& t) {
        out.push_back({{t.s[R + 1], t.s[R]}, t.weight});
        return true;
    });
    std::sort(out.begin(), out.end(), [](const Endpoint& x, const Endpoint& y) {
        return x.weight != y.weight ? x.weight < y.weight : x.pair < y.pair;
    });
    if (mode == Multiplicity::DistinctPerWeight) out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace simondl
