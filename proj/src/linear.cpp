#include "simondl/linear.hpp"

#include <algorithm>

#include "simondl/propagation.hpp"

namespace simondl {

namespace {

Word abits_of(const CipherSpec& s, Word lout) {
    const int d = s.b() - s.a();
    Word tmp = lout, abits = lout;
    while (tmp) {
        tmp = lout & s.rot(tmp, d);
        abits ^= tmp;
    }
    return abits;
}

}  // namespace

std::optional<int> lin_round_weight(const CipherSpec& s, Word l0, Word l1, Word l2) {
    const int a = s.a(), b = s.b(), n = s.width();
    const Word lout = l1 & s.mask();
    const Word lin = (l0 ^ l2 ^ s.rot(l1, -s.c())) & s.mask();
    if (((s.rot(lout, -a) | s.rot(lout, -b)) ^ lin) & lin) return std::nullopt;
    if (lout == s.mask()) {
        // Fold 2-bit chunks of lambda_in: even and odd bits must both have even parity.
        Word v = 0;
        for (int i = 0; i < n; i += 2) v ^= (lin >> i) & 3;
        if (v) return std::nullopt;
        // The exhaustive Walsh oracle gives |cor| = 2^{-(n-2)/2} here.
        return (n - 2) / 2;
    }
    const Word abits = abits_of(s, lout);
    Word sbits = s.rot(lout, -a) & ~s.rot(lout, -b) & ~s.rot(abits, -a) & s.mask();
    Word pbits = s.rot(sbits & lin, 2 * a - 2 * b);
    while (sbits) {
        sbits = s.rot(sbits, 2 * a - 2 * b) & s.rot(lout, a - 2 * b);
        pbits = s.rot((sbits & lin) ^ pbits, 2 * a - 2 * b);
    }
    if (pbits) return std::nullopt;
    return popcount(abits);
}

int lin_weight(const CipherSpec& s, Word lout) {
    if (lout == s.mask()) return (s.width() - 2) / 2;
    return popcount(abits_of(s, lout));
}

gf2::AffineSpace lin_input_space(const CipherSpec& s, Word lout) {
    // lout . (S^a x & S^b x) is a quadratic form q; its Walsh spectrum is flat on
    // the lambda_in with lambda_in . k = q(k) for every k in the radical.
    const int n = s.width();
    std::vector<Word> rows(n, 0);
    for (int i = 0; i < n; ++i) {
        if (!((lout >> i) & 1)) continue;
        int u = ((i - s.a()) % n + n) % n, v = ((i - s.b()) % n + n) % n;
        rows[u] ^= Word{1} << v;
        rows[v] ^= Word{1} << u;
    }
    std::vector<gf2::Equation> eqs;
    for (Word k : gf2::kernel(rows, n)) eqs.push_back({k, parity(lout & s.rot(k, s.a()) & s.rot(k, s.b()))});
    return *gf2::solve(eqs, n);
}

std::vector<MaskPredecessor> enumerate_mask_predecessors(const CipherSpec& s, WordPair out, int weight_cap) {
    std::vector<MaskPredecessor> res;
    const int w = lin_weight(s, out.left);
    if (w > weight_cap) return res;
    const Word shift = s.rot(out.left, -s.c()) ^ out.right;
    lin_input_space(s, out.left).for_each([&](Word lin) { res.push_back({lin ^ shift, w}); });
    std::sort(res.begin(), res.end());
    return res;
}

std::vector<Word> reversed(std::vector<Word> s) {
    std::reverse(s.begin(), s.end());
    return s;
}

LinTrail search_best_lin_trail(const CipherSpec& spec, int rounds, int weight_cap, std::optional<WordPair> output) {
    if (rounds < 1) throw ConfigError("linear trail needs at least one round");
    Propagation p(spec, PropKind::Linear);
    std::optional<SearchTrail> t;
    if (output) {
        if (output->left == 0 && output->right == 0) throw ConfigError("output mask must be nonzero");
        t = best_trail_from(p, output->left, output->right, rounds, weight_cap);
        if (t) t->s = reversed(t->s);
    } else {
        t = best_free_trail(p, rounds, weight_cap);
    }
    if (!t) throw NotFound("no " + std::to_string(rounds) + "-round linear trail within weight " +
                           std::to_string(weight_cap));
    return {spec, t->s, t->weight};
}

std::optional<int> validate(const LinTrail& t) {
    return trail_weight(Propagation(t.spec, PropKind::Linear), t.lambda);
}

std::vector<Endpoint> enumerate_lin_trails_to(const CipherSpec& spec, WordPair output, int rounds, int bound,
                                              Multiplicity mode) {
    if (output.left == 0 && output.right == 0) throw ConfigError("output mask must be nonzero");
    Propagation p(spec, PropKind::Linear);
    std::vector<Endpoint> out;
    const int R = rounds;
    for_each_trail_from(p, output.left, output.right, R, bound, EndChoice::All, [&](const SearchTrail& t) {
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
