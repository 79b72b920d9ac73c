#include "simondl/propagation.hpp"

#include <algorithm>
#include <climits>

#include "simondl/diff.hpp"
#include "simondl/linear.hpp"

namespace simondl {

namespace {

bool canonical_less(Word x, Word y) {
    int px = popcount(x), py = popcount(y);
    return px != py ? px < py : x < y;
}

Word min_rotation(const CipherSpec& spec, Word x) {
    Word best = x;
    for (int t = 1; t < spec.width(); ++t) best = std::min(best, spec.rot(x, t));
    return best;
}

// All words with popcount <= h, in no particular order.
void combos(int n, int h, int from, Word cur, std::vector<Word>& out) {
    out.push_back(cur);
    if (h == 0) return;
    for (int i = from; i < n; ++i) combos(n, h - 1, i + 1, cur | (Word{1} << i), out);
}

}  // namespace

Propagation::Propagation(const CipherSpec& spec, PropKind kind) : spec_(spec), kind_(kind) {}

int Propagation::weight(Word x) const {
    return kind_ == PropKind::Differential ? diff_weight(spec_, x) : lin_weight(spec_, x);
}

const gf2::AffineSpace& Propagation::step(Word x) const {
    auto it = steps_.find(x);
    if (it != steps_.end()) return it->second;
    gf2::AffineSpace s = kind_ == PropKind::Differential ? diff_output_space(spec_, x)
                                                        : *translate(lin_input_space(spec_, x), spec_.rot(x, -spec_.c()));
    return steps_.emplace(x, std::move(s)).first->second;
}

std::optional<gf2::AffineSpace> translate(const gf2::AffineSpace& s, Word by) {
    gf2::AffineSpace t = s;
    t.offset ^= by;
    for (Word b : t.basis)
        if ((t.offset >> (63 - __builtin_clzll(b))) & 1) t.offset ^= b;
    return t;
}

void Propagation::build_words(int K) const {
    if (K <= words_k_) return;
    const int n = spec_.width();
    // Differential weight is at least the Hamming weight, linear weight at least half of it.
    int h = std::min(n, kind_ == PropKind::Differential ? K : 2 * K);
    std::vector<Word> all;
    combos(n, h, 0, 0, all);
    std::vector<std::pair<int, Word>> keyed;
    for (Word x : all) {
        if (!allowed(x)) continue;
        int w = weight(x);
        if (w <= K) keyed.push_back({w, x});
    }
    std::sort(keyed.begin(), keyed.end());
    words_.clear();
    word_weight_.clear();
    for (auto [w, x] : keyed) {
        words_.push_back(x);
        word_weight_.push_back(w);
    }
    words_k_ = K;
}

std::vector<Word> Propagation::words(int K) const {
    if (K < 0) return {};
    build_words(K);
    auto end = std::upper_bound(word_weight_.begin(), word_weight_.end(), K);
    return {words_.begin(), words_.begin() + (end - word_weight_.begin())};
}

void Propagation::set_bound(int rounds, int w) const {
    if (static_cast<int>(bounds_.size()) <= rounds) bounds_.resize(rounds + 1, -1);
    bounds_[rounds] = w;
}

int Propagation::bound(int rounds) const {
    if (rounds <= 0) return 0;
    if (static_cast<int>(bounds_.size()) > rounds && bounds_[rounds] >= 0) return bounds_[rounds];
    auto t = best_free_trail(*this, rounds, INT_MAX / 4);
    set_bound(rounds, t->weight);
    return t->weight;
}

namespace {

struct Walker {
    const Propagation& p;
    int R;
    int T;
    EndChoice last;
    const TrailVisitor& fn;
    SearchTrail cur;
    bool stop = false;

    // s_0 .. s_{k-1} are fixed, cost includes rounds up to k-2.
    void extend(int k) {
        if (stop) return;
        const Word prev = cur.s[k - 2];
        const Word mid = cur.s[k - 1];
        const auto& st = p.step(mid);
        if (k == R + 1) {
            if (last == EndChoice::Canonical) {
                Word best = 0;
                bool first = true;
                st.for_each([&](Word v) {
                    Word x = prev ^ v;
                    if (first || canonical_less(x, best)) best = x;
                    first = false;
                });
                cur.s[k] = best;
                if (!fn(cur)) stop = true;
            } else {
                st.for_each([&](Word v) {
                    if (stop) return;
                    cur.s[k] = prev ^ v;
                    if (!fn(cur)) stop = true;
                });
            }
            return;
        }
        const int budget = T - cur.weight - p.bound(R - k);
        if (budget < 0) return;
        // Small spaces are walked directly; the cost filter happens per element.
        std::vector<std::pair<int, Word>> next;
        st.for_each([&](Word v) {
            Word x = prev ^ v;
            if (!p.allowed(x)) return;
            int w = p.weight(x);
            if (w <= budget) next.push_back({w, x});
        });
        std::sort(next.begin(), next.end());
        const int saved = cur.weight;
        for (auto [w, x] : next) {
            if (stop) return;
            cur.s[k] = x;
            cur.weight = saved + w;
            extend(k + 1);
        }
        cur.weight = saved;
    }
};

}  // namespace

void for_each_trail_from(const Propagation& p, Word s1, Word s0, int R, int T, EndChoice last,
                         const TrailVisitor& fn) {
    if (R < 1) throw ConfigError("trail needs at least one round");
    if (!p.allowed(s1)) return;
    Walker w{p, R, T, last, fn, {}, false};
    w.cur.s.assign(R + 2, 0);
    w.cur.s[0] = s0;
    w.cur.s[1] = s1;
    w.cur.weight = p.weight(s1);
    if (w.cur.weight + p.bound(R - 1) > T) return;
    w.extend(2);
}

void for_each_free_trail(const Propagation& p, int R, int T, const FreeSearchOptions& opt,
                         const TrailVisitor& fn) {
    if (R < 1) throw ConfigError("trail needs at least one round");
    const CipherSpec& spec = p.spec();
    const Word full = spec.mask();
    Walker w{p, R, T, opt.last, fn, {}, false};
    w.cur.s.assign(R + 2, 0);

    auto is_rep = [&](Word x) { return !opt.rotation_canonical || min_rotation(spec, x) == x; };

    if (R == 1) {
        // s_1 is the only costed word; s_0 is free and s_2 follows from it.
        for (Word s1 : p.words(T)) {
            if (w.stop) return;
            w.cur.weight = p.weight(s1);
            if (s1 != 0 && !is_rep(s1)) continue;
            w.cur.s[1] = s1;
            auto emit_with = [&](Word s0) {
                w.cur.s[0] = s0;
                w.extend(2);
            };
            if (opt.first == EndChoice::Canonical) {
                emit_with(s1 == 0 ? Word{1} : Word{0});
            } else {
                if (spec.width() > 24) throw ConfigError("free single-round enumeration needs n <= 24");
                for (Word s0 = 0;; ++s0) {
                    if (w.stop) return;
                    if (s1 != 0 || s0 != 0) {
                        if (s1 != 0 || is_rep(s0)) emit_with(s0);
                    }
                    if (s0 == full) break;
                }
            }
        }
        return;
    }

    for (Word s1 : p.words(T - p.bound(R - 1))) {
        if (w.stop) return;
        const int w1 = p.weight(s1);
        if (s1 != 0 && !is_rep(s1)) continue;
        for (Word s2 : p.words(T - w1 - p.bound(R - 2))) {
            if (w.stop) return;
            if (s1 == 0 && (s2 == 0 || !is_rep(s2))) continue;
            const int w2 = p.weight(s2);
            w.cur.s[1] = s1;
            w.cur.s[2] = s2;
            const auto& st = p.step(s1);
            auto go = [&](Word s0) {
                w.cur.s[0] = s0;
                w.cur.weight = w1 + w2;
                w.extend(3);
            };
            if (opt.first == EndChoice::Canonical) {
                Word best = 0;
                bool first = true;
                st.for_each([&](Word v) {
                    Word x = s2 ^ v;
                    if (first || canonical_less(x, best)) best = x;
                    first = false;
                });
                go(best);
            } else {
                st.for_each([&](Word v) {
                    if (!w.stop) go(s2 ^ v);
                });
            }
        }
    }
}

namespace {

template <class Run>
std::optional<SearchTrail> iterate_best(int R, int start, int cap, Run run) {
    for (int T = start; T <= cap; ++T) {
        std::optional<SearchTrail> best;
        run(T, [&](const SearchTrail& t) {
            if (!best || t.weight < best->weight || (t.weight == best->weight && t.s < best->s)) best = t;
            return true;
        });
        if (best) return best;
        // Weights above the table of any realistic cipher would loop forever otherwise.
        if (T > 64 * R * 2 + 8) break;
    }
    return std::nullopt;
}

}  // namespace

std::optional<SearchTrail> best_free_trail(const Propagation& p, int R, int cap) {
    int start = p.bound(R - 1);
    for (int i = 1; i < R; ++i) start = std::max(start, p.bound(i) + p.bound(R - i));
    return iterate_best(R, start, cap, [&](int T, const TrailVisitor& fn) {
        for_each_free_trail(p, R, T, FreeSearchOptions{}, fn);
    });
}

std::optional<SearchTrail> best_trail_from(const Propagation& p, Word s1, Word s0, int R, int cap) {
    return iterate_best(R, p.bound(R), cap, [&](int T, const TrailVisitor& fn) {
        for_each_trail_from(p, s1, s0, R, T, EndChoice::All, fn);
    });
}

std::optional<int> trail_weight(const Propagation& p, const std::vector<Word>& s) {
    const int R = static_cast<int>(s.size()) - 2;
    if (R < 1) return std::nullopt;
    if (s[0] == 0 && s[1] == 0) return std::nullopt;
    int w = 0;
    for (int k = 1; k <= R; ++k) {
        if (!p.allowed(s[k])) return std::nullopt;
        if (!p.step(s[k]).contains(s[k - 1] ^ s[k + 1])) return std::nullopt;
        w += p.weight(s[k]);
    }
    return w;
}

std::optional<SearchTrail> connect(const Propagation& p, Word s1, Word s0, Word end_hi, Word end_lo, int R,
                                   int weight, std::size_t node_budget) {
    if (R == 1) {
        SearchTrail t{{s0, s1, end_hi}, 0};
        if (end_lo != s1) return std::nullopt;
        auto w = trail_weight(p, t.s);
        if (!w || *w != weight) return std::nullopt;
        t.weight = *w;
        return t;
    }
    const int h = R / 2;  // forward rounds; the backward half covers R - h
    struct Key {
        Word hi, lo;
        int w;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            std::uint64_t x = k.hi * 0x9E3779B97F4A7C15ULL ^ (k.lo + 0x632BE59BD9B4E019ULL) * 0xBF58476D1CE4E5B9ULL;
            return static_cast<std::size_t>(x ^ (x >> 31) ^ static_cast<std::uint64_t>(k.w));
        }
    };
    std::unordered_map<Key, std::vector<Word>, KeyHash> fwd;
    std::size_t visited = 0;
    bool overflow = false;
    for_each_trail_from(p, s1, s0, h, weight - p.bound(R - h), EndChoice::All, [&](const SearchTrail& t) {
        if (++visited > node_budget) {
            overflow = true;
            return false;
        }
        fwd.try_emplace(Key{t.s[h + 1], t.s[h], t.weight}, t.s);
        return true;
    });
    if (overflow) return std::nullopt;
    std::optional<SearchTrail> found;
    visited = 0;
    for_each_trail_from(p, end_lo, end_hi, R - h, weight - p.bound(h), EndChoice::All, [&](const SearchTrail& t) {
        if (++visited > node_budget) return false;
        // reversed sequence: t.s[k] = s_{R+1-k}; its last pair is (s_h, s_{h+1})
        auto it = fwd.find(Key{t.s[R - h], t.s[R - h + 1], weight - t.weight});
        if (it == fwd.end()) return true;
        SearchTrail out;
        out.s = it->second;
        for (int k = R - h - 1; k >= 0; --k) out.s.push_back(t.s[k]);
        out.weight = weight;
        found = out;
        return false;
    });
    return found;
}

}  // namespace simondl
