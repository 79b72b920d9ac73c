#include "simondl/search.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>
#include <tuple>
#include <unordered_map>

#include "simondl/linear.hpp"
#include "simondl/propagation.hpp"

namespace simondl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = 1e-9;

double neglog2(double x) {
    x = std::fabs(x);
    return x == 0 ? kInf : -std::log2(x);
}

// Per-bit -log2|entry| of one branch, +inf for zero entries (the masks that
// select them are never chosen).
std::vector<double> bit_costs(const std::vector<double>& v) {
    std::vector<double> c(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) c[i] = neglog2(v[i]);
    return c;
}

double mask_cost(const std::vector<double>& c, Word m) {
    double s = 0;
    for (; m; m &= m - 1) s += c[__builtin_ctzll(m)];
    return s;
}

bool canonical_less(Word x, Word y) {
    int px = popcount(x), py = popcount(y);
    return px != py ? px < py : x < y;
}

// Signed product of state entries under a mask, through byte tables.
class MaskProduct {
public:
    explicit MaskProduct(const ContState& s) : left_(tables(s.left)), right_(tables(s.right)) {}

    double operator()(WordPair l) const { return half(left_, l.left) * half(right_, l.right); }

private:
    using Table = std::array<double, 256>;

    static std::vector<Table> tables(const std::vector<double>& v) {
        std::vector<Table> t((v.size() + 7) / 8);
        for (std::size_t c = 0; c < t.size(); ++c) {
            t[c][0] = 1.0;
            for (unsigned m = 1; m < 256; ++m) {
                std::size_t i = c * 8 + __builtin_ctz(m);
                t[c][m] = t[c][m & (m - 1)] * (i < v.size() ? v[i] : 1.0);
            }
        }
        return t;
    }
    static double half(const std::vector<Table>& t, Word m) {
        double r = 1.0;
        for (std::size_t c = 0; m; ++c, m >>= 8) r *= t[c][m & 0xff];
        return r;
    }

    std::vector<Table> left_, right_;
};

struct PairHash {
    std::size_t operator()(const WordPair& p) const {
        std::uint64_t x = p.left * 0x9E3779B97F4A7C15ULL ^ (p.right + 0x632BE59BD9B4E019ULL) * 0xBF58476D1CE4E5B9ULL;
        return static_cast<std::size_t>(x ^ (x >> 29));
    }
};

struct Ranked {
    DLTrail t;
    double cost = kInf;  // -log2 |cor_total|
};

auto anchors(const DLTrail& t) { return std::tie(t.delta_in, t.delta, t.lambda, t.lambda_out); }

bool better(const Ranked& a, const Ranked& b) {
    if (std::fabs(a.cost - b.cost) > kEps) return a.cost < b.cost;
    return anchors(a.t) < anchors(b.t);
}

struct LinChoice {
    std::vector<Word> lambda;
    int weight = 0;
    double cost = kInf;  // middle cost + 2 * weight
};

// Linear trail of R rounds and weight <= T minimizing -log2|Cor_m(st, (l0,l1))| + 2 * weight,
// among those with cost <= limit + eps. Ties go to the smallest sequence.
std::optional<LinChoice> best_linear_for_state(const Propagation& p, const ContState& st, int R, int T,
                                               double limit) {
    const auto cl = bit_costs(st.left), cr = bit_costs(st.right);
    std::optional<LinChoice> best;
    auto offer = [&](LinChoice c) {
        if (c.cost > limit + kEps) return;
        if (!best || c.cost < best->cost - kEps || (std::fabs(c.cost - best->cost) <= kEps && c.lambda < best->lambda))
            best = std::move(c);
    };
    auto current_limit = [&] { return best ? std::min(limit, best->cost) : limit; };
    const int n = p.spec().width();

    {
        if (R == 1) {
            for (Word l1 : p.words(T)) {
                const int w1 = p.weight(l1);
                const double c1 = mask_cost(cr, l1);
                if (2.0 * w1 > current_limit() + kEps) break;
                if (c1 == kInf) continue;
                Word l0 = 0;
                double c0 = 0;
                if (l1 == 0) {
                    c0 = kInf;
                    for (int i = 0; i < n; ++i)
                        if (cl[i] < c0 - kEps) c0 = cl[i], l0 = Word{1} << i;
                    if (c0 == kInf) continue;
                }
                Word l2 = 0;
                bool first = true;
                p.step(l1).for_each([&](Word v) {
                    Word x = l0 ^ v;
                    if (first || canonical_less(x, l2)) l2 = x;
                    first = false;
                });
                offer({{l0, l1, l2}, w1, c0 + c1 + 2.0 * w1});
            }
        } else {
            for (Word l1 : p.words(T - p.bound(R - 1))) {
                const int w1 = p.weight(l1);
                if (2.0 * (w1 + p.bound(R - 1)) > current_limit() + kEps) break;
                const double c1 = mask_cost(cr, l1);
                if (c1 == kInf) continue;
                const auto& step = p.step(l1);
                for (Word l2 : p.words(T - w1 - p.bound(R - 2))) {
                    const int w2 = p.weight(l2);
                    if (c1 + 2.0 * (w1 + w2 + p.bound(R - 2)) > current_limit() + kEps) break;
                    if (l1 == 0 && l2 == 0) continue;
                    Word l0 = 0;
                    double c0 = kInf;
                    step.for_each([&](Word v) {
                        Word x = l2 ^ v;
                        double c = mask_cost(cl, x);
                        if (c < c0 - kEps || (std::fabs(c - c0) <= kEps && x < l0)) c0 = c, l0 = x;
                    });
                    if (c0 == kInf) continue;
                    const double fixed = c0 + c1 + 2.0 * w1;
                    if (fixed + 2.0 * (w2 + p.bound(R - 2)) > current_limit() + kEps) continue;
                    const double room = std::floor((current_limit() - fixed) / 2 + kEps);
                    const int rest_cap = room < T - w1 ? static_cast<int>(room) : T - w1;
                    auto rest = best_trail_from(p, l2, l1, R - 1, rest_cap);
                    if (!rest) continue;
                    LinChoice c;
                    c.lambda.push_back(l0);
                    c.lambda.insert(c.lambda.end(), rest->s.begin(), rest->s.end());
                    c.weight = w1 + rest->weight;
                    c.cost = c0 + c1 + 2.0 * c.weight;
                    offer(std::move(c));
                }
            }
        }
    }
    return best;
}

DLTrail make_trail(const CipherSpec& spec, RoundConfig cfg, const std::vector<Word>& alpha, int pro,
                   const std::vector<Word>& lambda, int cor_l) {
    DLTrail t;
    t.spec = spec;
    t.config = cfg;
    t.diff_path = alpha;
    t.lin_path = lambda;
    t.delta_in = {alpha[1], alpha[0]};
    t.delta = {alpha[cfg.d + 1], alpha[cfg.d]};
    t.lambda = {lambda[0], lambda[1]};
    t.lambda_out = {lambda[cfg.l], lambda[cfg.l + 1]};
    t.log2_p = -pro;
    t.log2_q = -cor_l;
    evaluate(t);
    return t;
}

void check_config(RoundConfig cfg) {
    if (cfg.d < 1 || cfg.m < 1 || cfg.l < 1) throw ConfigError("every part needs at least one round");
}

}  // namespace

RoundConfig RoundConfig::parse(std::string_view s) {
    RoundConfig c;
    int* out[3] = {&c.d, &c.m, &c.l};
    std::size_t pos = 0;
    for (int k = 0; k < 3; ++k) {
        std::size_t end = k < 2 ? s.find(',', pos) : s.size();
        if (end == std::string_view::npos) throw ParseError("config must be R_d,R_m,R_l: " + std::string(s));
        auto part = s.substr(pos, end - pos);
        auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), *out[k]);
        if (ec != std::errc() || p != part.data() + part.size() || *out[k] < 1)
            throw ParseError("bad round count in config: " + std::string(s));
        pos = end + 1;
    }
    return c;
}

std::string RoundConfig::str() const {
    return std::to_string(d) + "," + std::to_string(m) + "," + std::to_string(l);
}

double compose(int log2_p, double r_mid, int log2_q) { return std::ldexp(r_mid, log2_p + 2 * log2_q); }

double DLTrail::log2_abs() const { return std::log2(std::fabs(cor_total)); }
double DLDistinguisher::log2_abs() const { return std::log2(std::fabs(cor_sum)); }

void evaluate(DLTrail& t) {
    t.r_mid = middle_correlation(propagate(t.spec, init_from_difference(t.spec, t.delta), t.config.m), t.lambda);
    t.cor_total = compose(t.log2_p, t.r_mid, t.log2_q);
}

bool reverify(const DLTrail& t, std::string* why) {
    auto fail = [&](const std::string& m) {
        if (why) *why = m;
        return false;
    };
    const RoundConfig& c = t.config;
    DLTrail e = t;
    evaluate(e);
    if (std::fabs(e.r_mid - t.r_mid) > 1e-12 * std::max(1.0, std::fabs(t.r_mid))) return fail("r_mid differs");
    if (std::fabs(e.cor_total - t.cor_total) > 1e-12 * std::max(1e-300, std::fabs(t.cor_total)) + 1e-300)
        return fail("cor_total differs");

    Propagation pd(t.spec, PropKind::Differential), pl(t.spec, PropKind::Linear);
    if (!t.diff_path.empty()) {
        const auto& a = t.diff_path;
        if (static_cast<int>(a.size()) != c.d + 2) return fail("differential path length");
        if (WordPair{a[1], a[0]} != t.delta_in || WordPair{a[c.d + 1], a[c.d]} != t.delta)
            return fail("differential path endpoints");
        auto w = trail_weight(pd, a);
        if (!w || -*w != t.log2_p) return fail("differential path weight");
    } else if (!connect(pd, t.delta_in.left, t.delta_in.right, t.delta.left, t.delta.right, c.d, -t.log2_p)) {
        return fail("no differential trail of the stated weight");
    }
    if (!t.lin_path.empty()) {
        const auto& l = t.lin_path;
        if (static_cast<int>(l.size()) != c.l + 2) return fail("linear path length");
        if (WordPair{l[0], l[1]} != t.lambda || WordPair{l[c.l], l[c.l + 1]} != t.lambda_out)
            return fail("linear path endpoints");
        auto w = trail_weight(pl, l);
        if (!w || -*w != t.log2_q) return fail("linear path weight");
    } else if (!connect(pl, t.lambda_out.left, t.lambda_out.right, t.lambda.left, t.lambda.right, c.l, -t.log2_q)) {
        return fail("no linear trail of the stated weight");
    }
    return true;
}

DLTrail dfs_search(const CipherSpec& spec, RoundConfig cfg, int lin_cap, SearchStats* stats) {
    check_config(cfg);
    Propagation pd(spec, PropKind::Differential), pl(spec, PropKind::Linear);
    const int bd = pd.bound(cfg.d);

    // One representative (the smallest sequence) per output difference.
    std::map<WordPair, std::vector<Word>> by_delta;
    FreeSearchOptions opt;
    opt.last = EndChoice::All;
    for_each_free_trail(pd, cfg.d, bd, opt, [&](const SearchTrail& t) {
        WordPair d{t.s[cfg.d + 1], t.s[cfg.d]};
        auto [it, fresh] = by_delta.try_emplace(d, t.s);
        if (!fresh && t.s < it->second) it->second = t.s;
        return true;
    });
    if (stats) stats->first_stage = by_delta.size();

    std::vector<ContState> states;
    for (const auto& kv : by_delta) states.push_back(propagate(spec, init_from_difference(spec, kv.first), cfg.m));

    // Deepen the linear weight for all differences together so that a good
    // difference bounds the others early.
    std::optional<Ranked> best;
    for (int T = pl.bound(cfg.l); T <= lin_cap; ++T) {
        std::size_t i = 0;
        for (const auto& [delta, alpha] : by_delta) {
            const double limit = best ? best->cost - bd : kInf;
            auto lin = best_linear_for_state(pl, states[i++], cfg.l, T, limit);
            if (stats) ++stats->second_stage;
            if (!lin) continue;
            Ranked r{make_trail(spec, cfg, alpha, bd, lin->lambda, lin->weight), bd + lin->cost};
            if (!best || better(r, *best)) best = std::move(r);
        }
        // A heavier linear part costs at least 2(T+1).
        if (best && best->cost <= bd + 2.0 * (T + 1) + kEps) break;
    }
    if (!best) throw NotFound("no linear part within weight " + std::to_string(lin_cap) + " for config " + cfg.str());
    return best->t;
}

DLTrail lfs_search(const CipherSpec& spec, RoundConfig cfg, int diff_extra, SearchStats* stats) {
    check_config(cfg);
    Propagation pd(spec, PropKind::Differential), pl(spec, PropKind::Linear);
    const int bl = pl.bound(cfg.l);

    std::map<WordPair, std::vector<Word>> by_lambda;
    FreeSearchOptions lopt;
    lopt.first = EndChoice::All;
    for_each_free_trail(pl, cfg.l, bl, lopt, [&](const SearchTrail& t) {
        WordPair l{t.s[0], t.s[1]};
        auto [it, fresh] = by_lambda.try_emplace(l, t.s);
        if (!fresh && t.s < it->second) it->second = t.s;
        return true;
    });
    if (stats) stats->first_stage = by_lambda.size();

    const int bd = pd.bound(cfg.d);
    const int cap = bd + diff_extra;
    FreeSearchOptions dopt;
    dopt.rotation_canonical = false;  // the mask breaks the rotation symmetry
    dopt.last = EndChoice::All;

    std::vector<std::unordered_map<WordPair, double, PairHash>> mid_cost(by_lambda.size());
    std::optional<Ranked> best;
    for (int T = bd; T <= cap; ++T) {
        if (best && T + 2.0 * bl > best->cost + kEps) break;
        std::size_t i = 0;
        for (const auto& [lambda, lam_seq] : by_lambda) {
            auto& memo = mid_cost[i++];
            std::optional<std::pair<std::vector<Word>, double>> local;  // (alpha, cost)
            for_each_free_trail(pd, cfg.d, T, dopt, [&](const SearchTrail& t) {
                const WordPair d{t.s[cfg.d + 1], t.s[cfg.d]};
                auto it = memo.find(d);
                if (it == memo.end()) {
                    const ContState st = propagate(spec, init_from_difference(spec, d), cfg.m);
                    it = memo.emplace(d, neglog2(middle_correlation(st, lambda))).first;
                    if (stats) ++stats->second_stage;
                }
                const double cost = t.weight + it->second + 2.0 * bl;
                if (cost == kInf) return true;
                if (!local || cost < local->second - kEps ||
                    (std::fabs(cost - local->second) <= kEps && t.s < local->first))
                    local = std::make_pair(t.s, cost);
                return true;
            });
            if (!local) continue;
            Ranked r{make_trail(spec, cfg, local->first, trail_weight(pd, local->first).value(), lam_seq, bl),
                     local->second};
            if (!best || better(r, *best)) best = std::move(r);
        }
        // Heavier differentials cost at least T + 1 + 2 bl.
        if (best && best->cost <= T + 1 + 2.0 * bl + kEps) break;
    }
    if (!best) throw NotFound("no differential part within weight " + std::to_string(cap) + " for config " + cfg.str());
    return best->t;
}

DLDistinguisher transform(const DLTrail& seed, int pbar, int qbar, const TransformOptions& opt) {
    const CipherSpec& spec = seed.spec;
    const RoundConfig& cfg = seed.config;
    if (pbar < -seed.log2_p || qbar < -seed.log2_q) throw ConfigError("bounds must admit the seed trail");

    const auto D = enumerate_diff_trails_from(spec, seed.delta_in, cfg.d, pbar, opt.mode);
    const auto L = enumerate_lin_trails_to(spec, seed.lambda_out, cfg.l, qbar, opt.mode);
    auto has = [](const std::vector<Endpoint>& v, WordPair p, int w) {
        return std::find(v.begin(), v.end(), Endpoint{p, w}) != v.end();
    };
    if (!has(D, seed.delta, -seed.log2_p) || !has(L, seed.lambda, -seed.log2_q))
        throw NotFound("seed trail is not reproduced by the enumeration");

    // Distinct differences with their (weight, multiplicity) lists.
    struct Group {
        WordPair pair;
        std::vector<std::pair<int, std::size_t>> weights;
    };
    auto group = [](std::vector<Endpoint> v) {
        std::sort(v.begin(), v.end());
        std::vector<Group> g;
        for (const auto& e : v) {
            if (g.empty() || g.back().pair != e.pair) g.push_back({e.pair, {}});
            auto& w = g.back().weights;
            if (!w.empty() && w.back().first == e.weight)
                ++w.back().second;
            else
                w.push_back({e.weight, 1});
        }
        return g;
    };
    const auto dg = group(D), lg = group(L);
    struct LinEntry {
        std::size_t idx;
        int weight;
        double mult_q2;
        std::size_t mult;
    };
    std::vector<LinEntry> lin;
    for (std::size_t i = 0; i < lg.size(); ++i)
        for (auto [w, m] : lg[i].weights) lin.push_back({i, w, std::ldexp(static_cast<double>(m), -2 * w), m});

    const int rows = pbar + 1, cols = qbar + 1;
    struct Acc {
        std::vector<double> sum;
        std::vector<std::size_t> count;
    };
    constexpr std::size_t kChunk = 16;
    const std::size_t chunks = (dg.size() + kChunk - 1) / kChunk;
    std::vector<Acc> acc(chunks);

    auto run_chunk = [&](std::size_t c) {
        Acc a{std::vector<double>(rows * cols, 0.0), std::vector<std::size_t>(rows * cols, 0)};
        std::vector<double> r(lg.size());
        for (std::size_t i = c * kChunk; i < std::min(dg.size(), (c + 1) * kChunk); ++i) {
            const MaskProduct prod(propagate(spec, init_from_difference(spec, dg[i].pair), cfg.m));
            for (std::size_t j = 0; j < lg.size(); ++j) r[j] = prod(lg[j].pair);
            for (auto [wd, md] : dg[i].weights) {
                const double p = std::ldexp(static_cast<double>(md), -wd);
                double* row = &a.sum[wd * cols];
                std::size_t* crow = &a.count[wd * cols];
                for (const auto& e : lin) {
                    const double x = r[e.idx];
                    if (x == 0) continue;
                    row[e.weight] += p * x * e.mult_q2;
                    crow[e.weight] += md * e.mult;
                }
            }
        }
        acc[c] = std::move(a);
    };

    const int threads = std::max(1, opt.threads);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t c; (c = next++) < chunks;) run_chunk(c);
    };
    std::vector<std::thread> pool;
    for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    DLDistinguisher out;
    out.spec = spec;
    out.config = cfg;
    out.delta_in = seed.delta_in;
    out.lambda_out = seed.lambda_out;
    out.pbar = pbar;
    out.qbar = qbar;
    out.mode = opt.mode;
    out.diff_entries = D.size();
    out.lin_entries = L.size();
    std::vector<double> sum(rows * cols, 0.0);
    std::vector<std::size_t> count(rows * cols, 0);
    for (const auto& a : acc)  // fixed order: independent of the thread count
        for (int k = 0; k < rows * cols; ++k) sum[k] += a.sum[k], count[k] += a.count[k];
    for (int wd = 0; wd < rows; ++wd)
        for (int wl = 0; wl < cols; ++wl) {
            const int k = wd * cols + wl;
            if (count[k] == 0) continue;
            out.cells.push_back({wd, wl, count[k], sum[k]});
            out.cor_sum += sum[k];
        }
    return out;
}

SampleBudget samples_needed(double cor, double eps, int block_bits) {
    if (cor == 0) throw ConfigError("zero correlation needs infinitely many samples");
    if (!(eps > 0)) throw ConfigError("epsilon must be positive");
    SampleBudget b;
    b.log2 = std::log2(eps) - 2 * std::log2(std::fabs(cor));
    b.count = std::ceil(eps / (cor * cor));
    b.theoretical_only = b.log2 > block_bits;
    return b;
}

void write_histogram_csv(std::ostream& os, const DLDistinguisher& d) {
    os << "diff_weight,lin_weight,trail_count,signed_contribution\n";
    char buf[64];
    for (const auto& c : d.cells) {
        std::snprintf(buf, sizeof buf, "%.17g", c.contribution);
        os << c.diff_weight << ',' << c.lin_weight << ',' << c.trail_count << ',' << buf << '\n';
    }
}

}  // namespace simondl
