#include "simondl/verifier.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <thread>

namespace simondl {

std::uint64_t counter_random(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    // Two rounds of the splitmix64 finalizer over the mixed triple.
    auto mix = [](std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    };
    std::uint64_t z = mix(seed + 0x9e3779b97f4a7c15ull);
    z = mix(z ^ (stream * 0xd1b54a32d192ed03ull));
    return mix(z ^ (counter + 0x9e3779b97f4a7c15ull * (stream + 1)));
}

namespace {

// Stream ids: keys come from their own range so they never meet plaintext streams.
constexpr std::uint64_t kKeyStream = 1ull << 62;
constexpr std::uint64_t kBlock = 1u << 16;  // samples per work unit

template <class T>
struct Lanes {
    int n, a, b, c;
    T mask;

    T rot(T x, int s) const {
        s %= n;
        if (s == 0) return x;
        return static_cast<T>(((x << s) | (x >> (n - s))) & mask);
    }
};

// Signed sum over samples [first, first + count) of one key.
template <class T>
std::int64_t run_block(const ExperimentPlan& p, const std::vector<Word>& rk, std::uint64_t stream,
                       std::uint64_t first, std::uint64_t count) {
    const CipherSpec& s = p.spec;
    const Lanes<T> L{s.width(), s.a(), s.b(), s.c(), static_cast<T>(s.mask())};
    constexpr int B = 256;
    alignas(64) T xl[B] = {}, xr[B] = {}, yl[B] = {}, yr[B] = {};
    const T dl = static_cast<T>(p.delta_in.left), dr = static_cast<T>(p.delta_in.right);
    const T ml = static_cast<T>(p.lambda_out.left), mr = static_cast<T>(p.lambda_out.right);
    std::vector<T> keys(rk.begin(), rk.end());
    std::int64_t sum = 0;
    for (std::uint64_t done = 0; done < count; done += B) {
        const int m = static_cast<int>(std::min<std::uint64_t>(B, count - done));
        for (int j = 0; j < m; ++j) {
            const std::uint64_t w = counter_random(p.seed, stream, first + done + j);
            if (s.width() <= 32) {
                xl[j] = static_cast<T>(w) & L.mask;
                xr[j] = static_cast<T>(w >> 32) & L.mask;
            } else {
                xl[j] = static_cast<T>(w) & L.mask;
                xr[j] = static_cast<T>(counter_random(p.seed, stream ^ (1ull << 61), first + done + j)) & L.mask;
            }
            yl[j] = xl[j] ^ dl;
            yr[j] = xr[j] ^ dr;
        }
        for (int r = 0; r < p.rounds; ++r) {
            const T k = keys[r];
            for (int j = 0; j < B; ++j) {
                const T u = xl[j], v = yl[j];
                const T fu = static_cast<T>((L.rot(u, L.a) & L.rot(u, L.b)) ^ L.rot(u, L.c));
                const T fv = static_cast<T>((L.rot(v, L.a) & L.rot(v, L.b)) ^ L.rot(v, L.c));
                xl[j] = static_cast<T>(fu ^ xr[j] ^ k);
                yl[j] = static_cast<T>(fv ^ yr[j] ^ k);
                xr[j] = u;
                yr[j] = v;
            }
        }
        std::int64_t odd = 0;
        for (int j = 0; j < m; ++j)
            odd += __builtin_parityll(static_cast<std::uint64_t>(((xl[j] ^ yl[j]) & ml) ^ ((xr[j] ^ yr[j]) & mr)));
        sum += m - 2 * odd;
    }
    return sum;
}

std::int64_t run(const ExperimentPlan& p, const std::vector<Word>& rk, std::uint64_t stream, std::uint64_t first,
                 std::uint64_t count) {
    const int n = p.spec.width();
    if (n <= 16) return run_block<std::uint16_t>(p, rk, stream, first, count);
    if (n <= 32) return run_block<std::uint32_t>(p, rk, stream, first, count);
    return run_block<std::uint64_t>(p, rk, stream, first, count);
}

}  // namespace

KeyMaterial experiment_key(const ExperimentPlan& p, int k) {
    KeyMaterial key;
    key.mode = p.key_mode;
    const int words = p.key_mode == KeyMaterial::Mode::RealSchedule ? p.spec.key_words() : p.rounds;
    for (int i = 0; i < words; ++i)
        key.words.push_back(counter_random(p.key_seed.value_or(p.seed), kKeyStream + static_cast<std::uint64_t>(k), i) &
                            p.spec.mask());
    return key;
}

ExperimentResult estimate(const ExperimentPlan& p) {
    if (p.samples < 1 || p.keys < 1) throw ConfigError("need at least one sample and one key");
    if (p.rounds < 0) throw ConfigError("rounds must be nonnegative");
    const std::uint64_t blocks = (p.samples + kBlock - 1) / kBlock;
    const std::uint64_t units = blocks * static_cast<std::uint64_t>(p.keys);
    std::vector<std::vector<Word>> rks(p.keys);
    for (int k = 0; k < p.keys; ++k) rks[k] = round_keys(p.spec, experiment_key(p, k), p.rounds);

    // Integer partial sums, so the reduction order cannot change the result.
    std::vector<std::int64_t> partial(units, 0);
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (std::uint64_t u; (u = next.fetch_add(1)) < units;) {
            const int k = static_cast<int>(u / blocks);
            const std::uint64_t b = u % blocks, first = b * kBlock;
            partial[u] = run(p, rks[k], static_cast<std::uint64_t>(k), first, std::min(kBlock, p.samples - first));
        }
    };
    const int t = std::max(1, std::min<int>(p.threads, static_cast<int>(std::min<std::uint64_t>(units, 1024))));
    std::vector<std::thread> pool;
    for (int i = 1; i < t; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    ExperimentResult r;
    r.plan = p;
    double sum_abs = 0;
    for (int k = 0; k < p.keys; ++k) {
        std::int64_t s = 0;
        for (std::uint64_t b = 0; b < blocks; ++b) s += partial[k * blocks + b];
        const double c = static_cast<double>(s) / static_cast<double>(p.samples);
        r.per_key.push_back(c);
        sum_abs += std::fabs(c);
    }
    r.mean_abs = sum_abs / p.keys;
    r.log2_mean = std::log2(r.mean_abs);
    if (p.keys > 1) {
        double v = 0;
        for (double c : r.per_key) v += (std::fabs(c) - r.mean_abs) * (std::fabs(c) - r.mean_abs);
        r.std_error = std::sqrt(v / (p.keys - 1) / p.keys);
    } else {
        const double c = r.per_key[0];
        r.std_error = std::sqrt(std::max(0.0, 1 - c * c) / static_cast<double>(p.samples));
    }
    return r;
}

ExperimentResult estimate_middle(const CipherSpec& spec, WordPair delta, WordPair lambda, int rounds,
                                 std::uint64_t samples, int keys, std::uint64_t seed, int threads) {
    ExperimentPlan p;
    p.spec = spec;
    p.rounds = rounds;
    p.delta_in = delta;
    p.lambda_out = lambda;
    p.samples = samples;
    p.keys = keys;
    p.seed = seed;
    p.threads = threads;
    return estimate(p);
}

void write_csv_header(std::ostream& os) {
    os << "cipher,rounds,delta_in,lambda_out,N,K,mean_abs_cor,log2,stderr,seed\n";
}

void write_csv_row(std::ostream& os, const ExperimentResult& r) {
    const auto& p = r.plan;
    char buf[160];
    std::snprintf(buf, sizeof buf, ",%.9g,%.4f,%.3g,%llu\n", r.mean_abs, r.log2_mean, r.std_error,
                  static_cast<unsigned long long>(p.seed));
    os << p.spec.name() << ',' << p.rounds << ",\"" << to_string(p.delta_in) << "\",\"" << to_string(p.lambda_out)
       << "\"," << p.samples << ',' << p.keys << buf;
}

}  // namespace simondl
