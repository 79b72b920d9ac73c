#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <sstream>

#include "simondl/middle.hpp"
#include "simondl/verifier.hpp"

using namespace simondl;

namespace {
const CipherSpec kSimon32 = CipherSpec::simon(16);

ExperimentPlan plan(int rounds, WordPair d, WordPair l, std::uint64_t n, int k) {
    ExperimentPlan p;
    p.rounds = rounds;
    p.delta_in = d;
    p.lambda_out = l;
    p.samples = n;
    p.keys = k;
    p.seed = 42;
    return p;
}
}  // namespace

TEST(Verifier, CounterRandomIsPure) {
    EXPECT_EQ(counter_random(1, 2, 3), counter_random(1, 2, 3));
    EXPECT_NE(counter_random(1, 2, 3), counter_random(1, 2, 4));
    EXPECT_NE(counter_random(1, 2, 3), counter_random(1, 3, 3));
    EXPECT_NE(counter_random(1, 2, 3), counter_random(2, 2, 3));
}

TEST(Verifier, ZeroRoundsIsExact) {
    for (auto [d, l] : {std::pair<WordPair, WordPair>{{0x8, 0x22}, {0x40, 0x10}}, {{0x3, 0x0}, {0x1, 0x0}}}) {
        auto r = estimate(plan(0, d, l, 5000, 3));
        const double want = parity((d.left & l.left) ^ (d.right & l.right)) ? -1.0 : 1.0;
        for (double c : r.per_key) EXPECT_EQ(c, want);
        EXPECT_EQ(r.mean_abs, 1.0);
    }
}

TEST(Verifier, ZeroDifferenceIsOne) {
    auto r = estimate_middle(kSimon32, {0, 0}, {0x100, 0x0}, 5, 10000, 2);
    for (double c : r.per_key) EXPECT_EQ(c, 1.0);
    EXPECT_EQ(r.log2_mean, 0.0);
}

TEST(Verifier, OneRoundMatchesMiddleEngine) {
    const WordPair delta{0x22, 0x8};
    for (WordPair lambda : {WordPair{0x1, 0x0}, WordPair{0x200, 0x0}, WordPair{0x0, 0x8}}) {
        const double want = middle_correlation(propagate(kSimon32, init_from_difference(kSimon32, delta), 1), lambda);
        const std::uint64_t n = 1 << 18;
        const int k = 4;
        auto r = estimate_middle(kSimon32, delta, lambda, 1, n, k, 9);
        double mean = 0;
        for (double c : r.per_key) mean += c / k;
        const double se = std::sqrt(std::max(1e-12, 1 - want * want) / (double(n) * k));
        EXPECT_LE(std::fabs(mean - want), 3 * se + 1e-12) << to_string(lambda);
    }
}

TEST(Verifier, DeterministicAcrossThreads) {
    auto p = plan(8, {0x8, 0x22}, {0x40, 0x10}, 300000, 5);
    auto a = estimate(p);
    p.threads = 3;
    auto b = estimate(p);
    EXPECT_EQ(a.per_key, b.per_key);
    EXPECT_EQ(a.mean_abs, b.mean_abs);
}

TEST(Verifier, IndependentSeedsScatterBinomially) {
    auto p = plan(7, {0x8, 0x22}, {0x40, 0x10}, 1 << 14, 1);
    p.key_seed = 5;
    std::vector<double> v;
    for (std::uint64_t s = 0; s < 40; ++s) {
        p.seed = 1000 + s;
        v.push_back(estimate(p).per_key[0]);
    }
    double m = 0, var = 0;
    for (double x : v) m += x / v.size();
    for (double x : v) var += (x - m) * (x - m) / (v.size() - 1);
    EXPECT_LE(std::sqrt(var), 1.1 / std::sqrt(double(p.samples)) * 1.3);  // slack for 40 draws
}

TEST(Verifier, IndependentRoundKeys) {
    auto p = plan(6, {0x8, 0x22}, {0x40, 0x10}, 1 << 14, 3);
    p.key_mode = KeyMaterial::Mode::IndependentRoundKeys;
    EXPECT_EQ(experiment_key(p, 0).words.size(), 6u);
    auto r = estimate(p);
    EXPECT_EQ(r.per_key.size(), 3u);
    for (double c : r.per_key) EXPECT_LE(std::fabs(c), 1.0);
}

TEST(Verifier, WideBlocks) {
    auto p = plan(0, {0x1, 0x0}, {0x1, 0x0}, 1000, 1);
    p.spec = CipherSpec::simon(64);
    EXPECT_EQ(estimate(p).per_key[0], -1.0);
    p.rounds = 1;  // 1-round difference in the right half only moves to the left half
    p.delta_in = {0x0, 0x1};
    EXPECT_EQ(estimate(p).per_key[0], -1.0);
}

TEST(Verifier, Throughput) {
    auto p = plan(11, {0x8, 0x22}, {0x40, 0x10}, 1 << 22, 1);
    auto t0 = std::chrono::steady_clock::now();
    estimate(p);
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double rate = double(p.samples) / s;
    RecordProperty("pairs_per_second", std::to_string(rate));
    EXPECT_GE(rate, 1e7);
}

TEST(Verifier, Csv) {
    auto r = estimate(plan(0, {0x8, 0x22}, {0x40, 0x10}, 100, 2));
    std::ostringstream os;
    write_csv_header(os);
    write_csv_row(os, r);
    EXPECT_EQ(os.str(),
              "cipher,rounds,delta_in,lambda_out,N,K,mean_abs_cor,log2,stderr,seed\n"
              "simon32/64,0,\"(0x8,0x22)\",\"(0x40,0x10)\",100,2,1,0.0000,0,42\n");
}

TEST(Verifier, RejectsEmptyPlan) {
    EXPECT_THROW(estimate(plan(1, {1, 0}, {1, 0}, 0, 1)), ConfigError);
    EXPECT_THROW(estimate(plan(1, {1, 0}, {1, 0}, 10, 0)), ConfigError);
}
