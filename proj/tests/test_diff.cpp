#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "simondl/diff.hpp"

using namespace simondl;

namespace {
const CipherSpec kSimon32 = CipherSpec::simon(16);
const CipherSpec kSimeck32 = CipherSpec::simeck(16);
}  // namespace

TEST(DiffRound, Trivial) {
    EXPECT_EQ(diff_round_weight(kSimon32, 0, 0), 0);
    EXPECT_FALSE(diff_round_weight(kSimon32, 0, 1).has_value());
    auto t = enumerate_transitions(kSimon32, 0, 5);
    ASSERT_EQ(t.size(), 1u);
    EXPECT_EQ(t[0].beta, 0u);
    EXPECT_EQ(t[0].weight, 0);
}

TEST(DiffRound, AllOnesInput) {
    const Word ones = kSimon32.mask();
    // S^2(1^n) = 1^n, so the parity of beta ^ 1^n decides
    EXPECT_EQ(diff_round_weight(kSimon32, ones, 0x0000), 15);
    EXPECT_EQ(diff_round_weight(kSimon32, ones, 0x0003), 15);
    EXPECT_FALSE(diff_round_weight(kSimon32, ones, 0x0001).has_value());
    EXPECT_EQ(oracle::diff_count(kSimon32, ones, 0x0003), 2u);
}

TEST(DiffRound, SingleBit) {
    EXPECT_EQ(diff_round_weight(kSimon32, 0x0001, 0x0004), 2);
    EXPECT_EQ(oracle::diff_count(kSimon32, 0x0001, 0x0004), 1u << 14);
    auto t = enumerate_transitions(kSimon32, 0x0001, 16);
    ASSERT_EQ(t.size(), 4u);
    for (const auto& tr : t) {
        EXPECT_EQ(tr.weight, 2);
        EXPECT_EQ((tr.beta ^ 0x4) & ~Word{0x0102}, 0u);
    }
    EXPECT_TRUE(enumerate_transitions(kSimon32, 0x0001, 1).empty());
}

TEST(DiffRound, ExhaustiveOracle) {
    // 50 valid and 50 impossible random pairs, each against all 2^16 inputs.
    std::mt19937_64 rng(1);
    for (const auto& spec : {kSimon32, kSimeck32}) {
        int valid = 0, impossible = 0;
        while (valid < 25 || impossible < 25) {
            Word alpha = rng() & spec.mask();
            if (alpha == spec.mask()) continue;
            Word beta;
            if (valid < 25) {
                auto sp = diff_output_space(spec, alpha);
                beta = sp.offset;
                for (Word b : sp.basis)
                    if (rng() & 1) beta ^= b;
            } else {
                beta = rng() & spec.mask();
            }
            auto w = diff_round_weight(spec, alpha, beta);
            if (w ? valid >= 25 : impossible >= 25) continue;
            auto cnt = oracle::diff_count(spec, alpha, beta);
            if (w) {
                EXPECT_EQ(cnt, std::uint64_t{1} << (16 - *w)) << std::hex << alpha << " " << beta;
                ++valid;
            } else {
                EXPECT_EQ(cnt, 0u) << std::hex << alpha << " " << beta;
                ++impossible;
            }
        }
    }
}

TEST(DiffRound, ProbabilityMass) {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 100; ++i) {
        Word alpha = rng() & kSimon32.mask();
        double mass = 0;
        for (const auto& t : enumerate_transitions(kSimon32, alpha, 16)) mass += std::ldexp(1.0, -t.weight);
        EXPECT_EQ(mass, 1.0) << std::hex << alpha;
    }
}

TEST(DiffRound, SpaceMatchesWeightFunction) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) {
        Word alpha = rng() & kSimeck32.mask();
        auto sp = diff_output_space(kSimeck32, alpha);
        EXPECT_EQ(sp.dim(), diff_weight(kSimeck32, alpha));
        for (int j = 0; j < 50; ++j) {
            Word beta = rng() & kSimeck32.mask();
            EXPECT_EQ(sp.contains(beta), diff_round_weight(kSimeck32, alpha, beta).has_value());
        }
    }
}

TEST(DiffRound, WeightDominatesHammingWeight) {
    // The search's word lists rely on this.
    for (const auto& spec : {kSimon32, kSimeck32})
        for (Word x = 0; x < spec.mask(); ++x) ASSERT_GE(diff_weight(spec, x), popcount(x));
}

TEST(DiffSearch, BestTrails) {
    auto t5 = search_best_diff_trail(kSimon32, 5, 40);
    EXPECT_EQ(t5.weight, 8);
    EXPECT_EQ(validate(t5), 8);
    EXPECT_EQ(search_best_diff_trail(kSimon32, 7, 40).weight, 14);
    EXPECT_THROW(search_best_diff_trail(kSimon32, 5, 7), NotFound);
    auto fixed = search_best_diff_trail(kSimon32, 5, 40, WordPair{0x8, 0x22});
    EXPECT_EQ(fixed.weight, 8);
    EXPECT_EQ(fixed.input(), (WordPair{0x8, 0x22}));
}

TEST(DiffSearch, SimeckFixedInput) {
    auto t = search_best_diff_trail(kSimeck32, 6, 40, WordPair{0x4, 0x800a});
    EXPECT_EQ(t.weight, 12);
    Propagation p(kSimeck32, PropKind::Differential);
    auto c = connect(p, 0x4, 0x800a, 0x1, 0x8000, 6, 12);
    ASSERT_TRUE(c.has_value());
    EXPECT_EQ(trail_weight(p, c->s), 12);
}

TEST(DiffSearch, EnumerateFrom) {
    auto list = enumerate_diff_trails_from(kSimon32, {0x800, 0x2208}, 5, 16);
    ASSERT_FALSE(list.empty());
    EXPECT_EQ(list.front().weight, 8);
    bool seen = false;
    double mass = 0;
    for (const auto& e : list) {
        seen |= e.pair == WordPair{0x2200, 0x800} && e.weight == 8;
        mass += std::ldexp(1.0, -e.weight);
        EXPECT_LE(e.weight, 16);
    }
    EXPECT_TRUE(seen);
    EXPECT_LE(mass, 1.0);
    auto distinct = enumerate_diff_trails_from(kSimon32, {0x800, 0x2208}, 5, 16, Multiplicity::DistinctPerWeight);
    EXPECT_LE(distinct.size(), list.size());
}

TEST(DiffSearch, OneRoundAgreesWithTransitions) {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 20; ++i) {
        WordPair in{rng() & 0xffff, rng() & 0xffff};
        if (in.left == 0xffff) continue;
        auto list = enumerate_diff_trails_from(kSimon32, in, 1, 100);
        auto tr = enumerate_transitions(kSimon32, in.left, 100);
        std::vector<Endpoint> expect;
        for (const auto& t : tr) expect.push_back({{t.beta ^ in.right, in.left}, t.weight});
        std::sort(expect.begin(), expect.end());
        EXPECT_EQ(list, expect);
    }
}
