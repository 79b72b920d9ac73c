#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

#include "simondl/diff.hpp"
#include "simondl/linear.hpp"
#include "simondl/middle.hpp"
#include "simondl/model.hpp"
#include "simondl/propagation.hpp"

using namespace simondl;

namespace {
const CipherSpec kSimon32 = CipherSpec::simon(16);
const CipherSpec kSimeck32 = CipherSpec::simeck(16);

std::size_t uses(const ConstraintModel& m, const std::string& name) {
    const int v = m.var(name);
    std::size_t k = 0;
    for (const auto& c : m.constraints())
        for (const auto& t : c.lin) k += t.var == v;
    return k;
}

// Section between two headers of the emitted text.
std::string section(const std::string& text, const std::string& from, const std::string& to) {
    auto a = text.find("\n" + from + "\n");
    auto b = text.find("\n" + to + "\n", a);
    return text.substr(a + from.size() + 2, b - a - from.size() - 1);
}

// 13-round Simon32 trail with both paths filled in.
DLTrail row13_star() {
    DLTrail t;
    t.spec = kSimon32;
    t.config = {5, 5, 3};
    t.delta_in = {0x8, 0x22};
    t.delta = {0x22, 0x8};
    t.lambda = {0x100, 0x0};
    t.lambda_out = {0x40, 0x110};
    t.log2_p = -8;
    t.log2_q = -2;
    evaluate(t);
    Propagation pd(kSimon32, PropKind::Differential), pl(kSimon32, PropKind::Linear);
    t.diff_path = connect(pd, 0x8, 0x22, 0x22, 0x8, 5, 8)->s;
    t.lin_path = reversed(connect(pl, 0x40, 0x110, 0x100, 0x0, 3, 2)->s);
    return t;
}
}  // namespace

TEST(Model, DiffRoundCounts) {
    for (const auto& spec : {kSimon32, CipherSpec::simon(24), kSimeck32}) {
        const int n = spec.width();
        auto m = build_diff_model(spec, 3);
        auto s = m.stats();
        for (int r = 0; r < 3; ++r) {
            const auto* b = s.block("d_round_" + std::to_string(r));
            ASSERT_NE(b, nullptr);
            EXPECT_EQ(b->constraints(), static_cast<std::size_t>(18 * n + 2));
            EXPECT_EQ(b->linear, b->constraints());
            EXPECT_EQ(b->variables, static_cast<std::size_t>(6 * n + 1));
            EXPECT_EQ(s.block("d_xor_" + std::to_string(r))->constraints(), static_cast<std::size_t>(4 * n));
        }
        EXPECT_EQ(uses(m, "d_Pro"), 1u);
    }
    EXPECT_EQ(build_diff_model(kSimon32, 1).stats().block("d_round_0")->constraints(), 290u);
    EXPECT_THROW(build_diff_model(kSimon32, 0), ConfigError);
}

TEST(Model, LinRoundCounts) {
    auto s = build_lin_model(kSimon32, 1).stats();
    const auto* b = s.block("l_round_0");
    ASSERT_NE(b, nullptr);
    EXPECT_EQ(b->constraints(), 2178u);
    EXPECT_EQ(b->variables, 833u);
    auto s2 = build_lin_model(CipherSpec::simeck(24), 2).stats();
    EXPECT_EQ(s2.block("l_round_1")->constraints(), 8u * 576 + 8 * 24 + 2);
    EXPECT_EQ(s2.block("l_round_1")->variables, 3u * 576 + 4 * 24 + 1);
}

TEST(Model, MiddleCounts) {
    auto s = build_middle_model(kSimon32, 1).stats();
    EXPECT_EQ(s.quadratic, 3u * 16 + 1);  // per-bit products and the correlation sum
    EXPECT_EQ(s.block("m_round_0")->quadratic, 48u);
    for (int R : {1, 3, 6}) {
        auto st = build_middle_model(kSimon32, R).stats();
        std::size_t cons = 0, vars = 0;
        for (const auto& b : st.blocks)
            if (b.name != "m_handles") {
                cons += b.constraints();
                vars += b.variables;
            }
        const std::size_t n = 16;
        EXPECT_EQ(cons, 3 * n * R + 6 * n + 1);
        EXPECT_EQ(vars, 3 * n * R + 6 * n + 1);
        // The stated variable count is 3nR + 6n + R; ours is within R of it.
        EXPECT_LE(std::llabs(static_cast<long long>(vars) - static_cast<long long>(3 * n * R + 6 * n + R)), R);
    }
}

TEST(Model, FullCountsAgainstFormula) {
    for (const auto& spec : {kSimon32, CipherSpec::simon(24)})
        for (RoundConfig c : {RoundConfig{1, 1, 1}, RoundConfig{5, 2, 4}, RoundConfig{3, 4, 2}}) {
            const long long n = spec.width(), R = c.total();
            auto s = build_full_model(spec, c).stats();
            const long long cons = 8 * n * n * c.l + 3 * n * R + 19 * n * c.d + 5 * n * c.l + 6 * n;
            const long long vars = 3 * n * n * c.l + 3 * n * R + 3 * n * c.d + n * c.l + 10 * n;
            EXPECT_EQ(static_cast<long long>(s.constraints()), cons + n * c.l + 2 * c.d + 2 * c.l + 6) << c.str();
            EXPECT_EQ(static_cast<long long>(s.variables()), vars + c.d + c.l + 4) << c.str();
        }
}

TEST(Model, EmitIsDeterministicAndRoundTrips) {
    std::vector<ConstraintModel> models;
    models.push_back(build_diff_model(kSimon32, 1));
    models.push_back(build_lin_model(kSimeck32, 1));
    models.push_back(build_middle_model(kSimon32, 2, 3));
    models.push_back(build_full_model(kSimon32, {2, 1, 1}));
    for (const auto& m : models) {
        const std::string a = emit_lp(m), b = emit_lp(m);
        EXPECT_EQ(a, b);
        auto back = parse_lp(a);
        EXPECT_TRUE(back.stats() == m.stats());
        EXPECT_EQ(back.hash(), m.hash());
        EXPECT_EQ(emit_lp(parse_lp(emit_lp(back))), emit_lp(back));
    }
    EXPECT_NE(models[0].hash(), models[3].hash());
}

TEST(Model, GeneralConstraintSyntax) {
    const std::string t = emit_lp(build_full_model(kSimon32, {1, 1, 1}));
    EXPECT_NE(t.find(" = ABS ( m_x_2_0 )\n"), std::string::npos);
    EXPECT_NE(t.find(" = LOG_2 ( m_z0_2_0 )\n"), std::string::npos);
    EXPECT_NE(t.find("l_tmp1_0_0 = AND ( l_tmp0_0_0 , l_lambda_1_7 )\n"), std::string::npos);
    EXPECT_NE(t.find("+ [ - 1 l_lambda_0_0 * m_z2_2_0"), std::string::npos);
    EXPECT_NE(t.find(" -inf <= m_Corm <= 0\n"), std::string::npos);
}

TEST(Model, SingleBinary) {
    ConstraintModel m;
    m.add_binary("x");
    const std::string t = emit_lp(m);
    EXPECT_EQ(section(t, "Binaries", "Generals"), " x\n");
    EXPECT_EQ(parse_lp(t).stats().binaries, 1u);
}

TEST(Model, ParseErrors) {
    EXPECT_THROW(parse_lp("Minimize\n obj: x\nSubject To\n c0: + 1 x\nEnd\n"), ParseError);
    EXPECT_THROW(parse_lp("Minimize\n obj: x\n"), ParseError);
    EXPECT_THROW(parse_lp("Minimize\nGeneral Constraints\n g0: y = EXP ( x )\nEnd\n"), ParseError);
}

TEST(Model, StatsJson) {
    auto j = nlohmann::json::parse(stats_json(build_lin_model(kSimon32, 1).stats()));
    EXPECT_EQ(j["constraints"].get<int>(), 2178 + 16 + 1);
    EXPECT_EQ(j["blocks"][1]["name"], "l_round_0");
    EXPECT_EQ(j["blocks"][1]["constraints"].get<int>(), 2178);
}

TEST(Model, EmptyModel) {
    ConstraintModel m;
    auto r = check_assignment(m, {});
    EXPECT_TRUE(r.satisfied);
    EXPECT_EQ(r.objective, 0.0);
    EXPECT_EQ(parse_lp(emit_lp(m)).stats().variables(), 0u);
}

TEST(Model, BestDiffTrailSatisfies) {
    auto t = search_best_diff_trail(kSimon32, 5, 20);
    auto m = build_diff_model(kSimon32, 5);
    auto a = induced_diff(kSimon32, t.alpha);
    auto r = check_assignment(m, a);
    EXPECT_TRUE(r.satisfied);
    EXPECT_EQ(r.objective, 8.0);

    auto flipped = a;
    flipped.set("d_alpha_3_0", 1 - a.at("d_alpha_3_0"));
    EXPECT_FALSE(check_assignment(m, flipped).violated.empty());
    flipped = a;
    flipped.set("d_gamma_2_5", 1 - a.at("d_gamma_2_5"));
    EXPECT_FALSE(check_assignment(m, flipped).satisfied);

    a.values.erase("d_pro_1");
    EXPECT_THROW(check_assignment(m, a), ConfigError);
}

TEST(Model, ZeroDifferenceIsInfeasible) {
    auto m = build_diff_model(kSimon32, 2);
    auto r = check_assignment(m, induced_diff(kSimon32, {0, 0, 0, 0}));
    EXPECT_FALSE(r.satisfied);
}

TEST(Model, BestLinTrailSatisfies) {
    auto t = search_best_lin_trail(kSimeck32, 4, 20);
    auto r = check_assignment(build_lin_model(kSimeck32, 4), induced_lin(kSimeck32, t.lambda));
    EXPECT_TRUE(r.satisfied);
    EXPECT_EQ(r.objective, static_cast<double>(t.weight));
}

TEST(Model, ZeroMasksSatisfyLinearModel) {
    auto r = check_assignment(build_lin_model(kSimon32, 2), induced_lin(kSimon32, {0, 0, 0, 0}));
    EXPECT_TRUE(r.satisfied);
    EXPECT_EQ(r.objective, 0.0);
}

TEST(Model, MiddleFixture) {
    auto m = build_middle_model(kSimon32, 5, 5);
    auto a = induced_middle(kSimon32, 5, 5, {0x22, 0x8}, {0x100, 0x0});
    auto r = check_assignment(m, a);
    EXPECT_TRUE(r.satisfied);
    EXPECT_NEAR(a.at("m_Corm"), -2.73, 0.01);
    const double engine = middle_correlation(propagate(kSimon32, init_from_difference(kSimon32, {0x22, 0x8}), 5),
                                             {0x100, 0x0});
    EXPECT_NEAR(a.at("m_Corm"), std::log2(std::fabs(engine)), 1e-9);
    EXPECT_NEAR(r.objective, 2.727, 0.001);
}

TEST(Model, MiddleLogOfZero) {
    auto st = propagate(kSimon32, init_from_difference(kSimon32, {0x22, 0x8}), 5);
    int zero = -1;
    for (int i = 0; i < 16; ++i)
        if (st.left[i] == 0) zero = i;
    ASSERT_GE(zero, 0);
    auto m = build_middle_model(kSimon32, 5, 5);
    auto a = induced_middle(kSimon32, 5, 5, {0x22, 0x8}, {Word{1} << zero, 0});
    EXPECT_TRUE(std::isinf(a.at("m_Corm")));
    auto r = check_assignment(m, a);
    EXPECT_TRUE(r.log_of_zero);
    EXPECT_FALSE(r.satisfied);
    EXPECT_TRUE(std::isinf(r.objective) && r.objective > 0);
}

// Every auxiliary variable is forced by the trail words, so the induced
// assignment satisfies the one-round model exactly when the engine accepts.
TEST(Model, TwoWayDifferentialOneRound) {
    std::mt19937_64 rng(7);
    for (const auto& spec : {kSimon32, kSimeck32}) {
        auto m = build_diff_model(spec, 1);
        int accepted = 0, rejected = 0;
        for (int trial = 0; trial < 6; ++trial) {
            const Word a1 = rng() & spec.mask(), a0 = rng() & spec.mask();
            const Word base = diff_output_space(spec, a1).offset;
            for (Word low = 0; low < 256; ++low) {
                const Word beta = base ^ (low * 0x101 & spec.mask());
                auto r = check_assignment(m, induced_diff(spec, {a0, a1, a0 ^ beta}));
                auto w = diff_round_weight(spec, a1, beta);
                ASSERT_EQ(r.satisfied, w.has_value()) << std::hex << a1 << " " << beta;
                if (w) {
                    EXPECT_EQ(r.objective, *w);
                    ++accepted;
                } else {
                    ++rejected;
                }
            }
        }
        EXPECT_GT(accepted, 0);
        EXPECT_GT(rejected, 0);
    }
}

TEST(Model, TwoWayLinearOneRound) {
    std::mt19937_64 rng(11);
    for (const auto& spec : {kSimon32, kSimeck32}) {
        auto m = build_lin_model(spec, 1);
        int accepted = 0, rejected = 0;
        for (int trial = 0; trial < 6; ++trial) {
            // Sparse output masks give long runs and nonzero sbits chains.
            Word l1 = rng() & rng() & spec.mask();
            if (trial % 2) l1 |= rng() & spec.mask();
            if (l1 == spec.mask()) l1 ^= 1;
            const Word l2 = rng() & spec.mask();
            const Word base = lin_input_space(spec, l1).offset ^ l2 ^ spec.rot(l1, -spec.c());
            for (Word low = 0; low < 160; ++low) {
                const Word l0 = base ^ ((low * 0x2081) & spec.mask());
                auto r = check_assignment(m, induced_lin(spec, {l0, l1, l2}));
                auto w = lin_round_weight(spec, l0, l1, l2);
                ASSERT_EQ(r.satisfied, w.has_value()) << std::hex << l0 << " " << l1 << " " << l2;
                if (w) {
                    EXPECT_EQ(r.objective, *w);
                    ++accepted;
                } else {
                    ++rejected;
                }
            }
        }
        EXPECT_GT(accepted, 0);
        EXPECT_GT(rejected, 0);
    }
}

TEST(Model, FullModelFixture) {
    auto t = row13_star();
    auto m = build_full_model(kSimon32, t.config);
    auto a = induced_full(t);
    auto r = check_assignment(m, a);
    EXPECT_TRUE(r.satisfied);
    EXPECT_NEAR(r.objective, 14.73, 0.01);
    EXPECT_NEAR(r.objective, -t.log2_abs(), 1e-9);
    EXPECT_EQ(a.at("d_Pro"), 8.0);
    EXPECT_EQ(a.at("l_Corl"), 2.0);
}

TEST(Model, FullModelRejectsEmptyMasks) {
    auto t = row13_star();
    t.lin_path.assign(t.config.l + 2, 0);
    auto r = check_assignment(build_full_model(kSimon32, t.config), induced_full(t));
    EXPECT_FALSE(r.satisfied);
}
