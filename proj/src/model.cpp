#include "simondl/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include <json.hpp>

namespace simondl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTol = 1e-6;

std::string num(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

const char* kind_name(VarKind k) {
    switch (k) {
        case VarKind::Binary: return "binary";
        case VarKind::Integer: return "integer";
        default: return "continuous";
    }
}

const char* rel_name(Relation r) {
    switch (r) {
        case Relation::Le: return "<=";
        case Relation::Ge: return ">=";
        default: return "=";
    }
}

const char* gen_name(GenKind k) {
    switch (k) {
        case GenKind::Abs: return "ABS";
        case GenKind::Log2: return "LOG_2";
        default: return "AND";
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// ConstraintModel

const BlockStats* ModelStats::block(std::string_view name) const {
    for (const auto& b : blocks)
        if (b.name == name) return &b;
    return nullptr;
}

bool ModelStats::operator==(const ModelStats& o) const {
    if (binaries != o.binaries || integers != o.integers || continuous != o.continuous || linear != o.linear ||
        quadratic != o.quadratic || general != o.general || blocks.size() != o.blocks.size())
        return false;
    for (const auto& b : blocks) {
        const BlockStats* c = o.block(b.name);
        if (!c || c->variables != b.variables || c->linear != b.linear || c->quadratic != b.quadratic ||
            c->general != b.general)
            return false;
    }
    return true;
}

ConstraintModel::ConstraintModel() : blocks_{"main"} {}

void ConstraintModel::begin_block(const std::string& name) {
    auto it = std::find(blocks_.begin(), blocks_.end(), name);
    if (it == blocks_.end()) {
        blocks_.push_back(name);
        current_ = static_cast<int>(blocks_.size()) - 1;
    } else {
        current_ = static_cast<int>(it - blocks_.begin());
    }
}

int ConstraintModel::add_var(const std::string& name, VarKind kind, double lo, double hi) {
    if (index_.count(name)) throw ConfigError("variable declared twice: " + name);
    const int id = static_cast<int>(vars_.size());
    vars_.push_back({name, kind, lo, hi, current_});
    index_.emplace(name, id);
    return id;
}

std::optional<int> ConstraintModel::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

int ConstraintModel::var(std::string_view name) const {
    auto v = find(name);
    if (!v) throw ConfigError("undeclared variable: " + std::string(name));
    return *v;
}

void ConstraintModel::add_constraint(std::vector<LinTerm> lin, Relation rel, double rhs, std::vector<QuadTerm> quad) {
    std::vector<LinTerm> merged;
    for (const auto& t : lin) {
        auto it = std::find_if(merged.begin(), merged.end(), [&](const LinTerm& m) { return m.var == t.var; });
        if (it == merged.end())
            merged.push_back(t);
        else
            it->coeff += t.coeff;
    }
    std::erase_if(merged, [](const LinTerm& t) { return t.coeff == 0; });
    std::erase_if(quad, [](const QuadTerm& t) { return t.coeff == 0; });
    cons_.push_back({"c" + std::to_string(cons_.size()), std::move(merged), std::move(quad), rel, rhs, current_});
}

void ConstraintModel::add_general(GenKind kind, int result, std::vector<int> args) {
    gens_.push_back({"g" + std::to_string(gens_.size()), kind, result, std::move(args), current_});
}

void ConstraintModel::set_objective(bool minimize, std::vector<LinTerm> terms) {
    minimize_ = minimize;
    obj_ = std::move(terms);
}

ModelStats ConstraintModel::stats() const {
    ModelStats s;
    std::vector<BlockStats> b(blocks_.size());
    for (std::size_t i = 0; i < blocks_.size(); ++i) b[i].name = blocks_[i];
    for (const auto& v : vars_) {
        ++b[v.block].variables;
        if (v.kind == VarKind::Binary) ++s.binaries;
        else if (v.kind == VarKind::Integer) ++s.integers;
        else ++s.continuous;
    }
    for (const auto& c : cons_) {
        if (c.quad.empty()) {
            ++s.linear;
            ++b[c.block].linear;
        } else {
            ++s.quadratic;
            ++b[c.block].quadratic;
        }
    }
    for (const auto& g : gens_) ++b[g.block].general;
    s.general = gens_.size();
    for (auto& x : b)
        if (x.variables || x.constraints()) s.blocks.push_back(std::move(x));
    return s;
}

std::uint64_t ConstraintModel::hash() const {
    std::uint64_t h = 1469598103934665603ull;
    auto feed = [&](const std::string& s) {
        for (unsigned char ch : s) {
            h ^= ch;
            h *= 1099511628211ull;
        }
        h ^= '\n';
        h *= 1099511628211ull;
    };
    std::vector<const Variable*> vs;
    for (const auto& v : vars_) vs.push_back(&v);
    std::sort(vs.begin(), vs.end(), [](auto* x, auto* y) { return x->name < y->name; });
    for (auto* v : vs)
        feed("V " + v->name + " " + kind_name(v->kind) + " " + num(v->lo) + " " + num(v->hi) + " " + blocks_[v->block]);
    for (const auto& c : cons_) {
        std::string s = "C " + c.name + " " + blocks_[c.block] + " " + rel_name(c.rel) + " " + num(c.rhs);
        for (const auto& t : c.lin) s += " " + num(t.coeff) + "*" + vars_[t.var].name;
        for (const auto& q : c.quad) s += " " + num(q.coeff) + "*" + vars_[q.u].name + "*" + vars_[q.v].name;
        feed(s);
    }
    for (const auto& g : gens_) {
        std::string s = "G " + g.name + " " + blocks_[g.block] + " " + gen_name(g.kind) + " " + vars_[g.result].name;
        for (int a : g.args) s += " " + vars_[a].name;
        feed(s);
    }
    std::string o = minimize_ ? "O min" : "O max";
    for (const auto& t : obj_) o += " " + num(t.coeff) + "*" + vars_[t.var].name;
    feed(o);
    return h;
}

// ---------------------------------------------------------------------------
// Builders

namespace {

using Bits = std::vector<int>;

class Builder {
public:
    Builder(ConstraintModel& m, const CipherSpec& s) : m(m), n(s.width()), a(s.a()), b(s.b()), c(s.c()) {}

    ConstraintModel& m;
    const int n, a, b, c;

    int at(int i) const { return ((i % n) + n) % n; }

    static std::string name(const std::string& base, int k, int i) {
        return base + "_" + std::to_string(k) + "_" + std::to_string(i);
    }

    Bits declare(const std::string& base, int k, VarKind kind = VarKind::Binary, double lo = 0, double hi = 1) {
        Bits v(n);
        for (int i = 0; i < n; ++i) v[i] = m.add_var(name(base, k, i), kind, lo, hi);
        return v;
    }
    Bits lookup(const std::string& base, int k) const {
        Bits v(n);
        for (int i = 0; i < n; ++i) v[i] = m.var(name(base, k, i));
        return v;
    }

    void le(std::vector<LinTerm> t, double r) { m.add_constraint(std::move(t), Relation::Le, r); }
    void ge(std::vector<LinTerm> t, double r) { m.add_constraint(std::move(t), Relation::Ge, r); }
    void eq(std::vector<LinTerm> t, double r) { m.add_constraint(std::move(t), Relation::Eq, r); }

    // x ^ y ^ z = 0 on binaries: cut off the four odd-parity points.
    void xor3(int x, int y, int z) {
        ge({{x, -1}, {y, 1}, {z, 1}}, 0);
        ge({{x, 1}, {y, -1}, {z, 1}}, 0);
        ge({{x, 1}, {y, 1}, {z, -1}}, 0);
        le({{x, 1}, {y, 1}, {z, 1}}, 2);
    }
    // w ^ x ^ y ^ z = 0: eight cuts.
    void xor4(int w, int x, int y, int z) {
        const int v[4] = {w, x, y, z};
        for (int odd = 0; odd < 16; ++odd) {
            if (!__builtin_parity(odd)) continue;
            std::vector<LinTerm> t;
            int ones = 0;
            for (int k = 0; k < 4; ++k) {
                const bool one = (odd >> k) & 1;
                t.push_back({v[k], one ? 1.0 : -1.0});
                ones += one;
            }
            le(std::move(t), ones - 1);
        }
    }
    std::vector<LinTerm> sum(const Bits& v, double coeff = 1) const {
        std::vector<LinTerm> t;
        for (int x : v) t.push_back({x, coeff});
        return t;
    }
};

void add_diff_part(ConstraintModel& m, const CipherSpec& s, int R) {
    Builder B(m, s);
    const int n = B.n, a = B.a, bb = B.b, c = B.c;
    std::vector<Bits> alpha(R + 2);
    m.begin_block("d_init");
    alpha[0] = B.declare("d_alpha", 0);
    alpha[1] = B.declare("d_alpha", 1);
    std::vector<int> pro(R);
    for (int r = 0; r < R; ++r) {
        m.begin_block("d_round_" + std::to_string(r));
        const Bits& al = alpha[r + 1];
        Bits vari = B.declare("d_vari", r), dbl = B.declare("d_double", r), gamma = B.declare("d_gamma", r),
             beta = B.declare("d_beta", r), probits = B.declare("d_probits", r);
        pro[r] = m.add_var("d_pro_" + std::to_string(r), VarKind::Integer, 0, n);
        alpha[r + 2] = B.declare("d_alpha", r + 2);
        for (int i = 0; i < n; ++i) {
            const int x = al[B.at(i - a)], y = al[B.at(i - bb)], z = al[B.at(i - 2 * a + bb)];
            const int v = vari[i], d = dbl[i], g = gamma[i], g2 = gamma[B.at(i - a + bb)];
            // varibits = S^a alpha | S^b alpha
            B.ge({{v, 1}, {x, -1}}, 0);
            B.ge({{v, 1}, {y, -1}}, 0);
            B.le({{v, 1}, {x, -1}, {y, -1}}, 0);
            // doublebits = S^b alpha & ~S^a alpha & S^{2a-b} alpha
            B.le({{d, 1}, {x, 1}}, 1);
            B.le({{d, 1}, {y, -1}}, 0);
            B.le({{d, 1}, {z, -1}}, 0);
            B.ge({{d, 1}, {x, 1}, {y, -1}, {z, -1}}, -1);
            // beta = gamma ^ S^c alpha
            B.xor3(g, al[B.at(i - c)], beta[i]);
            B.le({{g, 1}, {v, -1}}, 0);
            B.le({{g, 1}, {g2, -1}, {d, 1}}, 1);
            B.le({{g, -1}, {g2, 1}, {d, 1}}, 1);
            B.xor3(probits[i], v, d);
        }
        B.le(B.sum(al), n - 1);
        auto t = B.sum(probits, -1);
        t.push_back({pro[r], 1});
        B.eq(std::move(t), 0);

        m.begin_block("d_xor_" + std::to_string(r));
        for (int i = 0; i < n; ++i) B.xor3(alpha[r + 2][i], beta[i], alpha[r][i]);
    }
    m.begin_block("d_sum");
    const int P = m.add_var("d_Pro", VarKind::Integer, 0, static_cast<double>(n) * R);
    auto nz = B.sum(alpha[0]);
    for (int x : alpha[1]) nz.push_back({x, 1});
    B.ge(std::move(nz), 1);
    std::vector<LinTerm> t{{P, 1}};
    for (int p : pro) t.push_back({p, -1});
    B.eq(std::move(t), 0);
}

void add_lin_part(ConstraintModel& m, const CipherSpec& s, int R) {
    Builder B(m, s);
    const int n = B.n, a = B.a, bb = B.b, c = B.c, d = a - bb;
    std::vector<Bits> lam(R + 2);
    m.begin_block("l_init");
    lam[0] = B.declare("l_lambda", 0);
    lam[1] = B.declare("l_lambda", 1);
    std::vector<int> cor(R);
    for (int r = 0; r < R; ++r) {
        const std::string rs = std::to_string(r);
        m.begin_block("l_round_" + rs);
        const Bits& L = lam[r + 1];
        lam[r + 2] = B.declare("l_lambda", r + 2);
        Bits lin = B.declare("l_lin", r);
        std::vector<Bits> tmp(n), sb(n), pb(n);
        for (int j = 0; j < n; ++j) tmp[j] = B.declare("l_tmp" + std::to_string(j), r);
        Bits abits = B.declare("l_abits", r);
        Bits N = B.declare("l_N", r, VarKind::Integer, 0, n);
        for (int j = 0; j < n; ++j) sb[j] = B.declare("l_sbits" + std::to_string(j), r);
        for (int j = 0; j < n; ++j) pb[j] = B.declare("l_pbits" + std::to_string(j), r);
        cor[r] = m.add_var("l_cor_" + rs, VarKind::Integer, 0, n);

        // lambda_in = lambda^r ^ S^{-c} lambda^{r+1} ^ lambda^{r+2}, inside the AND support
        for (int i = 0; i < n; ++i) {
            B.xor4(lam[r][i], L[B.at(i + c)], lam[r + 2][i], lin[i]);
            B.ge({{L[B.at(i + a)], 1}, {L[B.at(i + bb)], 1}, {lin[i], -1}}, 0);
        }
        B.le(B.sum(L), n - 1);
        // tmp^j_i = AND of lambda^{r+1} over i, i+(a-b), ..., i+j(a-b)
        for (int j = 0; j + 1 < n; ++j)
            for (int i = 0; i < n; ++i) m.add_general(GenKind::And, tmp[j + 1][i], {tmp[j][i], L[B.at(i + (j + 1) * d)]});
        for (int i = 0; i < n; ++i) {
            std::vector<LinTerm> t;
            for (int j = 0; j < n; ++j) t.push_back({tmp[j][i], 1});
            t.push_back({abits[i], 1});
            t.push_back({N[i], -2});
            B.eq(std::move(t), 0);
        }
        // sbits^0 = S^{-a} lambda & ~S^{-b} lambda & ~S^{-a} abits
        for (int i = 0; i < n; ++i) {
            const int s0 = sb[0][i], la = L[B.at(i + a)], lb = L[B.at(i + bb)], ab = abits[B.at(i + a)];
            B.le({{s0, 1}, {la, -1}}, 0);
            B.le({{s0, 1}, {lb, 1}}, 1);
            B.le({{s0, 1}, {ab, 1}}, 1);
            B.ge({{s0, 1}, {la, -1}, {lb, 1}, {ab, 1}}, 0);
        }
        for (int k = 0; k < n; ++k) m.add_general(GenKind::And, pb[0][B.at(k + 2 * d)], {sb[0][k], lin[k]});
        for (int j = 0; j + 1 < n; ++j)
            for (int k = 0; k < n; ++k) m.add_general(GenKind::And, sb[j + 1][B.at(k + 2 * d)], {sb[j][k], L[B.at(k + a)]});
        // pbits^{j+1}_{k+2a-2b} = (sbits^{j+1}_k & lambda_in_k) ^ pbits^j_k
        for (int j = 0; j + 1 < n; ++j)
            for (int k = 0; k < n; ++k) {
                const int y = pb[j + 1][B.at(k + 2 * d)], sv = sb[j + 1][k], l = lin[k], p = pb[j][k];
                B.ge({{l, 1}, {p, -1}, {y, 1}}, 0);
                B.ge({{l, 1}, {p, 1}, {y, -1}}, 0);
                B.ge({{sv, -1}, {l, -1}, {p, 1}, {y, 1}}, -1);
                B.ge({{sv, -1}, {l, -1}, {p, -1}, {y, -1}}, -3);
                B.ge({{sv, 1}, {p, -1}, {y, 1}}, 0);
                B.ge({{sv, 1}, {p, 1}, {y, -1}}, 0);
            }
        for (int i = 0; i < n; ++i) B.eq({{pb[n - 1][i], 1}}, 0);
        auto t = B.sum(abits, -1);
        t.push_back({cor[r], 1});
        B.eq(std::move(t), 0);

        m.begin_block("l_link_" + rs);
        for (int i = 0; i < n; ++i) B.eq({{tmp[0][i], 1}, {L[i], -1}}, 0);
    }
    m.begin_block("l_sum");
    const int C = m.add_var("l_Corl", VarKind::Integer, 0, static_cast<double>(n) * R);
    std::vector<LinTerm> t{{C, 1}};
    for (int x : cor) t.push_back({x, -1});
    B.eq(std::move(t), 0);
    m.add_note("linear rounds: tmp^{j+1}_i = AND(tmp^j_i, lambda_{i+(j+1)(a-b)})");
    m.add_note("linear rounds: pbits^{j+1}_{k+2a-2b} = (sbits^{j+1}_k AND lambda_in_k) XOR pbits^j_k");
}

// Reads d_alpha_{rd+1}, d_alpha_{rd}, l_lambda_0, l_lambda_1, which must exist.
void add_middle_part(ConstraintModel& m, const CipherSpec& s, int R, int rd) {
    Builder B(m, s);
    const int n = B.n, a = B.a, bb = B.b, c = B.c;
    const Bits dl = B.lookup("d_alpha", rd + 1), dr = B.lookup("d_alpha", rd);
    const Bits l0 = B.lookup("l_lambda", 0), l1 = B.lookup("l_lambda", 1);
    std::vector<Bits> x(R + 2);
    m.begin_block("m_init");
    x[0] = B.declare("m_x", 0, VarKind::Continuous, -1, 1);
    x[1] = B.declare("m_x", 1, VarKind::Continuous, -1, 1);
    for (int i = 0; i < n; ++i) {
        B.eq({{x[1][i], 1}, {dl[i], 2}}, 1);
        B.eq({{x[0][i], 1}, {dr[i], 2}}, 1);
    }
    for (int r = 0; r < R; ++r) {
        m.begin_block("m_round_" + std::to_string(r));
        Bits y = B.declare("m_y", r, VarKind::Continuous, 0, 1);
        Bits t = B.declare("m_t", r, VarKind::Continuous, -1, 1);
        x[r + 2] = B.declare("m_x", r + 2, VarKind::Continuous, -1, 1);
        const Bits& u = x[r + 1];
        for (int i = 0; i < n; ++i) {
            const int p = u[B.at(i - a)], q = u[B.at(i - bb)];
            m.add_constraint({{y[i], 4}, {p, -1}, {q, -1}}, Relation::Eq, 1, {{p, q, -1}});
            m.add_constraint({{t[i], 1}}, Relation::Eq, 0, {{y[i], x[r][i], -1}});
            m.add_constraint({{x[r + 2][i], 1}}, Relation::Eq, 0, {{t[i], u[B.at(i - c)], -1}});
        }
    }
    m.begin_block("m_cor");
    Bits z0 = B.declare("m_z0", R + 1, VarKind::Continuous, 0, 1);
    Bits z1 = B.declare("m_z1", R, VarKind::Continuous, 0, 1);
    Bits z2 = B.declare("m_z2", R + 1, VarKind::Continuous, -kInf, 0);
    Bits z3 = B.declare("m_z3", R, VarKind::Continuous, -kInf, 0);
    const int cm = m.add_var("m_Corm", VarKind::Continuous, -kInf, 0);
    for (int i = 0; i < n; ++i) {
        m.add_general(GenKind::Abs, z0[i], {x[R + 1][i]});
        m.add_general(GenKind::Abs, z1[i], {x[R][i]});
        m.add_general(GenKind::Log2, z2[i], {z0[i]});
        m.add_general(GenKind::Log2, z3[i], {z1[i]});
    }
    std::vector<QuadTerm> q;
    for (int i = 0; i < n; ++i) {
        q.push_back({l0[i], z2[i], -1});
        q.push_back({l1[i], z3[i], -1});
    }
    m.add_constraint({{cm, 1}}, Relation::Eq, 0, std::move(q));
}

void require_rounds(int r, const char* what) {
    if (r < 1) throw ConfigError(std::string(what) + " needs at least one round");
}

}  // namespace

ConstraintModel build_diff_model(const CipherSpec& spec, int rounds) {
    require_rounds(rounds, "differential model");
    ConstraintModel m;
    add_diff_part(m, spec, rounds);
    m.set_objective(true, {{m.var("d_Pro"), 1}});
    return m;
}

ConstraintModel build_middle_model(const CipherSpec& spec, int rounds, int diff_rounds) {
    require_rounds(rounds, "middle model");
    require_rounds(diff_rounds, "middle model handles");
    ConstraintModel m;
    Builder B(m, spec);
    m.begin_block("m_handles");
    B.declare("d_alpha", diff_rounds + 1);
    B.declare("d_alpha", diff_rounds);
    B.declare("l_lambda", 0);
    B.declare("l_lambda", 1);
    add_middle_part(m, spec, rounds, diff_rounds);
    m.set_objective(true, {{m.var("m_Corm"), -1}});
    return m;
}

ConstraintModel build_lin_model(const CipherSpec& spec, int rounds) {
    require_rounds(rounds, "linear model");
    ConstraintModel m;
    add_lin_part(m, spec, rounds);
    m.set_objective(true, {{m.var("l_Corl"), 1}});
    return m;
}

ConstraintModel build_full_model(const CipherSpec& spec, RoundConfig cfg) {
    require_rounds(cfg.d, "differential part");
    require_rounds(cfg.m, "middle part");
    require_rounds(cfg.l, "linear part");
    ConstraintModel m;
    add_diff_part(m, spec, cfg.d);
    add_lin_part(m, spec, cfg.l);
    add_middle_part(m, spec, cfg.m, cfg.d);
    Builder B(m, spec);
    m.begin_block("e_total");
    auto nz = B.sum(B.lookup("l_lambda", 0));
    for (int x : B.lookup("l_lambda", 1)) nz.push_back({x, 1});
    B.ge(std::move(nz), 1);
    const int e = m.add_var("e_Core", VarKind::Continuous, 0, kInf);
    B.eq({{e, 1}, {m.var("d_Pro"), -1}, {m.var("m_Corm"), 1}, {m.var("l_Corl"), -2}}, 0);
    m.set_objective(true, {{e, 1}});
    return m;
}

// ---------------------------------------------------------------------------
// LP text

namespace {

constexpr int kTermsPerLine = 8;

void write_terms(std::ostream& os, const ConstraintModel& m, const std::vector<LinTerm>& lin,
                 const std::vector<QuadTerm>& quad) {
    const auto& vs = m.variables();
    int k = 0;
    auto brk = [&] {
        if (++k % kTermsPerLine == 0) os << "\n  ";
    };
    for (const auto& t : lin) {
        os << (t.coeff < 0 ? " - " : " + ") << num(std::fabs(t.coeff)) << ' ' << vs[t.var].name;
        brk();
    }
    if (!quad.empty()) {
        os << " + [";
        for (const auto& q : quad) {
            os << (q.coeff < 0 ? " - " : " + ") << num(std::fabs(q.coeff)) << ' ' << vs[q.u].name << " * "
               << vs[q.v].name;
            brk();
        }
        os << " ]";
    }
}

}  // namespace

void emit_lp(std::ostream& os, const ConstraintModel& m) {
    const auto& vs = m.variables();
    const auto& blocks = m.blocks();
    os << "\\ blocks:";
    for (const auto& b : blocks) os << ' ' << b;
    os << '\n';
    for (const auto& n : m.notes()) os << "\\ note: " << n << '\n';

    os << (m.minimize() ? "Minimize\n" : "Maximize\n") << " obj:";
    write_terms(os, m, m.objective(), {});
    os << "\nSubject To\n";
    int cur = 0;  // sections start in the default block
    auto block_tag = [&](int b) {
        if (b != cur) {
            os << "\\ block " << blocks[b] << '\n';
            cur = b;
        }
    };
    for (const auto& c : m.constraints()) {
        block_tag(c.block);
        os << ' ' << c.name << ':';
        write_terms(os, m, c.lin, c.quad);
        os << ' ' << rel_name(c.rel) << ' ' << num(c.rhs) << '\n';
    }

    os << "Bounds\n";
    cur = 0;
    for (const auto& v : vs) {
        if (v.kind == VarKind::Binary) continue;
        block_tag(v.block);
        if (std::isinf(v.lo) && v.lo < 0 && std::isinf(v.hi) && v.hi > 0)
            os << ' ' << v.name << " free\n";
        else
            os << ' ' << num(v.lo) << " <= " << v.name << " <= " << num(v.hi) << '\n';
    }
    os << "Binaries\n";
    cur = 0;
    for (const auto& v : vs)
        if (v.kind == VarKind::Binary) {
            block_tag(v.block);
            os << ' ' << v.name << '\n';
        }
    os << "Generals\n";
    cur = 0;
    for (const auto& v : vs)
        if (v.kind == VarKind::Integer) {
            block_tag(v.block);
            os << ' ' << v.name << '\n';
        }
    os << "General Constraints\n";
    cur = 0;
    for (const auto& g : m.generals()) {
        block_tag(g.block);
        os << ' ' << g.name << ": " << vs[g.result].name << " = " << gen_name(g.kind) << " ( ";
        for (std::size_t i = 0; i < g.args.size(); ++i) os << (i ? " , " : "") << vs[g.args[i]].name;
        os << " )\n";
    }
    os << "End\n";
}

std::string emit_lp(const ConstraintModel& m) {
    std::ostringstream os;
    emit_lp(os, m);
    return os.str();
}

namespace {

enum class Section { None, Objective, Constraints, Bounds, Binaries, Generals, GenConstraints, End };

std::vector<std::string> split(const std::string& line) {
    std::istringstream is(line);
    std::vector<std::string> out;
    std::string t;
    while (is >> t) out.push_back(t);
    return out;
}

std::string lower(std::string s) {
    for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return s;
}

bool parse_num(const std::string& t, double& out) {
    const std::string l = lower(t);
    if (l == "inf" || l == "+inf" || l == "infinity") return out = kInf, true;
    if (l == "-inf" || l == "-infinity") return out = -kInf, true;
    if (t.empty() || !(std::isdigit(static_cast<unsigned char>(t[0])) || t[0] == '.' || t[0] == '-' || t[0] == '+'))
        return false;
    char* end = nullptr;
    out = std::strtod(t.c_str(), &end);
    return end && *end == '\0';
}

bool parse_rel(const std::string& t, Relation& r) {
    if (t == "<=" || t == "=<" || t == "<") return r = Relation::Le, true;
    if (t == ">=" || t == "=>" || t == ">") return r = Relation::Ge, true;
    if (t == "=") return r = Relation::Eq, true;
    return false;
}

struct ParsedVar {
    VarKind kind = VarKind::Continuous;
    double lo = 0, hi = kInf;
    std::string block = "main";
    bool declared = false;
};

struct PRow {
    std::string name, block;
    std::vector<std::pair<std::string, double>> lin;
    std::vector<std::tuple<std::string, std::string, double>> quad;
    Relation rel = Relation::Eq;
    double rhs = 0;
};

struct PGen {
    std::string name, block, result;
    GenKind kind = GenKind::Abs;
    std::vector<std::string> args;
};

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ParseError("LP line " + std::to_string(line) + ": " + msg);
}

}  // namespace

ConstraintModel parse_lp(std::istream& is) {
    std::vector<std::string> blocks, notes, order;
    std::map<std::string, ParsedVar> vars;
    std::vector<PRow> rows;
    std::vector<PGen> gens;
    PRow objective;
    bool minimize = true;
    Section sec = Section::None;
    std::string block = "main";
    std::vector<std::string> pending;  // tokens of an unfinished row
    int pending_line = 0;

    auto touch = [&](const std::string& v) -> ParsedVar& {
        auto it = vars.find(v);
        if (it == vars.end()) {
            order.push_back(v);
            it = vars.emplace(v, ParsedVar{}).first;
            it->second.block = block;
        }
        return it->second;
    };
    auto declare = [&](const std::string& v) -> ParsedVar& {
        ParsedVar& p = touch(v);
        p.block = block;
        p.declared = true;
        return p;
    };

    // Parses "[name:] terms [rel rhs]"; returns false if the row is not finished yet.
    auto parse_row = [&](const std::vector<std::string>& tok, bool need_rel, int line, PRow& row) {
        std::size_t i = 0;
        if (!tok.empty() && tok[0].back() == ':') {
            row.name = tok[0].substr(0, tok[0].size() - 1);
            i = 1;
        } else if (tok.size() > 1 && tok[1] == ":") {
            row.name = tok[0];
            i = 2;
        }
        bool has_rel = false;
        for (std::size_t k = i; k < tok.size(); ++k) {
            Relation r;
            if (parse_rel(tok[k], r)) has_rel = true;
        }
        if (need_rel && (!has_rel || parse_rel(tok.back(), row.rel))) return false;
        double sign = 1, coeff = 1;
        bool have_coeff = false, in_quad = false;
        std::string pend_var;
        for (; i < tok.size(); ++i) {
            const std::string& t = tok[i];
            Relation r;
            double x;
            if (t == "+") { sign = 1; continue; }
            if (t == "-") { sign = -1; continue; }
            if (t == "[") { in_quad = true; continue; }
            if (t == "]" || t == "]/2") {
                if (t == "]/2") fail(line, "halved quadratic objectives are not supported");
                in_quad = false;
                continue;
            }
            if (parse_rel(t, r)) {
                if (i + 2 != tok.size() || !parse_num(tok[i + 1], row.rhs)) fail(line, "expected a single right-hand side");
                row.rel = r;
                return true;
            }
            if (parse_num(t, x)) {
                coeff = x;
                have_coeff = true;
                continue;
            }
            if (in_quad) {
                if (i + 2 < tok.size() && tok[i + 1] == "*") {
                    touch(t);
                    touch(tok[i + 2]);
                    row.quad.emplace_back(t, tok[i + 2], sign * (have_coeff ? coeff : 1));
                    i += 2;
                } else {
                    fail(line, "expected 'u * v' inside brackets");
                }
            } else {
                touch(t);
                row.lin.emplace_back(t, sign * (have_coeff ? coeff : 1));
            }
            sign = 1;
            have_coeff = false;
        }
        if (need_rel) fail(line, "missing relation");
        return true;
    };

    std::string line;
    int ln = 0;
    while (std::getline(is, line)) {
        ++ln;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty() && line[0] == '\\') {
            auto tok = split(line.substr(1));
            if (!tok.empty() && tok[0] == "blocks:") {
                blocks.assign(tok.begin() + 1, tok.end());
            } else if (tok.size() == 2 && tok[0] == "block") {
                block = tok[1];
            } else if (!tok.empty() && tok[0] == "note:") {
                notes.push_back(line.substr(line.find("note:") + 6));
            }
            continue;
        }
        const std::string head = lower(line);
        auto trimmed = split(head);
        const std::string key = [&] {
            std::string s;
            for (const auto& t : trimmed) s += (s.empty() ? "" : " ") + t;
            return s;
        }();
        Section next = Section::None;
        if (key == "minimize" || key == "minimise" || key == "min") next = Section::Objective, minimize = true;
        else if (key == "maximize" || key == "maximise" || key == "max") next = Section::Objective, minimize = false;
        else if (key == "subject to" || key == "st" || key == "s.t.") next = Section::Constraints;
        else if (key == "bounds") next = Section::Bounds;
        else if (key == "binaries" || key == "binary") next = Section::Binaries;
        else if (key == "generals" || key == "general") next = Section::Generals;
        else if (key == "general constraints") next = Section::GenConstraints;
        else if (key == "end") next = Section::End;
        if (next != Section::None) {
            if (!pending.empty()) {
                if (sec == Section::Objective) {
                    parse_row(pending, false, pending_line, objective);
                    pending.clear();
                } else {
                    fail(pending_line, "unterminated constraint");
                }
            }
            sec = next;
            block = "main";
            if (sec == Section::End) break;
            continue;
        }
        auto tok = split(line);
        if (tok.empty()) continue;
        switch (sec) {
            case Section::None: fail(ln, "text before the first section");
            case Section::Objective:
                if (pending.empty()) pending_line = ln;
                pending.insert(pending.end(), tok.begin(), tok.end());
                break;
            case Section::Constraints: {
                if (pending.empty()) pending_line = ln;
                pending.insert(pending.end(), tok.begin(), tok.end());
                PRow row;
                row.block = block;
                if (parse_row(pending, true, pending_line, row)) {
                    if (row.name.empty()) row.name = "c" + std::to_string(rows.size());
                    rows.push_back(std::move(row));
                    pending.clear();
                }
                break;
            }
            case Section::Bounds: {
                double lo, hi;
                Relation r1, r2;
                if (tok.size() == 2 && lower(tok[1]) == "free") {
                    auto& v = declare(tok[0]);
                    v.lo = -kInf;
                    v.hi = kInf;
                } else if (tok.size() == 5 && parse_num(tok[0], lo) && parse_rel(tok[1], r1) && r1 == Relation::Le &&
                           parse_rel(tok[3], r2) && r2 == Relation::Le && parse_num(tok[4], hi)) {
                    auto& v = declare(tok[2]);
                    v.lo = lo;
                    v.hi = hi;
                } else if (tok.size() == 3 && parse_rel(tok[1], r1) && parse_num(tok[2], lo)) {
                    auto& v = declare(tok[0]);
                    if (r1 == Relation::Le) v.hi = lo;
                    else if (r1 == Relation::Ge) v.lo = lo;
                    else v.lo = v.hi = lo;
                } else {
                    fail(ln, "unrecognized bound");
                }
                break;
            }
            case Section::Binaries:
                for (const auto& t : tok) {
                    auto& v = declare(t);
                    v.kind = VarKind::Binary;
                    v.lo = 0;
                    v.hi = 1;
                }
                break;
            case Section::Generals:
                for (const auto& t : tok) {
                    auto& v = touch(t);
                    v.kind = VarKind::Integer;
                    if (!v.declared) v.block = block;
                    v.declared = true;
                }
                break;
            case Section::GenConstraints: {
                // name: r = FUNC ( a [, b] )
                PGen g;
                g.block = block;
                std::size_t i = 0;
                if (tok[0].back() == ':') g.name = tok[i++].substr(0, tok[0].size() - 1);
                if (tok.size() < i + 6 || tok[i + 1] != "=" || tok[i + 3] != "(" || tok.back() != ")")
                    fail(ln, "malformed general constraint");
                g.result = tok[i];
                const std::string f = tok[i + 2];
                if (f == "ABS") g.kind = GenKind::Abs;
                else if (f == "LOG_2") g.kind = GenKind::Log2;
                else if (f == "AND") g.kind = GenKind::And;
                else fail(ln, "unknown general constraint " + f);
                for (std::size_t k = i + 4; k + 1 < tok.size(); ++k)
                    if (tok[k] != ",") g.args.push_back(tok[k]);
                if (g.args.size() != (g.kind == GenKind::And ? 2u : 1u)) fail(ln, "wrong argument count");
                touch(g.result);
                for (const auto& a : g.args) touch(a);
                if (g.name.empty()) g.name = "g" + std::to_string(gens.size());
                gens.push_back(std::move(g));
                break;
            }
            case Section::End: break;
        }
    }
    if (sec != Section::End) fail(ln, "missing End");

    ConstraintModel m;
    for (const auto& b : blocks) m.begin_block(b);
    for (const auto& name : order) {
        const auto& v = vars.at(name);
        m.begin_block(v.block);
        m.add_var(name, v.kind, v.lo, v.hi);
    }
    auto lin_of = [&](const std::vector<std::pair<std::string, double>>& l) {
        std::vector<LinTerm> out;
        for (const auto& [v, c] : l) out.push_back({m.var(v), c});
        return out;
    };
    for (auto& r : rows) {
        m.begin_block(r.block);
        std::vector<QuadTerm> q;
        for (const auto& [u, v, c] : r.quad) q.push_back({m.var(u), m.var(v), c});
        m.add_constraint(lin_of(r.lin), r.rel, r.rhs, std::move(q));
        m.cons_.back().name = r.name;
    }
    for (auto& g : gens) {
        m.begin_block(g.block);
        std::vector<int> args;
        for (const auto& a : g.args) args.push_back(m.var(a));
        m.add_general(g.kind, m.var(g.result), std::move(args));
        m.gens_.back().name = g.name;
    }
    m.set_objective(minimize, lin_of(objective.lin));
    for (auto& n : notes) m.add_note(n);
    return m;
}

ConstraintModel parse_lp(const std::string& text) {
    std::istringstream is(text);
    return parse_lp(is);
}

std::string stats_json(const ModelStats& s) {
    nlohmann::ordered_json j;
    j["variables"] = s.variables();
    j["binaries"] = s.binaries;
    j["integers"] = s.integers;
    j["continuous"] = s.continuous;
    j["constraints"] = s.constraints();
    j["linear"] = s.linear;
    j["quadratic"] = s.quadratic;
    j["general"] = s.general;
    auto& arr = j["blocks"] = nlohmann::ordered_json::array();
    for (const auto& b : s.blocks)
        arr.push_back({{"name", b.name},
                       {"variables", b.variables},
                       {"constraints", b.constraints()},
                       {"linear", b.linear},
                       {"quadratic", b.quadratic},
                       {"general", b.general}});
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Checking

double Assignment::at(const std::string& name) const {
    auto it = values.find(name);
    if (it == values.end()) throw ConfigError("assignment has no value for " + name);
    return it->second;
}

namespace {

double mul(double x, double y) { return (x == 0 || y == 0) ? 0 : x * y; }

bool is_bit(double v) { return v == 0 || v == 1; }

}  // namespace

CheckResult check_assignment(const ConstraintModel& m, const Assignment& a) {
    const auto& vs = m.variables();
    std::vector<double> x(vs.size());
    for (std::size_t i = 0; i < vs.size(); ++i) x[i] = a.at(vs[i].name);

    CheckResult res;
    auto bad = [&](const std::string& what) {
        res.satisfied = false;
        res.violated.push_back(what);
    };
    for (std::size_t i = 0; i < vs.size(); ++i) {
        const auto& v = vs[i];
        if (std::isnan(x[i])) {
            bad("bound:" + v.name);
            continue;
        }
        if (v.kind == VarKind::Binary && !is_bit(x[i])) bad("kind:" + v.name);
        if (v.kind == VarKind::Integer && x[i] != std::nearbyint(x[i])) bad("kind:" + v.name);
        if (x[i] < v.lo - kTol || x[i] > v.hi + kTol) bad("bound:" + v.name);
    }
    for (const auto& c : m.constraints()) {
        double lhs = 0;
        for (const auto& t : c.lin) lhs += mul(t.coeff, x[t.var]);
        for (const auto& q : c.quad) lhs += mul(q.coeff, mul(x[q.u], x[q.v]));
        if (!std::isfinite(lhs)) {
            res.log_of_zero = true;
            bad(c.name);
            continue;
        }
        const double tol = kTol * std::max(1.0, std::fabs(c.rhs));
        const bool ok = c.rel == Relation::Le ? lhs <= c.rhs + tol
                        : c.rel == Relation::Ge ? lhs >= c.rhs - tol
                                                : std::fabs(lhs - c.rhs) <= tol;
        if (!ok) bad(c.name);
    }
    for (const auto& g : m.generals()) {
        const double r = x[g.result], u = x[g.args[0]];
        bool ok = false;
        switch (g.kind) {
            case GenKind::Abs: ok = std::fabs(r - std::fabs(u)) <= 1e-12 * std::max(1.0, std::fabs(u)); break;
            case GenKind::Log2:
                if (u == 0) ok = std::isinf(r) && r < 0;
                else ok = u > 0 && std::isfinite(r) && std::fabs(r - std::log2(u)) <= kTol;
                break;
            case GenKind::And: {
                const double w = x[g.args[1]];
                ok = is_bit(r) && is_bit(u) && is_bit(w) && r == (u == 1 && w == 1 ? 1 : 0);
                break;
            }
        }
        if (!ok) bad(g.name);
    }
    double obj = 0;
    for (const auto& t : m.objective()) obj += mul(t.coeff, x[t.var]);
    if (!std::isfinite(obj)) res.log_of_zero = true;
    res.objective = res.log_of_zero ? (m.minimize() ? kInf : -kInf) : obj;
    if (res.log_of_zero) res.satisfied = false;
    return res;
}

// ---------------------------------------------------------------------------
// Induced assignments

namespace {

struct Filler {
    const CipherSpec& s;
    Assignment& out;
    void word(const std::string& base, int k, Word w) const {
        for (int i = 0; i < s.width(); ++i) out.set(Builder::name(base, k, i), static_cast<double>((w >> i) & 1));
    }
    void reals(const std::string& base, int k, const std::vector<double>& v) const {
        for (int i = 0; i < s.width(); ++i) out.set(Builder::name(base, k, i), v[i]);
    }
};

}  // namespace

Assignment induced_diff(const CipherSpec& s, const std::vector<Word>& alpha) {
    const int R = static_cast<int>(alpha.size()) - 2;
    if (R < 1) throw ConfigError("differential sequence needs at least three words");
    const int a = s.a(), b = s.b(), c = s.c();
    Assignment out;
    Filler f{s, out};
    for (int k = 0; k < R + 2; ++k) f.word("d_alpha", k, alpha[k] & s.mask());
    double total = 0;
    for (int r = 0; r < R; ++r) {
        const Word al = alpha[r + 1];
        const Word vari = s.rot(al, a) | s.rot(al, b);
        const Word dbl = s.rot(al, b) & ~s.rot(al, a) & s.rot(al, 2 * a - b) & s.mask();
        const Word beta = (alpha[r + 2] ^ alpha[r]) & s.mask();
        f.word("d_vari", r, vari);
        f.word("d_double", r, dbl);
        f.word("d_beta", r, beta);
        f.word("d_gamma", r, beta ^ s.rot(al, c));
        f.word("d_probits", r, vari ^ dbl);
        out.set("d_pro_" + std::to_string(r), popcount(vari ^ dbl));
        total += popcount(vari ^ dbl);
    }
    out.set("d_Pro", total);
    return out;
}

Assignment induced_lin(const CipherSpec& s, const std::vector<Word>& lam) {
    const int R = static_cast<int>(lam.size()) - 2;
    if (R < 1) throw ConfigError("mask sequence needs at least three words");
    const int n = s.width(), a = s.a(), b = s.b(), c = s.c(), d = a - b;
    Assignment out;
    Filler f{s, out};
    for (int k = 0; k < R + 2; ++k) f.word("l_lambda", k, lam[k] & s.mask());
    double total = 0;
    for (int r = 0; r < R; ++r) {
        const std::string rs = std::to_string(r);
        const Word L = lam[r + 1] & s.mask();
        const Word lin = (lam[r] ^ lam[r + 2] ^ s.rot(L, -c)) & s.mask();
        f.word("l_lin", r, lin);
        Word tmp = L, abits = 0;
        std::vector<int> count(n, 0);
        for (int j = 0; j < n; ++j) {
            if (j > 0) tmp &= s.rot(L, -j * d);
            f.word("l_tmp" + std::to_string(j), r, tmp);
            abits ^= tmp;
            for (int i = 0; i < n; ++i) count[i] += (tmp >> i) & 1;
        }
        f.word("l_abits", r, abits);
        for (int i = 0; i < n; ++i) out.set(Builder::name("l_N", r, i), (count[i] + ((abits >> i) & 1)) / 2);
        Word sb = s.rot(L, -a) & ~s.rot(L, -b) & ~s.rot(abits, -a) & s.mask();
        Word pb = s.rot(sb & lin, 2 * d);
        f.word("l_sbits0", r, sb);
        f.word("l_pbits0", r, pb);
        for (int j = 1; j < n; ++j) {
            sb = s.rot(sb, 2 * d) & s.rot(L, a - 2 * b);
            pb = s.rot((sb & lin) ^ pb, 2 * d);
            f.word("l_sbits" + std::to_string(j), r, sb);
            f.word("l_pbits" + std::to_string(j), r, pb);
        }
        out.set("l_cor_" + rs, popcount(abits));
        total += popcount(abits);
    }
    out.set("l_Corl", total);
    return out;
}

Assignment induced_middle(const CipherSpec& s, int R, int rd, WordPair delta, WordPair lambda) {
    if (R < 1) throw ConfigError("middle part needs at least one round");
    const int n = s.width(), a = s.a(), b = s.b(), c = s.c();
    auto at = [&](int i) { return ((i % n) + n) % n; };
    Assignment out;
    Filler f{s, out};
    f.word("d_alpha", rd + 1, delta.left);
    f.word("d_alpha", rd, delta.right);
    f.word("l_lambda", 0, lambda.left);
    f.word("l_lambda", 1, lambda.right);
    std::vector<std::vector<double>> x(R + 2, std::vector<double>(n));
    for (int i = 0; i < n; ++i) {
        x[1][i] = 1.0 - 2.0 * static_cast<double>((delta.left >> i) & 1);
        x[0][i] = 1.0 - 2.0 * static_cast<double>((delta.right >> i) & 1);
    }
    f.reals("m_x", 0, x[0]);
    f.reals("m_x", 1, x[1]);
    for (int r = 0; r < R; ++r) {
        std::vector<double> y(n), t(n);
        const auto& u = x[r + 1];
        for (int i = 0; i < n; ++i) {
            const double p = u[at(i - a)], q = u[at(i - b)];
            y[i] = (1 + p + q + p * q) / 4;
            t[i] = y[i] * x[r][i];
            x[r + 2][i] = t[i] * u[at(i - c)];
        }
        f.reals("m_y", r, y);
        f.reals("m_t", r, t);
        f.reals("m_x", r + 2, x[r + 2]);
    }
    std::vector<double> z0(n), z1(n), z2(n), z3(n);
    double cor = 0;
    for (int i = 0; i < n; ++i) {
        z0[i] = std::fabs(x[R + 1][i]);
        z1[i] = std::fabs(x[R][i]);
        z2[i] = std::log2(z0[i]);
        z3[i] = std::log2(z1[i]);
        if ((lambda.left >> i) & 1) cor += z2[i];
        if ((lambda.right >> i) & 1) cor += z3[i];
    }
    f.reals("m_z0", R + 1, z0);
    f.reals("m_z1", R, z1);
    f.reals("m_z2", R + 1, z2);
    f.reals("m_z3", R, z3);
    out.set("m_Corm", cor);
    return out;
}

Assignment induced_full(const DLTrail& t) {
    const auto& c = t.config;
    if (static_cast<int>(t.diff_path.size()) != c.d + 2 || static_cast<int>(t.lin_path.size()) != c.l + 2)
        throw ConfigError("trail lacks full differential and linear paths");
    Assignment out = induced_diff(t.spec, t.diff_path);
    for (auto& [k, v] : induced_lin(t.spec, t.lin_path).values) out.values[k] = v;
    const WordPair delta{t.diff_path[c.d + 1], t.diff_path[c.d]};
    const WordPair lambda{t.lin_path[0], t.lin_path[1]};
    for (auto& [k, v] : induced_middle(t.spec, c.m, c.d, delta, lambda).values) out.values[k] = v;
    out.set("e_Core", out.at("d_Pro") - out.at("m_Corm") + 2 * out.at("l_Corl"));
    return out;
}

}  // namespace simondl
