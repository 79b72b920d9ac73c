#pragma once

// MILP/MIQCP models of the three parts of a DL trail.
//
// Variables are named part_symbol[_round]_bit, e.g. d_alpha_3_7 (bit 7 of alpha^3).
//   differential  d_alpha_k_i, d_vari_r_i, d_double_r_i, d_gamma_r_i, d_beta_r_i,
//                 d_probits_r_i, d_pro_r, d_Pro
//   middle        m_x_k_i, m_y_r_i, m_t_r_i, m_z0_i .. m_z3_i, m_Corm
//   linear        l_lambda_k_i, l_lin_r_i, l_tmp<j>_r_i, l_abits_r_i, l_N_r_i,
//                 l_sbits<j>_r_i, l_pbits<j>_r_i, l_cor_r, l_Corl
//   merged        e_Core = d_Pro - m_Corm + 2 l_Corl
// Constraints are named c<k> and general constraints g<k>, in build order.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "simondl/cipher.hpp"
#include "simondl/search.hpp"

namespace simondl {

enum class VarKind { Binary, Integer, Continuous };
enum class Relation { Le, Ge, Eq };
enum class GenKind { Abs, Log2, And };

struct Variable {
    std::string name;
    VarKind kind = VarKind::Continuous;
    double lo = 0, hi = 0;
    int block = 0;
};

struct LinTerm {
    int var;
    double coeff;
};

struct QuadTerm {
    int u, v;
    double coeff;
};

struct Constraint {
    std::string name;
    std::vector<LinTerm> lin;
    std::vector<QuadTerm> quad;
    Relation rel = Relation::Eq;
    double rhs = 0;
    int block = 0;
};

// result = ABS(args[0]) | LOG_2(args[0]) | AND(args[0], args[1])
struct GeneralConstraint {
    std::string name;
    GenKind kind = GenKind::Abs;
    int result = 0;
    std::vector<int> args;
    int block = 0;
};

struct BlockStats {
    std::string name;
    std::size_t variables = 0, linear = 0, quadratic = 0, general = 0;
    std::size_t constraints() const { return linear + quadratic + general; }
};

struct ModelStats {
    std::size_t binaries = 0, integers = 0, continuous = 0;
    std::size_t linear = 0, quadratic = 0, general = 0;
    std::vector<BlockStats> blocks;

    std::size_t variables() const { return binaries + integers + continuous; }
    std::size_t constraints() const { return linear + quadratic + general; }
    const BlockStats* block(std::string_view name) const;
    bool operator==(const ModelStats&) const;
};

class ConstraintModel {
public:
    ConstraintModel();

    // Everything added afterwards is tagged with this block.
    void begin_block(const std::string& name);

    int add_var(const std::string& name, VarKind kind, double lo, double hi);
    int add_binary(const std::string& name) { return add_var(name, VarKind::Binary, 0, 1); }
    std::optional<int> find(std::string_view name) const;
    int var(std::string_view name) const;  // throws ConfigError if undeclared

    // Repeated variables are merged; zero coefficients dropped.
    void add_constraint(std::vector<LinTerm> lin, Relation rel, double rhs, std::vector<QuadTerm> quad = {});
    void add_general(GenKind kind, int result, std::vector<int> args);
    void set_objective(bool minimize, std::vector<LinTerm> terms);
    void add_note(std::string note) { notes_.push_back(std::move(note)); }

    const std::vector<Variable>& variables() const { return vars_; }
    const std::vector<Constraint>& constraints() const { return cons_; }
    const std::vector<GeneralConstraint>& generals() const { return gens_; }
    const std::vector<std::string>& blocks() const { return blocks_; }
    const std::vector<LinTerm>& objective() const { return obj_; }
    bool minimize() const { return minimize_; }
    const std::vector<std::string>& notes() const { return notes_; }

    ModelStats stats() const;
    // FNV-1a over a canonical serialization; independent of variable declaration order.
    std::uint64_t hash() const;

private:
    friend ConstraintModel parse_lp(std::istream& is);

    std::vector<Variable> vars_;
    std::unordered_map<std::string, int> index_;
    std::vector<Constraint> cons_;
    std::vector<GeneralConstraint> gens_;
    std::vector<std::string> blocks_;
    std::vector<LinTerm> obj_;
    bool minimize_ = true;
    std::vector<std::string> notes_;
    int current_ = 0;
};

// Standalone models. The middle model declares the four handle words it reads
// (d_alpha_{rd+1}, d_alpha_{rd}, l_lambda_0, l_lambda_1) as free binaries.
ConstraintModel build_diff_model(const CipherSpec& spec, int rounds);
ConstraintModel build_middle_model(const CipherSpec& spec, int rounds, int diff_rounds = 1);
ConstraintModel build_lin_model(const CipherSpec& spec, int rounds);
ConstraintModel build_full_model(const CipherSpec& spec, RoundConfig cfg);

void emit_lp(std::ostream& os, const ConstraintModel& m);
std::string emit_lp(const ConstraintModel& m);
ConstraintModel parse_lp(std::istream& is);  // ParseError on malformed input
ConstraintModel parse_lp(const std::string& text);
std::string stats_json(const ModelStats& s);

struct Assignment {
    std::unordered_map<std::string, double> values;
    void set(const std::string& name, double v) { values[name] = v; }
    double at(const std::string& name) const;
};

struct CheckResult {
    bool satisfied = true;
    std::vector<std::string> violated;  // constraint names, "bound:<var>", "kind:<var>"
    double objective = 0;               // +inf when a log of zero leaks into a constraint
    bool log_of_zero = false;
};

// Tolerance 1e-6 on linear and quadratic rows; AND and ABS exact; 0 * inf = 0.
// Throws ConfigError when a model variable has no value.
CheckResult check_assignment(const ConstraintModel& m, const Assignment& a);

// Assignments forced by concrete trails. alpha = alpha^0..alpha^{R+1},
// lambda = lambda^0..lambda^{R+1}.
Assignment induced_diff(const CipherSpec& spec, const std::vector<Word>& alpha);
Assignment induced_lin(const CipherSpec& spec, const std::vector<Word>& lambda);
Assignment induced_middle(const CipherSpec& spec, int rounds, int diff_rounds, WordPair delta, WordPair lambda);
// Needs diff_path and lin_path.
Assignment induced_full(const DLTrail& t);

}  // namespace simondl
