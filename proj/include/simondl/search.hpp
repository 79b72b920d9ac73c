#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "simondl/cipher.hpp"
#include "simondl/diff.hpp"
#include "simondl/middle.hpp"

namespace simondl {

struct RoundConfig {
    int d = 1, m = 1, l = 1;

    int total() const { return d + m + l; }
    static RoundConfig parse(std::string_view s);  // "5,5,3"
    std::string str() const;
    auto operator<=>(const RoundConfig&) const = default;
};

// Signed, so that the middle sign survives: 2^log2_p * r_mid * 2^(2 log2_q).
double compose(int log2_p, double r_mid, int log2_q);

struct DLTrail {
    CipherSpec spec = CipherSpec::simon(16);
    RoundConfig config;
    WordPair delta_in, delta, lambda, lambda_out;
    int log2_p = 0;  // -Pro
    double r_mid = 1.0;
    int log2_q = 0;  // -Cor_l
    double cor_total = 1.0;
    // Full sequences when known (alpha^0..alpha^{R_d+1}, lambda^0..lambda^{R_l+1}).
    std::vector<Word> diff_path, lin_path;

    double log2_abs() const;
};

// Recomputes r_mid and cor_total from the anchors and checks that trails of the
// stated weights exist between them (or that the stored paths are valid).
bool reverify(const DLTrail& t, std::string* why = nullptr);

// Fills r_mid and cor_total from the other fields.
void evaluate(DLTrail& t);

struct SearchStats {
    std::size_t first_stage = 0;   // optimal trails of the first part examined
    std::size_t second_stage = 0;  // candidates evaluated in the second part
};

// Differential-first: every optimal differential (up to rotation, all output
// differences), then the linear part minimizing 2*weight - log2|Cor_m|.
DLTrail dfs_search(const CipherSpec& spec, RoundConfig cfg, int lin_cap, SearchStats* stats = nullptr);
// Linear-first: every optimal linear trail (up to rotation, all input masks),
// then differential trails of weight <= best + diff_extra.
DLTrail lfs_search(const CipherSpec& spec, RoundConfig cfg, int diff_extra = 6, SearchStats* stats = nullptr);

struct Cell {
    int diff_weight = 0, lin_weight = 0;
    std::size_t trail_count = 0;
    double contribution = 0;
};

struct DLDistinguisher {
    CipherSpec spec = CipherSpec::simon(16);
    RoundConfig config;
    WordPair delta_in, lambda_out;
    int pbar = 0, qbar = 0;  // weight bounds: p >= 2^-pbar, q >= 2^-qbar
    Multiplicity mode = Multiplicity::DistinctPerWeight;
    double cor_sum = 0;
    std::size_t diff_entries = 0, lin_entries = 0;
    std::vector<Cell> cells;  // nonempty cells, by (diff_weight, lin_weight)

    double log2_abs() const;
};

struct TransformOptions {
    Multiplicity mode = Multiplicity::DistinctPerWeight;
    int threads = 1;
};

// Sum of p * r * q^2 over all differential trails from delta_in with weight <= pbar
// and linear trails into lambda_out with weight <= qbar.
DLDistinguisher transform(const DLTrail& seed, int pbar, int qbar, const TransformOptions& opt = {});

struct SampleBudget {
    double count = 0;  // ceil(eps / cor^2), exact while below 2^53
    double log2 = 0;
    bool theoretical_only = false;  // more than the 2n-bit codebook
};
SampleBudget samples_needed(double cor, double eps, int block_bits);

void write_histogram_csv(std::ostream& os, const DLDistinguisher& d);

}  // namespace simondl
