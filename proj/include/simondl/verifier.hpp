#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "simondl/cipher.hpp"

namespace simondl {

struct ExperimentPlan {
    CipherSpec spec = CipherSpec::simon(16);
    int rounds = 1;
    WordPair delta_in, lambda_out;
    std::uint64_t samples = std::uint64_t{1} << 22;  // per key
    int keys = 20;
    KeyMaterial::Mode key_mode = KeyMaterial::Mode::RealSchedule;
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> key_seed;  // keys drawn from seed unless set
    int threads = 1;
};

struct ExperimentResult {
    ExperimentPlan plan;
    std::vector<double> per_key;  // signed
    double mean_abs = 0;
    double log2_mean = 0;
    double std_error = 0;  // of mean_abs
};

// Counter-based generator: the same (seed, stream, counter) always gives the same word.
std::uint64_t counter_random(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

// Key k of a plan, drawn from the plan seed.
KeyMaterial experiment_key(const ExperimentPlan& plan, int k);

// Per key: (1/N) sum over random x of (-1)^<lambda_out, E(x) ^ E(x ^ delta_in)>.
ExperimentResult estimate(const ExperimentPlan& plan);
// The same statistic over the middle rounds alone, from difference delta to mask lambda.
ExperimentResult estimate_middle(const CipherSpec& spec, WordPair delta, WordPair lambda, int rounds,
                                 std::uint64_t samples, int keys, std::uint64_t seed = 0, int threads = 1);

void write_csv_header(std::ostream& os);
void write_csv_row(std::ostream& os, const ExperimentResult& r);

}  // namespace simondl
