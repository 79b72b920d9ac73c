#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "simondl/linear.hpp"
#include "simondl/middle.hpp"
#include "simondl/model.hpp"
#include "simondl/search.hpp"
#include "simondl/trail_io.hpp"
#include "simondl/verifier.hpp"

namespace simondl::cli {

namespace {

// Bad flag values: reported like CLI11's own usage errors.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fixed2(double x) {
    if (std::isinf(x)) return x < 0 ? "-inf" : "inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return std::string(buf) == "-0.00" ? "0.00" : buf;
}

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6e", x);
    return buf;
}

template <class F>
auto flag_value(const std::string& flag, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const std::exception& e) {
        throw UsageError(flag + ": " + e.what());
    }
}

CipherSpec cipher_flag(const std::string& s) {
    return flag_value("--cipher", [&] { return CipherSpec::from_name(s); });
}
RoundConfig config_flag(const std::string& s) {
    return flag_value("--config", [&] { return RoundConfig::parse(s); });
}
WordPair pair_flag(const std::string& flag, const std::string& s, const CipherSpec& spec) {
    return flag_value(flag, [&] { return parse_pair(s, spec.width()); });
}
Multiplicity mode_flag(const std::string& s) {
    if (s == "distinct") return Multiplicity::DistinctPerWeight;
    if (s == "per-trail") return Multiplicity::PerTrail;
    throw UsageError("--mode: expected distinct or per-trail, got " + s);
}

void row(std::ostream& out, const std::string& key, const std::string& value) {
    out << key << std::string(key.size() < 14 ? 14 - key.size() : 1, ' ') << value << '\n';
}

void print_trail(std::ostream& out, const DLTrail& t) {
    row(out, "cipher", t.spec.name());
    row(out, "config", t.config.str() + " (" + std::to_string(t.config.total()) + " rounds)");
    row(out, "delta_in", to_string(t.delta_in));
    row(out, "delta_mid", to_string(t.delta));
    row(out, "lambda_mid", to_string(t.lambda));
    row(out, "lambda_out", to_string(t.lambda_out));
    row(out, "log2 p", std::to_string(t.log2_p));
    row(out, "log2 |r|", fixed2(std::log2(std::fabs(t.r_mid))) + (t.r_mid < 0 ? " (negative)" : ""));
    row(out, "log2 q^2", std::to_string(2 * t.log2_q));
    row(out, "log2 |cor|", fixed2(t.log2_abs()));
}

template <class F>
void write_file(const std::string& path, F&& body) {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write " + path);
    body(f);
    if (!f) throw ConfigError("write failed: " + path);
}

// One-character view of a continuous difference entry, most significant bit first:
// 0 and 1 are fixed differences, * is a balanced bit, ? anything in between.
std::string entries(const std::vector<double>& v) {
    std::string s;
    for (auto it = v.rbegin(); it != v.rend(); ++it)
        s += *it == 1 ? '0' : *it == -1 ? '1' : *it == 0 ? '*' : '?';
    return s;
}

}  // namespace

int default_threads() {
    if (const char* e = std::getenv("SIMONDL_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(e, &end, 10);
        if (end != e && *end == '\0' && v > 0) return static_cast<int>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Differential-linear trail search and verification for Simon and Simeck", "simondl"};
    app.require_subcommand(1);
    app.fallthrough();
    int threads = default_threads();
    app.add_option("--threads", threads, "Worker threads (default: SIMONDL_THREADS or all cores)")
        ->check(CLI::PositiveNumber);

    // search
    auto* search = app.add_subcommand("search", "Find a high-correlation DL trail for a round split");
    std::string s_cipher, s_config, s_strategy = "dfs", s_out;
    int lin_cap = 24, diff_extra = 6;
    search->add_option("--cipher", s_cipher, "simon32 .. simon128, simeck32/48/64")->required();
    search->add_option("--config", s_config, "R_d,R_m,R_l")->required();
    search->add_option("--strategy", s_strategy, "dfs (differential first) or lfs (linear first)")
        ->check(CLI::IsMember({"dfs", "lfs"}))
        ->capture_default_str();
    search->add_option("--lin-cap", lin_cap, "dfs: largest linear weight tried")->capture_default_str();
    search->add_option("--diff-extra", diff_extra, "lfs: differential weights tried above the optimum")
        ->capture_default_str();
    search->add_option("--out", s_out, "Write the trail document here");

    // transform
    auto* tr = app.add_subcommand("transform", "Sum all trail pairs within weight bounds around a seed trail");
    std::string t_trail, t_out, t_hist, t_mode = "distinct";
    int pbar = 0, qbar = 0;
    tr->add_option("--trail", t_trail, "Seed trail document")->required()->check(CLI::ExistingFile);
    tr->add_option("--pbar", pbar, "Differential weight bound")->required();
    tr->add_option("--qbar", qbar, "Linear weight bound")->required();
    tr->add_option("--mode", t_mode, "distinct (once per difference and weight) or per-trail")
        ->capture_default_str();
    tr->add_option("--out", t_out, "Write the trail document with its distinguisher block here");
    tr->add_option("--histogram", t_hist, "Write the weight histogram as CSV here");

    // verify
    auto* ver = app.add_subcommand("verify", "Estimate a DL correlation experimentally");
    std::string v_trail, v_cipher = "simon32", v_delta, v_lambda, v_out, v_keymode = "real";
    int v_rounds = -1, v_keys = 20;
    double v_log2_samples = 22;
    std::uint64_t v_seed = 0;
    auto* v_trail_opt = ver->add_option("--trail", v_trail, "Trail document (all rounds)")->check(CLI::ExistingFile);
    auto* v_cipher_opt = ver->add_option("--cipher", v_cipher, "Cipher, when no trail is given")->capture_default_str();
    auto* v_delta_opt = ver->add_option("--delta", v_delta, "Input difference (l,r)");
    auto* v_lambda_opt = ver->add_option("--lambda", v_lambda, "Output mask (l,r)");
    auto* v_rounds_opt = ver->add_option("--rounds", v_rounds, "Rounds")->check(CLI::NonNegativeNumber);
    v_trail_opt->excludes(v_cipher_opt)->excludes(v_delta_opt)->excludes(v_lambda_opt)->excludes(v_rounds_opt);
    ver->add_option("--samples", v_log2_samples, "log2 of the pairs per key")->capture_default_str()
        ->check(CLI::Range(0.0, 40.0));
    ver->add_option("--keys", v_keys, "Number of keys")->capture_default_str()->check(CLI::PositiveNumber);
    ver->add_option("--seed", v_seed, "Seed for keys and plaintexts")->capture_default_str();
    ver->add_option("--key-mode", v_keymode, "real (key schedule) or independent (random round keys)")
        ->check(CLI::IsMember({"real", "independent"}))
        ->capture_default_str();
    ver->add_option("--out", v_out, "Write a CSV row here");

    // emit-model
    auto* em = app.add_subcommand("emit-model", "Write the MILP/MIQCP model in LP format");
    std::string e_cipher, e_config, e_part = "full", e_out, e_stats;
    em->add_option("--cipher", e_cipher, "Cipher")->required();
    em->add_option("--config", e_config, "R_d,R_m,R_l")->required();
    em->add_option("--part", e_part, "diff, middle, lin or full")
        ->check(CLI::IsMember({"diff", "middle", "lin", "full"}))
        ->capture_default_str();
    em->add_option("--out", e_out, "LP file (default: stdout)");
    em->add_option("--stats", e_stats, "Write variable and constraint counts as JSON here");

    // enumerate-diff / enumerate-lin
    struct Enum {
        std::string cipher, pair, out, mode = "per-trail";
        int rounds = 1, bound = 0;
        long limit = 50;
    } ed, el;
    auto add_enum = [&](const char* name, const char* what, const char* pair_flag_name, const char* pair_help,
                        Enum& e) {
        auto* c = app.add_subcommand(name, what);
        c->add_option("--cipher", e.cipher, "Cipher")->required();
        c->add_option(pair_flag_name, e.pair, pair_help)->required();
        c->add_option("--rounds", e.rounds, "Rounds")->required()->check(CLI::PositiveNumber);
        c->add_option("--bound", e.bound, "Largest trail weight")->required()->check(CLI::NonNegativeNumber);
        c->add_option("--mode", e.mode, "per-trail or distinct")->capture_default_str();
        c->add_option("--limit", e.limit, "Rows printed (0: all)")->capture_default_str();
        c->add_option("--out", e.out, "Write every entry as CSV here");
        return c;
    };
    auto* en_d = add_enum("enumerate-diff", "Output differences of all trails from an input difference", "--input",
                          "Input difference (l,r)", ed);
    auto* en_l = add_enum("enumerate-lin", "Input masks of all linear trails into an output mask", "--output",
                          "Output mask (l,r)", el);

    // middle
    auto* mid = app.add_subcommand("middle", "Propagate a difference through the middle rounds");
    std::string m_cipher = "simon32", m_delta, m_lambda;
    int m_rounds = 0;
    bool m_trace = false;
    mid->add_option("--cipher", m_cipher, "Cipher")->capture_default_str();
    mid->add_option("--delta", m_delta, "Input difference (l,r)")->required();
    mid->add_option("--rounds", m_rounds, "Rounds")->required()->check(CLI::NonNegativeNumber);
    mid->add_option("--lambda", m_lambda, "Output mask (l,r); prints the correlation");
    mid->add_flag("--trace", m_trace, "Print the state after every round");

    // CLI11 consumes the vector from the back.
    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        if (!app.get_subcommands().empty()) err << "run with " << app.get_subcommands()[0]->get_name() << " --help";
        else err << "run with --help";
        err << " for usage\n";
        return 2;
    }

    try {
        if (search->parsed()) {
            const auto spec = cipher_flag(s_cipher);
            const auto cfg = config_flag(s_config);
            SearchStats st;
            const DLTrail t =
                s_strategy == "dfs" ? dfs_search(spec, cfg, lin_cap, &st) : lfs_search(spec, cfg, diff_extra, &st);
            row(out, "strategy", s_strategy);
            print_trail(out, t);
            row(out, "examined", std::to_string(st.first_stage) + " first-part trails, " +
                                     std::to_string(st.second_stage) + " second-part candidates");
            if (!s_out.empty()) save_trail(s_out, {t, std::nullopt});
        } else if (tr->parsed()) {
            const auto mode = mode_flag(t_mode);
            TrailDocument doc = load_trail(t_trail);
            std::string why;
            if (!reverify(doc.trail, &why)) throw ConfigError("seed trail does not reverify: " + why);
            const DLDistinguisher d = transform(doc.trail, pbar, qbar, {mode, threads});
            print_trail(out, doc.trail);
            row(out, "bounds", "pbar " + std::to_string(pbar) + ", qbar " + std::to_string(qbar));
            row(out, "entries", std::to_string(d.diff_entries) + " differential, " + std::to_string(d.lin_entries) +
                                    " linear");
            out << "\n  w_d  w_l     trails  log2|sum|  sign\n";
            for (const auto& c : d.cells) {
                char buf[96];
                std::snprintf(buf, sizeof buf, "%5d%5d%11zu%11s  %s\n", c.diff_weight, c.lin_weight, c.trail_count,
                              fixed2(std::log2(std::fabs(c.contribution))).c_str(), c.contribution < 0 ? "-" : "+");
                out << buf;
            }
            out << '\n';
            row(out, "cor_sum", sci(d.cor_sum));
            row(out, "log2 |sum|", fixed2(d.log2_abs()));
            doc.distinguisher = d;
            if (!t_out.empty()) save_trail(t_out, doc);
            if (!t_hist.empty()) write_file(t_hist, [&](std::ostream& f) { write_histogram_csv(f, d); });
        } else if (ver->parsed()) {
            ExperimentPlan p;
            std::optional<double> predicted;
            if (!v_trail.empty()) {
                const auto doc = load_trail(v_trail);
                p.spec = doc.trail.spec;
                p.rounds = doc.trail.config.total();
                p.delta_in = doc.trail.delta_in;
                p.lambda_out = doc.trail.lambda_out;
                predicted = doc.distinguisher ? doc.distinguisher->log2_abs() : doc.trail.log2_abs();
            } else {
                if (v_delta.empty() || v_lambda.empty() || v_rounds < 0)
                    throw UsageError("verify: give --trail, or --delta, --lambda and --rounds");
                p.spec = cipher_flag(v_cipher);
                p.delta_in = pair_flag("--delta", v_delta, p.spec);
                p.lambda_out = pair_flag("--lambda", v_lambda, p.spec);
                p.rounds = v_rounds;
            }
            p.samples = static_cast<std::uint64_t>(std::llround(std::exp2(v_log2_samples)));
            p.keys = v_keys;
            p.seed = v_seed;
            p.threads = threads;
            p.key_mode = v_keymode == "real" ? KeyMaterial::Mode::RealSchedule
                                             : KeyMaterial::Mode::IndependentRoundKeys;
            const auto r = estimate(p);
            row(out, "cipher", p.spec.name());
            row(out, "rounds", std::to_string(p.rounds));
            row(out, "delta_in", to_string(p.delta_in));
            row(out, "lambda_out", to_string(p.lambda_out));
            row(out, "pairs", "2^" + fixed2(std::log2(static_cast<double>(p.samples))) + " per key, " +
                                  std::to_string(p.keys) + " keys, seed " + std::to_string(p.seed));
            if (predicted) row(out, "predicted", "2^" + fixed2(*predicted));
            row(out, "mean |cor|", sci(r.mean_abs) + " (2^" + fixed2(r.log2_mean) + ")");
            row(out, "std error", sci(r.std_error));
            if (!v_out.empty())
                write_file(v_out, [&](std::ostream& f) {
                    write_csv_header(f);
                    write_csv_row(f, r);
                });
        } else if (em->parsed()) {
            const auto spec = cipher_flag(e_cipher);
            const auto cfg = config_flag(e_config);
            const ConstraintModel m = e_part == "diff"     ? build_diff_model(spec, cfg.d)
                                      : e_part == "middle" ? build_middle_model(spec, cfg.m, cfg.d)
                                      : e_part == "lin"    ? build_lin_model(spec, cfg.l)
                                                           : build_full_model(spec, cfg);
            if (e_out.empty()) {
                emit_lp(out, m);
            } else {
                write_file(e_out, [&](std::ostream& f) { emit_lp(f, m); });
                const auto s = m.stats();
                row(out, "model", e_part + " " + spec.name() + " " + cfg.str());
                row(out, "variables", std::to_string(s.variables()));
                row(out, "constraints", std::to_string(s.constraints()));
            }
            if (!e_stats.empty()) write_file(e_stats, [&](std::ostream& f) { f << stats_json(m.stats()) << '\n'; });
        } else if (en_d->parsed() || en_l->parsed()) {
            const bool diff = en_d->parsed();
            const Enum& e = diff ? ed : el;
            const auto spec = cipher_flag(e.cipher);
            const auto pair = pair_flag(diff ? "--input" : "--output", e.pair, spec);
            const auto mode = mode_flag(e.mode);
            const auto v = diff ? enumerate_diff_trails_from(spec, pair, e.rounds, e.bound, mode)
                                : enumerate_lin_trails_to(spec, pair, e.rounds, e.bound, mode);
            if (v.empty()) throw NotFound("no trail within weight " + std::to_string(e.bound));
            row(out, "entries", std::to_string(v.size()));
            out << "weight  " << (diff ? "output difference" : "input mask") << '\n';
            for (std::size_t i = 0; i < v.size() && (e.limit <= 0 || i < static_cast<std::size_t>(e.limit)); ++i)
                out << std::string(6 - std::min<std::size_t>(5, std::to_string(v[i].weight).size()), ' ')
                    << v[i].weight << "  " << to_string(v[i].pair) << '\n';
            if (e.limit > 0 && v.size() > static_cast<std::size_t>(e.limit))
                out << "... " << v.size() - e.limit << " more\n";
            if (!e.out.empty())
                write_file(e.out, [&](std::ostream& f) {
                    f << "weight,left,right\n";
                    for (const auto& x : v) f << x.weight << ',' << to_hex(x.pair.left) << ',' << to_hex(x.pair.right) << '\n';
                });
        } else if (mid->parsed()) {
            const auto spec = cipher_flag(m_cipher);
            const auto delta = pair_flag("--delta", m_delta, spec);
            const auto trace = propagate_trace(spec, init_from_difference(spec, delta), m_rounds);
            out << "round  left" << std::string(spec.width() - 3, ' ') << "right\n";
            for (std::size_t r = m_trace ? 0 : trace.size() - 1; r < trace.size(); ++r) {
                char buf[16];
                std::snprintf(buf, sizeof buf, "%5zu  ", r);
                out << buf << entries(trace[r].left) << ' ' << entries(trace[r].right) << '\n';
            }
            if (!m_lambda.empty()) {
                const auto lambda = pair_flag("--lambda", m_lambda, spec);
                const double c = middle_correlation(trace.back(), lambda);
                row(out, "lambda", to_string(lambda));
                row(out, "cor", sci(c));
                row(out, "log2 |cor|", fixed2(std::log2(std::fabs(c))));
            }
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace simondl::cli
