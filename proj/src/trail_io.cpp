#include "simondl/trail_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>
#include <vector>

namespace simondl {

namespace {

std::string decimal(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string words(const std::vector<Word>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + to_hex(v[i]);
    return s;
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        auto end = s.find(sep, pos);
        out.emplace_back(s.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos));
        if (end == std::string_view::npos) break;
        pos = end + 1;
    }
    return out;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    return std::string(s.substr(b, s.find_last_not_of(" \t\r") - b + 1));
}

template <class T>
T integer(const std::string& s, const std::string& key) {
    T v{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw ParseError(key + ": not an integer: " + s);
    return v;
}

double real(const std::string& s, const std::string& key) {
    if (s.empty()) throw ParseError(key + ": empty value");
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) throw ParseError(key + ": not a number: " + s);
    return v;
}

const char* mode_name(Multiplicity m) {
    return m == Multiplicity::PerTrail ? "per_trail" : "distinct_per_weight";
}

struct Lines {
    std::vector<std::pair<std::string, std::string>> kv;
    std::vector<int> line_no;
    std::size_t at = 0;

    bool peek(std::string_view key) const { return at < kv.size() && kv[at].first == key; }

    std::string take(const std::string& key) {
        if (at >= kv.size()) throw ParseError("missing key " + key);
        if (kv[at].first != key)
            throw ParseError("line " + std::to_string(line_no[at]) + ": expected " + key + ", found " + kv[at].first);
        return kv[at++].second;
    }
};

}  // namespace

void write_trail(std::ostream& os, const TrailDocument& doc) {
    const DLTrail& t = doc.trail;
    const CipherSpec& s = t.spec;
    os << "format_version = " << kTrailFormatVersion << '\n'
       << "cipher.name = " << s.name() << '\n'
       << "cipher.branch_width = " << s.width() << '\n'
       << "cipher.offsets = " << s.a() << ',' << s.b() << ',' << s.c() << '\n'
       << "config = " << t.config.str() << '\n'
       << "delta_in = " << to_string(t.delta_in) << '\n'
       << "delta_mid = " << to_string(t.delta) << '\n'
       << "lambda_mid = " << to_string(t.lambda) << '\n'
       << "lambda_out = " << to_string(t.lambda_out) << '\n'
       << "log2_p = " << t.log2_p << '\n'
       << "log2_q = " << t.log2_q << '\n'
       << "r_mid = " << decimal(t.r_mid) << '\n'
       << "cor_total = " << decimal(t.cor_total) << '\n';
    if (!t.diff_path.empty()) os << "diff_path = " << words(t.diff_path) << '\n';
    if (!t.lin_path.empty()) os << "lin_path = " << words(t.lin_path) << '\n';
    if (const auto& d = doc.distinguisher) {
        std::size_t total = 0;
        for (const auto& c : d->cells) total += c.trail_count;
        os << "distinguisher.p_bar = " << d->pbar << '\n'
           << "distinguisher.q_bar = " << d->qbar << '\n'
           << "distinguisher.mode = " << mode_name(d->mode) << '\n'
           << "distinguisher.cor_sum = " << decimal(d->cor_sum) << '\n'
           << "distinguisher.diff_entries = " << d->diff_entries << '\n'
           << "distinguisher.lin_entries = " << d->lin_entries << '\n'
           << "distinguisher.trail_counts = " << total << '\n';
        // diff weight, lin weight, trail pairs, summed contribution
        for (const auto& c : d->cells)
            os << "distinguisher.cell = " << c.diff_weight << ',' << c.lin_weight << ',' << c.trail_count << ','
               << decimal(c.contribution) << '\n';
    }
}

std::string write_trail(const TrailDocument& doc) {
    std::ostringstream os;
    write_trail(os, doc);
    return os.str();
}

TrailDocument read_trail(std::istream& is) {
    Lines in;
    std::string line;
    for (int no = 1; std::getline(is, line); ++no) {
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ParseError("line " + std::to_string(no) + ": expected key = value");
        in.kv.emplace_back(trim(std::string_view(t).substr(0, eq)), trim(std::string_view(t).substr(eq + 1)));
        in.line_no.push_back(no);
    }

    const int version = integer<int>(in.take("format_version"), "format_version");
    if (version != kTrailFormatVersion) throw ParseError("unsupported format_version " + std::to_string(version));

    TrailDocument doc;
    DLTrail& t = doc.trail;
    t.spec = CipherSpec::from_name(in.take("cipher.name"));
    const int n = integer<int>(in.take("cipher.branch_width"), "cipher.branch_width");
    if (n != t.spec.width()) throw ConfigError("cipher.branch_width does not match cipher.name");
    const auto off = split(in.take("cipher.offsets"), ',');
    if (off.size() != 3) throw ParseError("cipher.offsets needs three values");
    if (integer<int>(off[0], "cipher.offsets") != t.spec.a() || integer<int>(off[1], "cipher.offsets") != t.spec.b() ||
        integer<int>(off[2], "cipher.offsets") != t.spec.c())
        throw ConfigError("cipher.offsets do not match cipher.name");
    t.config = RoundConfig::parse(in.take("config"));
    t.delta_in = parse_pair(in.take("delta_in"), n);
    t.delta = parse_pair(in.take("delta_mid"), n);
    t.lambda = parse_pair(in.take("lambda_mid"), n);
    t.lambda_out = parse_pair(in.take("lambda_out"), n);
    t.log2_p = integer<int>(in.take("log2_p"), "log2_p");
    t.log2_q = integer<int>(in.take("log2_q"), "log2_q");
    t.r_mid = real(in.take("r_mid"), "r_mid");
    t.cor_total = real(in.take("cor_total"), "cor_total");
    auto path = [&](const std::string& key) {
        std::vector<Word> v;
        for (const auto& w : split(in.take(key), ',')) v.push_back(parse_hex(trim(w), n));
        return v;
    };
    if (in.peek("diff_path")) t.diff_path = path("diff_path");
    if (in.peek("lin_path")) t.lin_path = path("lin_path");

    if (in.peek("distinguisher.p_bar")) {
        DLDistinguisher d;
        d.spec = t.spec;
        d.config = t.config;
        d.delta_in = t.delta_in;
        d.lambda_out = t.lambda_out;
        d.pbar = integer<int>(in.take("distinguisher.p_bar"), "distinguisher.p_bar");
        d.qbar = integer<int>(in.take("distinguisher.q_bar"), "distinguisher.q_bar");
        const std::string mode = in.take("distinguisher.mode");
        if (mode == "per_trail")
            d.mode = Multiplicity::PerTrail;
        else if (mode == "distinct_per_weight")
            d.mode = Multiplicity::DistinctPerWeight;
        else
            throw ParseError("distinguisher.mode: unknown mode " + mode);
        d.cor_sum = real(in.take("distinguisher.cor_sum"), "distinguisher.cor_sum");
        d.diff_entries = integer<std::size_t>(in.take("distinguisher.diff_entries"), "distinguisher.diff_entries");
        d.lin_entries = integer<std::size_t>(in.take("distinguisher.lin_entries"), "distinguisher.lin_entries");
        const auto total = integer<std::size_t>(in.take("distinguisher.trail_counts"), "distinguisher.trail_counts");
        std::size_t seen = 0;
        while (in.peek("distinguisher.cell")) {
            const auto f = split(in.take("distinguisher.cell"), ',');
            if (f.size() != 4) throw ParseError("distinguisher.cell needs four values");
            Cell c{integer<int>(f[0], "distinguisher.cell"), integer<int>(f[1], "distinguisher.cell"),
                   integer<std::size_t>(f[2], "distinguisher.cell"), real(f[3], "distinguisher.cell")};
            seen += c.trail_count;
            d.cells.push_back(c);
        }
        if (seen != total) throw ParseError("distinguisher.trail_counts does not match the cells");
        doc.distinguisher = std::move(d);
    }
    if (in.at != in.kv.size())
        throw ParseError("line " + std::to_string(in.line_no[in.at]) + ": unexpected key " + in.kv[in.at].first);
    return doc;
}

TrailDocument read_trail(const std::string& text) {
    std::istringstream is(text);
    return read_trail(is);
}

TrailDocument load_trail(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open " + path);
    return read_trail(f);
}

void save_trail(const std::string& path, const TrailDocument& doc) {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write " + path);
    write_trail(f, doc);
    if (!f) throw ConfigError("write failed: " + path);
}

bool reverify(const TrailDocument& doc, bool check_distinguisher, std::string* why) {
    if (!reverify(doc.trail, why)) return false;
    if (!check_distinguisher || !doc.distinguisher) return true;
    const auto& d = *doc.distinguisher;
    const DLDistinguisher e = transform(doc.trail, d.pbar, d.qbar, {d.mode, 1});
    auto fail = [&](const std::string& m) {
        if (why) *why = m;
        return false;
    };
    auto close = [](double x, double y) { return std::fabs(x - y) <= 1e-12 * std::max(std::fabs(x), std::fabs(y)); };
    if (!close(e.cor_sum, d.cor_sum)) return fail("cor_sum differs");
    if (e.diff_entries != d.diff_entries || e.lin_entries != d.lin_entries) return fail("entry counts differ");
    if (e.cells.size() != d.cells.size()) return fail("cells differ");
    for (std::size_t i = 0; i < e.cells.size(); ++i) {
        const auto &x = e.cells[i], &y = d.cells[i];
        if (x.diff_weight != y.diff_weight || x.lin_weight != y.lin_weight || x.trail_count != y.trail_count ||
            !close(x.contribution, y.contribution))
            return fail("cell " + std::to_string(i) + " differs");
    }
    return true;
}

}  // namespace simondl
