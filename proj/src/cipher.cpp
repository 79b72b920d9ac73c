#include "simondl/cipher.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <numeric>

namespace simondl {

namespace {

// Simon constant sequences z0..z4, element i is z_j[i].
constexpr std::array<std::array<std::uint8_t, 62>, 5> kZ = {{
    {1,1,1,1,1,0,1,0,0,0,1,0,0,1,0,1,0,1,1,0,0,0,0,1,1,1,0,0,1,1,0,1,1,1,1,1,0,1,0,0,0,1,0,0,1,0,1,0,1,1,0,0,0,0,1,1,1,0,0,1,1,0},
    {1,0,0,0,1,1,1,0,1,1,1,1,1,0,0,1,0,0,1,1,0,0,0,0,1,0,1,1,0,1,0,1,0,0,0,1,1,1,0,1,1,1,1,1,0,0,1,0,0,1,1,0,0,0,0,1,0,1,1,0,1,0},
    {1,0,1,0,1,1,1,1,0,1,1,1,0,0,0,0,0,0,1,1,0,1,0,0,1,0,0,1,1,0,0,0,1,0,1,0,0,0,0,1,0,0,0,1,1,1,1,1,1,0,0,1,0,1,1,0,1,1,0,0,1,1},
    {1,1,0,1,1,0,1,1,1,0,1,0,1,1,0,0,0,1,1,0,0,1,0,1,1,1,1,0,0,0,0,0,0,1,0,0,1,0,0,0,1,0,1,0,0,1,1,1,0,0,1,1,0,1,0,0,0,0,1,1,1,1},
    {1,1,0,1,0,0,0,1,1,1,1,0,0,1,1,0,1,0,1,1,0,1,1,0,0,0,1,0,0,0,0,0,0,1,0,1,1,1,0,0,0,0,1,1,0,0,1,0,1,0,0,1,0,0,1,1,1,0,1,1,1,1},
}};

struct SimonParams {
    int n, m, rounds, z;
};

constexpr std::array<SimonParams, 10> kSimon = {{
    {16, 4, 32, 0}, {24, 3, 36, 0}, {24, 4, 36, 1}, {32, 3, 42, 2}, {32, 4, 44, 3},
    {48, 2, 52, 2}, {48, 3, 54, 3}, {64, 2, 68, 2}, {64, 3, 69, 3}, {64, 4, 72, 4},
}};

const SimonParams* find_simon(int n, int m) {
    const SimonParams* best = nullptr;
    for (const auto& p : kSimon) {
        if (p.n != n) continue;
        if (m == 0 ? (!best || p.m > best->m) : p.m == m) best = &p;
    }
    return best;
}

// Simeck round constants: LFSR output bits, LSB first.
constexpr std::uint64_t kSimeckSeq32 = 0x9A42BB1FULL;  // X^5 + X^2 + 1
constexpr std::uint64_t kSimeckSeq64 = 0x938BCA3083FULL;  // X^6 + X + 1

int simeck_rounds(int n) {
    switch (n) {
        case 16: return 32;
        case 24: return 36;
        case 32: return 44;
        default: return 0;
    }
}

}  // namespace

CipherSpec::CipherSpec(int n, int a, int b, int c, Variant v, int m, int rounds)
    : n_(n), a_(a), b_(b), c_(c), variant_(v), m_(m), rounds_(rounds),
      mask_(n == 64 ? ~Word{0} : ((Word{1} << n) - 1)) {
    if (n < 4 || n > 64 || n % 2 != 0) throw ConfigError("branch width must be even and in [4,64]");
    if (a <= b) throw ConfigError("rotation offsets need a > b");
    if (std::gcd(n, a - b) != 1) throw ConfigError("gcd(n, a-b) must be 1");
}

CipherSpec CipherSpec::simon(int n, int key_words) {
    const SimonParams* p = find_simon(n, key_words);
    if (!p) throw ConfigError("no Simon variant with block " + std::to_string(2 * n) +
                              " and " + std::to_string(key_words) + " key words");
    return CipherSpec(n, 8, 1, 2, Variant::Simon, p->m, p->rounds);
}

CipherSpec CipherSpec::simeck(int n) {
    int r = simeck_rounds(n);
    if (r == 0) throw ConfigError("no Simeck variant with block " + std::to_string(2 * n));
    return CipherSpec(n, 5, 0, 1, Variant::Simeck, 4, r);
}

CipherSpec CipherSpec::from_name(std::string_view name) {
    std::string s;
    for (char ch : name) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    auto parse_int = [&](std::string_view t) {
        int v = 0;
        auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc() || ptr != t.data() + t.size()) throw ConfigError("bad cipher name: " + std::string(name));
        return v;
    };
    std::string_view sv = s;
    bool is_simeck = sv.starts_with("simeck");
    if (!is_simeck && !sv.starts_with("simon")) throw ConfigError("unknown cipher: " + std::string(name));
    sv.remove_prefix(is_simeck ? 6 : 5);
    int key_bits = 0;
    if (auto slash = sv.find('/'); slash != std::string_view::npos) {
        key_bits = parse_int(sv.substr(slash + 1));
        sv = sv.substr(0, slash);
    }
    int block = parse_int(sv);
    if (block % 2 != 0) throw ConfigError("bad block size in " + std::string(name));
    int n = block / 2;
    if (key_bits % n != 0) throw ConfigError("bad key size in " + std::string(name));
    if (is_simeck) {
        if (key_bits != 0 && key_bits != 4 * n) throw ConfigError("Simeck key must be 4 words");
        return simeck(n);
    }
    return simon(n, key_bits / n);
}

std::string CipherSpec::name() const {
    std::string s = variant_ == Variant::Simon ? "simon" : "simeck";
    s += std::to_string(2 * n_);
    if (variant_ == Variant::Simon) s += "/" + std::to_string(m_ * n_);
    return s;
}

std::vector<Word> key_schedule(const CipherSpec& spec, std::span<const Word> master, int rounds) {
    const int m = spec.key_words();
    if (static_cast<int>(master.size()) != m)
        throw ConfigError("master key needs " + std::to_string(m) + " words");
    const Word mask = spec.mask();
    std::vector<Word> k(std::max(rounds, 0));
    if (spec.variant() == Variant::Simon) {
        const auto& z = kZ[find_simon(spec.width(), m)->z];
        const Word c = mask ^ 3;
        for (int i = 0; i < rounds; ++i) {
            if (i < m) {
                k[i] = master[i] & mask;
                continue;
            }
            Word tmp = spec.rot(k[i - 1], -3);
            if (m == 4) tmp ^= k[i - 3];
            tmp ^= spec.rot(tmp, -1);
            k[i] = k[i - m] ^ z[(i - m) % 62] ^ tmp ^ c;
        }
        return k;
    }
    // Simeck: the key state is itself run through the round function.
    const std::uint64_t seq = spec.width() == 32 ? kSimeckSeq64 : kSimeckSeq32;
    const int period = spec.width() == 32 ? 63 : 31;
    std::array<Word, 4> t{master[0] & mask, master[1] & mask, master[2] & mask, master[3] & mask};
    for (int i = 0; i < rounds; ++i) {
        k[i] = t[0];
        Word rc = (mask ^ 3) | ((seq >> (i % period)) & 1);
        Word next = spec.f(t[1]) ^ t[0] ^ rc;
        t[0] = t[1];
        t[1] = t[2];
        t[2] = t[3];
        t[3] = next;
    }
    return k;
}

std::vector<Word> round_keys(const CipherSpec& spec, const KeyMaterial& key, int rounds) {
    if (key.mode == KeyMaterial::Mode::IndependentRoundKeys) {
        if (static_cast<int>(key.words.size()) < rounds) throw ConfigError("not enough round keys");
        std::vector<Word> rk(key.words.begin(), key.words.begin() + rounds);
        for (auto& w : rk) w &= spec.mask();
        return rk;
    }
    return key_schedule(spec, key.words, rounds);
}

WordPair encrypt(const CipherSpec& spec, WordPair pt, std::span<const Word> rk, int rounds) {
    if (rounds < 0 || static_cast<int>(rk.size()) < rounds) throw ConfigError("not enough round keys");
    WordPair s{pt.left & spec.mask(), pt.right & spec.mask()};
    for (int r = 0; r < rounds; ++r) s = round_fn(spec, s, rk[r]);
    return s;
}

WordPair encrypt(const CipherSpec& spec, WordPair pt, const KeyMaterial& key, int rounds) {
    auto rk = round_keys(spec, key, rounds);
    return encrypt(spec, pt, rk, rounds);
}

std::string to_hex(Word x) {
    char buf[24] = "0x";
    auto [ptr, ec] = std::to_chars(buf + 2, buf + sizeof(buf), x, 16);
    return std::string(buf, ptr);
}

Word parse_hex(std::string_view s, int width) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) s.remove_prefix(2);
    Word v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, 16);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw ParseError("bad hex word: '" + std::string(s) + "'");
    if (width < 64 && (v >> width) != 0) throw ParseError("word " + to_hex(v) + " exceeds " + std::to_string(width) + " bits");
    return v;
}

std::string to_string(const WordPair& p) { return "(" + to_hex(p.left) + "," + to_hex(p.right) + ")"; }

WordPair parse_pair(std::string_view s, int width) {
    std::string t;
    for (char ch : s)
        if (ch != '(' && ch != ')' && !std::isspace(static_cast<unsigned char>(ch))) t.push_back(ch);
    auto comma = t.find(',');
    if (comma == std::string::npos || t.find(',', comma + 1) != std::string::npos)
        throw ParseError("expected a word pair like (0x8,0x22), got '" + std::string(s) + "'");
    return {parse_hex(std::string_view(t).substr(0, comma), width),
            parse_hex(std::string_view(t).substr(comma + 1), width)};
}

}  // namespace simondl
