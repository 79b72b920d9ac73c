#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace simondl {

// One branch of the Feistel state. Only the low n bits are meaningful;
// bit i is the coefficient of 2^i and S^t is a left rotation.
using Word = std::uint64_t;

struct WordPair {
    Word left = 0;
    Word right = 0;
    auto operator<=>(const WordPair&) const = default;
};

enum class Variant { Simon, Simeck };

class ConfigError : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

class ParseError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class NotFound : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class CipherSpec {
public:
    // key_words = 0 picks the largest standard key size for n.
    static CipherSpec simon(int n, int key_words = 0);
    static CipherSpec simeck(int n);
    // "simon32", "simon48/72", "simeck64", ...
    static CipherSpec from_name(std::string_view name);

    int width() const { return n_; }
    int a() const { return a_; }
    int b() const { return b_; }
    int c() const { return c_; }
    Variant variant() const { return variant_; }
    int key_words() const { return m_; }
    int total_rounds() const { return rounds_; }
    Word mask() const { return mask_; }
    std::string name() const;

    Word rot(Word x, int t) const {
        int s = ((t % n_) + n_) % n_;
        if (s == 0) return x & mask_;
        return ((x << s) | ((x & mask_) >> (n_ - s))) & mask_;
    }
    Word f(Word x) const { return (rot(x, a_) & rot(x, b_)) ^ rot(x, c_); }

    bool operator==(const CipherSpec&) const = default;

private:
    CipherSpec(int n, int a, int b, int c, Variant v, int m, int rounds);

    int n_, a_, b_, c_;
    Variant variant_;
    int m_, rounds_;
    Word mask_;
};

struct KeyMaterial {
    enum class Mode { RealSchedule, IndependentRoundKeys };
    Mode mode = Mode::RealSchedule;
    // RealSchedule: master key words, words[0] feeds round 0.
    // IndependentRoundKeys: one word per round, used as is.
    std::vector<Word> words;
};

std::vector<Word> key_schedule(const CipherSpec& spec, std::span<const Word> master, int rounds);
std::vector<Word> round_keys(const CipherSpec& spec, const KeyMaterial& key, int rounds);

inline WordPair round_fn(const CipherSpec& spec, WordPair s, Word k) {
    return {spec.f(s.left) ^ s.right ^ k, s.left};
}

WordPair encrypt(const CipherSpec& spec, WordPair pt, std::span<const Word> rk, int rounds);
WordPair encrypt(const CipherSpec& spec, WordPair pt, const KeyMaterial& key, int rounds);

inline int popcount(Word x) { return __builtin_popcountll(x); }
inline int parity(Word x) { return __builtin_parityll(x); }

std::string to_hex(Word x);
Word parse_hex(std::string_view s, int width);
std::string to_string(const WordPair& p);  // "(0x8,0x22)"
WordPair parse_pair(std::string_view s, int width);

}  // namespace simondl
