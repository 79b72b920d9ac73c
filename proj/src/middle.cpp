#include "simondl/middle.hpp"

namespace simondl {

ContState init_from_difference(const CipherSpec& spec, WordPair delta) {
    const int n = spec.width();
    ContState s{std::vector<double>(n), std::vector<double>(n)};
    for (int i = 0; i < n; ++i) {
        s.left[i] = ((delta.left >> i) & 1) ? -1.0 : 1.0;
        s.right[i] = ((delta.right >> i) & 1) ? -1.0 : 1.0;
    }
    return s;
}

namespace {

void step(const CipherSpec& spec, ContState& s) {
    const int n = spec.width();
    auto at = [&](int i) { return s.left[((i % n) + n) % n]; };
    std::vector<double> next(n);
    for (int i = 0; i < n; ++i) {
        // AND of two bits with continuous differences x, y: (1 + x + y + xy) / 4
        const double x = at(i - spec.a()), y = at(i - spec.b());
        next[i] = 0.25 * (1.0 + x + y + x * y) * at(i - spec.c()) * s.right[i];
    }
    s.right = std::move(s.left);
    s.left = std::move(next);
}

}  // namespace

ContState propagate(const CipherSpec& spec, ContState s, int rounds) {
    for (int r = 0; r < rounds; ++r) step(spec, s);
    return s;
}

std::vector<ContState> propagate_trace(const CipherSpec& spec, ContState s, int rounds) {
    std::vector<ContState> out{s};
    for (int r = 0; r < rounds; ++r) {
        step(spec, s);
        out.push_back(s);
    }
    return out;
}

double middle_correlation(const ContState& s, WordPair lambda) {
    double r = 1.0;
    for (std::size_t i = 0; i < s.left.size(); ++i) {
        if ((lambda.left >> i) & 1) r *= s.left[i];
        if ((lambda.right >> i) & 1) r *= s.right[i];
    }
    return r;
}

}  // namespace simondl
