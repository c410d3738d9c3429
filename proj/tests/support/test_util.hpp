#pragma once

#include <algorithm>
#include <complex>
#include <random>
#include <vector>

#include "ynet/polynomial.hpp"

namespace ynet::test {

inline std::mt19937& rng() {
    static std::mt19937 gen(20240613u);
    return gen;
}

inline double uniform(double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    return d(rng());
}

inline cdouble random_unit_complex() {
    const double a = uniform(0.0, 2.0 * 3.14159265358979323846);
    return std::polar(1.0, a);
}

/// Greedy nearest matching of two root multisets; returns the largest pair
/// distance, or +inf on size mismatch.
inline double root_multiset_distance(std::vector<cdouble> a, std::vector<cdouble> b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (const cdouble& x : a) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0;
        for (std::size_t i = 0; i < b.size(); ++i) {
            const double d = std::abs(x - b[i]);
            if (d < best) { best = d; bi = i; }
        }
        worst = std::max(worst, best);
        b.erase(b.begin() + static_cast<std::ptrdiff_t>(bi));
    }
    return worst;
}

inline Polynomial random_polynomial(int degree, bool complex_coeffs = false) {
    std::vector<cdouble> c(static_cast<std::size_t>(degree) + 1);
    for (auto& ck : c) {
        ck = cdouble(uniform(-2.0, 2.0), complex_coeffs ? uniform(-2.0, 2.0) : 0.0);
    }
    if (std::abs(c.back()) < 0.2) c.back() += cdouble(0.5);
    return Polynomial(std::move(c));
}

}  // namespace ynet::test
