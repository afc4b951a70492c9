#pragma once

#include <cmath>
#include <cstddef>

// Shared epilogues for the similarity metrics. Both the scalar and the AVX2
// paths feed their accumulated sums through these, which is what makes the
// two paths bit-identical.
namespace texseg::simd::detail {

inline double cosine_from_sums(double dot, double na, double nb) {
    if (na == 0.0 || nb == 0.0) return 1.0;  // zero vector has no direction
    return 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
}

inline double correlation_from_sums(double sa, double sb, double sab, double saa, double sbb,
                                    std::size_t n, bool const_a, bool const_b) {
    if (const_a || const_b) return 1.0;  // Pearson undefined for constants
    const double nn = static_cast<double>(n);
    const double ma = sa / nn;
    const double mb = sb / nn;
    const double cov = sab - nn * ma * mb;
    const double va = saa - nn * ma * ma;
    const double vb = sbb - nn * mb * mb;
    if (!(va > 0.0) || !(vb > 0.0)) return 1.0;
    return 1.0 - cov / (std::sqrt(va) * std::sqrt(vb));
}

inline bool is_constant(const double* v, std::size_t n) {
    for (std::size_t i = 1; i < n; ++i)
        if (v[i] != v[0]) return false;
    return true;
}

}  // namespace texseg::simd::detail
