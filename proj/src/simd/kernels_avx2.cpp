#include <immintrin.h>

#include <cmath>

#include "kernel_impl.hpp"
#include "texseg/simd.hpp"

// Four centers (or four output pixels) per iteration. Each lane accumulates
// in exactly the order the scalar kernel uses, and no fma is emitted, so the
// lanes reproduce the scalar results bit for bit.
namespace texseg::simd {

namespace {

inline __m256d gather4(const double* c0, const double* c1, const double* c2, const double* c3,
                       std::size_t i) {
    return _mm256_set_pd(c3[i], c2[i], c1[i], c0[i]);
}

inline __m256d abs_pd(__m256d v) {
    const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    return _mm256_and_pd(v, mask);
}

}  // namespace

void texton_distances_avx2(DistanceMetric m, const double* feat, const double* centers,
                           std::size_t n, std::size_t dim, double* out) {
    const std::size_t n4 = n & ~static_cast<std::size_t>(3);
    switch (m) {
        case DistanceMetric::Euclidean:
            for (std::size_t j = 0; j < n4; j += 4) {
                const double* c0 = centers + j * dim;
                const double* c1 = c0 + dim;
                const double* c2 = c1 + dim;
                const double* c3 = c2 + dim;
                __m256d acc = _mm256_setzero_pd();
                for (std::size_t i = 0; i < dim; ++i) {
                    const __m256d f = _mm256_set1_pd(feat[i]);
                    const __m256d d = _mm256_sub_pd(f, gather4(c0, c1, c2, c3, i));
                    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
                }
                _mm256_storeu_pd(out + j, acc);
            }
            break;
        case DistanceMetric::CityBlock:
            for (std::size_t j = 0; j < n4; j += 4) {
                const double* c0 = centers + j * dim;
                const double* c1 = c0 + dim;
                const double* c2 = c1 + dim;
                const double* c3 = c2 + dim;
                __m256d acc = _mm256_setzero_pd();
                for (std::size_t i = 0; i < dim; ++i) {
                    const __m256d f = _mm256_set1_pd(feat[i]);
                    acc = _mm256_add_pd(acc, abs_pd(_mm256_sub_pd(f, gather4(c0, c1, c2, c3, i))));
                }
                _mm256_storeu_pd(out + j, acc);
            }
            break;
        case DistanceMetric::Cosine:
            for (std::size_t j = 0; j < n4; j += 4) {
                const double* c0 = centers + j * dim;
                const double* c1 = c0 + dim;
                const double* c2 = c1 + dim;
                const double* c3 = c2 + dim;
                __m256d dot = _mm256_setzero_pd();
                __m256d na = _mm256_setzero_pd();
                __m256d nb = _mm256_setzero_pd();
                for (std::size_t i = 0; i < dim; ++i) {
                    const __m256d f = _mm256_set1_pd(feat[i]);
                    const __m256d c = gather4(c0, c1, c2, c3, i);
                    dot = _mm256_add_pd(dot, _mm256_mul_pd(f, c));
                    na = _mm256_add_pd(na, _mm256_mul_pd(f, f));
                    nb = _mm256_add_pd(nb, _mm256_mul_pd(c, c));
                }
                alignas(32) double dots[4], nas[4], nbs[4];
                _mm256_store_pd(dots, dot);
                _mm256_store_pd(nas, na);
                _mm256_store_pd(nbs, nb);
                for (int l = 0; l < 4; ++l)
                    out[j + l] = detail::cosine_from_sums(dots[l], nas[l], nbs[l]);
            }
            break;
        case DistanceMetric::Correlation: {
            const bool const_a = detail::is_constant(feat, dim);
            for (std::size_t j = 0; j < n4; j += 4) {
                const double* c0 = centers + j * dim;
                const double* c1 = c0 + dim;
                const double* c2 = c1 + dim;
                const double* c3 = c2 + dim;
                __m256d sa = _mm256_setzero_pd();
                __m256d sb = _mm256_setzero_pd();
                __m256d sab = _mm256_setzero_pd();
                __m256d saa = _mm256_setzero_pd();
                __m256d sbb = _mm256_setzero_pd();
                for (std::size_t i = 0; i < dim; ++i) {
                    const __m256d f = _mm256_set1_pd(feat[i]);
                    const __m256d c = gather4(c0, c1, c2, c3, i);
                    sa = _mm256_add_pd(sa, f);
                    sb = _mm256_add_pd(sb, c);
                    sab = _mm256_add_pd(sab, _mm256_mul_pd(f, c));
                    saa = _mm256_add_pd(saa, _mm256_mul_pd(f, f));
                    sbb = _mm256_add_pd(sbb, _mm256_mul_pd(c, c));
                }
                alignas(32) double vsa[4], vsb[4], vsab[4], vsaa[4], vsbb[4];
                _mm256_store_pd(vsa, sa);
                _mm256_store_pd(vsb, sb);
                _mm256_store_pd(vsab, sab);
                _mm256_store_pd(vsaa, saa);
                _mm256_store_pd(vsbb, sbb);
                const double* cs[4] = {c0, c1, c2, c3};
                for (int l = 0; l < 4; ++l)
                    out[j + l] = detail::correlation_from_sums(vsa[l], vsb[l], vsab[l], vsaa[l],
                                                               vsbb[l], dim, const_a,
                                                               detail::is_constant(cs[l], dim));
            }
            break;
        }
    }
    if (n4 < n)  // remainder centers fall back to the reference loop
        texton_distances_scalar(m, feat, centers + n4 * dim, n - n4, dim, out + n4);
}

void correlate_plane_avx2(const double* padded, int padded_w, const double* kernel, int s,
                          double* out, int w, int h) {
    const int w4 = w & ~3;
    for (int y = 0; y < h; ++y) {
        int x = 0;
        for (; x < w4; x += 4) {
            __m256d acc = _mm256_setzero_pd();
            for (int ky = 0; ky < s; ++ky) {
                const double* row = padded + static_cast<std::size_t>(y + ky) * padded_w + x;
                const double* krow = kernel + static_cast<std::size_t>(ky) * s;
                for (int kx = 0; kx < s; ++kx) {
                    const __m256d k = _mm256_set1_pd(krow[kx]);
                    acc = _mm256_add_pd(acc, _mm256_mul_pd(k, _mm256_loadu_pd(row + kx)));
                }
            }
            _mm256_storeu_pd(out + static_cast<std::size_t>(y) * w + x, acc);
        }
        for (; x < w; ++x) {
            double acc = 0.0;
            for (int ky = 0; ky < s; ++ky) {
                const double* row = padded + static_cast<std::size_t>(y + ky) * padded_w + x;
                const double* krow = kernel + static_cast<std::size_t>(ky) * s;
                for (int kx = 0; kx < s; ++kx) acc = acc + krow[kx] * row[kx];
            }
            out[static_cast<std::size_t>(y) * w + x] = acc;
        }
    }
}

}  // namespace texseg::simd
