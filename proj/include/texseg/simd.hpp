#pragma once

#include <cstddef>
#include <vector>

namespace texseg {

enum class DistanceMetric { Euclidean, CityBlock, Cosine, Correlation };

namespace simd {

// Hot numeric kernels exist twice: a scalar reference and an AVX2 variant
// picked at runtime. Both accumulate in the same order so results are
// bit-identical; the equivalence is enforced by tests.

// distances from one feature vector to n packed centers (row-major n x dim)
void texton_distances_scalar(DistanceMetric m, const double* feat, const double* centers,
                             std::size_t n, std::size_t dim, double* out);
void texton_distances_avx2(DistanceMetric m, const double* feat, const double* centers,
                           std::size_t n, std::size_t dim, double* out);

// index of the smallest distance, first one on ties
std::size_t argmin_first(const double* values, std::size_t n);

// valid-region 2-D correlation over a replicate-padded plane
// padded is (w + s - 1) x (h + s - 1), out is w x h
void correlate_plane_scalar(const double* padded, int padded_w, const double* kernel, int s,
                            double* out, int w, int h);
void correlate_plane_avx2(const double* padded, int padded_w, const double* kernel, int s,
                          double* out, int w, int h);

bool cpu_has_avx2();

// dispatched entry points used by the library
void texton_distances(DistanceMetric m, const double* feat, const double* centers, std::size_t n,
                      std::size_t dim, double* out);
void correlate_plane(const double* padded, int padded_w, const double* kernel, int s, double* out,
                     int w, int h);

// test hook: force the scalar path even when AVX2 is available
void force_scalar(bool on);

}  // namespace simd
}  // namespace texseg
