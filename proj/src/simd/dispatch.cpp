#include <atomic>

#include "texseg/simd.hpp"

namespace texseg::simd {

namespace {
std::atomic<bool> g_force_scalar{false};
}

void force_scalar(bool on) { g_force_scalar.store(on); }

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

namespace {
bool use_avx2() {
#ifdef TEXSEG_HAVE_AVX2_TU
    static const bool available = cpu_has_avx2();
    return available && !g_force_scalar.load();
#else
    return false;
#endif
}
}  // namespace

void texton_distances(DistanceMetric m, const double* feat, const double* centers, std::size_t n,
                      std::size_t dim, double* out) {
#ifdef TEXSEG_HAVE_AVX2_TU
    if (use_avx2()) {
        texton_distances_avx2(m, feat, centers, n, dim, out);
        return;
    }
#endif
    texton_distances_scalar(m, feat, centers, n, dim, out);
}

void correlate_plane(const double* padded, int padded_w, const double* kernel, int s, double* out,
                     int w, int h) {
#ifdef TEXSEG_HAVE_AVX2_TU
    if (use_avx2()) {
        correlate_plane_avx2(padded, padded_w, kernel, s, out, w, h);
        return;
    }
#endif
    correlate_plane_scalar(padded, padded_w, kernel, s, out, w, h);
}

}  // namespace texseg::simd
