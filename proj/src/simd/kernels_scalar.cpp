#include <cmath>

#include "kernel_impl.hpp"
#include "texseg/simd.hpp"

namespace texseg::simd {

void texton_distances_scalar(DistanceMetric m, const double* feat, const double* centers,
                             std::size_t n, std::size_t dim, double* out) {
    switch (m) {
        case DistanceMetric::Euclidean:
            for (std::size_t j = 0; j < n; ++j) {
                const double* c = centers + j * dim;
                double d = 0.0;
                for (std::size_t i = 0; i < dim; ++i) {
                    const double diff = feat[i] - c[i];
                    d = d + diff * diff;
                }
                out[j] = d;
            }
            break;
        case DistanceMetric::CityBlock:
            for (std::size_t j = 0; j < n; ++j) {
                const double* c = centers + j * dim;
                double d = 0.0;
                for (std::size_t i = 0; i < dim; ++i) d = d + std::fabs(feat[i] - c[i]);
                out[j] = d;
            }
            break;
        case DistanceMetric::Cosine:
            for (std::size_t j = 0; j < n; ++j) {
                const double* c = centers + j * dim;
                double dot = 0.0, na = 0.0, nb = 0.0;
                for (std::size_t i = 0; i < dim; ++i) {
                    dot = dot + feat[i] * c[i];
                    na = na + feat[i] * feat[i];
                    nb = nb + c[i] * c[i];
                }
                out[j] = detail::cosine_from_sums(dot, na, nb);
            }
            break;
        case DistanceMetric::Correlation: {
            const bool const_a = detail::is_constant(feat, dim);
            for (std::size_t j = 0; j < n; ++j) {
                const double* c = centers + j * dim;
                double sa = 0.0, sb = 0.0, sab = 0.0, saa = 0.0, sbb = 0.0;
                for (std::size_t i = 0; i < dim; ++i) {
                    sa = sa + feat[i];
                    sb = sb + c[i];
                    sab = sab + feat[i] * c[i];
                    saa = saa + feat[i] * feat[i];
                    sbb = sbb + c[i] * c[i];
                }
                out[j] = detail::correlation_from_sums(sa, sb, sab, saa, sbb, dim, const_a,
                                                       detail::is_constant(c, dim));
            }
            break;
        }
    }
}

std::size_t argmin_first(const double* values, std::size_t n) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (values[i] < values[best]) best = i;
    return best;
}

void correlate_plane_scalar(const double* padded, int padded_w, const double* kernel, int s,
                            double* out, int w, int h) {
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
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
