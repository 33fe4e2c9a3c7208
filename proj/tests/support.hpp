#pragma once

// Shared test utilities: independent brute-force checkers and closed-form
// oracles. Everything here is deliberately written against raw integers /
// direct summation so it shares no code path with the library implementation.

#include "magnls/grid.hpp"

#include <complex>
#include <cstdint>
#include <numeric>
#include <vector>

namespace support {

// --- exact fractions on int64, used by the exponent brute-force checker ----

struct Frac {
    long long n = 0, d = 1;  // reduced, d > 0
};

inline Frac make_frac(long long n, long long d) {
    const long long g = std::gcd(n, d);
    return Frac{n / g, d / g};
}

// a/b  ?  c/d  via cross multiplication
inline bool frac_eq(Frac a, Frac b) { return a.n * b.d == b.n * a.d; }
inline bool frac_lt(Frac a, Frac b) { return a.n * b.d < b.n * a.d; }
inline bool frac_le(Frac a, Frac b) { return a.n * b.d <= b.n * a.d; }
inline Frac frac_add(Frac a, Frac b) { return make_frac(a.n * b.d + b.n * a.d, a.d * b.d); }
inline Frac frac_scale(long long c, Frac a) { return make_frac(c * a.n, a.d); }

/// All reduced reciprocals n/d in [0,1] with denominator <= maxden.
inline std::vector<Frac> reciprocals_up_to(long long maxden) {
    std::vector<Frac> out;
    out.push_back(Frac{0, 1});
    for (long long d = 1; d <= maxden; ++d)
        for (long long n = 1; n <= d; ++n)
            if (std::gcd(n, d) == 1) out.push_back(Frac{n, d});
    return out;
}

// Reference admissibility predicates, straight from the defining inequalities.
// iq, ir etc. are the reciprocals 1/q, 1/r.

inline bool ref_admissible(Frac iq, Frac ir) {
    // 2/q + 3/r = 3/2  and  1/6 <= 1/r <= 1/2
    return frac_eq(frac_add(frac_scale(2, iq), frac_scale(3, ir)), Frac{3, 2}) &&
           frac_le(Frac{1, 6}, ir) && frac_le(ir, Frac{1, 2});
}

inline bool ref_endpoint(Frac iq, Frac ir) {
    return ref_admissible(iq, ir) && frac_eq(ir, Frac{1, 6});
}

inline bool ref_dual_admissible(Frac is, Frac ip) {
    return frac_eq(frac_add(frac_scale(2, is), frac_scale(3, ip)), Frac{7, 2}) &&
           frac_le(Frac{1, 2}, ip) && frac_le(ip, Frac{5, 6});
}

inline bool ref_qr_admissible(Frac is, Frac ip, Frac ir) {
    if (!frac_lt(frac_add(frac_scale(2, is), frac_scale(3, ip)), Frac{7, 2})) return false;
    if (frac_lt(Frac{1, 3}, ir)) return frac_le(Frac{1, 2}, ip) && frac_le(ip, Frac{1, 1});
    return frac_le(Frac{1, 2}, ip) && frac_lt(ip, frac_add(ir, Frac{2, 3}));
}

inline bool ref_grad_admissible(Frac is, Frac ip, Frac ir) {
    if (!frac_lt(frac_add(frac_scale(2, is), frac_scale(3, ip)), Frac{5, 2})) return false;
    return frac_le(Frac{1, 2}, ip) && frac_lt(ip, frac_add(ir, Frac{1, 3}));
}

// --- brute-force circular convolution oracle --------------------------------

/// h^dim-weighted circular convolution (kernel (*) density)(x), direct O(N^2) sum.
inline magnls::Field circular_convolution(const magnls::Field& kernel, const magnls::Field& density) {
    const auto& g = *kernel.grid();
    magnls::Field out(kernel.grid());
    const int n = g.n();
    auto wrap = [n](int m) { return ((m % n) + n) % n; };
    if (g.dim() != 1) throw std::invalid_argument("oracle implemented for dim 1");
    for (int x = 0; x < n; ++x) {
        std::complex<double> acc = 0;
        for (int y = 0; y < n; ++y) acc += kernel[wrap(x - y)] * density[y];
        out[x] = g.cell() * acc;
    }
    return out;
}

// --- free heat-Schroedinger Gaussian, closed form (1d) ----------------------

/// e^{(i+eps) t d^2/dx^2} applied to exp(-(x-c)^2 / (2 w^2)) on the line.
inline std::complex<double> gaussian_flow_1d(double x, double c, double w, double t, double eps) {
    const std::complex<double> b = w * w + 2.0 * std::complex<double>(eps, 1.0) * t;
    return std::sqrt(w * w / b) * std::exp(-(x - c) * (x - c) / (2.0 * b));
}

}  // namespace support
