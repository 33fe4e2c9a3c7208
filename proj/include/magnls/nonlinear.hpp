#pragma once

#include "magnls/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace magnls {

/// Defocusing nonlinearity N(u) = lambda1 |u|^{gamma-1} u
///                               + lambda2 (|x|^{-alpha} * |u|^2) u.
struct NonlinearitySpec {
    Rational gamma{3};
    Rational alpha{1};
    double lambda1 = 1.0;
    double lambda2 = 1.0;

    void validate() const {
        if (!(gamma > 1 && gamma <= 5))
            throw std::invalid_argument("gamma in (1,5] required, got " + format_rational(gamma));
        if (!(alpha > 0 && alpha < 3))
            throw std::invalid_argument("alpha in (0,3) required, got " + format_rational(alpha));
        if (lambda1 < 0 || lambda2 < 0)
            throw std::invalid_argument("defocusing couplings require lambda1, lambda2 >= 0");
    }

    double gamma_value() const { return to_double(gamma); }
    double alpha_value() const { return to_double(alpha); }
    bool trivial() const { return lambda1 == 0.0 && lambda2 == 0.0; }
    bool critical() const { return gamma == 5; }
};

/// lambda1 |u|^{gamma-1} u, with |u|^{gamma-1} = (|u|^2)^{(gamma-1)/2} so that
/// fractional gamma is safe at zeros of u.
inline Field power_term(const Field& u, const NonlinearitySpec& spec) {
    Field out(u.grid());
    if (spec.lambda1 == 0.0) return out;
    const double e = (spec.gamma_value() - 1.0) / 2.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        out[i] = spec.lambda1 * std::pow(std::norm(u[i]), e) * u[i];
    return out;
}

/// Fourier weight of the periodic Riesz kernel: m(k) = c_{d,alpha} |k|^{alpha-d}
/// for k != 0 and m(0) = 0 (mean mode excluded), with the constant of the
/// continuum transform F[|x|^{-alpha}](k) = c |k|^{alpha-d}. Strictly positive
/// away from the mean mode, which is all the dissipation argument uses.
inline std::vector<double> riesz_multiplier(const Grid& grid, double alpha) {
    const int d = grid.dim();
    if (!(alpha > 0 && alpha < d))
        throw std::invalid_argument("riesz_multiplier: alpha in (0,dim) required");
    const double c = std::pow(2.0, d - alpha) * std::pow(std::numbers::pi, d / 2.0) *
                     std::tgamma((d - alpha) / 2.0) / std::tgamma(alpha / 2.0);
    std::vector<double> m(grid.size(), 0.0);
    for (std::size_t i = 0; i < m.size(); ++i) {
        const double k2 = grid.kfullsq(i);
        if (k2 > 0) m[i] = c * std::pow(k2, (alpha - d) / 2.0);
    }
    return m;
}

/// (|x|^{-alpha} * |u|^2) as a real-valued field.
inline Field hartree_potential(const Field& u, const NonlinearitySpec& spec) {
    const auto m = riesz_multiplier(*u.grid(), spec.alpha_value());
    auto c = transform(abs2(u));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] *= m[i];
    Field v = inverse_transform(u.grid(), std::move(c));
    for (auto& x : v.values()) x = Complex(x.real(), 0.0);  // convolution of real data is real
    return v;
}

/// lambda2 (|x|^{-alpha} * |u|^2) u.
inline Field hartree_term(const Field& u, const NonlinearitySpec& spec) {
    if (spec.lambda2 == 0.0) return Field(u.grid());
    Field v = hartree_potential(u, spec);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = spec.lambda2 * v[i] * u[i];
    return v;
}

/// int (|x|^{-alpha} * phi) phi dx for real phi, evaluated spectrally as
/// h^dim sum_k m(k) |phi_hat(k)|^2; nonnegative term by term.
inline double hartree_quadratic_form(const Field& phi, const Grid& grid, double alpha) {
    const auto m = riesz_multiplier(grid, alpha);
    const auto c = transform(phi);
    double s = 0;
    for (std::size_t i = 0; i < c.size(); ++i) s += m[i] * std::norm(c[i]);
    return grid.cell() * s;
}

inline Field nonlinearity(const Field& u, const NonlinearitySpec& spec) {
    Field out = power_term(u, spec);
    if (spec.lambda2 != 0.0) out += hartree_term(u, spec);
    return out;
}

}  // namespace magnls
