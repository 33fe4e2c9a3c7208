#pragma once

#include "magnls/grid.hpp"

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace magnls {

/// A real vector field sampled on a grid (one Field per spatial axis).
struct VectorField {
    std::vector<Field> comps;

    int dim() const { return static_cast<int>(comps.size()); }
    const Field& operator[](int a) const { return comps[a]; }
    Field& operator[](int a) { return comps[a]; }

    VectorField& operator+=(const VectorField& o) {
        for (int a = 0; a < dim(); ++a) comps[a] += o.comps[a];
        return *this;
    }
    VectorField& operator*=(double c) {
        for (auto& f : comps) f *= Complex(c, 0.0);
        return *this;
    }
};

inline VectorField zero_vector_field(const GridPtr& grid) {
    VectorField v;
    for (int a = 0; a < grid->dim(); ++a) v.comps.emplace_back(grid);
    return v;
}

/// |A|^2 as a real-valued field.
inline Field magnitude_sq(const VectorField& A) {
    Field out(A.comps.at(0).grid());
    for (std::size_t i = 0; i < out.size(); ++i) {
        double s = 0;
        for (int a = 0; a < A.dim(); ++a) s += std::norm(A[a][i]);
        out[i] = s;
    }
    return out;
}

/// L^b norm of the pointwise magnitude |A|.
inline double lb_norm(const VectorField& A, const Exponent& b) {
    Field mag(A.comps.at(0).grid());
    for (std::size_t i = 0; i < mag.size(); ++i) {
        double s = 0;
        for (int a = 0; a < A.dim(); ++a) s += std::norm(A[a][i]);
        mag[i] = std::sqrt(s);
    }
    return lp_norm(mag, b);
}

// ---------------------------------------------------------------------------
// Potential catalog
// ---------------------------------------------------------------------------

enum class PotentialShape { zero, uniform, solenoidal, mollified_power };

inline std::string to_string(PotentialShape s) {
    switch (s) {
        case PotentialShape::zero: return "zero";
        case PotentialShape::uniform: return "uniform";
        case PotentialShape::solenoidal: return "solenoidal";
        default: return "mollified_power";
    }
}

/// Absolutely continuous scalar modulation g(t) = g0 + g1 cos(omega t).
struct TimeModulation {
    double g0 = 1.0;
    double g1 = 0.0;
    double omega = 0.0;

    double value(double t) const { return g0 + g1 * std::cos(omega * t); }
    double derivative(double t) const { return -g1 * omega * std::sin(omega * t); }
    bool is_static() const { return g1 == 0.0 || omega == 0.0; }
};

/// One summand A_j of the decomposition A = A_1 + A_2: an analytic shape,
/// a time modulation, and the class metadata (a_j, b_j, flags).
struct PotentialComponent {
    PotentialShape shape = PotentialShape::zero;
    double amplitude = 0.0;
    double sigma = 1.0;                       // decay exponent of mollified_power
    std::array<double, 3> direction{1, 0, 0}; // uniform shape only
    TimeModulation modulation;
    PotentialComponentClass cls;
};

/// Time-dependent magnetic potential built from catalog components. Sampling
/// is pure given (t, grid); shapes that are not exactly solenoidal after
/// periodization are passed through the Leray projection.
class PotentialSpec {
  public:
    PotentialSpec() = default;
    explicit PotentialSpec(std::vector<PotentialComponent> comps) : comps_(std::move(comps)) {}

    static PotentialSpec zero() { return PotentialSpec{}; }

    static PotentialSpec uniform(double amplitude, std::array<double, 3> direction = {1, 0, 0},
                                 TimeModulation mod = {}, PotentialComponentClass cls = default_class()) {
        PotentialComponent c;
        c.shape = PotentialShape::uniform;
        c.amplitude = amplitude;
        c.direction = direction;
        c.modulation = mod;
        c.cls = cls;
        return PotentialSpec{{c}};
    }

    static PotentialSpec solenoidal(double amplitude, TimeModulation mod = {},
                                    PotentialComponentClass cls = default_class()) {
        PotentialComponent c;
        c.shape = PotentialShape::solenoidal;
        c.amplitude = amplitude;
        c.modulation = mod;
        c.cls = cls;
        return PotentialSpec{{c}};
    }

    static PotentialSpec mollified_power(double amplitude, double sigma, TimeModulation mod = {},
                                         PotentialComponentClass cls = default_class()) {
        PotentialComponent c;
        c.shape = PotentialShape::mollified_power;
        c.amplitude = amplitude;
        c.sigma = sigma;
        c.modulation = mod;
        c.cls = cls;
        return PotentialSpec{{c}};
    }

    /// a + scale * b, used by the stability experiment. Class metadata of the
    /// perturbation direction is kept alongside a's components.
    static PotentialSpec sum(const PotentialSpec& a, const PotentialSpec& b, double scale) {
        std::vector<PotentialComponent> comps = a.comps_;
        for (PotentialComponent c : b.comps_) {
            c.amplitude *= scale;
            comps.push_back(std::move(c));
        }
        return PotentialSpec{std::move(comps)};
    }

    const std::vector<PotentialComponent>& components() const { return comps_; }
    bool is_zero() const {
        for (const auto& c : comps_)
            if (c.shape != PotentialShape::zero && c.amplitude != 0.0) return false;
        return true;
    }
    bool time_dependent() const {
        for (const auto& c : comps_)
            if (!c.modulation.is_static()) return true;
        return false;
    }
    bool has_time_derivative_data() const {
        for (const auto& c : comps_)
            if (!c.cls.has_time_derivative) return false;
        return true;
    }

    PotentialClassSpec class_spec() const {
        PotentialClassSpec s;
        for (const auto& c : comps_) s.components.push_back(c.cls);
        return s;
    }

    VectorField sample_component(int j, double t, const GridPtr& grid) const {
        VectorField v = spatial(comps_.at(j), grid);
        v *= comps_[j].modulation.value(t);
        return v;
    }

    VectorField sample_component_dt(int j, double t, const GridPtr& grid) const {
        if (!comps_.at(j).cls.has_time_derivative)
            throw std::invalid_argument("potential component has no time-derivative data");
        VectorField v = spatial(comps_[j], grid);
        v *= comps_[j].modulation.derivative(t);
        return v;
    }

    VectorField sample(double t, const GridPtr& grid) const {
        VectorField v = zero_vector_field(grid);
        for (std::size_t j = 0; j < comps_.size(); ++j) v += sample_component(static_cast<int>(j), t, grid);
        return v;
    }

    VectorField sample_dt(double t, const GridPtr& grid) const {
        VectorField v = zero_vector_field(grid);
        for (std::size_t j = 0; j < comps_.size(); ++j) v += sample_component_dt(static_cast<int>(j), t, grid);
        return v;
    }

  private:
    static PotentialComponentClass default_class() {
        // constant-in-space catalog entries sit in A2 (b = inf, gradient known)
        return PotentialComponentClass{Exponent::infinity(), Exponent::infinity(), true, true};
    }

    static VectorField spatial(const PotentialComponent& c, const GridPtr& grid) {
        VectorField v = zero_vector_field(grid);
        switch (c.shape) {
            case PotentialShape::zero:
                return v;
            case PotentialShape::uniform: {
                for (int a = 0; a < grid->dim(); ++a)
                    for (std::size_t i = 0; i < grid->size(); ++i)
                        v[a][i] = c.amplitude * c.direction[a];
                return v;
            }
            case PotentialShape::solenoidal: {
                // each component depends only on the next coordinate, so the
                // analytic field is exactly divergence-free and periodic
                const double w = 2.0 * std::numbers::pi / grid->length();
                if (grid->dim() == 1) {
                    for (std::size_t i = 0; i < grid->size(); ++i) v[0][i] = c.amplitude;
                    return v;
                }
                for (int a = 0; a < grid->dim(); ++a) {
                    const int other = (a + 1) % grid->dim();
                    for (std::size_t i = 0; i < grid->size(); ++i)
                        v[a][i] = c.amplitude * std::sin(w * grid->coord(other, i));
                }
                return v;
            }
            case PotentialShape::mollified_power: {
                if (grid->dim() < 2)
                    throw std::invalid_argument("mollified_power potential requires dim >= 2");
                // azimuthal swirl g(r) (-y, x, 0) around the box center with
                // g(r) = amp (r^2 + s^2)^{-(sigma+1)/2}, s = 2h; |A| ~ r^{-sigma}
                const double s2 = std::pow(2.0 * grid->spacing(), 2);
                const double c0 = grid->length() / 2.0;
                for (std::size_t i = 0; i < grid->size(); ++i) {
                    const double x = grid->coord(0, i) - c0;
                    const double y = grid->coord(1, i) - c0;
                    const double g = c.amplitude * std::pow(x * x + y * y + s2, -(c.sigma + 1.0) / 2.0);
                    v[0][i] = -y * g;
                    v[1][i] = x * g;
                }
                // periodization breaks exact solenoidality at the box edge
                v.comps = project_div_free(v.comps);
                return v;
            }
        }
        return v;
    }

    std::vector<PotentialComponent> comps_;
};

// ---------------------------------------------------------------------------
// Magnetic operators
// ---------------------------------------------------------------------------

/// (nabla - iA)u, componentwise.
inline std::vector<Field> magnetic_gradient(const Field& u, const VectorField& A) {
    if (A.dim() != u.grid()->dim()) throw std::invalid_argument("magnetic_gradient: dim mismatch");
    std::vector<Field> g = gradient(u);
    for (int a = 0; a < A.dim(); ++a) {
        for (std::size_t i = 0; i < u.size(); ++i) g[a][i] -= Complex(0.0, 1.0) * A[a][i] * u[i];
    }
    return g;
}

/// 2i A.grad(u) + |A|^2 u, the perturbation the viscous flow treats as a source.
inline Field magnetic_perturbation(const Field& u, const VectorField& A) {
    std::vector<Field> g = gradient(u);
    Field out(u.grid());
    for (std::size_t i = 0; i < u.size(); ++i) {
        Complex adotg = 0;
        double a2 = 0;
        for (int a = 0; a < A.dim(); ++a) {
            adotg += A[a][i] * g[a][i];
            a2 += std::norm(A[a][i]);
        }
        out[i] = Complex(0.0, 2.0) * adotg + a2 * u[i];
    }
    return out;
}

/// (nabla - iA)^2 u = lap u - 2i A.grad u - |A|^2 u (divergence-free A).
inline Field magnetic_laplacian(const Field& u, const VectorField& A) {
    Field out = laplacian(u);
    out -= magnetic_perturbation(u, A);
    return out;
}

inline double magnetic_gradient_norm_sq(const Field& u, const VectorField& A) {
    double s = 0;
    for (const auto& g : magnetic_gradient(u, A)) s += std::pow(l2_norm(g), 2);
    return s;
}

/// (||u||_2^2 + ||(nabla - iA)u||_2^2)^{1/2}.
inline double magnetic_h1_norm(const Field& u, const VectorField& A) {
    return std::sqrt(std::pow(l2_norm(u), 2) + magnetic_gradient_norm_sq(u, A));
}

/// Max over grid points of |grad |u|| - |(nabla - iA)u|; a faithful discrete
/// diamagnetic inequality keeps this below the discretization tolerance.
/// |u| is differentiated spectrally through |u|_delta = sqrt(|u|^2 + delta^2).
inline double check_diamagnetic(const Field& u, const VectorField& A, double delta = 1e-8) {
    Field mod(u.grid());
    for (std::size_t i = 0; i < u.size(); ++i) mod[i] = std::sqrt(std::norm(u[i]) + delta * delta);
    std::vector<Field> gm = gradient(mod);
    std::vector<Field> dg = magnetic_gradient(u, A);
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < u.size(); ++i) {
        double g2 = 0, d2 = 0;
        for (int a = 0; a < u.grid()->dim(); ++a) {
            g2 += std::norm(gm[a][i]);
            d2 += std::norm(dg[a][i]);
        }
        worst = std::max(worst, std::sqrt(g2) - std::sqrt(d2));
    }
    return worst;
}

/// Two-sided norm-equivalence ratios
///   (||u||_{H1} / ((1+||A||_b) ||u||_{H1_A}),  ||u||_{H1_A} / ((1+||A||_b) ||u||_{H1})),
/// both bounded by a corpus constant when the equivalence holds.
inline std::pair<double, double> norm_equivalence_check(const Field& u, const VectorField& A,
                                                        const Exponent& b) {
    if (b.recip > Rational(1, 3))
        throw std::invalid_argument("norm_equivalence_check requires b in [3,inf]");
    const double h1 = sobolev_norm(u, 1);
    const double h1a = magnetic_h1_norm(u, A);
    const double w = 1.0 + lb_norm(A, b);
    if (h1 == 0 || h1a == 0) return {0.0, 0.0};
    return {h1 / (w * h1a), h1a / (w * h1)};
}

/// ||2iA.grad u + |A|^2 u||_{H^-1} / (C_A ||u||_{H^1}) with
/// C_A = 1 + ||A_1||_{b_1}^2 + ||A_2||_{b_2}^2 at the given time.
inline double h1_to_hminus1_check(const Field& u, const PotentialSpec& A, double t) {
    double ca = 1.0;
    VectorField total = zero_vector_field(u.grid());
    for (std::size_t j = 0; j < A.components().size(); ++j) {
        VectorField aj = A.sample_component(static_cast<int>(j), t, u.grid());
        ca += std::pow(lb_norm(aj, A.components()[j].cls.b), 2);
        total += aj;
    }
    const double h1 = sobolev_norm(u, 1);
    if (h1 == 0) return 0.0;
    return sobolev_norm(magnetic_perturbation(u, total), -1) / (ca * h1);
}

/// Discrete class norm of a potential over [t0,t1]: per component the
/// L^{a_j}-in-time norm of ||A_j(t)||_{L^{b_j}} (plus the gradient piece in
/// W^{1,3b/(3+b)} when gradient data is declared), rectangle rule in time.
inline double class_norm(const PotentialSpec& A, const GridPtr& grid, double t0, double t1,
                         int samples = 17) {
    double total = 0.0;
    const double dt = (t1 - t0) / std::max(1, samples - 1);
    for (std::size_t j = 0; j < A.components().size(); ++j) {
        const auto& cls = A.components()[j].cls;
        auto spatial_norm = [&](double t) {
            VectorField aj = A.sample_component(static_cast<int>(j), t, grid);
            if (!cls.has_gradient) return lb_norm(aj, cls.b);
            // W^{1,3b/(3+b)}: 1/p = 1/b + 1/3
            const Exponent p{cls.b.recip + Rational(1, 3)};
            double nrm = lb_norm(aj, p);
            for (int a = 0; a < aj.dim(); ++a)
                for (const auto& d : gradient(aj[a])) nrm += lp_norm(d, p);
            return nrm;
        };
        if (cls.a.is_infinite()) {
            double sup = 0;
            for (int s = 0; s < samples; ++s) sup = std::max(sup, spatial_norm(t0 + s * dt));
            total += sup;
        } else {
            const double a = cls.a.as_double();
            double acc = 0;
            for (int s = 0; s < samples; ++s) acc += dt * std::pow(spatial_norm(t0 + s * dt), a);
            total += std::pow(acc, 1.0 / a);
        }
    }
    return total;
}

}  // namespace magnls
