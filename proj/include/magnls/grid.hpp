#pragma once

#include "magnls/exponents.hpp"

#include <fftw3.h>

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

namespace magnls {

using Complex = std::complex<double>;

/// Periodic box [0,L)^dim sampled with n points per axis (n a power of two,
/// n >= 8). Wavenumbers are k = 2*pi*m/L with m in {-n/2, ..., n/2 - 1}.
///
/// The Nyquist mode m = -n/2 has no negative-frequency partner, so every
/// derivative symbol (gradient, divergence, Laplacian, Sobolev weights,
/// semigroup) treats its wavenumber as zero. That keeps div(grad f) == lap f
/// and all multiplier identities exact on the discrete space; well-resolved
/// fields carry no Nyquist mass anyway. The Riesz kernel weight is the one
/// exception (see nonlinear.hpp): it uses the full |k| so that the multiplier
/// stays strictly positive away from the mean mode.
class Grid {
  public:
    Grid(int dim, int n, double length) : dim_(dim), n_(n), length_(length) {
        if (dim < 1 || dim > 3) throw std::invalid_argument("grid dim must be 1, 2 or 3");
        if (n < 8 || (n & (n - 1)) != 0) throw std::invalid_argument("grid n must be a power of two >= 8");
        if (!(length > 0)) throw std::invalid_argument("grid length must be positive");
        size_ = 1;
        for (int a = 0; a < dim; ++a) size_ *= static_cast<std::size_t>(n);
        k_deriv_.resize(n);
        k_full_.resize(n);
        const double dk = 2.0 * std::numbers::pi / length;
        for (int m = 0; m < n; ++m) {
            const int s = (m < n / 2) ? m : m - n;
            k_full_[m] = dk * s;
            k_deriv_[m] = (m == n / 2) ? 0.0 : dk * s;
        }
        ksq_.assign(size_, 0.0);
        kfullsq_.assign(size_, 0.0);
        for (std::size_t i = 0; i < size_; ++i) {
            for (int a = 0; a < dim_; ++a) {
                const double kd = k_deriv_[mode(a, i)];
                const double kf = k_full_[mode(a, i)];
                ksq_[i] += kd * kd;
                kfullsq_[i] += kf * kf;
            }
        }
    }

    int dim() const { return dim_; }
    int n() const { return n_; }
    double length() const { return length_; }
    std::size_t size() const { return size_; }
    double spacing() const { return length_ / n_; }
    double volume() const { return std::pow(length_, dim_); }
    double cell() const { return std::pow(spacing(), dim_); }

    /// Per-axis mode index of a flat row-major index (axis 0 slowest).
    int mode(int axis, std::size_t flat) const {
        std::size_t stride = 1;
        for (int a = dim_ - 1; a > axis; --a) stride *= static_cast<std::size_t>(n_);
        return static_cast<int>((flat / stride) % static_cast<std::size_t>(n_));
    }

    double coord(int axis, std::size_t flat) const { return spacing() * mode(axis, flat); }

    /// Derivative wavenumber of the given axis (Nyquist mode -> 0).
    double k(int axis, std::size_t flat) const { return k_deriv_[mode(axis, flat)]; }
    /// |k|^2 in the derivative convention.
    double ksq(std::size_t flat) const { return ksq_[flat]; }
    /// |k|^2 with the Nyquist mode kept (used by the Riesz weight).
    double kfullsq(std::size_t flat) const { return kfullsq_[flat]; }

    bool compatible(const Grid& other) const {
        return dim_ == other.dim_ && n_ == other.n_ && length_ == other.length_;
    }

  private:
    int dim_, n_;
    double length_;
    std::size_t size_;
    std::vector<double> k_deriv_, k_full_, ksq_, kfullsq_;
};

using GridPtr = std::shared_ptr<const Grid>;

inline GridPtr make_grid(int dim, int n, double length) {
    return std::make_shared<const Grid>(dim, n, length);
}

namespace detail {

/// Process-wide FFTW plan cache; plans are created once per (dim, n, sign)
/// with FFTW_ESTIMATE | FFTW_UNALIGNED and executed on caller buffers via the
/// new-array interface, so concurrent transforms only contend on the map lock.
class FftPlans {
  public:
    static FftPlans& instance() {
        static FftPlans plans;
        return plans;
    }

    void execute(const Grid& g, Complex* data, int sign) {
        fftw_plan plan;
        {
            std::lock_guard<std::mutex> lock(mutex_);
            const Key key{g.dim(), g.n(), sign};
            auto it = cache_.find(key);
            if (it == cache_.end()) {
                std::vector<Complex> dummy(g.size());
                std::array<int, 3> dims{};
                for (int a = 0; a < g.dim(); ++a) dims[a] = g.n();
                fftw_plan p = fftw_plan_dft(g.dim(), dims.data(),
                                            reinterpret_cast<fftw_complex*>(dummy.data()),
                                            reinterpret_cast<fftw_complex*>(dummy.data()),
                                            sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
                it = cache_.emplace(key, p).first;
            }
            plan = it->second;
        }
        fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(data),
                         reinterpret_cast<fftw_complex*>(data));
    }

  private:
    using Key = std::tuple<int, int, int>;
    FftPlans() = default;
    std::mutex mutex_;
    std::map<Key, fftw_plan> cache_;
};

}  // namespace detail

/// A complex state sampled on a Grid (row-major physical representation).
class Field {
  public:
    Field() = default;
    explicit Field(GridPtr grid) : grid_(std::move(grid)), v_(grid_->size()) {}
    Field(GridPtr grid, std::vector<Complex> values) : grid_(std::move(grid)), v_(std::move(values)) {
        if (v_.size() != grid_->size()) throw std::invalid_argument("field size does not match grid");
    }

    const GridPtr& grid() const { return grid_; }
    std::size_t size() const { return v_.size(); }
    Complex& operator[](std::size_t i) { return v_[i]; }
    const Complex& operator[](std::size_t i) const { return v_[i]; }
    std::vector<Complex>& values() { return v_; }
    const std::vector<Complex>& values() const { return v_; }

    Field& operator+=(const Field& o) {
        check(o);
        for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
        return *this;
    }
    Field& operator-=(const Field& o) {
        check(o);
        for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
        return *this;
    }
    Field& operator*=(Complex c) {
        for (auto& x : v_) x *= c;
        return *this;
    }

    friend Field operator+(Field a, const Field& b) { return a += b; }
    friend Field operator-(Field a, const Field& b) { return a -= b; }
    friend Field operator*(Complex c, Field a) { return a *= c; }
    friend Field operator*(Field a, Complex c) { return a *= c; }

  private:
    void check(const Field& o) const {
        if (!grid_ || !o.grid_ || !grid_->compatible(*o.grid_))
            throw std::invalid_argument("field grids are incompatible");
    }
    GridPtr grid_;
    std::vector<Complex> v_;
};

/// Pointwise product a*b.
inline Field hadamard(const Field& a, const Field& b) {
    Field out(a.grid());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

inline Field conj(const Field& a) {
    Field out(a.grid());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::conj(a[i]);
    return out;
}

/// |a|^2 as a (real-valued) field.
inline Field abs2(const Field& a) {
    Field out(a.grid());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::norm(a[i]);
    return out;
}

/// Unitary forward transform: coefficients scaled by 1/sqrt(total points).
inline std::vector<Complex> transform(const Field& f) {
    std::vector<Complex> c = f.values();
    detail::FftPlans::instance().execute(*f.grid(), c.data(), FFTW_FORWARD);
    const double scale = 1.0 / std::sqrt(static_cast<double>(f.size()));
    for (auto& x : c) x *= scale;
    return c;
}

inline Field inverse_transform(const GridPtr& grid, std::vector<Complex> c) {
    if (c.size() != grid->size()) throw std::invalid_argument("coefficient size does not match grid");
    detail::FftPlans::instance().execute(*grid, c.data(), FFTW_BACKWARD);
    const double scale = 1.0 / std::sqrt(static_cast<double>(c.size()));
    for (auto& x : c) x *= scale;
    return Field(grid, std::move(c));
}

/// Applies a spectral symbol given per flat mode index.
inline Field apply_symbol(const Field& f, const std::function<Complex(std::size_t)>& symbol) {
    auto c = transform(f);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] *= symbol(i);
    return inverse_transform(f.grid(), std::move(c));
}

/// Rectangle-rule L^p norm: (h^dim sum |f|^p)^(1/p); max norm for p = inf.
inline double lp_norm(const Field& f, double p) {
    if (!(p >= 1)) throw std::invalid_argument("lp_norm requires p >= 1");
    if (std::isinf(p)) {
        double m = 0;
        for (const auto& x : f.values()) m = std::max(m, std::abs(x));
        return m;
    }
    double sum = 0;
    for (const auto& x : f.values()) sum += std::pow(std::abs(x), p);
    return std::pow(f.grid()->cell() * sum, 1.0 / p);
}

inline double lp_norm(const Field& f, const Exponent& p) {
    if (!p.lebesgue_valid()) throw std::invalid_argument("lp_norm requires p in [1,inf]");
    return lp_norm(f, p.as_double());
}

inline double l2_norm(const Field& f) { return lp_norm(f, 2.0); }

/// Discrete L^2 inner product <f,g> = h^dim sum f conj(g).
inline Complex inner(const Field& f, const Field& g) {
    Complex s = 0;
    for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * std::conj(g[i]);
    return f.grid()->cell() * s;
}

/// H^{+1} or H^{-1} norm via the spectral weight (1 + |k|^2)^{±1/2}.
inline double sobolev_norm(const Field& f, int order) {
    if (order != 1 && order != -1) throw std::invalid_argument("sobolev_norm order must be +1 or -1");
    const auto& g = *f.grid();
    auto c = transform(f);
    double sum = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double w = 1.0 + g.ksq(i);
        sum += std::norm(c[i]) * (order == 1 ? w : 1.0 / w);
    }
    return std::sqrt(g.cell() * sum);
}

inline std::vector<Field> gradient(const Field& f) {
    const auto& g = *f.grid();
    auto c = transform(f);
    std::vector<Field> out;
    out.reserve(g.dim());
    for (int a = 0; a < g.dim(); ++a) {
        auto ca = c;
        for (std::size_t i = 0; i < ca.size(); ++i) ca[i] *= Complex(0.0, g.k(a, i));
        out.push_back(inverse_transform(f.grid(), std::move(ca)));
    }
    return out;
}

inline Field laplacian(const Field& f) {
    const auto& g = *f.grid();
    auto c = transform(f);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] *= -g.ksq(i);
    return inverse_transform(f.grid(), std::move(c));
}

inline Field divergence(const std::vector<Field>& v) {
    const auto& g = *v.at(0).grid();
    if (static_cast<int>(v.size()) != g.dim()) throw std::invalid_argument("divergence: component count != dim");
    std::vector<Complex> acc(g.size(), Complex(0));
    for (int a = 0; a < g.dim(); ++a) {
        auto c = transform(v[a]);
        for (std::size_t i = 0; i < c.size(); ++i) acc[i] += Complex(0.0, g.k(a, i)) * c[i];
    }
    return inverse_transform(v[0].grid(), std::move(acc));
}

/// Leray projection onto divergence-free fields: v_hat -> v_hat - k (k.v_hat)/|k|^2,
/// mean mode untouched. In d = 1 this zeroes every nonconstant mode.
inline std::vector<Field> project_div_free(const std::vector<Field>& v) {
    const auto& g = *v.at(0).grid();
    if (static_cast<int>(v.size()) != g.dim()) throw std::invalid_argument("projection: component count != dim");
    std::vector<std::vector<Complex>> c;
    c.reserve(v.size());
    for (const auto& comp : v) c.push_back(transform(comp));
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double k2 = g.ksq(i);
        if (k2 == 0.0) continue;
        Complex kdotv = 0;
        for (int a = 0; a < g.dim(); ++a) kdotv += g.k(a, i) * c[a][i];
        for (int a = 0; a < g.dim(); ++a) c[a][i] -= g.k(a, i) * kdotv / k2;
    }
    std::vector<Field> out;
    out.reserve(v.size());
    for (int a = 0; a < g.dim(); ++a) out.push_back(inverse_transform(v[a].grid(), std::move(c[a])));
    return out;
}

/// Relative spectral divergence of a vector field (0 for divergence-free).
inline double relative_divergence(const std::vector<Field>& v) {
    double scale = 0;
    for (const auto& comp : v) scale += l2_norm(comp);
    if (scale == 0) return 0;
    return l2_norm(divergence(v)) / scale;
}

/// Samples a pointwise function of the coordinates.
inline Field sample(const GridPtr& grid, const std::function<Complex(const std::array<double, 3>&)>& fn) {
    Field f(grid);
    for (std::size_t i = 0; i < grid->size(); ++i) {
        std::array<double, 3> x{0, 0, 0};
        for (int a = 0; a < grid->dim(); ++a) x[a] = grid->coord(a, i);
        f[i] = fn(x);
    }
    return f;
}

/// Plane wave amp * exp(i k.x) for integer mode numbers (one per axis).
inline Field plane_wave(const GridPtr& grid, const std::array<int, 3>& modes, Complex amp = 1.0) {
    const double dk = 2.0 * std::numbers::pi / grid->length();
    return sample(grid, [&](const std::array<double, 3>& x) {
        double phase = 0;
        for (int a = 0; a < grid->dim(); ++a) phase += dk * modes[a] * x[a];
        return amp * std::exp(Complex(0.0, phase));
    });
}

/// Gaussian bump amp * exp(-|x - c|^2 / (2 w^2)) centered at c (box center by default).
inline Field gaussian(const GridPtr& grid, double width, double amp = 1.0,
                      std::array<double, 3> center = {-1, -1, -1}) {
    for (int a = 0; a < grid->dim(); ++a)
        if (center[a] < 0) center[a] = grid->length() / 2.0;
    return sample(grid, [&](const std::array<double, 3>& x) {
        double r2 = 0;
        for (int a = 0; a < grid->dim(); ++a) {
            double d = x[a] - center[a];
            // nearest periodic image
            d -= grid->length() * std::round(d / grid->length());
            r2 += d * d;
        }
        return Complex(amp * std::exp(-r2 / (2.0 * width * width)), 0.0);
    });
}

namespace detail {

/// Deterministic standard normals from the engine's specified raw output
/// (Box-Muller on 53-bit uniforms), so seeded corpora are reproducible
/// independently of the standard library's distribution implementations.
class NormalSource {
  public:
    explicit NormalSource(std::uint64_t seed) : rng_(seed) {}
    double operator()() {
        if (have_) {
            have_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_ = true;
        return r * std::cos(a);
    }

  private:
    double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
    std::mt19937_64 rng_;
    double spare_ = 0;
    bool have_ = false;
};

}  // namespace detail

/// Band-limited random field: independent complex Gaussian coefficients with
/// spectral envelope exp(-|k|^2/kcut^2), rescaled to the requested L^2 norm.
inline Field random_smooth_field(const GridPtr& grid, std::uint64_t seed, double kcut, double l2 = 1.0) {
    detail::NormalSource normal(seed);
    std::vector<Complex> c(grid->size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double env = std::exp(-grid->kfullsq(i) / (kcut * kcut));
        c[i] = env * Complex(normal(), normal());
    }
    Field f = inverse_transform(grid, std::move(c));
    const double nrm = l2_norm(f);
    if (nrm > 0) f *= Complex(l2 / nrm, 0.0);
    return f;
}

/// Real-valued variant (used by the quadratic-form positivity sweeps).
inline Field random_real_smooth_field(const GridPtr& grid, std::uint64_t seed, double kcut, double l2 = 1.0) {
    Field f = random_smooth_field(grid, seed, kcut, 1.0);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = Complex(f[i].real(), 0.0);
    const double nrm = l2_norm(f);
    if (nrm > 0) f *= Complex(l2 / nrm, 0.0);
    return f;
}

}  // namespace magnls
