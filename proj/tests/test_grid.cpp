#include "magnls/grid.hpp"

#include "support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace magnls;

namespace {
const GridPtr g1 = make_grid(1, 128, 32.0);
const GridPtr g2 = make_grid(2, 32, 16.0);
const GridPtr g3 = make_grid(3, 16, 8.0);
}  // namespace

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(make_grid(4, 16, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(1, 12, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(1, 4, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(1, 16, -1.0), std::invalid_argument);
    CHECK(g3->size() == 16 * 16 * 16);
    CHECK(g1->spacing() == Catch::Approx(0.25));
}

TEST_CASE("transform basics") {
    // constant field: all energy in the mean mode
    Field c(g1);
    for (auto& v : c.values()) v = Complex(2.0, -1.0);
    auto coeffs = transform(c);
    CHECK(std::abs(coeffs[0] - std::sqrt(128.0) * Complex(2.0, -1.0)) < 1e-12);
    for (std::size_t i = 1; i < coeffs.size(); ++i) CHECK(std::abs(coeffs[i]) < 1e-12);

    // a single plane wave populates a single coefficient
    Field pw = plane_wave(g1, {5, 0, 0});
    coeffs = transform(pw);
    std::size_t nonzero = 0;
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        if (std::abs(coeffs[i]) > 1e-9) ++nonzero;
    CHECK(nonzero == 1);
    CHECK(std::abs(coeffs[5]) == Catch::Approx(std::sqrt(128.0)));

    // round trip on a random field
    Field r = random_smooth_field(g2, 7, 2.0);
    Field rt = inverse_transform(g2, transform(r));
    CHECK(l2_norm(rt - r) / l2_norm(r) < 1e-12);
}

TEST_CASE("lp norms") {
    Field c(g1);
    for (auto& v : c.values()) v = Complex(3.0, 4.0);  // |c| = 5
    const double vol = g1->volume();
    CHECK(lp_norm(c, 2.0) == Catch::Approx(5.0 * std::sqrt(vol)));
    CHECK(lp_norm(c, Exponent::infinity()) == Catch::Approx(5.0));
    CHECK(lp_norm(c, 1.0) == Catch::Approx(5.0 * vol));

    // sampled Gaussian against the closed-form integral, N = 128, d = 1
    const double w = 1.3;
    Field gss = gaussian(g1, w);
    const double exact = std::sqrt(w * std::sqrt(std::numbers::pi));  // (int e^{-x^2/w^2})^{1/2}
    CHECK(std::abs(lp_norm(gss, 2.0) - exact) < 1e-8);

    CHECK_THROWS_AS(lp_norm(c, 0.5), std::invalid_argument);
}

TEST_CASE("parseval") {
    Field r = random_smooth_field(g1, 3, 3.0);
    auto coeffs = transform(r);
    double spectral = 0;
    for (const auto& x : coeffs) spectral += std::norm(x);
    spectral *= g1->cell();
    CHECK(std::abs(std::pow(lp_norm(r, 2.0), 2) - spectral) < 1e-12 * spectral);
}

TEST_CASE("spectral derivatives") {
    // plane wave is an eigenfunction of the gradient
    const double k = 2.0 * std::numbers::pi * 5 / g1->length();
    Field pw = plane_wave(g1, {5, 0, 0});
    auto grad = gradient(pw);
    Field expected = pw;
    expected *= Complex(0.0, k);
    CHECK(l2_norm(grad[0] - expected) < 1e-10);

    // laplacian of a constant vanishes
    Field c(g2);
    for (auto& v : c.values()) v = 1.0;
    CHECK(l2_norm(laplacian(c)) < 1e-12);

    // laplacian of a sampled Gaussian against the analytic formula
    const double w = 1.5;
    Field gss = gaussian(g1, w);
    Field lap = laplacian(gss);
    const double c0 = g1->length() / 2.0;
    double sup = 0;
    for (std::size_t i = 0; i < gss.size(); ++i) {
        const double x = g1->coord(0, i) - c0;
        const double exact = (x * x / (w * w) - 1.0) / (w * w) * std::exp(-x * x / (2 * w * w));
        sup = std::max(sup, std::abs(lap[i].real() - exact));
    }
    CHECK(sup < 1e-8);

    // div(grad f) == lap f, spectrally exact
    Field r = random_smooth_field(g2, 11, 3.0);
    CHECK(l2_norm(divergence(gradient(r)) - laplacian(r)) < 1e-10 * std::max(1.0, l2_norm(laplacian(r))));
}

TEST_CASE("sobolev norms") {
    Field c(g1);
    for (auto& v : c.values()) v = Complex(0.0, 2.0);
    const double l2 = 2.0 * std::sqrt(g1->volume());
    CHECK(sobolev_norm(c, 1) == Catch::Approx(l2));
    CHECK(sobolev_norm(c, -1) == Catch::Approx(l2));

    const double k = 2.0 * std::numbers::pi * 7 / g1->length();
    Field pw = plane_wave(g1, {7, 0, 0}, Complex(1.5, 0.0));
    CHECK(sobolev_norm(pw, 1) == Catch::Approx(std::sqrt(1 + k * k) * 1.5 * std::sqrt(g1->volume())));

    Field r = random_smooth_field(g1, 17, 3.0);
    CHECK(sobolev_norm(r, -1) <= l2_norm(r) * (1 + 1e-12));
    CHECK(l2_norm(r) <= sobolev_norm(r, 1) * (1 + 1e-12));
}

TEST_CASE("leray projection") {
    // analytic divergence-free field is unchanged
    std::vector<Field> df;
    df.push_back(sample(g2, [&](const std::array<double, 3>& x) {
        return Complex(-std::sin(2 * std::numbers::pi * x[1] / g2->length()), 0.0);
    }));
    df.push_back(sample(g2, [&](const std::array<double, 3>& x) {
        return Complex(std::sin(2 * std::numbers::pi * x[0] / g2->length()), 0.0);
    }));
    auto proj = project_div_free(df);
    CHECK(l2_norm(proj[0] - df[0]) < 1e-12);
    CHECK(l2_norm(proj[1] - df[1]) < 1e-12);

    // a pure gradient projects to its mean
    Field phi = random_smooth_field(g2, 23, 2.0);
    auto gphi = gradient(phi);
    auto pg = project_div_free(gphi);
    for (const auto& comp : pg) {
        auto coeffs = transform(comp);
        double off_mean = 0;
        for (std::size_t i = 1; i < coeffs.size(); ++i) off_mean += std::norm(coeffs[i]);
        CHECK(std::sqrt(off_mean) < 1e-10);
    }

    // random vector field: output divergence-free, projection idempotent & self-adjoint
    std::vector<Field> v, w;
    for (int a = 0; a < 2; ++a) {
        v.push_back(random_smooth_field(g2, 100 + a, 3.0));
        w.push_back(random_smooth_field(g2, 200 + a, 3.0));
    }
    auto pv = project_div_free(v);
    CHECK(relative_divergence(pv) < 1e-10);
    auto ppv = project_div_free(pv);
    for (int a = 0; a < 2; ++a) CHECK(l2_norm(ppv[a] - pv[a]) < 1e-12 * std::max(1.0, l2_norm(pv[a])));
    auto pw = project_div_free(w);
    Complex lhs = 0, rhs = 0;
    for (int a = 0; a < 2; ++a) {
        lhs += inner(pv[a], w[a]);
        rhs += inner(v[a], pw[a]);
    }
    CHECK(std::abs(lhs - rhs) < 1e-10 * std::abs(lhs + rhs + 1.0));

    // d = 1: divergence-free forces the mean mode
    std::vector<Field> one{random_smooth_field(g1, 5, 2.0)};
    auto pone = project_div_free(one);
    auto coeffs = transform(pone[0]);
    for (std::size_t i = 1; i < coeffs.size(); ++i) CHECK(std::abs(coeffs[i]) < 1e-12);
}

TEST_CASE("3d round trip and derivatives") {
    Field r = random_smooth_field(g3, 42, 2.0);
    CHECK(l2_norm(inverse_transform(g3, transform(r)) - r) < 1e-12 * l2_norm(r));
    Field pw = plane_wave(g3, {1, 2, 3});
    auto grad = gradient(pw);
    const double dk = 2 * std::numbers::pi / g3->length();
    for (int a = 0; a < 3; ++a) {
        Field expected = pw;
        expected *= Complex(0.0, dk * (a == 0 ? 1 : a == 1 ? 2 : 3));
        CHECK(l2_norm(grad[a] - expected) < 1e-9);
    }
}
