#pragma once

#include "magnls/solver.hpp"

#include <cmath>
#include <vector>

namespace magnls {

/*
 * Conserved/dissipated quantities of the regularised flow and their balance
 * laws, evaluated on sampled trajectories:
 *
 *   dM/dt = -2 eps ||(nabla - iA)u||_2^2
 *   dE/dt = -eps ||(nabla - iA)^2 u||_2^2 - eps R(u) + S(u)
 *
 * with R >= 0 (its four-term expansion is manifestly nonnegative once the
 * Hartree pieces are evaluated through the positive Riesz weight) and the
 * Groenwall weight Lambda controlling |S| <= Lambda (1 + E). Residuals use
 * central differences on the stored instants, endpoints skipped.
 */

inline double mass(const Field& u) { return std::pow(l2_norm(u), 2); }

/// E(u) = 1/2 ||(nabla-iA)u||_2^2 + l1/(g+1) ||u||_{g+1}^{g+1}
///        + l2/4 int (|x|^-a * |u|^2)|u|^2. For general couplings the
/// potential terms carry their lambda weights so the balance law stays exact.
inline double energy(const Field& u, const VectorField& A, const NonlinearitySpec& spec) {
    const double g = spec.gamma_value();
    double e = 0.5 * magnetic_gradient_norm_sq(u, A);
    if (spec.lambda1 != 0.0)
        e += spec.lambda1 / (g + 1.0) * std::pow(lp_norm(u, g + 1.0), g + 1.0);
    if (spec.lambda2 != 0.0)
        e += spec.lambda2 / 4.0 * hartree_quadratic_form(abs2(u), *u.grid(), spec.alpha_value());
    return e;
}

struct RTerms {
    double power_grad = 0.0;     // int |u|^{g-1} |(nabla-iA)u|^2
    double power_modgrad = 0.0;  // (g-1) int |u|^{g-1} |grad|u||^2
    double hartree_grad = 0.0;   // int (|x|^-a * |u|^2) |(nabla-iA)u|^2
    double hartree_conv = 0.0;   // 1/2 int (|x|^-a * grad|u|^2) . grad|u|^2
    double total = 0.0;
    double scale = 0.0;          // sum of magnitudes, for relative tolerances
};

/// The dissipation functional R(u)(lambda-weighted consistently with N),
/// each of the four displayed terms reported separately.
inline RTerms r_functional(const Field& u, const VectorField& A, const NonlinearitySpec& spec,
                           double delta = 1e-8) {
    RTerms out;
    const auto& grid = *u.grid();
    const double cell = grid.cell();
    const double g = spec.gamma_value();

    Field du2(u.grid());  // |(nabla - iA)u|^2
    {
        const auto dg = magnetic_gradient(u, A);
        for (std::size_t i = 0; i < u.size(); ++i) {
            double s = 0;
            for (int a = 0; a < grid.dim(); ++a) s += std::norm(dg[a][i]);
            du2[i] = s;
        }
    }

    if (spec.lambda1 != 0.0) {
        double t1 = 0, t2 = 0;
        Field mod(u.grid());
        for (std::size_t i = 0; i < u.size(); ++i) mod[i] = std::sqrt(std::norm(u[i]) + delta * delta);
        const auto gm = gradient(mod);
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double w = std::pow(std::norm(u[i]), (g - 1.0) / 2.0);
            double gm2 = 0;
            for (int a = 0; a < grid.dim(); ++a) gm2 += std::norm(gm[a][i]);
            t1 += w * du2[i].real();
            t2 += w * gm2;
        }
        out.power_grad = spec.lambda1 * cell * t1;
        out.power_modgrad = spec.lambda1 * (g - 1.0) * cell * t2;
    }

    if (spec.lambda2 != 0.0) {
        const Field conv = hartree_potential(u, NonlinearitySpec{spec.gamma, spec.alpha, 0.0, 1.0});
        double t3 = 0;
        for (std::size_t i = 0; i < u.size(); ++i) t3 += conv[i].real() * du2[i].real();
        out.hartree_grad = spec.lambda2 * cell * t3;

        // fourth term spectrally: 1/2 sum_a QF(d_a |u|^2) >= 0 by weight positivity
        double t4 = 0;
        for (const auto& d : gradient(abs2(u)))
            t4 += hartree_quadratic_form(d, grid, spec.alpha_value());
        out.hartree_conv = spec.lambda2 * 0.5 * t4;
    }

    out.total = out.power_grad + out.power_modgrad + out.hartree_grad + out.hartree_conv;
    out.scale = std::abs(out.power_grad) + std::abs(out.power_modgrad) + std::abs(out.hartree_grad) +
                std::abs(out.hartree_conv);
    return out;
}

/// S(u) = int A.(dtA) |u|^2 + (dtA) . Im(u conj(grad u)) dx.
inline double s_functional(const Field& u, const VectorField& A, const VectorField& dtA) {
    const auto& grid = *u.grid();
    const auto g = gradient(u);
    double acc = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        double adot = 0, flux = 0;
        for (int a = 0; a < grid.dim(); ++a) {
            adot += A[a][i].real() * dtA[a][i].real();
            flux += dtA[a][i].real() * std::imag(u[i] * std::conj(g[a][i]));
        }
        acc += adot * std::norm(u[i]) + flux;
    }
    return grid.cell() * acc;
}

inline double s_functional(const Field& u, const PotentialSpec& A, double t) {
    if (!A.has_time_derivative_data())
        throw std::invalid_argument("s_functional: potential lacks time-derivative data");
    if (A.is_zero() || !A.time_dependent()) return 0.0;
    return s_functional(u, A.sample(t, u.grid()), A.sample_dt(t, u.grid()));
}

/// Groenwall weight Lambda(t) = (sum_j ||dtA_j||_{b_j}) (1 + sum_j ||A_j||_{b_j}).
inline double lambda_gronwall(const PotentialSpec& A, double t, const GridPtr& grid) {
    if (A.is_zero()) return 0.0;
    if (!A.has_time_derivative_data())
        throw std::invalid_argument("lambda_gronwall: potential lacks time-derivative data");
    double dt_part = 0.0, a_part = 0.0;
    for (std::size_t j = 0; j < A.components().size(); ++j) {
        const auto& b = A.components()[j].cls.b;
        dt_part += lb_norm(A.sample_component_dt(static_cast<int>(j), t, grid), b);
        a_part += lb_norm(A.sample_component(static_cast<int>(j), t, grid), b);
    }
    return dt_part * (1.0 + a_part);
}

/// |dM/dt + 2 eps ||(nabla-iA)u||_2^2| at the interior instants.
inline std::vector<double> mass_identity_residual(const Trajectory& traj, const PotentialSpec& A,
                                                  double eps) {
    std::vector<double> res;
    if (traj.states.size() < 3) return res;
    const double dt = traj.dt();
    std::vector<double> m(traj.states.size());
    for (std::size_t j = 0; j < traj.states.size(); ++j) m[j] = mass(traj.states[j]);
    for (std::size_t j = 1; j + 1 < traj.states.size(); ++j) {
        const double dmdt = (m[j + 1] - m[j - 1]) / (2.0 * dt);
        const double diss =
            2.0 * eps * magnetic_gradient_norm_sq(traj.states[j], A.sample(traj.times[j], traj.states[j].grid()));
        res.push_back(std::abs(dmdt + diss));
    }
    return res;
}

/// |dE/dt + eps ||(nabla-iA)^2 u||_2^2 + eps R(u) - S(u)| at the interior instants.
inline std::vector<double> energy_balance_residual(const Trajectory& traj, const PotentialSpec& A,
                                                   const SolverConfig& cfg) {
    std::vector<double> res;
    if (traj.states.size() < 3) return res;
    const double dt = traj.dt();
    const auto& grid = traj.states[0].grid();
    std::vector<double> e(traj.states.size());
    for (std::size_t j = 0; j < traj.states.size(); ++j)
        e[j] = energy(traj.states[j], A.sample(traj.times[j], grid), cfg.nonlinearity);
    for (std::size_t j = 1; j + 1 < traj.states.size(); ++j) {
        const VectorField a = A.sample(traj.times[j], grid);
        const double dedt = (e[j + 1] - e[j - 1]) / (2.0 * dt);
        const double bilap = std::pow(l2_norm(magnetic_laplacian(traj.states[j], a)), 2);
        const double r = r_functional(traj.states[j], a, cfg.nonlinearity).total;
        const double s = (A.time_dependent() && A.has_time_derivative_data())
                             ? s_functional(traj.states[j], A, traj.times[j])
                             : 0.0;
        res.push_back(std::abs(dedt + cfg.epsilon * bilap + cfg.epsilon * r - s));
    }
    return res;
}

/// Per-instant series of every tracked quantity plus the dissipation budget.
struct DiagnosticsRecord {
    std::vector<double> times;
    std::vector<double> mass_series;
    std::vector<double> energy_series;
    std::vector<double> h1_series;
    std::vector<double> magnetic_h1_series;
    std::vector<double> r_series;
    std::vector<double> s_series;
    std::vector<double> lambda_series;
    std::vector<double> bilap_sq_series;     // ||(nabla-iA)^2 u||_2^2
    std::vector<double> l6l18_running;
    std::vector<double> x43_running;
    double r_integral = 0.0;   // trapezoid over r_series
    double budget = 0.0;       // eps * r_integral
};

inline DiagnosticsRecord compute_diagnostics(const Trajectory& traj, const PotentialSpec& A,
                                             const SolverConfig& cfg) {
    DiagnosticsRecord rec;
    rec.times = traj.times;
    const std::size_t n = traj.states.size();
    if (n == 0) return rec;
    const auto& grid = traj.states[0].grid();
    const double dt = traj.dt();
    const bool have_s = A.time_dependent() && A.has_time_derivative_data();

    double l6_acc = 0.0, l4_acc = 0.0, h1_sup = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const Field& u = traj.states[j];
        const VectorField a = A.sample(traj.times[j], grid);
        rec.mass_series.push_back(mass(u));
        rec.energy_series.push_back(energy(u, a, cfg.nonlinearity));
        rec.h1_series.push_back(sobolev_norm(u, 1));
        rec.magnetic_h1_series.push_back(magnetic_h1_norm(u, a));
        rec.r_series.push_back(r_functional(u, a, cfg.nonlinearity).total);
        rec.s_series.push_back(have_s ? s_functional(u, A, traj.times[j]) : 0.0);
        rec.lambda_series.push_back(have_s ? lambda_gronwall(A, traj.times[j], grid) : 0.0);
        rec.bilap_sq_series.push_back(std::pow(l2_norm(magnetic_laplacian(u, a)), 2));

        h1_sup = std::max(h1_sup, rec.h1_series.back());
        if (j + 1 < n) {
            l6_acc += dt * std::pow(lp_norm(u, 18.0), 6.0);
            l4_acc += dt * std::pow(w1p_norm(u, 3.0), 4.0);
        }
        rec.l6l18_running.push_back(std::pow(l6_acc, 1.0 / 6.0));
        rec.x43_running.push_back(h1_sup + std::pow(l4_acc, 0.25));
    }
    for (std::size_t j = 0; j + 1 < n; ++j)
        rec.r_integral += 0.5 * dt * (rec.r_series[j] + rec.r_series[j + 1]);
    rec.budget = cfg.epsilon * rec.r_integral;
    return rec;
}

/// (int_0^T R dt, eps * int_0^T R dt) from a computed record.
inline std::pair<double, double> dissipation_budget(const DiagnosticsRecord& rec, double eps) {
    return {rec.r_integral, eps * rec.r_integral};
}

}  // namespace magnls
