#pragma once

#include "magnls/diagnostics.hpp"

#include <cmath>
#include <future>
#include <stdexcept>
#include <vector>

namespace magnls {

/// One solve per viscosity value on a shared grid, datum, potential and time
/// base, plus the pairwise Cauchy table and the weak-formulation residuals.
struct FamilyResult {
    std::vector<double> epsilons;                 // strictly decreasing
    std::vector<Trajectory> trajectories;
    std::vector<DiagnosticsRecord> records;
    std::vector<std::vector<double>> cauchy;      // sup-in-time L^2 differences, full table
    std::vector<std::vector<double>> residuals;   // weak residual series per member
};

/// Discrete H^-1 residual of the unregularised equation along a trajectory:
/// || i du/dt + (nabla-iA)^2 u - N(u) ||_{H^-1} / (1 + ||u||_{H^1}) at the
/// interior instants (central difference in time). Along an eps > 0 solve
/// this is the viscous defect eps (nabla-iA)^2 u up to O(dt^2).
inline std::vector<double> weak_residual(const Trajectory& traj, const PotentialSpec& A,
                                         const NonlinearitySpec& spec) {
    std::vector<double> res;
    if (traj.states.size() < 3) return res;
    const double dt = traj.dt();
    const auto& grid = traj.states[0].grid();
    for (std::size_t j = 1; j + 1 < traj.states.size(); ++j) {
        Field dudt = traj.states[j + 1] - traj.states[j - 1];
        dudt *= Complex(0.0, 1.0 / (2.0 * dt));  // i du/dt
        Field lhs = dudt + magnetic_laplacian(traj.states[j], A.sample(traj.times[j], grid));
        lhs -= nonlinearity(traj.states[j], spec);
        res.push_back(sobolev_norm(lhs, -1) / (1.0 + sobolev_norm(traj.states[j], 1)));
    }
    return res;
}

inline FamilyResult run_family(const Field& f, const PotentialSpec& A, double T,
                               const std::vector<double>& epsilons, const SolverConfig& base) {
    if (epsilons.empty()) throw std::invalid_argument("run_family: need at least one epsilon");
    for (std::size_t i = 0; i + 1 < epsilons.size(); ++i)
        if (!(epsilons[i] > epsilons[i + 1]))
            throw std::invalid_argument("run_family: epsilons must be strictly decreasing");
    if (!(epsilons.back() > 0)) throw std::invalid_argument("run_family: epsilons must be positive");

    FamilyResult fam;
    fam.epsilons = epsilons;
    std::vector<std::future<Trajectory>> jobs;
    jobs.reserve(epsilons.size());
    for (double eps : epsilons) {
        SolverConfig cfg = base;
        cfg.epsilon = eps;
        jobs.push_back(std::async(std::launch::async,
                                  [f, &A, T, cfg] { return solve_global(f, T, A, cfg); }));
    }
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        fam.trajectories.push_back(jobs[i].get());
        SolverConfig cfg = base;
        cfg.epsilon = epsilons[i];
        fam.records.push_back(compute_diagnostics(fam.trajectories.back(), A, cfg));
        fam.residuals.push_back(weak_residual(fam.trajectories.back(), A, base.nonlinearity));
    }

    const std::size_t m = fam.trajectories.size();
    fam.cauchy.assign(m, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const std::size_t shared =
                std::min(fam.trajectories[i].states.size(), fam.trajectories[j].states.size());
            double sup = 0.0;
            for (std::size_t s = 0; s < shared; ++s)
                sup = std::max(sup, l2_norm(fam.trajectories[i].states[s] - fam.trajectories[j].states[s]));
            fam.cauchy[i][j] = fam.cauchy[j][i] = sup;
        }
    }
    return fam;
}

struct LimitReport {
    int candidate = 0;                   // index of the smallest-eps member
    std::vector<double> tail_cauchy;     // consecutive-pair differences
    bool tail_decreasing = false;
    double residual_slope = 0.0;         // fitted slope of max weak residual vs eps
    double mass_bound = 0.0;             // sup over family and time
    double energy_bound = 0.0;
    double h1_bound = 0.0;
    double prefix_agreement = -1.0;      // sup-t L^2 gap between the [0,T] and [0,2T] re-runs
};

/// Designates the smallest-eps member as the limit candidate and summarises
/// the family: tail Cauchy differences, the weak-residual trend in eps,
/// uniform mass/energy/H^1 bounds, and the unit-slab continuation check
/// (re-running the candidate over [0, prefix_T] and [0, 2 prefix_T] must agree
/// on the shared prefix).
inline LimitReport limit_report(const FamilyResult& fam, const Field& f, const PotentialSpec& A,
                                const SolverConfig& base, double prefix_T = 1.0) {
    if (fam.epsilons.size() < 3)
        throw std::invalid_argument("limit_report: need at least three family members");
    LimitReport rep;
    rep.candidate = static_cast<int>(fam.epsilons.size()) - 1;

    for (std::size_t i = 0; i + 1 < fam.epsilons.size(); ++i)
        rep.tail_cauchy.push_back(fam.cauchy[i][i + 1]);
    rep.tail_decreasing = true;
    for (std::size_t i = 0; i + 1 < rep.tail_cauchy.size(); ++i)
        if (rep.tail_cauchy[i + 1] >= rep.tail_cauchy[i]) rep.tail_decreasing = false;

    std::vector<double> eps_pts, res_pts;
    for (std::size_t i = 0; i < fam.epsilons.size(); ++i) {
        double peak = 0.0;
        for (double r : fam.residuals[i]) peak = std::max(peak, r);
        if (peak > 0) {
            eps_pts.push_back(fam.epsilons[i]);
            res_pts.push_back(peak);
        }
    }
    if (eps_pts.size() >= 2) rep.residual_slope = detail::fit_loglog_slope(eps_pts, res_pts);

    for (const auto& rec : fam.records) {
        for (double v : rec.mass_series) rep.mass_bound = std::max(rep.mass_bound, v);
        for (double v : rec.energy_series) rep.energy_bound = std::max(rep.energy_bound, v);
        for (double v : rec.h1_series) rep.h1_bound = std::max(rep.h1_bound, v);
    }

    SolverConfig cfg = base;
    cfg.epsilon = fam.epsilons.back();
    const Trajectory short_run = solve_global(f, prefix_T, A, cfg);
    const Trajectory long_run = solve_global(f, 2.0 * prefix_T, A, cfg);
    double gap = 0.0;
    for (std::size_t j = 0; j < short_run.states.size() && j < long_run.states.size(); ++j)
        gap = std::max(gap, l2_norm(short_run.states[j] - long_run.states[j]));
    rep.prefix_agreement = gap;
    return rep;
}

}  // namespace magnls
