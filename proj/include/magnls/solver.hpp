#pragma once

#include "magnls/magnetic.hpp"
#include "magnls/nonlinear.hpp"
#include "magnls/propagate.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace magnls {

/*
 * Time integration of the regularised equation
 *
 *     d/dt u = (i+eps)(nabla - iA)^2 u - i N(u)
 *
 * with two independent schemes:
 *
 *  - picard: per short slab, iterate the solution map
 *        (Phi u)(t) = e^{(i+eps)t Lap} f
 *                   - (i+eps) int_0^t e^{(i+eps)(t-s) Lap} (2iA.grad + |A|^2) u(s) ds
 *                   - i       int_0^t e^{(i+eps)(t-s) Lap} N(u)(s) ds
 *    from the free-flow initial guess until the fixed point is reached in the
 *    discrete sup-in-time H^1 norm. The Duhamel integrals use composite
 *    midpoint with exact inter-node propagation, assembled incrementally node
 *    by node (second order in the node spacing). A slab that fails to
 *    contract is halved and re-solved, up to 20 halvings.
 *
 *  - strang: half-step exact multiplier for (i+eps) Lap, full RK4 step of the
 *    remainder d/dt u = (i+eps)(-2iA.grad u - |A|^2 u) - i N(u), half-step
 *    multiplier; second order in dt. Used as the cross-validation reference.
 */

enum class Scheme { picard, strang };
enum class Termination { completed, blowup_detected, contraction_failed };

inline std::string to_string(Termination t) {
    switch (t) {
        case Termination::completed: return "completed";
        case Termination::blowup_detected: return "blowup_detected";
        default: return "contraction_failed";
    }
}

struct Monitors {
    double h1_blowup_threshold = 1e3;
    double l6l18_threshold = 1e3;
    double eta0 = 1e-2;  // critical smallness parameter
};

struct SolverConfig {
    double epsilon = 0.1;
    NonlinearitySpec nonlinearity{};
    Scheme scheme = Scheme::picard;
    double slab_length = 0.0625;
    double picard_tol = 1e-10;
    int picard_max_iter = 50;
    int substeps = 16;          // sub-intervals per slab; even, so halving keeps the nodes
    double strang_dt = 2.5e-4;
    Monitors monitors{};

    void validate() const {
        if (!(epsilon >= 0)) throw std::invalid_argument("epsilon must be nonnegative");
        if (!(slab_length > 0)) throw std::invalid_argument("slab_length must be positive");
        if (!(picard_tol > 0)) throw std::invalid_argument("picard_tol must be positive");
        if (picard_max_iter < 2) throw std::invalid_argument("picard_max_iter must be >= 2");
        if (substeps < 2 || substeps % 2 != 0) throw std::invalid_argument("substeps must be even and >= 2");
        if (!(strang_dt > 0)) throw std::invalid_argument("strang_dt must be positive");
        nonlinearity.validate();
    }
};

struct PicardStats {
    int iterations = 0;
    double first_ratio = 0.0;     // ||delta_2|| / ||delta_1||, the observed contraction ratio
    double final_residual = 0.0;  // relative L^inf_t H^1_x fixed-point residual
    int halvings = 0;
    bool contracted = true;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Field> states;
    std::vector<PicardStats> slab_stats;
    Termination termination = Termination::completed;
    double termination_time = 0.0;

    double dt() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
};

/// ||u||_{W^{1,p}} = ||u||_p + || |grad u| ||_p.
inline double w1p_norm(const Field& u, double p) {
    Field mag(u.grid());
    const auto g = gradient(u);
    for (std::size_t i = 0; i < u.size(); ++i) {
        double s = 0;
        for (int a = 0; a < u.grid()->dim(); ++a) s += std::norm(g[a][i]);
        mag[i] = std::sqrt(s);
    }
    return lp_norm(u, p) + lp_norm(mag, p);
}

inline double sup_h1(const Trajectory& traj) {
    double m = 0;
    for (const auto& u : traj.states) m = std::max(m, sobolev_norm(u, 1));
    return m;
}

/// Rectangle-rule L^q-in-time norm of a per-instant spatial norm.
inline double time_lq_norm(const Trajectory& traj, double q,
                           const std::function<double(const Field&)>& spatial) {
    const double dt = traj.dt();
    double acc = 0;
    for (std::size_t j = 0; j + 1 < traj.states.size(); ++j) acc += dt * std::pow(spatial(traj.states[j]), q);
    return std::pow(acc, 1.0 / q);
}

inline double l4w13_norm(const Trajectory& traj) {
    return time_lq_norm(traj, 4.0, [](const Field& u) { return w1p_norm(u, 3.0); });
}

/// Discrete stand-in for the contraction-space norm: sup_t H^1 + L^4_t W^{1,3}_x.
inline double x43_norm(const Trajectory& traj) { return sup_h1(traj) + l4w13_norm(traj); }

inline double l6l18_norm(const Trajectory& traj) {
    return time_lq_norm(traj, 6.0, [](const Field& u) { return lp_norm(u, 18.0); });
}

namespace detail {

/// Midpoint samples of A over the node mesh (empty when A vanishes).
struct SlabContext {
    double t0, dt;
    int n;
    double eps;
    const NonlinearitySpec* nl;
    bool use_nl;
    std::vector<VectorField> a_mid;  // A at the interval midpoints
    bool has_a = false;
};

inline SlabContext make_slab_context(double t0, double t1, int n, const PotentialSpec& A,
                                     const SolverConfig& cfg, bool use_nl, const GridPtr& grid) {
    SlabContext ctx{t0, (t1 - t0) / n, n, cfg.epsilon, &cfg.nonlinearity, use_nl, {}, !A.is_zero()};
    if (ctx.has_a) {
        ctx.a_mid.reserve(n);
        for (int j = 0; j < n; ++j) ctx.a_mid.push_back(A.sample(t0 + (j + 0.5) * ctx.dt, grid));
    }
    return ctx;
}

/// -(i+eps)(2iA.grad + |A|^2)u - i N(u) at interval midpoint j.
inline Field slab_source(const SlabContext& ctx, const Field& u_mid, int j) {
    Field s(u_mid.grid());
    if (ctx.has_a) {
        s = magnetic_perturbation(u_mid, ctx.a_mid[j]);
        s *= Complex(-ctx.eps, -1.0);  // -(i+eps)
    }
    if (ctx.use_nl && !ctx.nl->trivial()) {
        Field n = nonlinearity(u_mid, *ctx.nl);
        n *= Complex(0.0, -1.0);
        s += n;
    }
    return s;
}

}  // namespace detail

/// One sweep of the solution map over a slab: given the current iterate at the
/// n+1 uniform nodes of [t0,t1], returns Phi(u) at the same nodes. Midpoint
/// values of the iterate are linear interpolants of adjacent nodes.
inline std::vector<Field> apply_solution_map(const std::vector<Field>& u_nodes, double t0, double t1,
                                             const Field& f, const PotentialSpec& A,
                                             const SolverConfig& cfg, bool include_nonlinearity = true) {
    if (u_nodes.size() < 2) throw std::invalid_argument("apply_solution_map: need at least two nodes");
    const int n = static_cast<int>(u_nodes.size()) - 1;
    auto ctx = detail::make_slab_context(t0, t1, n, A, cfg, include_nonlinearity, f.grid());
    std::vector<Field> phi;
    phi.reserve(u_nodes.size());
    phi.push_back(f);
    for (int j = 0; j < n; ++j) {
        Field next = hs_flow(phi.back(), ctx.dt, ctx.eps);
        if (ctx.has_a || (ctx.use_nl && !ctx.nl->trivial())) {
            Field u_mid = u_nodes[j] + u_nodes[j + 1];
            u_mid *= Complex(0.5, 0.0);
            Field g = detail::slab_source(ctx, u_mid, j);
            g *= Complex(ctx.dt, 0.0);
            next += hs_flow(g, ctx.dt / 2.0, ctx.eps);
        }
        phi.push_back(std::move(next));
    }
    return phi;
}

namespace detail {

inline double sup_h1_diff(const std::vector<Field>& a, const std::vector<Field>& b) {
    double m = 0;
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, sobolev_norm(a[j] - b[j], 1));
    return m;
}

inline double sup_h1_nodes(const std::vector<Field>& a) {
    double m = 0;
    for (const auto& u : a) m = std::max(m, sobolev_norm(u, 1));
    return m;
}

struct SlabResult {
    std::vector<Field> nodes;  // cfg.substeps + 1 values at the nominal node times
    PicardStats stats;
};

inline SlabResult solve_slab_nodes(const Field& f, double t0, double t1, const PotentialSpec& A,
                                   const SolverConfig& cfg, bool use_nl, int depth) {
    const int n = cfg.substeps;
    std::vector<Field> iterate;
    iterate.reserve(n + 1);
    for (int j = 0; j <= n; ++j) iterate.push_back(hs_flow(f, (t1 - t0) * j / n, cfg.epsilon));

    PicardStats stats;
    double prev_delta = -1.0;
    bool converged = false;
    bool diverging = false;
    for (int m = 0; m < cfg.picard_max_iter; ++m) {
        std::vector<Field> next = apply_solution_map(iterate, t0, t1, f, A, cfg, use_nl);
        const double delta = sup_h1_diff(next, iterate);
        const double scale = std::max(sup_h1_nodes(next), 1e-300);
        ++stats.iterations;
        if (prev_delta > 0 && stats.first_ratio == 0.0) stats.first_ratio = delta / prev_delta;
        iterate = std::move(next);
        stats.final_residual = delta / scale;
        if (stats.final_residual < cfg.picard_tol) {
            converged = true;
            break;
        }
        if (prev_delta > 0 && delta >= prev_delta && m >= 2) {
            diverging = true;
            break;
        }
        prev_delta = delta;
    }

    if (converged || (!diverging && stats.final_residual < cfg.picard_tol)) {
        SlabResult res;
        res.nodes = std::move(iterate);
        res.stats = stats;
        return res;
    }

    // shrink the slab and recurse; nominal nodes are every other refined node
    if (depth >= 20) {
        SlabResult res;
        res.nodes = std::move(iterate);
        res.stats = stats;
        res.stats.contracted = false;
        return res;
    }
    const double tm = 0.5 * (t0 + t1);
    SlabResult left = solve_slab_nodes(f, t0, tm, A, cfg, use_nl, depth + 1);
    if (!left.stats.contracted) return left;
    SlabResult right = solve_slab_nodes(left.nodes.back(), tm, t1, A, cfg, use_nl, depth + 1);
    SlabResult res;
    res.nodes.reserve(n + 1);
    for (int j = 0; j <= n; j += 2) res.nodes.push_back(std::move(left.nodes[j]));
    for (int j = 2; j <= n; j += 2) res.nodes.push_back(std::move(right.nodes[j]));
    res.stats.iterations = stats.iterations + left.stats.iterations + right.stats.iterations;
    res.stats.first_ratio = std::max(left.stats.first_ratio, right.stats.first_ratio);
    res.stats.final_residual = std::max(left.stats.final_residual, right.stats.final_residual);
    res.stats.halvings = 1 + std::max(left.stats.halvings, right.stats.halvings);
    res.stats.contracted = right.stats.contracted;
    return res;
}

}  // namespace detail

/// Duhamel-Picard solve of one slab; returns the state at t1 and the
/// iteration stats. t1 - t0 should not exceed cfg.slab_length.
inline std::pair<Field, PicardStats> solve_slab_picard(const Field& f, double t0, double t1,
                                                       const PotentialSpec& A, const SolverConfig& cfg) {
    cfg.validate();
    if (t1 == t0) return {f, PicardStats{}};
    auto res = detail::solve_slab_nodes(f, t0, t1, A, cfg, true, 0);
    return {res.nodes.back(), res.stats};
}

/// Strang splitting reference integrator over [t0, t1]; cfg.strang_dt must
/// divide the interval. Throws on norm explosion beyond 1e3 x initial.
inline Field solve_strang(const Field& f, double t0, double t1, const PotentialSpec& A,
                          const SolverConfig& cfg) {
    cfg.validate();
    const double len = t1 - t0;
    const int steps = static_cast<int>(std::llround(len / cfg.strang_dt));
    if (steps < 1 || std::abs(steps * cfg.strang_dt - len) > 1e-10 * std::max(1.0, len))
        throw std::invalid_argument("solve_strang: strang_dt must divide t1 - t0");
    const double dt = len / steps;
    const double norm0 = l2_norm(f);
    const bool has_a = !A.is_zero();
    const bool has_nl = !cfg.nonlinearity.trivial();

    auto rhs = [&](const Field& v, double t) {
        Field out(v.grid());
        if (has_a) {
            out = magnetic_perturbation(v, A.sample(t, v.grid()));
            out *= Complex(-cfg.epsilon, -1.0);
        }
        if (has_nl) {
            Field n = nonlinearity(v, cfg.nonlinearity);
            n *= Complex(0.0, -1.0);
            out += n;
        }
        return out;
    };

    Field u = f;
    for (int s = 0; s < steps; ++s) {
        const double t = t0 + s * dt;
        u = hs_flow(u, dt / 2.0, cfg.epsilon);
        if (has_a || has_nl) {
            Field k1 = rhs(u, t);
            Field k2 = rhs(u + Complex(dt / 2.0, 0.0) * k1, t + dt / 2.0);
            Field k3 = rhs(u + Complex(dt / 2.0, 0.0) * k2, t + dt / 2.0);
            Field k4 = rhs(u + Complex(dt, 0.0) * k3, t + dt);
            k2 += k3;
            k2 *= Complex(2.0, 0.0);
            k1 += k2;
            k1 += k4;
            k1 *= Complex(dt / 6.0, 0.0);
            u += k1;
        }
        u = hs_flow(u, dt / 2.0, cfg.epsilon);
        if (l2_norm(u) > 1e3 * std::max(norm0, 1e-300))
            throw std::runtime_error("solve_strang: step instability (norm explosion)");
    }
    return u;
}

/// The linear magnetic viscous evolution U_{eps,A}(t1,t0) f (nonlinearity off).
inline Field linear_propagator(const Field& f, double t0, double t1, const PotentialSpec& A, double eps) {
    if (t1 == t0) return f;
    SolverConfig cfg;
    cfg.epsilon = eps;
    cfg.nonlinearity.lambda1 = 0.0;
    cfg.nonlinearity.lambda2 = 0.0;
    Field u = f;
    double t = t0;
    while (t < t1 - 1e-14) {
        const double step = std::min(cfg.slab_length, t1 - t);
        auto res = detail::solve_slab_nodes(u, t, t + step, A, cfg, false, 0);
        if (!res.stats.contracted) throw std::runtime_error("linear_propagator: contraction failed");
        u = res.nodes.back();
        t += step;
    }
    return u;
}

/// Chains slabs to T_total, recording the state at every slab node, with the
/// H^1 blow-up monitor (and, in the critical case gamma = 5, the running
/// L^6_t L^18_x monitor). Monitor trips terminate the trajectory with the hit
/// time; they are structured results, not errors.
inline Trajectory solve_global(const Field& f, double T_total, const PotentialSpec& A,
                               const SolverConfig& cfg) {
    cfg.validate();
    Trajectory traj;
    traj.times.push_back(0.0);
    traj.states.push_back(f);

    const bool critical = cfg.nonlinearity.critical();
    double l6_acc = 0.0;

    auto monitor_trip = [&](const Field& u, double t, double dt_sample) -> bool {
        if (sobolev_norm(u, 1) > cfg.monitors.h1_blowup_threshold) return true;
        if (critical) {
            l6_acc += dt_sample * std::pow(lp_norm(u, 18.0), 6.0);
            if (std::pow(l6_acc, 1.0 / 6.0) > cfg.monitors.l6l18_threshold) return true;
        }
        return false;
    };

    const int nslabs = static_cast<int>(std::ceil(T_total / cfg.slab_length - 1e-12));
    for (int s = 0; s < nslabs; ++s) {
        const double t0 = s * cfg.slab_length;
        const double t1 = std::min(T_total, (s + 1) * cfg.slab_length);
        const double dt_node = (t1 - t0) / cfg.substeps;

        std::vector<Field> nodes;
        if (cfg.scheme == Scheme::picard) {
            auto res = detail::solve_slab_nodes(traj.states.back(), t0, t1, A, cfg, true, 0);
            traj.slab_stats.push_back(res.stats);
            if (!res.stats.contracted) {
                traj.termination = Termination::contraction_failed;
                traj.termination_time = t0;
                return traj;
            }
            nodes = std::move(res.nodes);
        } else {
            nodes.push_back(traj.states.back());
            try {
                for (int j = 0; j < cfg.substeps; ++j)
                    nodes.push_back(solve_strang(nodes.back(), t0 + j * dt_node, t0 + (j + 1) * dt_node, A, cfg));
            } catch (const std::runtime_error&) {
                traj.termination = Termination::blowup_detected;
                traj.termination_time = t0;
                return traj;
            }
        }

        for (int j = 1; j <= cfg.substeps; ++j) {
            const double t = t0 + j * dt_node;
            traj.times.push_back(t);
            traj.states.push_back(std::move(nodes[j]));
            if (monitor_trip(traj.states.back(), t, dt_node)) {
                traj.termination = Termination::blowup_detected;
                traj.termination_time = t;
                return traj;
            }
        }
    }
    return traj;
}

/// Critical-case smallness functional: the discrete L^6([0,T], L^{18/7}) norm
/// of grad e^{it Lap} f (free flow, eps = 0), to be compared with eta0.
inline double critical_smallness(const Field& f, double T, int samples = 64) {
    if (samples < 1) throw std::invalid_argument("critical_smallness: samples >= 1 required");
    const double dt = T / samples;
    double acc = 0;
    for (int j = 0; j < samples; ++j) {
        Field u = hs_flow(f, j * dt, 0.0);
        double g18 = 0;
        Field mag(f.grid());
        const auto g = gradient(u);
        for (std::size_t i = 0; i < u.size(); ++i) {
            double s = 0;
            for (int a = 0; a < f.grid()->dim(); ++a) s += std::norm(g[a][i]);
            mag[i] = std::sqrt(s);
        }
        g18 = lp_norm(mag, 18.0 / 7.0);
        acc += dt * std::pow(g18, 6.0);
    }
    return std::pow(acc, 1.0 / 6.0);
}

struct StabilityResult {
    double diff_sup_h1 = 0.0;
    double diff_l4w13 = 0.0;
    double delta_class_norm = 0.0;  // delta * class norm of the perturbation direction
    double datum_diff_h1 = 0.0;
    double ratio = 0.0;             // diff_sup_h1 / (delta_class_norm + datum_diff_h1)
    Termination termination1 = Termination::completed;
    Termination termination2 = Termination::completed;
};

/// Twin solves with (f1, A) and (f2, A + delta B); the difference is measured
/// in sup-t H^1 and L^4_t W^{1,3} and compared against delta + ||f1 - f2||_H1.
inline StabilityResult stability_experiment(const Field& f1, const Field& f2, const PotentialSpec& A,
                                            const PotentialSpec& B, double delta, double T,
                                            const SolverConfig& cfg) {
    Trajectory t1 = solve_global(f1, T, A, cfg);
    Trajectory t2 = solve_global(f2, T, PotentialSpec::sum(A, B, delta), cfg);
    StabilityResult res;
    res.termination1 = t1.termination;
    res.termination2 = t2.termination;
    const std::size_t shared = std::min(t1.states.size(), t2.states.size());
    Trajectory diff;
    for (std::size_t j = 0; j < shared; ++j) {
        diff.times.push_back(t1.times[j]);
        diff.states.push_back(t1.states[j] - t2.states[j]);
    }
    res.diff_sup_h1 = sup_h1(diff);
    res.diff_l4w13 = l4w13_norm(diff);
    res.delta_class_norm = delta * class_norm(B, f1.grid(), 0.0, T);
    res.datum_diff_h1 = sobolev_norm(f1 - f2, 1);
    const double denom = res.delta_class_norm + res.datum_diff_h1;
    res.ratio = denom > 0 ? res.diff_sup_h1 / denom : 0.0;
    return res;
}

}  // namespace magnls
