#include "fbp/solver.hpp"

#include <algorithm>
#include <cmath>

#include "fbp/verify.hpp"

namespace fbp {

std::string_view to_string(RunStatus s) {
    switch (s) {
        case RunStatus::Completed: return "completed";
        case RunStatus::FrontCollapse: return "front_collapse";
        case RunStatus::Diverged: return "diverged";
    }
    return "unknown";
}

namespace {

bool all_finite(std::span<const double> v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

FrontRow log_row(const State& st, const Parameters& params, double dxi) {
    FrontRow r{};
    r.t = st.t;
    r.s = st.s;
    r.s_prime = st.s_prime;
    r.s_dprime_rhs = s_double_prime_rhs(st, params);
    r.identity_residual = 0.0;  // filled after the run
    r.v0 = st.v.front();
    r.vxi0 = one_sided_derivative_at_0(st.v, dxi);
    r.v1 = st.v.back();
    return r;
}

}  // namespace

State init_state(const Parameters& params, const Expr& phi, const Grid& grid) {
    params.validate();
    grid.validate();
    const int n = grid.n_xi;
    State st;
    st.t = 0.0;
    st.s = params.b;
    st.v.resize(static_cast<std::size_t>(n) + 1);
    const double dxi = grid.dxi();
    for (int j = 0; j <= n; ++j)
        st.v[static_cast<std::size_t>(j)] = phi.eval(j * dxi * params.b);

    std::vector<double> integrand(st.v.size());
    for (std::size_t j = 0; j < st.v.size(); ++j) integrand[j] = st.v[j] - params.sigma;
    st.s_prime = trapezoid(integrand, params.b * dxi);
    return st;
}

double front_velocity(const State& state, const Parameters& params) {
    if (!(state.s > 0.0)) throw InvalidInput("front_velocity needs s > 0");
    return state.s * (trapezoid(state.v, 1.0 / (static_cast<double>(state.v.size()) - 1.0)) -
                      params.sigma);
}

double s_double_prime_rhs(const State& state, const Parameters& params) {
    if (!(state.s > 0.0)) throw InvalidInput("s_double_prime_rhs needs s > 0");
    const double dxi = 1.0 / (static_cast<double>(state.v.size()) - 1.0);
    const double vxi0 = one_sided_derivative_at_0(state.v, dxi);
    return (state.v.back() - params.lambda - params.sigma) * state.s_prime -
           params.lambda * params.sigma * state.s - vxi0 / state.s;
}

std::vector<double> thomas_solve(std::span<const double> lower,
                                 std::span<const double> diag,
                                 std::span<const double> upper,
                                 std::span<const double> rhs) {
    const std::size_t n = diag.size();
    if (n == 0 || lower.size() != n || upper.size() != n || rhs.size() != n)
        throw InvalidInput("thomas_solve needs four spans of equal nonzero size");

    std::vector<double> c(n), d(n);
    double piv = diag[0];
    if (std::fabs(piv) <= 1e-14 * (std::fabs(diag[0]) + std::fabs(upper[0])) + 1e-300)
        throw ZeroPivot("vanishing pivot in row 0");
    c[0] = upper[0] / piv;
    d[0] = rhs[0] / piv;
    for (std::size_t i = 1; i < n; ++i) {
        piv = diag[i] - lower[i] * c[i - 1];
        const double scale = std::fabs(diag[i]) + std::fabs(lower[i]) + std::fabs(upper[i]);
        if (std::fabs(piv) <= 1e-14 * scale + 1e-300)
            throw ZeroPivot("vanishing pivot in row " + std::to_string(i));
        c[i] = upper[i] / piv;
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / piv;
    }
    std::vector<double> x(n);
    x[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
    return x;
}

State step(const State& state, const Parameters& params, const Grid& grid,
           const Expr& f, const Forcing& forcing) {
    const double dt = grid.dt;
    if (dt == 0.0) return state;
    if (!(dt > 0.0)) throw InvalidInput("step needs dt >= 0");
    if (params.lambda * dt >= 1.0)
        throw InvalidInput("dt too large for the implicit reaction term (need lambda*dt < 1)");
    const int n = grid.n_xi;
    if (state.v.size() != static_cast<std::size_t>(n) + 1)
        throw InvalidInput("state does not match grid");
    const double dxi = grid.dxi();
    const double t_new = state.t + dt;

    // (1) predictor for the front from the integral law
    const double vel_n =
        front_velocity(state, params) + (forcing.has_q() ? forcing.q(state.t) : 0.0);
    const double s_star = state.s + dt * vel_n;
    if (!(s_star >= params.s_min)) {
        if (!std::isfinite(s_star)) throw DivergedError(t_new);
        throw FrontCollapseError(t_new);
    }

    // (2) implicit solve with coefficients frozen at (s_star, vel_n)
    const std::size_t m = state.v.size();
    const double alpha = dt / (s_star * s_star * dxi * dxi);
    const double adv = dt * vel_n / (2.0 * s_star * dxi);

    std::vector<double> g_nodes;
    if (forcing.has_g()) {
        std::vector<double> nodes(m);
        for (std::size_t j = 0; j < m; ++j) nodes[j] = static_cast<double>(j) * dxi;
        g_nodes.resize(m);
        kernels::sample_field(forcing.g, nodes, t_new, g_nodes);
    }

    std::vector<double> lo(m), di(m), up(m), rhs(m);
    lo[0] = 0.0;
    di[0] = 1.0;
    up[0] = 0.0;
    rhs[0] = f.eval(t_new);
    for (std::size_t j = 1; j + 1 < m; ++j) {
        const double beta = adv * (static_cast<double>(j) * dxi);
        lo[j] = -alpha + beta;
        di[j] = 1.0 + 2.0 * alpha - params.lambda * dt;
        up[j] = -alpha - beta;
        rhs[j] = state.v[j] + (g_nodes.empty() ? 0.0 : dt * g_nodes[j]);
    }
    // Neumann row: ghost reflection v_{n+1} = v_{n-1} cancels the advection
    // term and folds the two off-diagonal entries together.
    lo[m - 1] = -2.0 * alpha;
    di[m - 1] = 1.0 + 2.0 * alpha - params.lambda * dt;
    up[m - 1] = 0.0;
    rhs[m - 1] = state.v[m - 1] + (g_nodes.empty() ? 0.0 : dt * g_nodes[m - 1]);

    State next;
    next.t = t_new;
    next.v = thomas_solve(lo, di, up, rhs);
    if (!all_finite(next.v)) throw DivergedError(t_new);

    // (3) one Heun correction pass for the front
    const double trap_new = trapezoid(next.v, dxi);
    const double vel_star =
        s_star * (trap_new - params.sigma) + (forcing.has_q() ? forcing.q(t_new) : 0.0);
    const double s_new = state.s + 0.5 * dt * (vel_n + vel_star);
    if (!std::isfinite(s_new)) throw DivergedError(t_new);
    if (s_new < params.s_min) throw FrontCollapseError(t_new);

    next.s = s_new;
    next.s_prime =
        s_new * (trap_new - params.sigma) + (forcing.has_q() ? forcing.q(t_new) : 0.0);
    return next;
}

RunResult run(const Parameters& params, const Grid& grid, const Expr& f,
              const Expr& phi, const Forcing& forcing,
              std::span<const double> snapshot_times) {
    RunResult result;
    State st = init_state(params, phi, grid);
    const double dxi = grid.dxi();

    std::vector<double> snaps(snapshot_times.begin(), snapshot_times.end());
    std::sort(snaps.begin(), snaps.end());
    std::size_t next_snap = 0;
    auto take_snapshots = [&](const State& s) {
        while (next_snap < snaps.size() && s.t >= snaps[next_snap] - 1e-12) {
            result.snapshots.push_back({snaps[next_snap], s});
            ++next_snap;
        }
    };

    result.series.rows.push_back(log_row(st, params, dxi));
    take_snapshots(st);

    result.status = RunStatus::Completed;
    const double t_end = params.t_end;
    while (st.t < t_end - 1e-12 * std::max(1.0, t_end)) {
        Grid step_grid = grid;
        step_grid.dt = std::min(grid.dt, t_end - st.t);
        try {
            st = step(st, params, step_grid, f, forcing);
        } catch (const FrontCollapseError&) {
            result.status = RunStatus::FrontCollapse;
            break;
        } catch (const DivergedError&) {
            result.status = RunStatus::Diverged;
            break;
        }
        result.series.rows.push_back(log_row(st, params, dxi));
        take_snapshots(st);
    }

    if (result.series.rows.size() >= 3) {
        const std::vector<double> resid = identity_residual_series(result.series);
        for (std::size_t i = 0; i < resid.size(); ++i)
            result.series.rows[i].identity_residual = resid[i];
    }
    return result;
}

}  // namespace fbp
