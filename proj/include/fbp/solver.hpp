#ifndef FBP_SOLVER_HPP
#define FBP_SOLVER_HPP

#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "fbp/core.hpp"
#include "fbp/expr.hpp"
#include "fbp/kernels.hpp"

// Time integration of the fixed-domain system obtained from the moving
// boundary problem
//
//   u_t = u_xx - lambda u          on 0 < x < s(t),
//   u(0,t) = f(t),  u_x(s(t),t) = 0,  u(x,0) = phi(x),  s(0) = b,
//   s'(t) = \int_0^{s(t)} (u - sigma) dx,
//
// via the substitution xi = x / s(t), v(xi,t) = u(xi s(t), t):
//
//   v_t = (1/s^2) v_xixi + (xi s'/s) v_xi + lambda v + g,   0 < xi < 1,
//   v(0,t) = f(t),  v_xi(1,t) = 0,
//   s'    = s (\int_0^1 v dxi - sigma) + q.
//
// g and q are optional forcing hooks used for manufactured-solution
// verification; with both absent the scheme integrates the plain problem.
//
// Scheme: per step, (1) predict s* = s + dt s' from the integral law,
// (2) solve the v-equation backward in time with coefficients frozen at
// (s*, s'), Dirichlet value imposed strongly at xi = 0 and the Neumann
// condition closed by ghost-node reflection at xi = 1 (a single tridiagonal
// solve), (3) correct the front with one Heun pass using the new profile.
// The derived identity
//
//   s'' = (v(1,t) - lambda - sigma) s' - lambda sigma s - v_xi(0,t)/s
//
// is never integrated; it is logged each step and serves as an independent
// consistency monitor (see verify.hpp).

namespace fbp {

struct Forcing {
    kernels::Field g;                 // g(xi, t)
    std::function<double(double)> q;  // q(t)

    static Forcing none() { return {}; }
    bool has_g() const { return static_cast<bool>(g); }
    bool has_q() const { return static_cast<bool>(q); }
};

enum class RunStatus { Completed, FrontCollapse, Diverged };
std::string_view to_string(RunStatus s);

struct Snapshot {
    double requested_t;
    State state;
};

struct RunResult {
    FrontSeries series;
    std::vector<Snapshot> snapshots;
    RunStatus status = RunStatus::Completed;
};

/// Thrown by step() when the corrected front drops below s_min.
struct FrontCollapseError : std::runtime_error {
    double t;
    explicit FrontCollapseError(double at)
        : std::runtime_error("front collapsed below s_min"), t(at) {}
};

/// Thrown by step() when a non-finite value appears in the state.
struct DivergedError : std::runtime_error {
    double t;
    explicit DivergedError(double at)
        : std::runtime_error("solution diverged (non-finite value)"), t(at) {}
};

/// Initial state: t = 0, s = b, v_j = phi(xi_j b), and s' from the integral
/// law applied to phi, i.e. the trapezoid of (phi - sigma) over [0, b].
State init_state(const Parameters& params, const Expr& phi, const Grid& grid);

/// s multiplied by (trapezoid of v over [0,1] minus sigma) -- the front law
/// in xi-coordinates. Does not include the forcing term q.
double front_velocity(const State& state, const Parameters& params);

/// Right side of the derived front identity at the current state, with
/// v_xi(0,t) from the second-order one-sided edge stencil.
double s_double_prime_rhs(const State& state, const Parameters& params);

/// One predictor-corrector step of size grid.dt (dt == 0 returns the state
/// unchanged). Requires lambda * dt < 1 so the implicit reaction term keeps
/// the system diagonally dominant; the advection part stays dominated for
/// dt <= dxi * s_min / max|xi s'|.
State step(const State& state, const Parameters& params, const Grid& grid,
           const Expr& f, const Forcing& forcing);

/// Integrate from t = 0 to t_end, logging every step into a FrontSeries and
/// snapshotting at the requested times (each snapshot is taken at the first
/// step reaching the requested time). Front collapse and divergence are
/// reported through the status, not thrown. The identity-residual column is
/// filled in after the run for series with at least three rows.
RunResult run(const Parameters& params, const Grid& grid, const Expr& f,
              const Expr& phi, const Forcing& forcing = Forcing::none(),
              std::span<const double> snapshot_times = {});

/// Thomas elimination for a tridiagonal system. All four spans have size n;
/// lower[0] and upper[n-1] are ignored. Throws ZeroPivot when elimination
/// meets a vanishing pivot (diagonal dominance guarantees it cannot).
std::vector<double> thomas_solve(std::span<const double> lower,
                                 std::span<const double> diag,
                                 std::span<const double> upper,
                                 std::span<const double> rhs);

}  // namespace fbp

#endif
