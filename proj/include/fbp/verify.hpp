#ifndef FBP_VERIFY_HPP
#define FBP_VERIFY_HPP

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fbp/core.hpp"
#include "fbp/expr.hpp"
#include "fbp/solver.hpp"

// Verification machinery: corner-compatibility checks of the data, the
// manufactured-solution harness with its convergence studies, the
// closed-form equilibrium oracle, and the front-identity residual monitor.

namespace fbp {

// ---------------------------------------------------------------------------
// Compatibility of (f, phi) at the corners

struct CompatCheck {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double gap = 0.0;
    bool pass = false;
};

struct CompatReport {
    std::vector<CompatCheck> checks;
    bool overall = false;
};

/// Checks the three corner conditions a classical solution needs:
///   f(0) = phi(0),   f'(0) = phi''(0) - lambda phi(0),   phi'(b) = 0.
/// Derivatives are one-sided finite differences that never leave [0, b]
/// (h = 1e-5 for first order; 1e-4 for second order, where the smaller step
/// would sit below the roundoff floor of a second difference). A condition
/// passes iff |lhs - rhs| <= tol * (1 + max(|lhs|, |rhs|)).
CompatReport compatibility_check(const Parameters& params, const Expr& f,
                                 const Expr& phi, double tol = 1e-6);

// ---------------------------------------------------------------------------
// Manufactured solutions

/// A manufactured pair (s_bar(t), v_bar(xi,t)) with separable
/// v_bar = v_shape(xi) * v_time(t), plus the forcing terms that make it an
/// exact solution of the forced system and the boundary/initial data it
/// induces. v_shape must have zero slope at xi = 1 so the pair satisfies the
/// Neumann condition identically.
struct MMSCase {
    Parameters params;  // lambda/sigma/t_end of the target run; b = s_bar(0)
    Expr s_bar;
    Expr v_shape;
    Expr v_time;
    Expr induced_f;    // v_bar(0, t), in t
    Expr induced_phi;  // v_bar(x / s_bar(0), 0), in x
    double shape_integral = 0.0;

    double s_exact(double t) const { return s_bar.eval(t); }
    double v_exact(double xi, double t) const {
        return v_shape.eval(xi) * v_time.eval(t);
    }
    /// Field forcing g = L v_bar and front forcing q = s_bar' - s_bar
    /// (int v_bar - sigma), with derivatives of the expressions taken by
    /// finite differences (h = 1e-4).
    Forcing forcing() const;
};

/// Builds the case, checking s_bar(0) > 0 and the Neumann condition at
/// xi = 1 (|v_bar_xi(1, t)| <= 1e-8 * (1 + |v_bar(1, t)|) at ten sample
/// times; throws NeumannViolation otherwise). Pass an empty v_time for a
/// time-independent profile.
MMSCase make_mms_case(const Expr& s_bar, const Expr& v_shape,
                      const Parameters& params, const Expr& v_time = Expr());

struct ConvLevel {
    int n_xi = 0;
    double dt = 0.0;
    double err_v = 0.0;  // max_j |v_j(T) - v_bar(xi_j, T)|
    double err_s = 0.0;  // |s(T) - s_bar(T)|
};

struct ConvergenceTable {
    std::vector<ConvLevel> rows;
    // Least-squares slopes on log-log data; NaN when the abscissa does not
    // vary across levels (e.g. p_space in a pure time study).
    double p_space = 0.0;  // err_v against dxi
    double p_time = 0.0;   // err_s against dt
    // observed order between consecutive levels, size rows-1
    std::vector<double> pairwise_space;
    std::vector<double> pairwise_time;
};

/// Runs the forced solver at every (n_xi, dt) level and measures errors
/// against the manufactured pair at t = t_end. Needs >= 3 levels, each
/// refining the last (n_xi nondecreasing, dt nonincreasing, at least one
/// strict). Levels run concurrently; results are merged by index. A level
/// that does not complete aborts the study with a diagnostic.
ConvergenceTable convergence_study(const MMSCase& mms,
                                   std::span<const std::pair<int, double>> levels);

// ---------------------------------------------------------------------------
// Equilibrium oracle

/// Steady state with constant boundary data c > sigma: the profile
/// u(x) = c cosh(sqrt(lambda)(s-x)) / cosh(sqrt(lambda) s) kills the flux at
/// x = s, and the front law vanishes at the unique positive root s* of
///   (c / sqrt(lambda)) tanh(sqrt(lambda) s) = sigma s.
/// Found by bisection on a sign-certified bracket, |Phi(s*)| <= 1e-12.
/// Throws NoEquilibrium when c <= sigma (Phi < 0 for all s > 0).
double equilibrium_front(double c, const Parameters& params);

/// The equilibrium profile above as an expression in x (useful as initial
/// data; satisfies all three compatibility conditions with f == c).
Expr equilibrium_profile(double c, const Parameters& params, double s_star);

// ---------------------------------------------------------------------------
// Identity monitor

/// Pointwise |s''_fd - s_dprime_rhs| where s''_fd is the second difference
/// of the logged s column (central inside, copied one-sided at the two
/// ends). The spacing is taken from the logged times, so a shortened final
/// step is handled. Requires >= 3 rows.
std::vector<double> identity_residual_series(const FrontSeries& series);

}  // namespace fbp

#endif
