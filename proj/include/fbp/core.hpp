#ifndef FBP_CORE_HPP
#define FBP_CORE_HPP

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

// Shared domain types, quadrature and finite-difference stencils for the
// moving-boundary solver. The continuous problem lives on 0 < x < s(t); all
// discrete fields live on the fixed strip 0 <= xi <= 1 after the front-fixing
// substitution v(xi,t) = u(xi*s(t), t).

namespace fbp {

// ---------------------------------------------------------------------------
// Errors

struct InvalidInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SyntaxError : std::runtime_error {
    std::size_t pos;
    SyntaxError(std::size_t p, const std::string& msg)
        : std::runtime_error(msg + " (at position " + std::to_string(p) + ")"), pos(p) {}
};

struct UnknownIdentifier : SyntaxError {
    std::string name;
    UnknownIdentifier(std::size_t p, const std::string& ident)
        : SyntaxError(p, "unknown identifier '" + ident + "'"), name(ident) {}
};

struct ZeroPivot : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoEquilibrium : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NeumannViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Domain types

/// Physical and run constants. lambda is the reaction coefficient, sigma the
/// offset in the nonlocal front law s'(t) = \int_0^s (u - sigma) dx, b the
/// initial front position, t_end the final time. s_min guards against front
/// collapse: the run stops with a distinct status once s drops below it.
struct Parameters {
    double lambda = 1.0;
    double sigma = 1.0;
    double b = 1.0;
    double t_end = 1.0;
    double s_min = 1e-6;

    // Throws InvalidInput unless lambda, sigma, b > 0, t_end >= 0 and
    // 0 < s_min < b. t_end == 0 is allowed and yields a degenerate run
    // containing only the initial row.
    void validate() const;
};

/// Uniform grid on the unit xi-strip: nodes xi_j = j/n_xi, j = 0..n_xi.
struct Grid {
    int n_xi = 64;
    double dt = 1e-3;

    double dxi() const { return 1.0 / n_xi; }
    void validate() const;  // n_xi >= 8, dt > 0
};

/// Discrete fixed-domain state: front position s, its instantaneous velocity
/// from the integral law, and nodal values v_j ~ v(xi_j, t).
struct State {
    double t = 0.0;
    double s = 0.0;
    double s_prime = 0.0;
    std::vector<double> v;
};

/// One logged step of a run. identity_residual is filled after the run
/// completes (it needs a second time difference of the s column).
struct FrontRow {
    double t;
    double s;
    double s_prime;
    double s_dprime_rhs;
    double identity_residual;
    double v0;      // v(0,t), equals the boundary data
    double vxi0;    // one-sided estimate of v_xi(0,t)
    double v1;      // v(1,t)
};

/// Time series of front data driving all regularity analysis. Rows are
/// strictly increasing in t. Consumers that need a minimum number of rows
/// (difference stencils and the like) validate on entry; a degenerate run
/// with t_end = 0 produces a single row.
struct FrontSeries {
    std::vector<FrontRow> rows;

    std::vector<double> column_t() const;
    std::vector<double> column_s() const;
};

// ---------------------------------------------------------------------------
// Stencils and quadrature

/// Composite trapezoid of uniformly sampled values, spacing dx.
/// Exact for affine integrands. Requires at least two samples.
double trapezoid(std::span<const double> values, double dx);

/// Second-order one-sided derivative at the left edge of a uniform sample:
/// (-3 v0 + 4 v1 - v2) / (2 dx). Exact for quadratics. Requires >= 3 samples.
double one_sided_derivative_at_0(std::span<const double> values, double dx);

/// k-th derivative estimate by k iterated central first differences on a
/// uniform series with spacing dt. The output loses k samples at each end,
/// so the result has size n - 2k. Exact for polynomials of degree <= k + 1
/// apart from roundoff.
std::vector<double> central_derivative_series(std::span<const double> series,
                                              double dt, int order);

}  // namespace fbp

#endif
