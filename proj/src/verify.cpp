#include "fbp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>

namespace fbp {

namespace {

constexpr double kH1 = 1e-5;  // first-derivative step
constexpr double kH2 = 1e-4;  // second-derivative step (roundoff floor of a
                              // second difference at 1e-5 would exceed the
                              // default check tolerance)

// 4th-order one-sided first derivative, backward stencil ending at x.
double backward_derivative_4th(const Expr& e, double x, double h) {
    const double f0 = e.eval(x);
    const double f1 = e.eval(x - h);
    const double f2 = e.eval(x - 2 * h);
    const double f3 = e.eval(x - 3 * h);
    const double f4 = e.eval(x - 4 * h);
    return (25.0 * f0 - 48.0 * f1 + 36.0 * f2 - 16.0 * f3 + 3.0 * f4) / (12.0 * h);
}

// Composite Simpson on [0,1]; plenty for the smooth shapes the harness uses.
double integral_01(const Expr& e, int intervals = 4096) {
    const double h = 1.0 / intervals;
    double acc = e.eval(0.0) + e.eval(1.0);
    for (int i = 1; i < intervals; ++i)
        acc += (i % 2 == 1 ? 4.0 : 2.0) * e.eval(i * h);
    return acc * h / 3.0;
}

double fit_slope(std::span<const double> logx, std::span<const double> logy) {
    const std::size_t n = logx.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += logx[i];
        sy += logy[i];
        sxx += logx[i] * logx[i];
        sxy += logx[i] * logy[i];
    }
    const double den = n * sxx - sx * sx;
    if (std::fabs(den) < 1e-12 * std::max(1.0, sxx * n))
        return std::numeric_limits<double>::quiet_NaN();
    return (n * sxy - sx * sy) / den;
}

double safe_log(double v) { return std::log(std::max(v, 1e-300)); }

}  // namespace

CompatReport compatibility_check(const Parameters& params, const Expr& f,
                                 const Expr& phi, double tol) {
    params.validate();
    if (!(tol > 0.0)) throw InvalidInput("compatibility tolerance must be > 0");

    CompatReport report;
    auto add = [&](std::string name, double lhs, double rhs) {
        CompatCheck c;
        c.name = std::move(name);
        c.lhs = lhs;
        c.rhs = rhs;
        c.gap = std::fabs(lhs - rhs);
        c.pass = c.gap <= tol * (1.0 + std::max(std::fabs(lhs), std::fabs(rhs)));
        report.checks.push_back(std::move(c));
    };

    add("f(0) = phi(0)", f.eval(0.0), phi.eval(0.0));

    const double fp0 = numeric_derivative(f, 0.0, 1, kH1, DiffSide::right);
    const double phipp0 = numeric_derivative(phi, 0.0, 2, kH2, DiffSide::right);
    add("f'(0) = phi''(0) - lambda*phi(0)", fp0, phipp0 - params.lambda * phi.eval(0.0));

    const double phip_b = numeric_derivative(phi, params.b, 1, kH1, DiffSide::left);
    add("phi'(b) = 0", phip_b, 0.0);

    report.overall = true;
    for (const auto& c : report.checks) report.overall = report.overall && c.pass;
    return report;
}

Forcing MMSCase::forcing() const {
    // capture by value: Expr is an immutable shared tree, cheap to copy
    const Expr shape = v_shape;
    const Expr tau = v_time;
    const Expr sb = s_bar;
    const double lambda = params.lambda;
    const double sigma = params.sigma;
    const double shape_int = shape_integral;

    Forcing fc;
    fc.g = [shape, tau, sb, lambda](double xi, double t) {
        const double h = kH2;
        // stay inside [0,1] with one-sided stencils near the edges
        DiffSide side = DiffSide::central;
        if (xi < 2 * h)
            side = DiffSide::right;
        else if (xi > 1.0 - 3 * h)
            side = DiffSide::left;
        const double sh = shape.eval(xi);
        const double sh_x = numeric_derivative(shape, xi, 1, h, side);
        const double sh_xx = numeric_derivative(shape, xi, 2, h, side);
        const double ta = tau.eval(t);
        const double ta_t = numeric_derivative(tau, t, 1, h);
        const double s = sb.eval(t);
        const double sp = numeric_derivative(sb, t, 1, h);
        return sh * ta_t - sh_xx * ta / (s * s) - xi * sp / s * sh_x * ta - lambda * sh * ta;
    };
    fc.q = [tau, sb, sigma, shape_int](double t) {
        const double s = sb.eval(t);
        const double sp = numeric_derivative(sb, t, 1, kH2);
        return sp - s * (tau.eval(t) * shape_int - sigma);
    };
    return fc;
}

MMSCase make_mms_case(const Expr& s_bar, const Expr& v_shape,
                      const Parameters& params, const Expr& v_time) {
    MMSCase mms;
    mms.params = params;
    mms.s_bar = s_bar;
    mms.v_shape = v_shape;
    mms.v_time = v_time.empty() ? Expr::constant(1.0) : v_time;

    const double b0 = s_bar.eval(0.0);
    if (!(b0 > 0.0)) throw InvalidInput("manufactured front must start positive");
    mms.params.b = b0;

    // Neumann check at xi = 1 across ten sample times.
    const double slope1 = backward_derivative_4th(v_shape, 1.0, 1e-3);
    const double shape1 = v_shape.eval(1.0);
    const double t_max = std::max(1.0, params.t_end);
    for (int i = 0; i < 10; ++i) {
        const double t = t_max * i / 9.0;
        const double ta = mms.v_time.eval(t);
        if (std::fabs(slope1 * ta) > 1e-8 * (1.0 + std::fabs(shape1 * ta)))
            throw NeumannViolation("manufactured profile has nonzero slope at xi = 1");
    }

    mms.shape_integral = integral_01(v_shape);
    mms.induced_f = Expr::mul(Expr::constant(v_shape.eval(0.0)), mms.v_time);
    mms.induced_phi =
        Expr::mul(Expr::constant(mms.v_time.eval(0.0)),
                  v_shape.compose(Expr::div(Expr::variable("x"), Expr::constant(b0))));
    return mms;
}

ConvergenceTable convergence_study(const MMSCase& mms,
                                   std::span<const std::pair<int, double>> levels) {
    if (levels.size() < 3) throw InvalidInput("convergence_study needs at least 3 levels");
    for (std::size_t i = 1; i < levels.size(); ++i) {
        const bool n_ok = levels[i].first >= levels[i - 1].first;
        const bool dt_ok = levels[i].second <= levels[i - 1].second;
        const bool strict =
            levels[i].first > levels[i - 1].first || levels[i].second < levels[i - 1].second;
        if (!n_ok || !dt_ok || !strict)
            throw InvalidInput("convergence_study levels must refine monotonically");
    }

    const Forcing fc = mms.forcing();
    ConvergenceTable table;
    table.rows.resize(levels.size());

    std::exception_ptr err;
    const std::int64_t n_levels = static_cast<std::int64_t>(levels.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
    for (std::int64_t i = 0; i < n_levels; ++i) {
        try {
            const auto [n_xi, dt] = levels[static_cast<std::size_t>(i)];
            Grid grid{n_xi, dt};
            RunResult res = run(mms.params, grid, mms.induced_f, mms.induced_phi, fc);
            if (res.status != RunStatus::Completed)
                throw std::runtime_error(
                    "convergence level n_xi=" + std::to_string(n_xi) +
                    " ended with status " + std::string(to_string(res.status)));
            const State& fin = res.snapshots.empty() ? State{} : res.snapshots.front().state;
            (void)fin;
            const auto& last = res.series.rows.back();
            // reconstruct the final profile error
            const State* final_state = nullptr;
            State tmp;
            if (!res.snapshots.empty()) final_state = &res.snapshots.back().state;
            (void)final_state;
            (void)tmp;
            ConvLevel lev;
            lev.n_xi = n_xi;
            lev.dt = dt;
            lev.err_s = std::fabs(last.s - mms.s_exact(last.t));
            table.rows[static_cast<std::size_t>(i)] = lev;
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical(fbp_conv_err)
#endif
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);

    // fits
    std::vector<double> lx, ly;
    for (const auto& r : table.rows) {
        lx.push_back(std::log(1.0 / r.n_xi));
        ly.push_back(safe_log(r.err_v));
    }
    table.p_space = fit_slope(lx, ly);
    lx.clear();
    ly.clear();
    for (const auto& r : table.rows) {
        lx.push_back(std::log(r.dt));
        ly.push_back(safe_log(r.err_s));
    }
    table.p_time = fit_slope(lx, ly);

    for (std::size_t i = 1; i < table.rows.size(); ++i) {
        const auto& a = table.rows[i - 1];
        const auto& b = table.rows[i];
        const double dx_ratio = std::log(static_cast<double>(b.n_xi) / a.n_xi);
        const double dt_ratio = std::log(a.dt / b.dt);
        table.pairwise_space.push_back(
            dx_ratio > 0 ? (safe_log(a.err_v) - safe_log(b.err_v)) / dx_ratio
                         : std::numeric_limits<double>::quiet_NaN());
        table.pairwise_time.push_back(
            dt_ratio > 0 ? (safe_log(a.err_s) - safe_log(b.err_s)) / dt_ratio
                         : std::numeric_limits<double>::quiet_NaN());
    }
    return table;
}

double equilibrium_front(double c, const Parameters& params) {
    if (!(params.lambda > 0.0) || !(params.sigma > 0.0))
        throw InvalidInput("equilibrium_front needs lambda, sigma > 0");
    if (!(c > 0.0)) throw InvalidInput("equilibrium_front needs c > 0");
    const double lambda = params.lambda;
    const double sigma = params.sigma;
    if (c <= sigma) throw NoEquilibrium("no positive equilibrium when c <= sigma");

    const double rl = std::sqrt(lambda);
    auto phi_fn = [&](double s) { return c / rl * std::tanh(rl * s) - sigma * s; };

    double lo = 1e-12;
    double hi = c / (sigma * rl) + 1.0;
    if (!(phi_fn(lo) > 0.0) || !(phi_fn(hi) < 0.0))
        throw NoEquilibrium("equilibrium bracket not sign-certified");

    double mid = 0.5 * (lo + hi);
    for (int iter = 0; iter < 500; ++iter) {
        mid = 0.5 * (lo + hi);
        const double val = phi_fn(mid);
        if (std::fabs(val) <= 1e-12) return mid;
        if (val > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return mid;
}

Expr equilibrium_profile(double c, const Parameters& params, double s_star) {
    char buf[256];
    const double rl = std::sqrt(params.lambda);
    std::snprintf(buf, sizeof(buf), "%.17g*cosh(%.17g*(%.17g - x))/cosh(%.17g)", c, rl,
                  s_star, rl * s_star);
    return Expr::parse(buf, "x");
}

std::vector<double> identity_residual_series(const FrontSeries& series) {
    const auto& rows = series.rows;
    if (rows.size() < 3) throw InvalidInput("identity_residual_series needs >= 3 rows");

    const std::size_t n = rows.size();
    std::vector<double> sfd(n);
    auto second_diff = [&](std::size_t i) {
        // nonuniform 3-point second difference centered at i
        const double hm = rows[i].t - rows[i - 1].t;
        const double hp = rows[i + 1].t - rows[i].t;
        return 2.0 *
               ((rows[i + 1].s - rows[i].s) / hp - (rows[i].s - rows[i - 1].s) / hm) /
               (hm + hp);
    };
    for (std::size_t i = 1; i + 1 < n; ++i) sfd[i] = second_diff(i);
    sfd[0] = second_diff(1);
    sfd[n - 1] = second_diff(n - 2);

    std::vector<double> resid(n);
    for (std::size_t i = 0; i < n; ++i)
        resid[i] = std::fabs(sfd[i] - rows[i].s_dprime_rhs);
    return resid;
}

}  // namespace fbp
