#include "fbp/kernels.hpp"

#include <cmath>
#include <cstdint>
#include <exception>

#include "fbp/core.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fbp::kernels {

namespace {
// below this many windows the OpenMP fork costs more than the loop
constexpr std::size_t kParallelMin = 4096;
}

std::vector<double> diff_coefficients(int order) {
    if (order < 0) throw InvalidInput("difference order must be >= 0");
    std::vector<double> c(static_cast<std::size_t>(order) + 1);
    double binom = 1.0;
    for (int i = 0; i <= order; ++i) {
        c[static_cast<std::size_t>(i)] = ((order - i) % 2 == 0 ? binom : -binom);
        binom = binom * (order - i) / (i + 1);
    }
    return c;
}

double max_abs_kth_diff_serial(std::span<const double> y, int order, int stride) {
    if (order < 1 || stride < 1) throw InvalidInput("max_abs_kth_diff: order, stride >= 1");
    const std::size_t span = static_cast<std::size_t>(order) * static_cast<std::size_t>(stride);
    if (y.size() <= span) throw InvalidInput("max_abs_kth_diff: series too short");
    const auto c = diff_coefficients(order);
    const std::size_t last = y.size() - 1 - span;
    double best = 0.0;
    for (std::size_t j = 0; j <= last; ++j) {
        double acc = 0.0;
        for (int i = 0; i <= order; ++i)
            acc += c[static_cast<std::size_t>(i)] * y[j + static_cast<std::size_t>(i) * stride];
        best = std::max(best, std::fabs(acc));
    }
    return best;
}

double max_abs_kth_diff(std::span<const double> y, int order, int stride) {
#ifdef _OPENMP
    if (order < 1 || stride < 1) throw InvalidInput("max_abs_kth_diff: order, stride >= 1");
    const std::size_t span = static_cast<std::size_t>(order) * static_cast<std::size_t>(stride);
    if (y.size() <= span) throw InvalidInput("max_abs_kth_diff: series too short");
    const std::size_t last = y.size() - 1 - span;
    if (last + 1 >= kParallelMin) {
        const auto c = diff_coefficients(order);
        double best = 0.0;
        const std::int64_t n = static_cast<std::int64_t>(last);
#pragma omp parallel for reduction(max : best) schedule(static)
        for (std::int64_t j = 0; j <= n; ++j) {
            double acc = 0.0;
            for (int i = 0; i <= order; ++i)
                acc += c[static_cast<std::size_t>(i)] *
                       y[static_cast<std::size_t>(j) + static_cast<std::size_t>(i) * stride];
            best = std::max(best, std::fabs(acc));
        }
        return best;
    }
#endif
    return max_abs_kth_diff_serial(y, order, stride);
}

void onesided_mismatch_serial(std::span<const double> y, int order, double h,
                              std::span<double> out) {
    if (order < 1) throw InvalidInput("onesided_mismatch: order >= 1");
    if (!(h > 0.0)) throw InvalidInput("onesided_mismatch: h > 0");
    if (out.size() != y.size()) throw InvalidInput("onesided_mismatch: size mismatch");
    const std::size_t k = static_cast<std::size_t>(order);
    if (y.size() < 2 * k + 1) throw InvalidInput("onesided_mismatch: series too short");
    const auto c = diff_coefficients(order);
    const double scale = 1.0 / std::pow(h, order);
    for (std::size_t j = 0; j < y.size(); ++j) out[j] = 0.0;
    for (std::size_t j = k; j + k < y.size(); ++j) {
        double fwd = 0.0, bwd = 0.0;
        for (std::size_t i = 0; i <= k; ++i) {
            fwd += c[i] * y[j + i];
            bwd += c[i] * y[j - k + i];
        }
        out[j] = std::fabs(fwd - bwd) * scale;
    }
}

void onesided_mismatch(std::span<const double> y, int order, double h,
                       std::span<double> out) {
#ifdef _OPENMP
    const std::size_t k = static_cast<std::size_t>(order > 0 ? order : 0);
    if (order >= 1 && h > 0.0 && out.size() == y.size() && y.size() >= 2 * k + 1 &&
        y.size() >= kParallelMin) {
        const auto c = diff_coefficients(order);
        const double scale = 1.0 / std::pow(h, order);
        const std::int64_t n = static_cast<std::int64_t>(y.size());
        const std::int64_t kk = static_cast<std::int64_t>(k);
#pragma omp parallel for schedule(static)
        for (std::int64_t j = 0; j < n; ++j) {
            if (j < kk || j + kk >= n) {
                out[static_cast<std::size_t>(j)] = 0.0;
                continue;
            }
            double fwd = 0.0, bwd = 0.0;
            for (std::int64_t i = 0; i <= kk; ++i) {
                fwd += c[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j + i)];
                bwd += c[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j - kk + i)];
            }
            out[static_cast<std::size_t>(j)] = std::fabs(fwd - bwd) * scale;
        }
        return;
    }
#endif
    onesided_mismatch_serial(y, order, h, out);
}

void sample_field_serial(const Field& fn, std::span<const double> nodes, double t,
                         std::span<double> out) {
    if (out.size() != nodes.size()) throw InvalidInput("sample_field: size mismatch");
    for (std::size_t j = 0; j < nodes.size(); ++j) out[j] = fn(nodes[j], t);
}

void sample_field(const Field& fn, std::span<const double> nodes, double t,
                  std::span<double> out) {
#ifdef _OPENMP
    if (out.size() == nodes.size() && nodes.size() >= 256) {
        std::exception_ptr err;
        const std::int64_t n = static_cast<std::int64_t>(nodes.size());
#pragma omp parallel for schedule(static)
        for (std::int64_t j = 0; j < n; ++j) {
            try {
                out[static_cast<std::size_t>(j)] = fn(nodes[static_cast<std::size_t>(j)], t);
            } catch (...) {
#pragma omp critical(fbp_sample_field_err)
                if (!err) err = std::current_exception();
            }
        }
        if (err) std::rethrow_exception(err);
        return;
    }
#endif
    sample_field_serial(fn, nodes, t, out);
}

}  // namespace fbp::kernels
