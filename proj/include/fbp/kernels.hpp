#ifndef FBP_KERNELS_HPP
#define FBP_KERNELS_HPP

#include <functional>
#include <span>
#include <vector>

// Data-parallel inner loops shared by the analysis and solver layers, each
// in two variants: a plain serial reference and an OpenMP version. The
// dispatching entry points (no suffix) pick the OpenMP path for inputs large
// enough to amortize thread startup and must return bit-identical results to
// the *_serial references: the parallel loops either write disjoint slots or
// reduce with max, which is exact in floating point. Sum-style reductions
// are deliberately not parallelized anywhere in this library.
//
// tools/bench_kernels.cpp compares the two variants; tests/test_kernels.cpp
// checks bit-equality on random data.

namespace fbp::kernels {

/// Signed binomial weights (-1)^(k-i) C(k,i), i = 0..k: the coefficients of
/// the k-th forward finite difference.
std::vector<double> diff_coefficients(int order);

/// max_j | sum_i (-1)^(k-i) C(k,i) y[j + i*stride] | over all admissible j.
/// Returns 0 for an empty window set only if no window fits (caller checks).
double max_abs_kth_diff_serial(std::span<const double> y, int order, int stride);
double max_abs_kth_diff(std::span<const double> y, int order, int stride);

/// Jump indicator: out[j] = |forward k-th difference at j minus backward
/// k-th difference ending at j| / h^k, for j in [k, n-1-k]; the k edge
/// entries at each end are set to 0. out.size() must equal y.size().
void onesided_mismatch_serial(std::span<const double> y, int order, double h,
                              std::span<double> out);
void onesided_mismatch(std::span<const double> y, int order, double h,
                       std::span<double> out);

/// Evaluate a two-argument field on a row of nodes at fixed t.
/// Exceptions thrown by fn are captured and rethrown after the loop.
using Field = std::function<double(double, double)>;
void sample_field_serial(const Field& fn, std::span<const double> nodes, double t,
                         std::span<double> out);
void sample_field(const Field& fn, std::span<const double> nodes, double t,
                  std::span<double> out);

}  // namespace fbp::kernels

#endif
