#include "fbp/core.hpp"

#include <cmath>

namespace fbp {

void Parameters::validate() const {
    if (!(lambda > 0.0)) throw InvalidInput("lambda must be > 0");
    if (!(sigma > 0.0)) throw InvalidInput("sigma must be > 0");
    if (!(b > 0.0)) throw InvalidInput("b must be > 0");
    if (!(t_end >= 0.0)) throw InvalidInput("t_end must be >= 0");
    if (!(s_min > 0.0) || !(s_min < b)) throw InvalidInput("require 0 < s_min < b");
}

void Grid::validate() const {
    if (n_xi < 8) throw InvalidInput("n_xi must be >= 8");
    if (!(dt > 0.0)) throw InvalidInput("dt must be > 0");
}

std::vector<double> FrontSeries::column_t() const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.t);
    return out;
}

std::vector<double> FrontSeries::column_s() const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.s);
    return out;
}

double trapezoid(std::span<const double> values, double dx) {
    if (values.size() < 2) throw InvalidInput("trapezoid needs at least 2 samples");
    if (!(dx > 0.0)) throw InvalidInput("trapezoid needs dx > 0");
    // fixed left-to-right order keeps results bit-stable
    double acc = 0.5 * (values.front() + values.back());
    for (std::size_t j = 1; j + 1 < values.size(); ++j) acc += values[j];
    return acc * dx;
}

double one_sided_derivative_at_0(std::span<const double> values, double dx) {
    if (values.size() < 3) throw InvalidInput("one_sided_derivative_at_0 needs >= 3 samples");
    if (!(dx > 0.0)) throw InvalidInput("one_sided_derivative_at_0 needs dx > 0");
    return (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * dx);
}

std::vector<double> central_derivative_series(std::span<const double> series,
                                              double dt, int order) {
    if (order < 1) throw InvalidInput("derivative order must be >= 1");
    if (!(dt > 0.0)) throw InvalidInput("central_derivative_series needs dt > 0");
    if (series.size() < 2 * static_cast<std::size_t>(order) + 1)
        throw InvalidInput("series too short for requested derivative order");

    std::vector<double> cur(series.begin(), series.end());
    const double inv2dt = 1.0 / (2.0 * dt);
    for (int k = 0; k < order; ++k) {
        std::vector<double> next(cur.size() - 2);
        for (std::size_t j = 1; j + 1 < cur.size(); ++j)
            next[j - 1] = (cur[j + 1] - cur[j - 1]) * inv2dt;
        cur = std::move(next);
    }
    return cur;
}

}  // namespace fbp
