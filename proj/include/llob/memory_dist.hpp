#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <variant>
#include <vector>

#include "llob/common.hpp"
#include "llob/quad.hpp"

namespace llob {

/// Distribution of memory times rho(Tm) over days. Either a point mass or a
/// tabulated density with linear interpolation between nodes. The moment
/// int rho(x)/sqrt(x) dx must be finite; it is evaluated with the x = s^2
/// substitution so an integrable endpoint at x = 0 is handled exactly.
class MemoryDistribution {
public:
    static MemoryDistribution point_mass(double tm) {
        require(tm > 0.0 && std::isfinite(tm),
                "memory distribution: point mass requires tm > 0 "
                "(mass at 0 has a divergent 1/sqrt(x) moment)");
        MemoryDistribution d;
        d.rep_ = Point{tm};
        return d;
    }

    /// Density samples at increasing abscissae (days); interpolated linearly,
    /// zero outside [x.front(), x.back()]. Must integrate to 1 within 1e-6.
    static MemoryDistribution tabulated(std::vector<double> x,
                                        std::vector<double> density) {
        require(x.size() == density.size() && x.size() >= 2,
                "memory distribution: need matching x/density arrays, size >= 2");
        for (std::size_t i = 0; i < x.size(); ++i) {
            require(density[i] >= 0.0, "memory distribution: density must be >= 0");
            require(x[i] >= 0.0, "memory distribution: support must be >= 0");
            if (i) require(x[i] > x[i - 1], "memory distribution: x must increase");
        }
        MemoryDistribution d;
        d.rep_ = Table{std::move(x), std::move(density)};
        double mass = d.total_mass();
        require(std::abs(mass - 1.0) <= 1e-6,
                "memory distribution: density integrates to " + std::to_string(mass) +
                    ", expected 1 within 1e-6");
        return d;
    }

    /// Uniform density on [a, b] days.
    static MemoryDistribution uniform(double a, double b) {
        require(b > a && a >= 0.0, "memory distribution: need 0 <= a < b");
        return tabulated({a, b}, {1.0 / (b - a), 1.0 / (b - a)});
    }

    bool is_point_mass() const { return std::holds_alternative<Point>(rep_); }

    /// int rho(x) x^{-1/2} dx, adaptive to 1e-8 relative.
    double inv_sqrt_moment() const {
        if (const auto* p = std::get_if<Point>(&rep_)) return 1.0 / std::sqrt(p->tm);
        const auto& t = std::get<Table>(rep_);
        // x = s^2: integrand rho(s^2) * 2 ds (the 1/sqrt(x) cancels).
        auto f = [&](double s) { return 2.0 * density_at(t, s * s); };
        double lo = std::sqrt(t.x.front()), hi = std::sqrt(t.x.back());
        double coarse = quad::gauss_panels(f, lo, hi, 64, quad::gl16());
        double scale = std::abs(coarse) > 0.0 ? std::abs(coarse) : 1.0;
        return quad::adaptive(f, lo, hi, 1e-8 * scale);
    }

private:
    struct Point {
        double tm;
    };
    struct Table {
        std::vector<double> x;
        std::vector<double> density;
    };

    static double density_at(const Table& t, double x) {
        if (x <= t.x.front() || x >= t.x.back()) {
            if (x == t.x.front()) return t.density.front();
            if (x == t.x.back()) return t.density.back();
            return 0.0;
        }
        auto it = std::upper_bound(t.x.begin(), t.x.end(), x);
        std::size_t i = static_cast<std::size_t>(it - t.x.begin()) - 1;
        double f = (x - t.x[i]) / (t.x[i + 1] - t.x[i]);
        return t.density[i] + f * (t.density[i + 1] - t.density[i]);
    }

    double total_mass() const {
        const auto& t = std::get<Table>(rep_);
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < t.x.size(); ++i)
            acc += 0.5 * (t.density[i] + t.density[i + 1]) * (t.x[i + 1] - t.x[i]);
        return acc;
    }

    std::variant<Point, Table> rep_;
};

}  // namespace llob
