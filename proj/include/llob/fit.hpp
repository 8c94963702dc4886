#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "llob/common.hpp"

// Least-squares fits used by the sweep reports and the cross-sectional
// analytics: straight line with a slope confidence interval, and low-degree
// polynomial fits via normal equations on a centred/scaled design.

namespace llob::fit {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double residual_std = 0.0;
};

inline LineFit line(std::span<const double> x, std::span<const double> y) {
    require(x.size() == y.size() && x.size() >= 2, "line fit: need >= 2 points");
    std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    require(sxx > 0.0, "line fit: degenerate design (all x equal)");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = y[i] - (f.intercept + f.slope * x[i]);
        ss += r * r;
    }
    if (n > 2) {
        double s2 = ss / static_cast<double>(n - 2);
        f.slope_stderr = std::sqrt(s2 / sxx);
        f.residual_std = std::sqrt(s2);
    }
    return f;
}

/// Ordinary least-squares polynomial of given degree. Coefficients are in the
/// raw variable (lowest order first). Internally the design is centred and
/// scaled, then the coefficients are mapped back, so degree <= 3 is solved
/// reliably with plain normal equations.
struct PolyFit {
    std::vector<double> coeffs;  // c0 + c1 x + ... lowest order first
    double residual_std = 0.0;

    double eval(double x) const {
        double acc = 0.0;
        for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
        return acc;
    }
};

namespace detail {

// Solve the small SPD system A c = b in place by Gaussian elimination with
// partial pivoting; dimensions <= 4 here.
inline std::vector<double> solve_dense(std::vector<std::vector<double>> a,
                                       std::vector<double> b) {
    std::size_t n = b.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
        if (std::abs(a[piv][k]) < 1e-300)
            throw numeric_error("polynomial fit: rank-deficient design");
        std::swap(a[k], a[piv]);
        std::swap(b[k], b[piv]);
        for (std::size_t i = k + 1; i < n; ++i) {
            double f = a[i][k] / a[k][k];
            for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
            b[i] -= f * b[k];
        }
    }
    std::vector<double> c(n);
    for (std::size_t i = n; i-- > 0;) {
        double acc = b[i];
        for (std::size_t j = i + 1; j < n; ++j) acc -= a[i][j] * c[j];
        c[i] = acc / a[i][i];
    }
    return c;
}

// Expand a polynomial in z = (x - mu)/s into raw-x coefficients.
inline std::vector<double> uncentre(const std::vector<double>& cz, double mu,
                                    double s) {
    std::size_t n = cz.size();
    std::vector<double> cx(n, 0.0);
    // accumulate cz[k] * ((x - mu)/s)^k via binomial expansion
    std::vector<double> binom(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        // ((x - mu)/s)^k = sum_j C(k,j) x^j (-mu)^{k-j} / s^k
        double sk = std::pow(s, static_cast<double>(k));
        double comb = 1.0;
        for (std::size_t j = 0; j <= k; ++j) {
            if (j > 0) comb = comb * static_cast<double>(k - j + 1) / static_cast<double>(j);
            cx[j] += cz[k] * comb * std::pow(-mu, static_cast<double>(k - j)) / sk;
        }
    }
    return cx;
}

}  // namespace detail

inline PolyFit polynomial(std::span<const double> x, std::span<const double> y,
                          int degree) {
    require(degree >= 0 && degree <= 3, "polynomial fit: degree 0..3");
    require(x.size() == y.size(), "polynomial fit: size mismatch");
    require(x.size() >= static_cast<std::size_t>(degree + 1),
            "polynomial fit: not enough points");
    std::size_t n = x.size(), m = static_cast<std::size_t>(degree) + 1;

    double mu = 0.0;
    for (double v : x) mu += v;
    mu /= static_cast<double>(n);
    double s = 0.0;
    for (double v : x) s += (v - mu) * (v - mu);
    s = std::sqrt(s / static_cast<double>(n));
    if (s == 0.0) {
        if (degree == 0) s = 1.0;
        else throw numeric_error("polynomial fit: rank-deficient design (all x equal)");
    }

    std::vector<std::vector<double>> ata(m, std::vector<double>(m, 0.0));
    std::vector<double> atb(m, 0.0);
    std::vector<double> pows(2 * m - 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double z = (x[i] - mu) / s, zp = 1.0;
        for (std::size_t k = 0; k < 2 * m - 1; ++k) {
            pows[k] += zp;
            if (k < m) atb[k] += zp * y[i];
            zp *= z;
        }
    }
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < m; ++c) ata[r][c] = pows[r + c];

    std::vector<double> cz = detail::solve_dense(std::move(ata), std::move(atb));
    PolyFit f;
    f.coeffs = detail::uncentre(cz, mu, s);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = y[i] - f.eval(x[i]);
        ss += r * r;
    }
    f.residual_std = n > m ? std::sqrt(ss / static_cast<double>(n - m))
                           : std::sqrt(ss / static_cast<double>(n));
    return f;
}

/// Max |X^T r| over design columns (z-powers), for orthogonality checks.
inline double residual_design_dot(std::span<const double> x,
                                  std::span<const double> y, const PolyFit& f,
                                  int degree) {
    double mu = 0.0;
    for (double v : x) mu += v;
    mu /= static_cast<double>(x.size());
    double s = 0.0;
    for (double v : x) s += (v - mu) * (v - mu);
    s = std::sqrt(s / static_cast<double>(x.size()));
    if (s == 0.0) s = 1.0;
    double worst = 0.0;
    for (int k = 0; k <= degree; ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            double r = y[i] - f.eval(x[i]);
            acc += r * std::pow((x[i] - mu) / s, k);
        }
        worst = std::max(worst, std::abs(acc));
    }
    return worst;
}

}  // namespace llob::fit
