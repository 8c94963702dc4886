#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>

#include "llob/common.hpp"

// Small quadrature toolkit: fixed Gauss-Legendre panels and an adaptive
// Simpson fallback for the odd integrand that needs it.

namespace llob::quad {

struct GaussRule {
    const double* x;  // nodes on (-1, 1)
    const double* w;
    int n;
};

namespace detail {

// 8-point Gauss-Legendre
inline constexpr std::array<double, 8> gl8_x = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
    -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
    0.7966664774136267,  0.9602898564975363};
inline constexpr std::array<double, 8> gl8_w = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
    0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
    0.2223810344533745, 0.1012285362903763};

// 16-point Gauss-Legendre
inline constexpr std::array<double, 16> gl16_x = {
    -0.9894009349916499, -0.9445750230732326, -0.8656312023878318,
    -0.7554044083550030, -0.6178762444026438, -0.4580167776572274,
    -0.2816035507792589, -0.0950125098376374, 0.0950125098376374,
    0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
    0.7554044083550030,  0.8656312023878318,  0.9445750230732326,
    0.9894009349916499};
inline constexpr std::array<double, 16> gl16_w = {
    0.0271524594117541, 0.0622535239386479, 0.0951585116824928,
    0.1246289712555339, 0.1495959888165767, 0.1691565193950025,
    0.1826034150449236, 0.1894506104550685, 0.1894506104550685,
    0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479,
    0.0271524594117541};

// 32-point Gauss-Legendre
inline constexpr std::array<double, 32> gl32_x = {
    -0.9972638618494816, -0.9856115115452684, -0.9647622555875064,
    -0.9349060759377397, -0.8963211557660521, -0.8493676137325700,
    -0.7944837959679424, -0.7321821187402897, -0.6630442669302152,
    -0.5877157572407623, -0.5068999089322294, -0.4213512761306353,
    -0.3318686022821277, -0.2392873622521371, -0.1444719615827965,
    -0.0483076656877383, 0.0483076656877383,  0.1444719615827965,
    0.2392873622521371,  0.3318686022821277,  0.4213512761306353,
    0.5068999089322294,  0.5877157572407623,  0.6630442669302152,
    0.7321821187402897,  0.7944837959679424,  0.8493676137325700,
    0.8963211557660521,  0.9349060759377397,  0.9647622555875064,
    0.9856115115452684,  0.9972638618494816};
inline constexpr std::array<double, 32> gl32_w = {
    0.0070186100094701, 0.0162743947309057, 0.0253920653092621,
    0.0342738629130214, 0.0428358980222267, 0.0509980592623762,
    0.0586840934785355, 0.0658222227763618, 0.0723457941088485,
    0.0781938957870703, 0.0833119242269467, 0.0876520930044038,
    0.0911738786957639, 0.0938443990808046, 0.0956387200792749,
    0.0965400885147278, 0.0965400885147278, 0.0956387200792749,
    0.0938443990808046, 0.0911738786957639, 0.0876520930044038,
    0.0833119242269467, 0.0781938957870703, 0.0723457941088485,
    0.0658222227763618, 0.0586840934785355, 0.0509980592623762,
    0.0428358980222267, 0.0342738629130214, 0.0253920653092621,
    0.0162743947309057, 0.0070186100094701};

}  // namespace detail

inline GaussRule gl8() { return {detail::gl8_x.data(), detail::gl8_w.data(), 8}; }
inline GaussRule gl16() { return {detail::gl16_x.data(), detail::gl16_w.data(), 16}; }
inline GaussRule gl32() { return {detail::gl32_x.data(), detail::gl32_w.data(), 32}; }

/// One Gauss panel over [a, b].
template <typename F>
double gauss(F&& f, double a, double b, const GaussRule& rule = gl16()) {
    if (!(b > a)) return 0.0;
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < rule.n; ++i) acc += rule.w[i] * f(mid + half * rule.x[i]);
    return half * acc;
}

/// Uniform Gauss panels over [a, b].
template <typename F>
double gauss_panels(F&& f, double a, double b, int panels,
                    const GaussRule& rule = gl16()) {
    if (!(b > a)) return 0.0;
    double h = (b - a) / panels, acc = 0.0;
    for (int k = 0; k < panels; ++k) acc += gauss(f, a + k * h, a + (k + 1) * h, rule);
    return acc;
}

namespace detail {
template <typename F>
double simpson_rec(F& f, double a, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0) throw numeric_error("adaptive quadrature: depth exhausted");
    if (std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

/// Adaptive Simpson with absolute tolerance.
template <typename F>
double adaptive(F&& f, double a, double b, double tol, int max_depth = 48) {
    if (!(b > a)) return 0.0;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

}  // namespace llob::quad
