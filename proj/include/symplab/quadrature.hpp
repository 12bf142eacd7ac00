#pragma once
/// @file quadrature.hpp
/// Piecewise quadrature with caller-supplied breakpoints: adaptive
/// Gauss-Kronrod on segments, tensor Gauss-Legendre panels on rectangles.

#include "symplab/geometry.hpp"

#include <functional>
#include <vector>

namespace symplab {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
};

struct QuadratureConfig {
    /// Gauss-Legendre panels per unit length (20 nodes each); 20 gives 400x400 per unit square.
    int panels_per_unit = 20;
    /// Relative tolerance for adaptive Gauss-Kronrod line integrals.
    double line_tolerance = 1e-13;
    int max_depth = 20;
};

struct Rect {
    double x0, x1, y0, y1;
};

/// Sorted unique cut points of [a,b] including both ends; interior cuts taken from breaks.
std::vector<double> split_points(double a, double b, const std::vector<double>& breaks);

/// Integral of f over [a,b], adaptive Gauss-Kronrod on every piece between breaks.
QuadratureResult integrate_line(const std::function<double(double)>& f, double a, double b,
                                const std::vector<double>& breaks, const QuadratureConfig& cfg = {});

/// Tensor Gauss-Legendre integral over a rectangle split at the breaks; the error
/// estimate compares against the same rule with doubled panel count.
QuadratureResult integrate_rect(const std::function<double(double, double)>& f, const Rect& rect,
                                const std::vector<double>& x_breaks, const std::vector<double>& y_breaks,
                                const QuadratureConfig& cfg = {});

/// The four rectangles tiling D_eps inside the unit square.
std::vector<Rect> punctured_torus_rects(const Epsilon& eps);

}  // namespace symplab
