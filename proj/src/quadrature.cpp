#include "symplab/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>

namespace symplab {

namespace {

using GL = boost::math::quadrature::gauss<double, 20>;

/// Nodes and weights of the 20-point rule on [-1,1], both halves.
struct FullRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    FullRule() {
        const auto& x = GL::abscissa();
        const auto& w = GL::weights();
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i] == 0.0) {
                nodes.push_back(0.0);
                weights.push_back(w[i]);
                continue;
            }
            nodes.push_back(-x[i]);
            weights.push_back(w[i]);
            nodes.push_back(x[i]);
            weights.push_back(w[i]);
        }
    }
};

const FullRule& rule() {
    static const FullRule r;
    return r;
}

/// Panel nodes and weights on [a,b] with the given panel count.
void panel_nodes(double a, double b, int panels, std::vector<double>& nodes, std::vector<double>& weights) {
    const auto& r = rule();
    double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        double lo = a + p * h;
        double mid = lo + 0.5 * h;
        for (std::size_t i = 0; i < r.nodes.size(); ++i) {
            nodes.push_back(mid + 0.5 * h * r.nodes[i]);
            weights.push_back(0.5 * h * r.weights[i]);
        }
    }
}

void axis_nodes(const std::vector<double>& cuts, int panels_per_unit, std::vector<double>& nodes,
                std::vector<double>& weights) {
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double len = cuts[i + 1] - cuts[i];
        int panels = std::max(1, static_cast<int>(std::ceil(len * panels_per_unit - 1e-9)));
        panel_nodes(cuts[i], cuts[i + 1], panels, nodes, weights);
    }
}

double tensor_sum(const std::function<double(double, double)>& f, const std::vector<double>& xc,
                  const std::vector<double>& yc, int panels_per_unit) {
    std::vector<double> xn, xw, yn, yw;
    axis_nodes(xc, panels_per_unit, xn, xw);
    axis_nodes(yc, panels_per_unit, yn, yw);
    double total = 0.0;
    for (std::size_t i = 0; i < xn.size(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < yn.size(); ++j) row += yw[j] * f(xn[i], yn[j]);
        total += xw[i] * row;
    }
    return total;
}

}  // namespace

std::vector<double> split_points(double a, double b, const std::vector<double>& breaks) {
    std::vector<double> pts{a, b};
    for (double t : breaks)
        if (t > a && t < b) pts.push_back(t);
    std::sort(pts.begin(), pts.end());
    std::vector<double> out;
    for (double t : pts)
        if (out.empty() || t - out.back() > 1e-15) out.push_back(t);
    if (out.back() != b) out.back() = b;
    return out;
}

QuadratureResult integrate_line(const std::function<double(double)>& f, double a, double b,
                                const std::vector<double>& breaks, const QuadratureConfig& cfg) {
    QuadratureResult res;
    auto cuts = split_points(a, b, breaks);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double err = 0.0;
        res.value += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
            f, cuts[i], cuts[i + 1], static_cast<unsigned>(cfg.max_depth), cfg.line_tolerance, &err);
        res.error_estimate += err;
    }
    return res;
}

QuadratureResult integrate_rect(const std::function<double(double, double)>& f, const Rect& rect,
                                const std::vector<double>& x_breaks, const std::vector<double>& y_breaks,
                                const QuadratureConfig& cfg) {
    auto xc = split_points(rect.x0, rect.x1, x_breaks);
    auto yc = split_points(rect.y0, rect.y1, y_breaks);
    double coarse = tensor_sum(f, xc, yc, cfg.panels_per_unit);
    double fine = tensor_sum(f, xc, yc, 2 * cfg.panels_per_unit);
    return {fine, std::fabs(fine - coarse)};
}

std::vector<Rect> punctured_torus_rects(const Epsilon& eps) {
    double e2 = 2.0 * eps.value();
    return {{0.0, 1.0, 0.0, e2}, {0.0, 1.0, 1.0 - e2, 1.0}, {0.0, e2, e2, 1.0 - e2}, {1.0 - e2, 1.0, e2, 1.0 - e2}};
}

}  // namespace symplab
