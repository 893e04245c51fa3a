#pragma once

#include <span>
#include <vector>

namespace edgestat {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
    void append(const QuadratureRule& other);
};

// n-point Gauss-Legendre on [-1, 1]; cached, safe to call concurrently.
const QuadratureRule& gauss_legendre(int n);

// Affine image of the n-point rule on [a, b].
QuadratureRule gauss_legendre(int n, double a, double b);

// One n-point panel per consecutive pair of breakpoints.
QuadratureRule composite_gauss_legendre(std::span<const double> breaks, int n);

// Panels on [a, b] whose widths never exceed width(x) evaluated at the panel start.
template <class WidthFn>
std::vector<double> panel_breaks(double a, double b, WidthFn width)
{
    std::vector<double> br{a};
    double x = a;
    while (x < b) {
        double h = width(x);
        if (x + h >= b || b - (x + h) < 0.25 * h) x = b;
        else x += h;
        br.push_back(x);
    }
    return br;
}

} // namespace edgestat
