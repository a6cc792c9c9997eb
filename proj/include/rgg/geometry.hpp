// Box geometry, p-norms, Poisson point sets and the critical-radius solvers.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rgg/rng.hpp"

namespace rgg {

/// Axis-aligned box of volume `intensity_n` in `dimension_d` dimensions.
/// The side length is n^(1/d), so a unit-density Poisson process in the box
/// has expected point count n.
struct BoxSpec {
    double intensity_n = 0.0;
    int dimension_d = 2;

    BoxSpec() = default;
    BoxSpec(double n, int d) : intensity_n(n), dimension_d(d) {
        if (!(n > 0.0)) throw std::invalid_argument("BoxSpec: intensity must be positive");
        if (d < 1) throw std::invalid_argument("BoxSpec: dimension must be >= 1");
    }

    double side() const { return std::pow(intensity_n, 1.0 / dimension_d); }
};

/// p-norm with p in [1, inf]; infinity is encoded as INFINITY.
struct Norm {
    double p = 2.0;

    Norm() = default;
    explicit Norm(double p_) : p(p_) {
        if (std::isnan(p) || p < 1.0) throw std::invalid_argument("Norm: p must be >= 1");
    }

    static Norm euclidean() { return Norm(2.0); }
    static Norm manhattan() { return Norm(1.0); }
    static Norm linf() { return Norm(std::numeric_limits<double>::infinity()); }

    bool is_inf() const { return std::isinf(p); }
};

/// p-norm distance between two d-dimensional points.
inline double distance(const double* a, const double* b, int d, const Norm& norm) {
    if (norm.is_inf()) {
        double m = 0.0;
        for (int i = 0; i < d; ++i) m = std::max(m, std::abs(a[i] - b[i]));
        return m;
    }
    if (norm.p == 2.0) {
        double s = 0.0;
        for (int i = 0; i < d; ++i) {
            const double t = a[i] - b[i];
            s += t * t;
        }
        return std::sqrt(s);
    }
    if (norm.p == 1.0) {
        double s = 0.0;
        for (int i = 0; i < d; ++i) s += std::abs(a[i] - b[i]);
        return s;
    }
    double s = 0.0;
    for (int i = 0; i < d; ++i) s += std::pow(std::abs(a[i] - b[i]), norm.p);
    return std::pow(s, 1.0 / norm.p);
}

inline double distance(const std::vector<double>& a, const std::vector<double>& b, const Norm& norm) {
    if (a.size() != b.size()) throw std::invalid_argument("distance: dimension mismatch");
    return distance(a.data(), b.data(), static_cast<int>(a.size()), norm);
}

/// Volume of the unclipped p-ball of radius r in d dimensions:
/// (2r)^d * Gamma(1+1/p)^d / Gamma(1+d/p).
inline double ball_volume_unclipped(double r, int d, const Norm& norm) {
    if (norm.is_inf()) return std::pow(2.0 * r, d);
    const double lg = d * std::lgamma(1.0 + 1.0 / norm.p) - std::lgamma(1.0 + d / norm.p);
    return std::pow(2.0 * r, d) * std::exp(lg);
}

/// A realized Poisson process in a box. Coordinates are stored flat,
/// d per point.
struct PointSet {
    BoxSpec box;
    std::vector<double> coords;
    std::uint64_t seed = 0;

    int count() const { return static_cast<int>(coords.size()) / std::max(1, box.dimension_d); }
    const double* point(int i) const { return coords.data() + static_cast<std::size_t>(i) * box.dimension_d; }

    double dist(int i, int j, const Norm& norm) const {
        return distance(point(i), point(j), box.dimension_d, norm);
    }
};

/// Sample a Poisson process of density 1 in the box. Deterministic in
/// (box, seed): the realized count is drawn first, then coordinates in order.
inline PointSet sample_poisson(const BoxSpec& box, std::uint64_t seed) {
    PointSet ps;
    ps.box = box;
    ps.seed = seed;
    Rng rng(seed);
    const std::uint64_t n = rng.poisson(box.intensity_n);
    const double side = box.side();
    ps.coords.resize(n * static_cast<std::size_t>(box.dimension_d));
    for (std::size_t i = 0; i < ps.coords.size(); ++i) ps.coords[i] = rng.uniform(side);
    return ps;
}

/// sqrt(log n / pi): the planar critical radius (natural log).
inline double r0_planar(double intensity_n) {
    if (!(intensity_n > 1.0)) throw std::invalid_argument("r0_planar: n must be > 1");
    const double pi = 4.0 * std::atan(1.0);
    return std::sqrt(std::log(intensity_n) / pi);
}

/// Volume of the r-ball around `center` clipped to the box, by midpoint
/// quadrature over the ball's bounding cube at `resolution` cells per axis.
inline double ball_box_volume(const std::vector<double>& center, double r, const BoxSpec& box,
                              const Norm& norm, int resolution = 256) {
    const int d = box.dimension_d;
    if (static_cast<int>(center.size()) != d)
        throw std::invalid_argument("ball_box_volume: center dimension mismatch");
    if (!(r > 0.0)) throw std::invalid_argument("ball_box_volume: r must be positive");
    if (resolution < 1) throw std::invalid_argument("ball_box_volume: resolution must be >= 1");
    const double side = box.side();
    for (int i = 0; i < d; ++i)
        if (center[i] < 0.0 || center[i] > side)
            throw std::invalid_argument("ball_box_volume: center outside box");

    const double cell = 2.0 * r / resolution;
    const double cell_vol = std::pow(cell, d);
    std::vector<int> idx(d, 0);
    std::vector<double> x(d);
    double vol = 0.0;
    for (;;) {
        bool inside_box = true;
        for (int i = 0; i < d; ++i) {
            x[i] = center[i] - r + (idx[i] + 0.5) * cell;
            if (x[i] < 0.0 || x[i] > side) {
                inside_box = false;
                break;
            }
        }
        if (inside_box && distance(x.data(), center.data(), d, norm) <= r) vol += cell_vol;
        int axis = 0;
        while (axis < d && ++idx[axis] == resolution) idx[axis++] = 0;
        if (axis == d) break;
    }
    return vol;
}

/// Options for the expected-isolated-vertices quadrature behind r0_general.
/// The integrand exp(-|{x}_r|) depends only on the offsets from the nearest
/// faces and is constant once every offset exceeds r, so one orthant with a
/// graded axis grid (fine cells up to r, one exact tail cell beyond) suffices.
struct R0Options {
    int axis_cells = 48;        // fine cells per axis on [0, r]
    int ball_resolution = 128;  // resolution for the inner clipped-ball quadrature
    int max_bisect = 200;
};

/// E(r) = integral over the box of exp(-|{x}_r|) dx.
inline double expected_isolated(double r, const BoxSpec& box, const Norm& norm,
                                const R0Options& opt = {}) {
    const int d = box.dimension_d;
    const double side = box.side();
    const double half = side / 2.0;
    const double fine_end = std::min(r, half);

    // Axis breakpoints: opt.axis_cells cells on [0, fine_end], then (if room)
    // a single tail cell [fine_end, half] where the integrand is constant in
    // that coordinate.
    std::vector<double> lo, width, mid;
    for (int i = 0; i < opt.axis_cells; ++i) {
        const double w = fine_end / opt.axis_cells;
        lo.push_back(i * w);
        width.push_back(w);
        mid.push_back((i + 0.5) * w);
    }
    if (fine_end < half) {
        lo.push_back(fine_end);
        width.push_back(half - fine_end);
        mid.push_back((fine_end + half) / 2.0);
    }
    const int m = static_cast<int>(mid.size());

    std::vector<int> idx(d, 0);
    std::vector<double> x(d);
    double total = 0.0;
    for (;;) {
        double cell_vol = 1.0;
        for (int i = 0; i < d; ++i) {
            x[i] = mid[idx[i]];
            cell_vol *= width[idx[i]];
        }
        const double a = ball_box_volume(x, r, box, norm, opt.ball_resolution);
        total += std::exp(-a) * cell_vol;
        int axis = 0;
        while (axis < d && ++idx[axis] == m) idx[axis++] = 0;
        if (axis == d) break;
    }
    return std::pow(2.0, d) * total;
}

/// Solve E(r0) = 1 by bisection. E is strictly decreasing in r.
inline double r0_general(const BoxSpec& box, const Norm& norm, double tol = 0.01,
                         const R0Options& opt = {}) {
    if (!(box.intensity_n > 1.0)) throw std::invalid_argument("r0_general: n must be > 1");
    if (!(tol > 0.0)) throw std::invalid_argument("r0_general: tol must be positive");

    // Bracket around the planar scale; clipping only raises E, so the planar
    // radius is a lower end for any p-norm after rescaling by ball volume.
    const double scale =
        std::pow(std::log(box.intensity_n) / ball_volume_unclipped(1.0, box.dimension_d, norm),
                 1.0 / box.dimension_d);
    double lo = 0.5 * scale, hi = 1.5 * scale;
    double e_lo = expected_isolated(lo, box, norm, opt);
    double e_hi = expected_isolated(hi, box, norm, opt);
    int guard = 0;
    while (e_lo < 1.0 && guard++ < 60) {
        lo *= 0.5;
        e_lo = expected_isolated(lo, box, norm, opt);
    }
    while (e_hi > 1.0 && guard++ < 60) {
        hi *= 1.5;
        e_hi = expected_isolated(hi, box, norm, opt);
    }
    if (e_lo < 1.0 || e_hi > 1.0) {
        std::ostringstream msg;
        msg << "r0_general: bracket failure, E(" << lo << ")=" << e_lo << " E(" << hi
            << ")=" << e_hi;
        throw std::runtime_error(msg.str());
    }
    for (int it = 0; it < opt.max_bisect; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double e = expected_isolated(mid, box, norm, opt);
        if (std::abs(e - 1.0) <= tol) return mid;
        (e > 1.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Point-set file format:
//   # n=<real> d=<int> seed=<u64> count=<int>
//   <x1> ... <xd>        (one point per line, 17 significant digits)
// ---------------------------------------------------------------------------

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_point_set(std::ostream& os, const PointSet& ps) {
    const int d = ps.box.dimension_d;
    os << "# n=" << format_double(ps.box.intensity_n) << " d=" << d << " seed=" << ps.seed
       << " count=" << ps.count() << "\n";
    for (int i = 0; i < ps.count(); ++i) {
        const double* p = ps.point(i);
        for (int j = 0; j < d; ++j) os << (j ? " " : "") << format_double(p[j]);
        os << "\n";
    }
}

inline void write_point_set(const std::string& path, const PointSet& ps) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    write_point_set(os, ps);
}

inline PointSet read_point_set(std::istream& is) {
    std::string header;
    if (!std::getline(is, header) || header.rfind("# n=", 0) != 0)
        throw std::runtime_error("point file: bad header");
    double n = 0.0;
    int d = 0, count = 0;
    unsigned long long seed = 0;
    if (std::sscanf(header.c_str(), "# n=%lf d=%d seed=%llu count=%d", &n, &d, &seed, &count) != 4)
        throw std::runtime_error("point file: unparsable header");
    PointSet ps;
    ps.box = BoxSpec(n, d);
    ps.seed = seed;
    ps.coords.reserve(static_cast<std::size_t>(count) * d);
    std::string line;
    for (int i = 0; i < count; ++i) {
        if (!std::getline(is, line)) throw std::runtime_error("point file: truncated");
        std::istringstream ls(line);
        for (int j = 0; j < d; ++j) {
            double v;
            if (!(ls >> v)) throw std::runtime_error("point file: bad coordinate");
            ps.coords.push_back(v);
        }
    }
    return ps;
}

inline PointSet read_point_set(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open: " + path);
    return read_point_set(is);
}

}  // namespace rgg
