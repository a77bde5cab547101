#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library; each oracle is a direct transcription of the governing
// formula or a brute-force numerical method.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace oracle {

inline double lambda_tp(double alpha_f, double alpha_s, double c_f, double c_phi) {
    return (alpha_f - alpha_s) / (c_f + c_phi);
}

inline double vogel(double T, double A = 2.414e-5, double B = 247.8, double C = 140.0) {
    return A * std::pow(10.0, B / (T - C));
}

inline double deborah(double L, double mu, double beta, double k, double t_load) {
    return L * L * mu * beta / (k * t_load);
}

inline double jurin(double r, double gamma, double theta, double rho, double g) {
    return 2.0 * gamma * std::cos(theta) / (rho * g * r);
}

/// Classical RK4 on dh/dt = r^2/(8 mu h) (2 gamma cos(theta)/r - rho g h).
inline double capillary_rk4(double h0, double t_end, double dt, double r, double gamma, double theta, double rho,
                            double mu, double g) {
    auto f = [&](double h) { return r * r / (8.0 * mu * h) * (2.0 * gamma * std::cos(theta) / r - rho * g * h); };
    double h = h0;
    double t = 0.0;
    while (t < t_end - 1e-12) {
        const double step = std::min(dt, t_end - t);
        const double k1 = f(h);
        const double k2 = f(h + 0.5 * step * k1);
        const double k3 = f(h + 0.5 * step * k2);
        const double k4 = f(h + step * k3);
        h += step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += step;
    }
    return h;
}

struct SurfacePoint {
    double p = 0.0;
    double q = 0.0;
    double distance2 = std::numeric_limits<double>::infinity();
};

/// Minimises dp^2/K + dq^2/(3G) over the ellipse q^2 + M^2 p (p - pc) = 0,
/// q >= 0, by dense sampling of the angle followed by golden-section refinement.
inline SurfacePoint closest_on_ellipse(double p_tr, double q_tr, double pc, double M, double K, double G,
                                       int samples = 200000) {
    auto point = [&](double phi) {
        const double p = 0.5 * pc * (1.0 + std::cos(phi));
        const double q = 0.5 * M * pc * std::sin(phi);
        const double d2 = (p - p_tr) * (p - p_tr) / K + (q - q_tr) * (q - q_tr) / (3.0 * G);
        return SurfacePoint{p, q, d2};
    };
    const double pi = std::acos(-1.0);
    int best = 0;
    SurfacePoint best_pt = point(0.0);
    for (int i = 1; i <= samples; ++i) {
        const SurfacePoint s = point(pi * i / samples);
        if (s.distance2 < best_pt.distance2) {
            best_pt = s;
            best = i;
        }
    }
    double a = pi * std::max(0, best - 1) / samples;
    double b = pi * std::min(samples, best + 1) / samples;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 200; ++it) {
        const double x1 = b - gr * (b - a);
        const double x2 = a + gr * (b - a);
        if (point(x1).distance2 < point(x2).distance2) {
            b = x2;
        } else {
            a = x1;
        }
    }
    const SurfacePoint refined = point(0.5 * (a + b));
    return refined.distance2 < best_pt.distance2 ? refined : best_pt;
}

/// Dense Gaussian elimination with partial pivoting. `A` is row-major n x n.
inline std::vector<double> solve_dense(std::vector<double> A, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(A[r * n + col]) > std::abs(A[piv * n + col])) piv = r;
        }
        if (piv != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(A[col * n + c], A[piv * n + c]);
            std::swap(b[col], b[piv]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = A[r * n + col] / A[col * n + col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) A[r * n + c] -= f * A[col * n + c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= A[i * n + c] * x[c];
        x[i] = s / A[i * n + i];
    }
    return x;
}

/// Backward-Euler step of du/dt = div(c grad u) on a cell-centred
/// axisymmetric grid with uniform c, insulated z ends and either a Dirichlet
/// rim (value u_b on the face at r = R) or a sealed rim. Assembled and solved
/// directly.
inline std::vector<double> implicit_diffusion_uniform(const std::vector<double>& u0, int nr, int nz, double R,
                                                      double H, double c, double dt, bool dirichlet, double u_b) {
    const double dr = R / nr;
    const double dz = H / nz;
    const std::size_t n = static_cast<std::size_t>(nr) * nz;
    std::vector<double> A(n * n, 0.0);
    std::vector<double> b = u0;
    auto id = [&](int i, int j) { return static_cast<std::size_t>(j) * nr + i; };
    for (int j = 0; j < nz; ++j) {
        for (int i = 0; i < nr; ++i) {
            const std::size_t row = id(i, j);
            const double r = (i + 0.5) * dr;
            double diag = 1.0;
            auto couple = [&](std::size_t col, double w) {
                A[row * n + col] -= w;
                diag += w;
            };
            if (i > 0) couple(id(i - 1, j), dt * c * (i * dr) / (r * dr * dr));
            if (i < nr - 1) couple(id(i + 1, j), dt * c * ((i + 1) * dr) / (r * dr * dr));
            if (i == nr - 1 && dirichlet) {
                const double w = dt * c * R * 2.0 / (r * dr * dr);
                diag += w;
                b[row] += w * u_b;
            }
            if (j > 0) couple(id(i, j - 1), dt * c / (dz * dz));
            if (j < nz - 1) couple(id(i, j + 1), dt * c / (dz * dz));
            A[row * n + row] += diag;
        }
    }
    return solve_dense(std::move(A), std::move(b));
}

}  // namespace oracle
