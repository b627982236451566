// Shared test helpers: seeded random states, observables and behaviors, the
// 16 setting/outcome relabelings, and the 8 PR-box variants.
#pragma once

#include <array>
#include <random>
#include <vector>

#include "corrlab/behavior.hpp"
#include "corrlab/hv.hpp"
#include "corrlab/matrix.hpp"
#include "corrlab/qm.hpp"
#include "corrlab/rng.hpp"

namespace testutil {

using namespace corrlab;

inline MeasurementDirection random_direction(std::mt19937_64& rng) {
    while (true) {
        const double x = gaussian(rng), y = gaussian(rng), z = gaussian(rng);
        const double n = std::sqrt(x * x + y * y + z * z);
        if (n > 1e-6) return MeasurementDirection(x / n, y / n, z / n);
    }
}

inline std::vector<cplx> random_pure(int dim, std::mt19937_64& rng) {
    std::vector<cplx> psi(dim);
    for (auto& c : psi) c = cplx{gaussian(rng), gaussian(rng)};
    return psi;  // QuantumState::pure normalizes
}

// Haar-ish unitary via Gram-Schmidt on a complex Gaussian matrix; good
// enough as a source of random orthonormal bases.
inline Matrix random_unitary(int dim, std::mt19937_64& rng) {
    Matrix u(dim);
    for (int col = 0; col < dim; ++col) {
        std::vector<cplx> v(dim);
        for (int i = 0; i < dim; ++i) v[i] = cplx{gaussian(rng), gaussian(rng)};
        for (int prev = 0; prev < col; ++prev) {
            cplx overlap{0.0, 0.0};
            for (int i = 0; i < dim; ++i) overlap += std::conj(u(i, prev)) * v[i];
            for (int i = 0; i < dim; ++i) v[i] -= overlap * u(i, prev);
        }
        double norm = 0.0;
        for (const cplx& c : v) norm += std::norm(c);
        norm = std::sqrt(norm);
        for (int i = 0; i < dim; ++i) u(i, col) = v[i] / norm;
    }
    return u;
}

// Hermitian observable U diag(values) U^H.
inline HermitianOperator observable_with_spectrum(const Matrix& u, const std::vector<double>& values) {
    const int dim = u.dim();
    Matrix m(dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            cplx s{0.0, 0.0};
            for (int k = 0; k < dim; ++k) s += u(i, k) * values[k] * std::conj(u(j, k));
            m(i, j) = s;
        }
    // Force exact Hermitian symmetry so constructor tolerances never bite.
    for (int i = 0; i < dim; ++i) {
        m(i, i) = m(i, i).real();
        for (int j = i + 1; j < dim; ++j) m(j, i) = std::conj(m(i, j));
    }
    return HermitianOperator(m);
}

inline HermitianOperator random_dichotomic(int dim, std::mt19937_64& rng) {
    const Matrix u = random_unitary(dim, rng);
    std::vector<double> values(dim);
    bool saw_plus = false, saw_minus = false;
    for (int i = 0; i < dim; ++i) {
        values[i] = (rng() & 1) ? 1.0 : -1.0;
        (values[i] > 0 ? saw_plus : saw_minus) = true;
    }
    if (!saw_plus) values[0] = 1.0;
    if (!saw_minus) values[dim - 1] = -1.0;
    return observable_with_spectrum(u, values);
}

inline QuantumState random_density(int dim, std::mt19937_64& rng) {
    Matrix g(dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = cplx{gaussian(rng), gaussian(rng)};
    Matrix rho = g * g.adjoint();
    rho = rho * cplx{1.0 / rho.trace().real(), 0.0};
    for (int i = 0; i < dim; ++i) {
        rho(i, i) = rho(i, i).real();
        for (int j = i + 1; j < dim; ++j) rho(j, i) = std::conj(rho(i, j));
    }
    return QuantumState(rho);
}

// PR-box family: a.b = -1 exactly when x.y + alpha.x + beta.y + gamma is odd.
inline Behavior pr_box_variant(int alpha, int beta, int gamma) {
    Behavior b;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            const int parity = (x * y + alpha * x + beta * y + gamma) & 1;
            const int target = parity ? -1 : +1;
            for (int ia = 0; ia < 2; ++ia)
                for (int ib = 0; ib < 2; ++ib) {
                    const int a = index_outcome(ia), bb = index_outcome(ib);
                    b.at_index(x, y, ia, ib) = (a * bb == target) ? 0.5 : 0.0;
                }
        }
    return b;
}

// Random point of the no-signalling polytope, mixed over its 24 extreme
// points (16 local vertices + 8 PR variants). Dense mixtures average the PR
// variants toward uniform and land deep inside the local region, so half the
// draws use a sparse support (one PR variant plus a few vertices) to reach
// the nonlocal part of the polytope as well.
inline Behavior random_ns_behavior(std::mt19937_64& rng, double pr_mass_scale = 1.0) {
    const auto extreme_point = [](int i) {
        return i < 16 ? deterministic_vertex(i)
                      : pr_box_variant((i - 16) & 1, ((i - 16) >> 1) & 1, ((i - 16) >> 2) & 1);
    };

    std::array<double, 24> w{};
    if (uniform01(rng) < 0.5) {
        for (int i = 0; i < 24; ++i) {
            w[i] = -std::log(1.0 - uniform01(rng));
            if (i >= 16) w[i] *= pr_mass_scale;
        }
    } else {
        const int pr = 16 + static_cast<int>(rng() % 8);
        w[pr] = 3.0 * uniform01(rng) * pr_mass_scale;
        const int nverts = 1 + static_cast<int>(rng() % 4);
        for (int k = 0; k < nverts; ++k) w[rng() % 16] += -std::log(1.0 - uniform01(rng));
    }

    double sum = 0.0;
    for (double v : w) sum += v;
    Behavior b;
    for (int i = 0; i < 24; ++i) {
        if (w[i] == 0.0) continue;
        const Behavior v = extreme_point(i);
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                for (int ia = 0; ia < 2; ++ia)
                    for (int ib = 0; ib < 2; ++ib)
                        b.at_index(x, y, ia, ib) += (w[i] / sum) * v.at_index(x, y, ia, ib);
    }
    return b;
}

// Random valid behavior, generically signalling: independent distribution
// per context.
inline Behavior random_behavior(std::mt19937_64& rng) {
    Behavior b;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            std::array<double, 4> p{};
            double sum = 0.0;
            for (auto& v : p) {
                v = -std::log(1.0 - uniform01(rng));
                sum += v;
            }
            for (auto& v : p) v /= sum;
            b.at_index(x, y, 0, 0) = p[0];
            b.at_index(x, y, 0, 1) = p[1];
            b.at_index(x, y, 1, 0) = p[2];
            b.at_index(x, y, 1, 1) = p[3];
        }
    return b;
}

// The 16 relabelings: swap either party's settings, flip either party's
// outcomes globally.
inline Behavior relabel(const Behavior& b, bool swap_x, bool swap_y, bool flip_a, bool flip_b) {
    Behavior r;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int ia = 0; ia < 2; ++ia)
                for (int ib = 0; ib < 2; ++ib) {
                    const int a = index_outcome(ia), bb = index_outcome(ib);
                    r.at(x, y, a, bb) = b.at(swap_x ? 1 - x : x, swap_y ? 1 - y : y,
                                             flip_a ? -a : a, flip_b ? -bb : bb);
                }
    return r;
}

}  // namespace testutil
