// Finite-dimensional quantum kernel: observables, density matrices, Born-rule
// expectations, commutators, projective sequential measurement, and the
// two-qubit behavior generator. All Hilbert spaces have dim <= 8.
#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "corrlab/behavior.hpp"
#include "corrlab/matrix.hpp"
#include "corrlab/rng.hpp"

namespace corrlab {

inline constexpr int kMaxDim = 8;

struct MeasurementDirection {
    double x, y, z;

    MeasurementDirection(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {
        const double norm = std::sqrt(x * x + y * y + z * z);
        if (std::abs(norm - 1.0) > 1e-12)
            throw std::invalid_argument("MeasurementDirection: vector must be unit length, norm = " +
                                        std::to_string(norm));
    }

    // Direction at angle theta from +z in the x-z plane.
    static MeasurementDirection planar(double theta_rad) {
        return MeasurementDirection(std::sin(theta_rad), 0.0, std::cos(theta_rad));
    }

    double dot(const MeasurementDirection& o) const { return x * o.x + y * o.y + z * o.z; }
};

class HermitianOperator {
public:
    explicit HermitianOperator(Matrix m) : m_(std::move(m)) {
        if (m_.dim() < 1 || m_.dim() > kMaxDim)
            throw std::invalid_argument("HermitianOperator: dimension must be in [1," +
                                        std::to_string(kMaxDim) + "], got " + std::to_string(m_.dim()));
        if (!m_.is_hermitian(1e-12))
            throw std::invalid_argument("HermitianOperator: matrix is not Hermitian (defect " +
                                        std::to_string(m_.hermiticity_defect()) + ")");
    }

    int dim() const { return m_.dim(); }
    const Matrix& matrix() const { return m_; }

    HermitianOperator tensor(const HermitianOperator& o) const {
        return HermitianOperator(m_.tensor(o.m_));
    }

    static HermitianOperator identity(int dim) { return HermitianOperator(Matrix::identity(dim)); }

private:
    Matrix m_;
};

inline HermitianOperator sigma_x() {
    Matrix m(2);
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    return HermitianOperator(m);
}
inline HermitianOperator sigma_y() {
    Matrix m(2);
    m(0, 1) = cplx{0.0, -1.0};
    m(1, 0) = cplx{0.0, 1.0};
    return HermitianOperator(m);
}
inline HermitianOperator sigma_z() {
    Matrix m(2);
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return HermitianOperator(m);
}

// n.sigma: the dichotomic spin observable along n, eigenvalues exactly +-1.
inline HermitianOperator spin_observable(const MeasurementDirection& n) {
    Matrix m(2);
    m(0, 0) = n.z;
    m(0, 1) = cplx{n.x, -n.y};
    m(1, 0) = cplx{n.x, n.y};
    m(1, 1) = -n.z;
    return HermitianOperator(m);
}

// Eigenprojector (I + sign * n.sigma)/2 of the spin observable, in closed form.
inline Matrix spin_projector(const MeasurementDirection& n, int sign) {
    if (sign != +1 && sign != -1) throw std::invalid_argument("spin_projector: sign must be +1 or -1");
    const Matrix s = spin_observable(n).matrix();
    return (Matrix::identity(2) + s * cplx{static_cast<double>(sign), 0.0}) * cplx{0.5, 0.0};
}

class QuantumState {
public:
    explicit QuantumState(Matrix rho) : rho_(std::move(rho)) { validate_full(); }

    // rho = |psi><psi| with |psi| normalized first.
    static QuantumState pure(const std::vector<cplx>& psi) {
        const int n = static_cast<int>(psi.size());
        if (n < 1 || n > kMaxDim)
            throw std::invalid_argument("QuantumState::pure: dimension must be in [1," +
                                        std::to_string(kMaxDim) + "]");
        double norm2 = 0.0;
        for (const cplx& c : psi) norm2 += std::norm(c);
        if (norm2 <= 0.0) throw std::invalid_argument("QuantumState::pure: zero vector");
        const double inv = 1.0 / std::sqrt(norm2);
        Matrix rho(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) rho(i, j) = psi[i] * inv * std::conj(psi[j] * inv);
        return QuantumState(rho, Unchecked{});
    }

    int dim() const { return rho_.dim(); }
    const Matrix& rho() const { return rho_; }

    double purity() const { return (rho_ * rho_).trace().real(); }

private:
    struct Unchecked {};
    QuantumState(Matrix rho, Unchecked) : rho_(std::move(rho)) { validate_cheap(); }

    void validate_cheap() const {
        if (rho_.dim() < 1 || rho_.dim() > kMaxDim)
            throw std::invalid_argument("QuantumState: dimension must be in [1," +
                                        std::to_string(kMaxDim) + "]");
        if (!rho_.is_hermitian(1e-12))
            throw std::invalid_argument("QuantumState: density matrix is not Hermitian (defect " +
                                        std::to_string(rho_.hermiticity_defect()) + ")");
        const cplx tr = rho_.trace();
        if (std::abs(tr - cplx{1.0, 0.0}) > 1e-12)
            throw std::invalid_argument("QuantumState: trace must be 1, got " + std::to_string(tr.real()));
    }
    void validate_full() const {
        validate_cheap();
        const EigenSystem es = hermitian_eigensystem(rho_);
        if (es.values.front() < -1e-10)
            throw std::invalid_argument("QuantumState: density matrix has negative eigenvalue " +
                                        std::to_string(es.values.front()));
    }

    friend QuantumState collapse_unchecked(Matrix rho);
    Matrix rho_;
};

// Internal: post-measurement states are PSD by construction; skip the
// eigenvalue check on the hot path.
inline QuantumState collapse_unchecked(Matrix rho) { return QuantumState(std::move(rho), QuantumState::Unchecked{}); }

inline void check_dims(int a, int b, const char* who) {
    if (a != b)
        throw std::invalid_argument(std::string(who) + ": dimension mismatch " + std::to_string(a) +
                                    " vs " + std::to_string(b));
}

// trace(rho A); the imaginary residue must be numerical noise.
inline double expectation(const QuantumState& state, const HermitianOperator& obs) {
    check_dims(state.dim(), obs.dim(), "expectation");
    cplx t{0.0, 0.0};
    for (int i = 0; i < state.dim(); ++i)
        for (int j = 0; j < state.dim(); ++j) t += state.rho()(i, j) * obs.matrix()(j, i);
    if (std::abs(t.imag()) > 1e-9)
        throw std::domain_error("expectation: imaginary residue " + std::to_string(t.imag()) +
                                " exceeds 1e-9, non-Hermitian input");
    return t.real();
}

inline Matrix commutator(const HermitianOperator& a, const HermitianOperator& b) {
    check_dims(a.dim(), b.dim(), "commutator");
    return a.matrix() * b.matrix() - b.matrix() * a.matrix();
}

inline bool compatible(const HermitianOperator& a, const HermitianOperator& b, double tol = 1e-10) {
    return commutator(a, b).max_abs() < tol;
}

// <AB> for a commuting pair; the common-basis argument needs [A,B] = 0.
inline double joint_expectation(const QuantumState& state, const HermitianOperator& a,
                                const HermitianOperator& b, double tol = 1e-10) {
    check_dims(a.dim(), b.dim(), "joint_expectation");
    check_dims(state.dim(), a.dim(), "joint_expectation");
    const double comm = commutator(a, b).max_abs();
    if (comm >= tol)
        throw std::domain_error("joint_expectation: observables do not commute, commutator norm " +
                                std::to_string(comm));
    return expectation(state, HermitianOperator(a.matrix() * b.matrix()));
}

struct SpectralDecomposition {
    std::vector<double> values;      // cluster representatives, ascending
    std::vector<Matrix> projectors;  // sum to the identity
};

// Spectral projectors grouped by eigenvalue clusters (gap threshold 1e-8),
// so degenerate eigenvalues yield a single higher-rank projector.
inline SpectralDecomposition spectral_decomposition(const HermitianOperator& obs,
                                                    double cluster_gap = 1e-8) {
    const EigenSystem es = hermitian_eigensystem(obs.matrix());
    const int n = obs.dim();
    SpectralDecomposition d;
    int k = 0;
    while (k < n) {
        int end = k + 1;
        while (end < n && es.values[end] - es.values[end - 1] < cluster_gap) ++end;
        double mean = 0.0;
        for (int i = k; i < end; ++i) mean += es.values[i];
        mean /= (end - k);
        Matrix proj(n);
        for (int col = k; col < end; ++col)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    proj(i, j) += es.vectors(i, col) * std::conj(es.vectors(j, col));
        d.values.push_back(mean);
        d.projectors.push_back(std::move(proj));
        k = end;
    }
    return d;
}

// Born weights over the decomposition's projectors; nonnegative, sum to 1.
inline std::vector<double> born_probabilities(const QuantumState& state,
                                              const SpectralDecomposition& d) {
    std::vector<double> probs;
    probs.reserve(d.projectors.size());
    for (const Matrix& p : d.projectors) {
        check_dims(state.dim(), p.dim(), "born_probabilities");
        const double w = (state.rho() * p).trace().real();
        probs.push_back(std::max(0.0, w));
    }
    return probs;
}

struct OutcomeRecord {
    std::vector<int> values;  // each +1 or -1
    QuantumState post_state;
};

namespace detail {

// Cumulative comparison against a uniform deviate; zero-probability branches
// are never selected and ties go to the lower-index outcome.
inline int sample_index(const std::vector<double>& probs, double u) {
    double cum = 0.0;
    int last_positive = -1;
    for (size_t k = 0; k < probs.size(); ++k) {
        if (probs[k] <= 0.0) continue;
        cum += probs[k];
        last_positive = static_cast<int>(k);
        if (u <= cum) return last_positive;
    }
    if (last_positive < 0) throw std::domain_error("sample_index: all outcome probabilities are zero");
    return last_positive;
}

}  // namespace detail

// Successive projective measurements with Born probabilities and
// projection-postulate collapse; deterministic for a given seed.
inline OutcomeRecord measure_sequence(const QuantumState& state,
                                      const std::vector<HermitianOperator>& observables,
                                      std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    QuantumState current = state;
    std::vector<int> values;
    values.reserve(observables.size());
    for (const HermitianOperator& obs : observables) {
        check_dims(current.dim(), obs.dim(), "measure_sequence");
        const SpectralDecomposition d = spectral_decomposition(obs);
        for (double v : d.values) {
            const double rounded = std::round(v);
            if (std::abs(v - rounded) > 1e-6 || (rounded != 1.0 && rounded != -1.0))
                throw std::invalid_argument(
                    "measure_sequence: observable is not dichotomic, eigenvalue cluster at " +
                    std::to_string(v));
        }
        const std::vector<double> probs = born_probabilities(current, d);
        const int k = detail::sample_index(probs, uniform01(rng));
        values.push_back(d.values[k] > 0.0 ? +1 : -1);
        Matrix post = d.projectors[k] * current.rho() * d.projectors[k];
        // Round off Hermitian defects accumulated by the projector sandwich,
        // then renormalize the trace to exactly 1.
        for (int i = 0; i < post.dim(); ++i)
            for (int j = i; j < post.dim(); ++j) {
                const cplx sym = 0.5 * (post(i, j) + std::conj(post(j, i)));
                post(i, j) = sym;
                post(j, i) = std::conj(sym);
            }
        post = post * cplx{1.0 / post.trace().real(), 0.0};
        for (int i = 0; i < post.dim(); ++i) post(i, i) = post(i, i).real();
        current = collapse_unchecked(std::move(post));
    }
    return OutcomeRecord{std::move(values), std::move(current)};
}

// Two-qubit states. Basis order |00>, |01>, |10>, |11>.
inline QuantumState singlet_state() {
    const double s = 1.0 / std::sqrt(2.0);
    return QuantumState::pure({0.0, s, -s, 0.0});
}

// v |psi-><psi-| + (1-v) I/4.
inline QuantumState werner_state(double v) {
    if (!(v >= 0.0 && v <= 1.0))
        throw std::invalid_argument("werner_state: visibility must lie in [0,1], got " + std::to_string(v));
    const Matrix singlet = singlet_state().rho();
    Matrix rho = singlet * cplx{v, 0.0} + Matrix::identity(4) * cplx{(1.0 - v) / 4.0, 0.0};
    return QuantumState(std::move(rho));
}

// p(a,b|x,y) = trace(rho Pi_a^x (x) Pi_b^y) for the four spin observables.
inline Behavior two_qubit_behavior(const QuantumState& state, const MeasurementDirection& a0,
                                   const MeasurementDirection& a1, const MeasurementDirection& b0,
                                   const MeasurementDirection& b1) {
    if (state.dim() != 4)
        throw std::invalid_argument("two_qubit_behavior: state must be 4-dimensional, got dim " +
                                    std::to_string(state.dim()));
    const std::array<MeasurementDirection, 2> alice{a0, a1};
    const std::array<MeasurementDirection, 2> bob{b0, b1};
    Behavior beh;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int ia = 0; ia < 2; ++ia)
                for (int ib = 0; ib < 2; ++ib) {
                    const int a = index_outcome(ia), b = index_outcome(ib);
                    const Matrix proj = spin_projector(alice[x], a).tensor(spin_projector(bob[y], b));
                    beh.at_index(x, y, ia, ib) = (state.rho() * proj).trace().real();
                }
    return beh;
}

}  // namespace corrlab
