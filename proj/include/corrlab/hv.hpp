// Finite hidden-variable models: deterministic +-1 response functions over a
// finite lambda set with normalized weights, evaluated into behaviors. Also
// provides the 16 local deterministic vertices and the PR box.
#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "corrlab/behavior.hpp"
#include "corrlab/rng.hpp"

namespace corrlab {

using ResponseTable = std::array<std::array<int, 2>, 2>;

struct HVModel {
    std::vector<int> lambdas;              // labels, typically 0..K-1
    std::vector<double> weights;           // rho(lambda), sums to 1
    std::vector<ResponseTable> respond_a;  // [lambda][x][y] in {+1,-1}
    std::vector<ResponseTable> respond_b;  // [lambda][y][x] in {+1,-1}
    bool a_depends_on_y = false;
    bool b_depends_on_x = false;

    size_t size() const { return weights.size(); }
};

enum class ModelClass { NonContextualLocal, NonLocal };

inline const char* to_string(ModelClass c) {
    return c == ModelClass::NonContextualLocal ? "NonContextualLocal" : "NonLocal";
}

namespace detail {

// Compensated summation; lambda sets may hold up to 2^16 weights and the
// normalization invariant is 1e-12, tighter than a naive accumulation.
inline double kahan_sum(const std::vector<double>& xs) {
    double sum = 0.0, comp = 0.0;
    for (double x : xs) {
        const double y = x - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

inline void check_model(const HVModel& m) {
    const size_t k = m.weights.size();
    if (k == 0) throw std::invalid_argument("HVModel: empty hidden-variable set");
    if (m.respond_a.size() != k || m.respond_b.size() != k)
        throw std::invalid_argument("HVModel: response table count does not match weight count");
    for (size_t i = 0; i < k; ++i)
        if (m.weights[i] < -1e-12 || m.weights[i] > 1.0 + 1e-12)
            throw std::invalid_argument("HVModel: weight " + std::to_string(i) + " outside [0,1]");
    const double sum = kahan_sum(m.weights);
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("HVModel: unnormalized weights, sum = " + std::to_string(sum));
    for (size_t i = 0; i < k; ++i)
        for (int own = 0; own < 2; ++own)
            for (int remote = 0; remote < 2; ++remote) {
                if (m.respond_a[i][own][remote] != 1 && m.respond_a[i][own][remote] != -1)
                    throw std::invalid_argument("HVModel: respond_a entries must be +1 or -1");
                if (m.respond_b[i][own][remote] != 1 && m.respond_b[i][own][remote] != -1)
                    throw std::invalid_argument("HVModel: respond_b entries must be +1 or -1");
            }
    // Declared-independent responses must be constant along the remote axis.
    if (!m.a_depends_on_y)
        for (size_t i = 0; i < k; ++i)
            for (int x = 0; x < 2; ++x)
                if (m.respond_a[i][x][0] != m.respond_a[i][x][1])
                    throw std::invalid_argument(
                        "HVModel: respond_a declared independent of y but varies at lambda " +
                        std::to_string(i) + ", x=" + std::to_string(x));
    if (!m.b_depends_on_x)
        for (size_t i = 0; i < k; ++i)
            for (int y = 0; y < 2; ++y)
                if (m.respond_b[i][y][0] != m.respond_b[i][y][1])
                    throw std::invalid_argument(
                        "HVModel: respond_b declared independent of x but varies at lambda " +
                        std::to_string(i) + ", y=" + std::to_string(y));
}

inline bool table_a_depends_on_remote(const HVModel& m) {
    for (size_t i = 0; i < m.size(); ++i)
        for (int x = 0; x < 2; ++x)
            if (m.respond_a[i][x][0] != m.respond_a[i][x][1]) return true;
    return false;
}

inline bool table_b_depends_on_remote(const HVModel& m) {
    for (size_t i = 0; i < m.size(); ++i)
        for (int y = 0; y < 2; ++y)
            if (m.respond_b[i][y][0] != m.respond_b[i][y][1]) return true;
    return false;
}

}  // namespace detail

// p(a,b|x,y) = sum_lambda rho(lambda) [A(x,y,lambda)=a] [B(y,x,lambda)=b].
inline Behavior evaluate(const HVModel& m) {
    detail::check_model(m);
    Behavior beh;
    for (size_t i = 0; i < m.size(); ++i)
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y) {
                const int a = m.respond_a[i][x][y];
                const int b = m.respond_b[i][y][x];
                beh.at(x, y, a, b) += m.weights[i];
            }
    return beh;
}

// Exhaustive table check; a declaration at odds with the table is an error.
inline ModelClass model_class(const HVModel& m) {
    detail::check_model(m);
    const bool a_dep = detail::table_a_depends_on_remote(m);
    const bool b_dep = detail::table_b_depends_on_remote(m);
    if (a_dep != m.a_depends_on_y)
        throw std::logic_error("model_class: respond_a table " +
                               std::string(a_dep ? "depends on" : "is independent of") +
                               " y, contradicting the declared signature");
    if (b_dep != m.b_depends_on_x)
        throw std::logic_error("model_class: respond_b table " +
                               std::string(b_dep ? "depends on" : "is independent of") +
                               " x, contradicting the declared signature");
    return (!a_dep && !b_dep) ? ModelClass::NonContextualLocal : ModelClass::NonLocal;
}

// Vertex index encoding is little-endian: bit 0 = a0, bit 1 = a1, bit 2 = b0,
// bit 3 = b1, with bit value 0 meaning outcome +1.
inline std::array<int, 4> vertex_outcomes(int index) {
    if (index < 0 || index > 15)
        throw std::invalid_argument("deterministic_vertex: index must lie in 0..15, got " +
                                    std::to_string(index));
    std::array<int, 4> v{};
    for (int bit = 0; bit < 4; ++bit) v[bit] = (index >> bit) & 1 ? -1 : +1;
    return v;
}

inline HVModel vertex_model(int index) {
    const auto v = vertex_outcomes(index);
    HVModel m;
    m.lambdas = {0};
    m.weights = {1.0};
    m.respond_a = {ResponseTable{{{v[0], v[0]}, {v[1], v[1]}}}};
    m.respond_b = {ResponseTable{{{v[2], v[2]}, {v[3], v[3]}}}};
    return m;
}

inline Behavior deterministic_vertex(int index) {
    const auto v = vertex_outcomes(index);
    Behavior beh;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) beh.at(x, y, v[x], v[2 + y]) = 1.0;
    return beh;
}

// K=2 realization of the PR box: a = (-1)^lambda, b = (-1)^(lambda xor x.y).
// Bob's table depends on Alice's setting, hence the NonLocal signature.
inline HVModel pr_box_model() {
    HVModel m;
    m.lambdas = {0, 1};
    m.weights = {0.5, 0.5};
    m.respond_a.resize(2);
    m.respond_b.resize(2);
    for (int lam = 0; lam < 2; ++lam)
        for (int own = 0; own < 2; ++own)
            for (int remote = 0; remote < 2; ++remote) {
                m.respond_a[lam][own][remote] = lam == 0 ? +1 : -1;
                const int flip = lam ^ (own * remote);  // own=y, remote=x
                m.respond_b[lam][own][remote] = flip == 0 ? +1 : -1;
            }
    m.a_depends_on_y = false;
    m.b_depends_on_x = true;
    return m;
}

// Closed-form PR box: a.b = +1 unless x=y=1, uniform marginals.
inline Behavior pr_box() {
    Behavior beh;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            const int target = (x == 1 && y == 1) ? -1 : +1;
            for (int ia = 0; ia < 2; ++ia)
                for (int ib = 0; ib < 2; ++ib) {
                    const int a = index_outcome(ia), b = index_outcome(ib);
                    beh.at_index(x, y, ia, ib) = (a * b == target) ? 0.5 : 0.0;
                }
        }
    return beh;
}

// Fuzzing source: K pseudorandom weights and local responses; same seed,
// same model.
inline HVModel random_local_model(int k, std::uint64_t seed) {
    if (k < 1) throw std::invalid_argument("random_local_model: k must be >= 1, got " + std::to_string(k));
    std::mt19937_64 rng(seed);
    HVModel m;
    m.lambdas.resize(k);
    m.weights.resize(k);
    m.respond_a.resize(k);
    m.respond_b.resize(k);
    for (int i = 0; i < k; ++i) {
        m.lambdas[i] = i;
        m.weights[i] = uniform01(rng) + 1e-6;
    }
    const double sum = detail::kahan_sum(m.weights);
    for (int i = 0; i < k; ++i) m.weights[i] /= sum;
    // Division leaves the sum a few ulp off 1; absorb the defect in the
    // largest weight so the compensated sum lands within 1e-12.
    std::vector<double> partial = m.weights;
    size_t imax = 0;
    for (size_t i = 1; i < partial.size(); ++i)
        if (partial[i] > partial[imax]) imax = i;
    partial[imax] = 0.0;
    m.weights[imax] = 1.0 - detail::kahan_sum(partial);
    for (int i = 0; i < k; ++i)
        for (int own = 0; own < 2; ++own) {
            const int ra = (rng() & 1) ? +1 : -1;
            const int rb = (rng() & 1) ? +1 : -1;
            m.respond_a[i][own] = {ra, ra};
            m.respond_b[i][own] = {rb, rb};
        }
    return m;
}

}  // namespace corrlab
