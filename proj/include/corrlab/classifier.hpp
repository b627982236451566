// Places a behavior into the correlation hierarchy
// Local < QuantumCompatible < NoSignalling < Signalling, with machine-checkable
// evidence: CHSH values, an explicit vertex decomposition (LP), a level-1
// moment-matrix PSD witness, and the arcsin correlator-slice criterion.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "corrlab/behavior.hpp"
#include "corrlab/hv.hpp"
#include "corrlab/simplex.hpp"

namespace corrlab {

enum class Tier { Local, QuantumCompatible, NoSignalling, Signalling };

inline const char* to_string(Tier t) {
    switch (t) {
        case Tier::Local: return "Local";
        case Tier::QuantumCompatible: return "QuantumCompatible";
        case Tier::NoSignalling: return "NoSignalling";
        default: return "Signalling";
    }
}

struct Tolerances {
    double ns = 1e-9;
    double facet = 1e-9;
    double lp = 1e-9;
    double psd = 1e-9;
    double tlm = 1e-6;  // unbiased-marginal gate and boundary band for the arcsin test

    Tolerances scaled(double factor) const {
        Tolerances t = *this;
        t.ns *= factor;
        t.facet *= factor;
        t.lp *= factor;
        t.psd *= factor;
        t.tlm *= factor;
        return t;
    }
};

// Raised when two routes that must agree (facet vs LP, arcsin vs moment
// matrix) return contradictory answers away from the tolerance band.
struct ConsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Npa1Witness {
    double u;  // <A0 A1>
    double v;  // <B0 B1>
    double min_eig;
};

struct Verdict {
    Tier tier;
    double s_max;
    std::array<double, 8> chsh;
    double ns_max_residual;
    std::optional<std::array<double, 16>> lp_weights;
    std::optional<Npa1Witness> npa1;
    std::optional<double> tlm;  // max arcsin-criterion value over the 4 placements
};

// Fine's theorem makes this facet test exact for the (2,2,2) scenario: a
// no-signalling behavior is local iff every CHSH value is at most 2.
inline bool check_local_facets(const Behavior& b, double tol = 1e-9, double ns_tol = 1e-9) {
    if (ns_residual(b).max_residual > ns_tol) return false;
    return chsh_all(correlators(b)).s_max <= 2.0 + tol;
}

namespace detail {

inline LpFeasibility vertex_lp(const Behavior& b, double tol) {
    std::array<Behavior, 16> vertices;
    for (int i = 0; i < 16; ++i) vertices[i] = deterministic_vertex(i);
    std::vector<std::vector<double>> a;
    std::vector<double> rhs;
    std::vector<Relation> rel;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int ia = 0; ia < 2; ++ia)
                for (int ib = 0; ib < 2; ++ib) {
                    std::vector<double> row(16);
                    for (int i = 0; i < 16; ++i) row[i] = vertices[i].at_index(x, y, ia, ib);
                    const double p = b.at_index(x, y, ia, ib);
                    a.push_back(row);
                    rhs.push_back(p + tol);
                    rel.push_back(Relation::LE);
                    a.push_back(std::move(row));
                    rhs.push_back(p - tol);
                    rel.push_back(Relation::GE);
                }
    a.push_back(std::vector<double>(16, 1.0));
    rhs.push_back(1.0);
    rel.push_back(Relation::EQ);
    return phase1_feasible(std::move(a), std::move(rhs), std::move(rel));
}

}  // namespace detail

// Feasibility of p = sum_i q_i D_i with q a distribution over the 16
// deterministic vertices; equalities are relaxed to +-tol slabs. Basic
// feasible solutions land on the slab faces, so a feasible result is
// re-solved with a 1000x tighter slab: exactly-local behaviors then
// reconstruct at machine precision instead of at the slab width.
inline std::optional<std::array<double, 16>> check_local_lp(const Behavior& b, double tol = 1e-9) {
    require_valid(b, "check_local_lp");
    LpFeasibility lp = detail::vertex_lp(b, tol);
    if (!lp.feasible) return std::nullopt;
    if (LpFeasibility polished = detail::vertex_lp(b, tol * 1e-3); polished.feasible)
        lp = std::move(polished);
    std::array<double, 16> q{};
    std::copy_n(lp.x.begin(), 16, q.begin());
    return q;
}

struct TlmResult {
    bool pass;
    double value;  // max over placements of |sum asin E - 2 asin E*|
};

// Arcsin criterion on the unbiased correlator slice; not applicable when any
// context marginal exceeds tol in magnitude.
inline std::optional<TlmResult> check_quantum_tlm(const CorrelatorTable& c, double tol = 1e-6) {
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            if (std::abs(c.ma[x][y]) >= tol || std::abs(c.mb[x][y]) >= tol) return std::nullopt;
    std::array<double, 4> asins{};
    double total = 0.0;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            const double e = std::clamp(c.e[x][y], -1.0, 1.0);
            asins[2 * x + y] = std::asin(e);
            total += asins[2 * x + y];
        }
    double value = 0.0;
    for (double s : asins) value = std::max(value, std::abs(total - 2.0 * s));
    return TlmResult{value <= std::numbers::pi + tol, value};
}

namespace detail {

// Minimum eigenvalue of a small dense symmetric matrix by cyclic Jacobi,
// eigenvalues only. The moment-matrix search evaluates this thousands of
// times per behavior, so it avoids the general complex path entirely.
template <int N>
inline double sym_min_eig(std::array<double, N * N>& a) {
    for (int sweep = 0; sweep < 50; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < N; ++i)
            for (int j = i + 1; j < N; ++j) off += a[i * N + j] * a[i * N + j];
        if (off < 1e-26) break;
        for (int p = 0; p < N - 1; ++p)
            for (int q = p + 1; q < N; ++q) {
                const double apq = a[p * N + q];
                if (std::abs(apq) < 1e-300) continue;
                const double tau = (a[q * N + q] - a[p * N + p]) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(tau * tau + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                a[p * N + p] -= t * apq;
                a[q * N + q] += t * apq;
                a[p * N + q] = 0.0;
                a[q * N + p] = 0.0;
                for (int k = 0; k < N; ++k) {
                    if (k == p || k == q) continue;
                    const double akp = a[k * N + p], akq = a[k * N + q];
                    a[k * N + p] = c * akp - s * akq;
                    a[p * N + k] = a[k * N + p];
                    a[k * N + q] = s * akp + c * akq;
                    a[q * N + k] = a[k * N + q];
                }
            }
    }
    double mn = a[0];
    for (int i = 1; i < N; ++i) mn = std::min(mn, a[i * N + i]);
    return mn;
}

// 5x5 moment matrix over {1, A0, A1, B0, B1}; u = <A0A1>, v = <B0B1> free.
inline double npa1_min_eig(const CorrelatorTable& c, const std::array<double, 2>& ma,
                           const std::array<double, 2>& mb, double u, double v) {
    std::array<double, 25> g{};
    const auto set = [&g](int i, int j, double val) {
        g[i * 5 + j] = val;
        g[j * 5 + i] = val;
    };
    for (int i = 0; i < 5; ++i) g[i * 5 + i] = 1.0;
    set(0, 1, ma[0]);
    set(0, 2, ma[1]);
    set(0, 3, mb[0]);
    set(0, 4, mb[1]);
    set(1, 2, u);
    set(3, 4, v);
    set(1, 3, c.e[0][0]);
    set(1, 4, c.e[0][1]);
    set(2, 3, c.e[1][0]);
    set(2, 4, c.e[1][1]);
    return sym_min_eig<5>(g);
}

// Golden-section maximization of a unimodal function on [lo, hi].
template <typename F>
double golden_max(F f, double lo, double hi, double tol = 1e-10) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double c1 = b - inv_phi * (b - a);
    double c2 = a + inv_phi * (b - a);
    double f1 = f(c1), f2 = f(c2);
    while (b - a > tol) {
        if (f1 < f2) {
            a = c1;
            c1 = c2;
            f1 = f2;
            c2 = a + inv_phi * (b - a);
            f2 = f(c2);
        } else {
            b = c2;
            c2 = c1;
            f2 = f1;
            c1 = b - inv_phi * (b - a);
            f1 = f(c1);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace detail

// Level-1 moment-matrix relaxation: the behavior is Q1-compatible iff some
// completion (u,v) in [-1,1]^2 makes the moment matrix PSD. min_eig is
// concave in (u,v); a coarse center-out grid handles the deeply feasible
// cases and a nested 1-D refinement settles the rest.
inline std::pair<bool, Npa1Witness> check_quantum_npa1(const Behavior& b, double psd_tol = 1e-9,
                                                       double ns_tol = 1e-9) {
    const NsReport ns = ns_residual(b);
    if (ns.max_residual > ns_tol)
        throw std::domain_error("check_quantum_npa1: signalling input, NS residual " +
                                std::to_string(ns.max_residual));
    const CorrelatorTable c = correlators(b);
    // NS makes marginals context-independent up to tolerance; average them.
    const std::array<double, 2> ma{0.5 * (c.ma[0][0] + c.ma[0][1]), 0.5 * (c.ma[1][0] + c.ma[1][1])};
    const std::array<double, 2> mb{0.5 * (c.mb[0][0] + c.mb[1][0]), 0.5 * (c.mb[0][1] + c.mb[1][1])};
    const auto eig = [&](double u, double v) { return detail::npa1_min_eig(c, ma, mb, u, v); };

    // 41x41 grid, scanned from the center outward so deeply feasible
    // behaviors exit after a handful of evaluations.
    static const std::vector<std::pair<int, int>> scan_order = [] {
        std::vector<std::pair<int, int>> order;
        order.reserve(41 * 41);
        for (int i = 0; i <= 40; ++i)
            for (int j = 0; j <= 40; ++j) order.emplace_back(i, j);
        std::sort(order.begin(), order.end(), [](auto p, auto q) {
            const int dp = (p.first - 20) * (p.first - 20) + (p.second - 20) * (p.second - 20);
            const int dq = (q.first - 20) * (q.first - 20) + (q.second - 20) * (q.second - 20);
            return dp != dq ? dp < dq : p < q;
        });
        return order;
    }();

    Npa1Witness best{0.0, 0.0, -std::numeric_limits<double>::infinity()};
    for (const auto& [i, j] : scan_order) {
        const double u = -1.0 + 0.05 * i;
        const double v = -1.0 + 0.05 * j;
        const double e = eig(u, v);
        if (e > best.min_eig) best = {u, v, e};
        if (best.min_eig >= psd_tol) return {true, best};
    }

    // Nested golden-section refinement: g(u) = max_v min_eig(u,v) is concave
    // (partial maximization of a jointly concave function), so two nested 1-D
    // searches find the global maximum. Coordinate-wise ascent is not enough
    // here: a context with a perfect correlation pins the feasible completion
    // to a diagonal ridge of the nonsmooth min-eigenvalue surface, and
    // axis-aligned steps stall short of it.
    const auto best_v_for = [&](double u) {
        const double v = detail::golden_max([&](double t) { return eig(u, t); }, -1.0, 1.0, 1e-10);
        return std::pair<double, double>{v, eig(u, v)};
    };
    const double u_star =
        detail::golden_max([&](double t) { return best_v_for(t).second; }, -1.0, 1.0, 1e-10);
    const auto [v_star, refined] = best_v_for(u_star);
    if (refined > best.min_eig) best = {u_star, v_star, refined};
    return {best.min_eig >= -psd_tol, best};
}

struct ClassifyOptions {
    Tolerances tol;
    bool lp_evidence = false;  // cross-run the vertex LP and attach its weights
};

// Innermost admitting tier. Boundary behaviors (s_max = 2, arcsin value = pi)
// land in the inner tier: every test is <= bound + tol.
inline Verdict classify(const Behavior& b, const ClassifyOptions& opt = {}) {
    require_valid(b, "classify");
    const Tolerances& tol = opt.tol;
    const NsReport ns = ns_residual(b);
    const CorrelatorTable corr = correlators(b);
    const ChshValues chsh = chsh_all(corr);

    Verdict v;
    v.s_max = chsh.s_max;
    v.chsh = chsh.values;
    v.ns_max_residual = ns.max_residual;

    if (ns.max_residual > tol.ns) {
        v.tier = Tier::Signalling;
        return v;
    }

    const bool facets_local = chsh.s_max <= 2.0 + tol.facet;
    if (opt.lp_evidence) {
        v.lp_weights = check_local_lp(b, tol.lp);
        if (v.lp_weights.has_value() != facets_local)
            throw ConsistencyError(std::string("classify: facet test says ") +
                                   (facets_local ? "local" : "nonlocal") + " but the vertex LP is " +
                                   (v.lp_weights ? "feasible" : "infeasible") +
                                   " (s_max = " + std::to_string(chsh.s_max) + ")");
    }
    if (facets_local) {
        v.tier = Tier::Local;
        return v;
    }
    v.lp_weights.reset();

    const auto [q1_feasible, witness] = check_quantum_npa1(b, tol.psd, tol.ns);
    v.npa1 = witness;
    if (const auto tlm = check_quantum_tlm(corr, tol.tlm)) {
        v.tlm = tlm->value;
        const bool tlm_pass = tlm->value <= std::numbers::pi + tol.tlm;
        const bool in_band = std::abs(tlm->value - std::numbers::pi) <= tol.tlm;
        if (!in_band && tlm_pass != q1_feasible)
            throw ConsistencyError("classify: arcsin criterion (" + std::to_string(tlm->value) +
                                   ") and moment-matrix test (min_eig " +
                                   std::to_string(witness.min_eig) + ") disagree on an unbiased behavior");
    }
    v.tier = q1_feasible ? Tier::QuantumCompatible : Tier::NoSignalling;
    return v;
}

}  // namespace corrlab
