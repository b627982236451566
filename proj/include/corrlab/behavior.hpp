// The (2,2,2) behavior data model: conditional probability tables p(a,b|x,y)
// with two settings and outcomes +1/-1 per side, plus the derived statistics
// (correlators, marginals, CHSH values, correlation coefficients,
// no-signalling residuals).
#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace corrlab {

// Outcomes are canonically ordered +1 before -1; settings 0 before 1.
inline int outcome_index(int a) {
    if (a == +1) return 0;
    if (a == -1) return 1;
    throw std::invalid_argument("outcome must be +1 or -1, got " + std::to_string(a));
}
inline int index_outcome(int ia) { return ia == 0 ? +1 : -1; }

class Behavior {
public:
    Behavior() { p_.fill(0.0); }

    double& at(int x, int y, int a, int b) { return p_[slot(x, y, a, b)]; }
    double at(int x, int y, int a, int b) const { return p_[slot(x, y, a, b)]; }

    double& at_index(int x, int y, int ia, int ib) { return p_[raw(x, y, ia, ib)]; }
    double at_index(int x, int y, int ia, int ib) const { return p_[raw(x, y, ia, ib)]; }

    static Behavior uniform() {
        Behavior b;
        b.p_.fill(0.25);
        return b;
    }

    bool operator==(const Behavior& o) const { return p_ == o.p_; }

private:
    static int raw(int x, int y, int ia, int ib) { return ((x * 2 + y) * 2 + ia) * 2 + ib; }
    static int slot(int x, int y, int a, int b) {
        if (x < 0 || x > 1 || y < 0 || y > 1)
            throw std::invalid_argument("setting indices must be 0 or 1");
        return raw(x, y, outcome_index(a), outcome_index(b));
    }

    std::array<double, 16> p_;
};

struct ValidationIssue {
    enum class Kind { EntryBelowZero, EntryAboveOne, Normalization };
    Kind kind;
    int x, y;
    int a, b;          // outcomes; 0 when the issue is context-wide
    double magnitude;  // how far past the bound

    std::string describe() const {
        const std::string ctx = "(x=" + std::to_string(x) + ",y=" + std::to_string(y) + ")";
        switch (kind) {
            case Kind::EntryBelowZero:
                return "p(a=" + std::to_string(a) + ",b=" + std::to_string(b) + "|" + ctx +
                       ") below 0 by " + std::to_string(magnitude);
            case Kind::EntryAboveOne:
                return "p(a=" + std::to_string(a) + ",b=" + std::to_string(b) + "|" + ctx +
                       ") above 1 by " + std::to_string(magnitude);
            default:
                return "context " + ctx + " normalization off by " + std::to_string(magnitude);
        }
    }
};

// Diagnostics, not exceptions: returns every violated invariant.
inline std::vector<ValidationIssue> validate(const Behavior& b, double entry_tol = 1e-12,
                                             double norm_tol = 1e-10) {
    std::vector<ValidationIssue> issues;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            double sum = 0.0;
            for (int ia = 0; ia < 2; ++ia)
                for (int ib = 0; ib < 2; ++ib) {
                    const double p = b.at_index(x, y, ia, ib);
                    sum += p;
                    if (p < -entry_tol)
                        issues.push_back({ValidationIssue::Kind::EntryBelowZero, x, y,
                                          index_outcome(ia), index_outcome(ib), -p});
                    else if (p > 1.0 + entry_tol)
                        issues.push_back({ValidationIssue::Kind::EntryAboveOne, x, y,
                                          index_outcome(ia), index_outcome(ib), p - 1.0});
                }
            if (std::abs(sum - 1.0) > norm_tol)
                issues.push_back({ValidationIssue::Kind::Normalization, x, y, 0, 0, std::abs(sum - 1.0)});
        }
    return issues;
}

inline void require_valid(const Behavior& b, const char* who) {
    const auto issues = validate(b);
    if (!issues.empty())
        throw std::invalid_argument(std::string(who) + ": invalid behavior: " + issues.front().describe());
}

struct CorrelatorTable {
    std::array<std::array<double, 2>, 2> e;   // E(x,y) = <ab>
    std::array<std::array<double, 2>, 2> ma;  // <A> in context (x,y)
    std::array<std::array<double, 2>, 2> mb;  // <B> in context (x,y)
};

inline CorrelatorTable correlators(const Behavior& b) {
    require_valid(b, "correlators");
    CorrelatorTable t{};
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            double e = 0.0, ma = 0.0, mb = 0.0;
            for (int ia = 0; ia < 2; ++ia)
                for (int ib = 0; ib < 2; ++ib) {
                    const int a = index_outcome(ia), bb = index_outcome(ib);
                    const double p = b.at_index(x, y, ia, ib);
                    e += a * bb * p;
                    ma += a * p;
                    mb += bb * p;
                }
            t.e[x][y] = e;
            t.ma[x][y] = ma;
            t.mb[x][y] = mb;
        }
    return t;
}

// The 8 CHSH sign placements: for each position (x*,y*) of the single minus
// sign, S = sum E - 2 E(x*,y*), listed with both overall signs.
// values[2*(2x+y)] = +S, values[2*(2x+y)+1] = -S.
struct ChshValues {
    std::array<double, 8> values;
    double s_max;
};

inline ChshValues chsh_all(const CorrelatorTable& t) {
    ChshValues r{};
    const double total = t.e[0][0] + t.e[0][1] + t.e[1][0] + t.e[1][1];
    r.s_max = 0.0;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            const double s = total - 2.0 * t.e[x][y];
            r.values[2 * (2 * x + y)] = s;
            r.values[2 * (2 * x + y) + 1] = -s;
            r.s_max = std::max(r.s_max, std::abs(s));
        }
    return r;
}

// Pearson correlation of the two +-1 outcomes in context (x,y). For +-1
// variables <A^2> = 1, so sigma_A^2 = 1 - <A>^2.
inline double correlation_coefficient(const Behavior& b, int x, int y) {
    const CorrelatorTable t = correlators(b);
    const double ma = t.ma[x][y], mb = t.mb[x][y];
    const double var_a = 1.0 - ma * ma;
    const double var_b = 1.0 - mb * mb;
    if (var_a <= 1e-12 || var_b <= 1e-12)
        throw std::domain_error("correlation_coefficient: undefined, deterministic marginal in context (x=" +
                                std::to_string(x) + ",y=" + std::to_string(y) + ")");
    return (t.e[x][y] - ma * mb) / (std::sqrt(var_a) * std::sqrt(var_b));
}

struct NsConstraint {
    char party;              // 'A' or 'B'
    int setting;             // the party's own setting
    int outcome;             // +1 or -1
    std::array<int, 2> lhs;  // context (x,y) the marginal is taken in
    std::array<int, 2> rhs;  // context it is compared against
    double residual;
};

struct NsReport {
    double max_residual;
    std::vector<NsConstraint> per_constraint;
};

// |sum_b p(a,b|x,0) - sum_b p(a,b|x,1)| per (x,a), and symmetrically for Bob.
inline NsReport ns_residual(const Behavior& b) {
    require_valid(b, "ns_residual");
    NsReport rep{0.0, {}};
    for (int x = 0; x < 2; ++x)
        for (int ia = 0; ia < 2; ++ia) {
            double m0 = 0.0, m1 = 0.0;
            for (int ib = 0; ib < 2; ++ib) {
                m0 += b.at_index(x, 0, ia, ib);
                m1 += b.at_index(x, 1, ia, ib);
            }
            const double r = std::abs(m0 - m1);
            rep.per_constraint.push_back({'A', x, index_outcome(ia), {x, 0}, {x, 1}, r});
            rep.max_residual = std::max(rep.max_residual, r);
        }
    for (int y = 0; y < 2; ++y)
        for (int ib = 0; ib < 2; ++ib) {
            double m0 = 0.0, m1 = 0.0;
            for (int ia = 0; ia < 2; ++ia) {
                m0 += b.at_index(0, y, ia, ib);
                m1 += b.at_index(1, y, ia, ib);
            }
            const double r = std::abs(m0 - m1);
            rep.per_constraint.push_back({'B', y, index_outcome(ib), {0, y}, {1, y}, r});
            rep.max_residual = std::max(rep.max_residual, r);
        }
    return rep;
}

inline Behavior mix(const Behavior& b1, const Behavior& b2, double w) {
    if (!(w >= 0.0 && w <= 1.0))
        throw std::invalid_argument("mix: weight must lie in [0,1], got " + std::to_string(w));
    Behavior r;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int ia = 0; ia < 2; ++ia)
                for (int ib = 0; ib < 2; ++ib)
                    r.at_index(x, y, ia, ib) =
                        w * b1.at_index(x, y, ia, ib) + (1.0 - w) * b2.at_index(x, y, ia, ib);
    return r;
}

}  // namespace corrlab
