// Dense phase-1 simplex feasibility solver for small LPs: find x >= 0 with
// A x (<=,>=,=) b. Bland's rule throughout, so degenerate pivots cannot
// cycle. Problem sizes here are tens of rows, so the reduced-cost row is
// recomputed from scratch each iteration rather than updated.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace corrlab {

enum class Relation { LE, GE, EQ };

struct LpFeasibility {
    bool feasible;
    std::vector<double> x;  // structural variables, valid when feasible
    double infeasibility;   // phase-1 objective (total artificial mass)
    int iterations;
};

inline LpFeasibility phase1_feasible(std::vector<std::vector<double>> a, std::vector<double> b,
                                     std::vector<Relation> rel, double feas_tol = 1e-11) {
    const size_t m = a.size();
    if (b.size() != m || rel.size() != m)
        throw std::invalid_argument("phase1_feasible: row count mismatch");
    const size_t n = m == 0 ? 0 : a[0].size();
    for (const auto& row : a)
        if (row.size() != n) throw std::invalid_argument("phase1_feasible: ragged constraint matrix");

    for (size_t r = 0; r < m; ++r) {
        if (b[r] >= 0.0) continue;
        b[r] = -b[r];
        for (double& v : a[r]) v = -v;
        rel[r] = rel[r] == Relation::LE ? Relation::GE : rel[r] == Relation::GE ? Relation::LE : Relation::EQ;
    }

    // Columns: structural | slack/surplus | artificial. Slack of a <= row can
    // start basic; >= and = rows get an artificial.
    size_t n_slack = 0, n_art = 0;
    for (Relation r : rel) {
        if (r != Relation::EQ) ++n_slack;
        if (r != Relation::LE) ++n_art;
    }
    const size_t ncols = n + n_slack + n_art;
    std::vector<std::vector<double>> t(m, std::vector<double>(ncols + 1, 0.0));
    std::vector<int> basis(m, -1);
    std::vector<bool> artificial(ncols, false);

    size_t slack_at = n, art_at = n + n_slack;
    for (size_t r = 0; r < m; ++r) {
        for (size_t j = 0; j < n; ++j) t[r][j] = a[r][j];
        t[r][ncols] = b[r];
        if (rel[r] == Relation::LE) {
            t[r][slack_at] = 1.0;
            basis[r] = static_cast<int>(slack_at++);
        } else if (rel[r] == Relation::GE) {
            t[r][slack_at] = -1.0;
            ++slack_at;
            t[r][art_at] = 1.0;
            artificial[art_at] = true;
            basis[r] = static_cast<int>(art_at++);
        } else {
            t[r][art_at] = 1.0;
            artificial[art_at] = true;
            basis[r] = static_cast<int>(art_at++);
        }
    }

    const double pivot_eps = 1e-11;
    const int max_iter = 20000;
    int iter = 0;
    std::vector<double> reduced(ncols, 0.0);
    double objective = 0.0;
    for (; iter < max_iter; ++iter) {
        // reduced[j] = c_j - sum_r c_basis(r) * t[r][j], with c = 1 on artificials.
        for (size_t j = 0; j < ncols; ++j) reduced[j] = artificial[j] ? 1.0 : 0.0;
        objective = 0.0;
        for (size_t r = 0; r < m; ++r) {
            if (!artificial[static_cast<size_t>(basis[r])]) continue;
            for (size_t j = 0; j < ncols; ++j) reduced[j] -= t[r][j];
            objective += t[r][ncols];
        }

        int entering = -1;
        for (size_t j = 0; j < ncols; ++j)
            if (reduced[j] < -pivot_eps) {
                entering = static_cast<int>(j);
                break;  // Bland: lowest index
            }
        if (entering < 0) break;

        int leaving = -1;
        double best_ratio = 0.0;
        for (size_t r = 0; r < m; ++r) {
            if (t[r][static_cast<size_t>(entering)] <= pivot_eps) continue;
            const double ratio = t[r][ncols] / t[r][static_cast<size_t>(entering)];
            if (leaving < 0 || ratio < best_ratio - 1e-15 ||
                (std::abs(ratio - best_ratio) <= 1e-15 &&
                 basis[r] < basis[static_cast<size_t>(leaving)])) {
                leaving = static_cast<int>(r);
                best_ratio = ratio;
            }
        }
        if (leaving < 0)
            throw std::runtime_error("phase1_feasible: unbounded pivot column in a bounded objective");

        const size_t lr = static_cast<size_t>(leaving), je = static_cast<size_t>(entering);
        const double piv = t[lr][je];
        for (double& v : t[lr]) v /= piv;
        for (size_t r = 0; r < m; ++r) {
            if (r == lr) continue;
            const double f = t[r][je];
            if (f == 0.0) continue;
            for (size_t j = 0; j <= ncols; ++j) t[r][j] -= f * t[lr][j];
        }
        basis[lr] = entering;
    }
    if (iter >= max_iter) throw std::runtime_error("phase1_feasible: iteration limit exceeded");

    LpFeasibility res;
    res.iterations = iter;
    res.infeasibility = objective;
    res.feasible = objective <= feas_tol;
    res.x.assign(n, 0.0);
    for (size_t r = 0; r < m; ++r)
        if (basis[r] >= 0 && static_cast<size_t>(basis[r]) < n)
            res.x[static_cast<size_t>(basis[r])] = t[r][ncols];
    return res;
}

}  // namespace corrlab
