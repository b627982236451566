#include <doctest.h>

#include "corrlab/simplex.hpp"

using namespace corrlab;

TEST_CASE("phase-1 feasibility on hand-checked systems") {
    SUBCASE("trivially feasible box") {
        // x0 + x1 <= 1, x0 >= 0.2
        const auto r = phase1_feasible({{1.0, 1.0}, {1.0, 0.0}}, {1.0, 0.2},
                                       {Relation::LE, Relation::GE});
        REQUIRE(r.feasible);
        CHECK(r.x[0] >= 0.2 - 1e-12);
        CHECK(r.x[0] + r.x[1] <= 1.0 + 1e-12);
    }
    SUBCASE("equality intersection") {
        // x0 + x1 = 1, x0 - x1 = 0 -> x = (0.5, 0.5)
        const auto r = phase1_feasible({{1.0, 1.0}, {1.0, -1.0}}, {1.0, 0.0},
                                       {Relation::EQ, Relation::EQ});
        REQUIRE(r.feasible);
        CHECK(r.x[0] == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(r.x[1] == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("infeasible: contradictory bounds") {
        // x0 <= 1, x0 >= 2
        const auto r = phase1_feasible({{1.0}, {1.0}}, {1.0, 2.0}, {Relation::LE, Relation::GE});
        CHECK(!r.feasible);
        CHECK(r.infeasibility > 0.5);
    }
    SUBCASE("infeasible: negative requirement with nonnegative variables") {
        // x0 + x1 = -1 is impossible for x >= 0
        const auto r = phase1_feasible({{1.0, 1.0}}, {-1.0}, {Relation::EQ});
        CHECK(!r.feasible);
    }
    SUBCASE("negative rhs handled by row normalization") {
        // -x0 <= -0.5  i.e.  x0 >= 0.5
        const auto r = phase1_feasible({{-1.0}}, {-0.5}, {Relation::LE});
        REQUIRE(r.feasible);
        CHECK(r.x[0] >= 0.5 - 1e-12);
    }
    SUBCASE("redundant equalities stay feasible") {
        const auto r = phase1_feasible({{1.0, 1.0}, {2.0, 2.0}}, {1.0, 2.0},
                                       {Relation::EQ, Relation::EQ});
        CHECK(r.feasible);
    }
    SUBCASE("input validation") {
        CHECK_THROWS_AS(phase1_feasible({{1.0, 2.0}, {1.0}}, {1.0, 1.0}, {Relation::LE, Relation::LE}),
                        std::invalid_argument);
        CHECK_THROWS_AS(phase1_feasible({{1.0}}, {1.0, 2.0}, {Relation::LE}), std::invalid_argument);
    }
}

TEST_CASE("phase-1 scales to slab systems like the vertex LP") {
    // Random convex combinations of 4 columns must be recognized feasible.
    const std::vector<std::vector<double>> cols{
        {1.0, 0.0, 0.0, 1.0}, {0.0, 1.0, 0.0, 1.0}, {0.0, 0.0, 1.0, 1.0}, {0.25, 0.25, 0.5, 1.0}};
    const std::vector<double> q{0.1, 0.2, 0.3, 0.4};
    std::vector<double> target(4, 0.0);
    for (size_t j = 0; j < cols.size(); ++j)
        for (size_t i = 0; i < 4; ++i) target[i] += q[j] * cols[j][i];

    std::vector<std::vector<double>> a;
    std::vector<double> b;
    std::vector<Relation> rel;
    const double tol = 1e-9;
    for (size_t i = 0; i < 4; ++i) {
        std::vector<double> row(4);
        for (size_t j = 0; j < 4; ++j) row[j] = cols[j][i];
        a.push_back(row);
        b.push_back(target[i] + tol);
        rel.push_back(Relation::LE);
        a.push_back(row);
        b.push_back(target[i] - tol);
        rel.push_back(Relation::GE);
    }
    const auto r = phase1_feasible(a, b, rel);
    REQUIRE(r.feasible);
    for (size_t i = 0; i < 4; ++i) {
        double got = 0.0;
        for (size_t j = 0; j < 4; ++j) got += r.x[j] * cols[j][i];
        CHECK(std::abs(got - target[i]) < 1e-8);
    }
}
