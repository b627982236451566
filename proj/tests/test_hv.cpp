#include <doctest.h>

#include <random>

#include "corrlab/hv.hpp"
#include "test_util.hpp"

using namespace corrlab;
using namespace testutil;

namespace {

HVModel constant_model(int a, int b) {
    HVModel m;
    m.lambdas = {0};
    m.weights = {1.0};
    m.respond_a = {ResponseTable{{{a, a}, {a, a}}}};
    m.respond_b = {ResponseTable{{{b, b}, {b, b}}}};
    return m;
}

}  // namespace

TEST_CASE("evaluate") {
    SUBCASE("single lambda, all responses +1") {
        const Behavior b = evaluate(constant_model(+1, +1));
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y) CHECK(b.at(x, y, +1, +1) == 1.0);
    }
    SUBCASE("equal mixture of all-plus and all-minus") {
        HVModel m;
        m.lambdas = {0, 1};
        m.weights = {0.5, 0.5};
        m.respond_a = {ResponseTable{{{+1, +1}, {+1, +1}}}, ResponseTable{{{-1, -1}, {-1, -1}}}};
        m.respond_b = {ResponseTable{{{+1, +1}, {+1, +1}}}, ResponseTable{{{-1, -1}, {-1, -1}}}};
        const CorrelatorTable t = correlators(evaluate(m));
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y) {
                CHECK(t.e[x][y] == 1.0);
                CHECK(t.ma[x][y] == 0.0);
                CHECK(t.mb[x][y] == 0.0);
            }
    }
    SUBCASE("unnormalized weights rejected") {
        HVModel m = constant_model(+1, +1);
        m.weights = {0.7};
        CHECK_THROWS_AS(evaluate(m), std::invalid_argument);
    }
    SUBCASE("declared-local model with remote-dependent table rejected") {
        HVModel m = constant_model(+1, +1);
        m.respond_a[0][0][1] = -1;  // depends on y but declared independent
        CHECK_THROWS_AS(evaluate(m), std::invalid_argument);
    }
}

TEST_CASE("model_class") {
    SUBCASE("constant model is noncontextual-local") {
        CHECK(model_class(constant_model(+1, -1)) == ModelClass::NonContextualLocal);
    }
    SUBCASE("PR box model is nonlocal") {
        CHECK(model_class(pr_box_model()) == ModelClass::NonLocal);
    }
    SUBCASE("every vertex model is noncontextual-local") {
        for (int i = 0; i < 16; ++i) CHECK(model_class(vertex_model(i)) == ModelClass::NonContextualLocal);
    }
    SUBCASE("declaration contradicting the table is an error") {
        HVModel m = pr_box_model();
        m.b_depends_on_x = false;  // lie about the table
        CHECK_THROWS(model_class(m));
        HVModel c = constant_model(+1, +1);
        c.a_depends_on_y = true;  // claims a dependence the table does not show
        CHECK_THROWS_AS(model_class(c), std::logic_error);
    }
}

TEST_CASE("deterministic vertices") {
    SUBCASE("index 0 is the all-plus point distribution") {
        const Behavior b = deterministic_vertex(0);
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y) CHECK(b.at(x, y, +1, +1) == 1.0);
        CHECK(chsh_all(correlators(b)).s_max == 2.0);
    }
    SUBCASE("index 15 is all-minus; correlators all +1") {
        const CorrelatorTable t = correlators(deterministic_vertex(15));
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y) {
                CHECK(t.e[x][y] == 1.0);
                CHECK(t.ma[x][y] == -1.0);
            }
        CHECK(chsh_all(t).s_max == 2.0);
    }
    SUBCASE("little-endian bit decode") {
        // index 1 flips only a0
        const Behavior b = deterministic_vertex(1);
        CHECK(b.at(0, 0, -1, +1) == 1.0);
        CHECK(b.at(1, 0, +1, +1) == 1.0);
        // index 8 flips only b1
        const Behavior c = deterministic_vertex(8);
        CHECK(c.at(0, 0, +1, +1) == 1.0);
        CHECK(c.at(0, 1, +1, -1) == 1.0);
    }
    SUBCASE("all 16 satisfy the local bound") {
        for (int i = 0; i < 16; ++i)
            CHECK(chsh_all(correlators(deterministic_vertex(i))).s_max <= 2.0 + 1e-12);
    }
    SUBCASE("vertex model evaluates to the closed-form table") {
        for (int i = 0; i < 16; ++i) CHECK(evaluate(vertex_model(i)) == deterministic_vertex(i));
    }
    SUBCASE("index out of range") {
        CHECK_THROWS_AS(deterministic_vertex(16), std::invalid_argument);
        CHECK_THROWS_AS(deterministic_vertex(-1), std::invalid_argument);
    }
}

TEST_CASE("PR box") {
    SUBCASE("correlators (+1,+1,+1,-1) reach 4") {
        const CorrelatorTable t = correlators(pr_box());
        CHECK(t.e[0][0] == 1.0);
        CHECK(t.e[0][1] == 1.0);
        CHECK(t.e[1][0] == 1.0);
        CHECK(t.e[1][1] == -1.0);
        CHECK(chsh_all(t).s_max == 4.0);
    }
    SUBCASE("exactly non-signalling") { CHECK(ns_residual(pr_box()).max_residual == 0.0); }
    SUBCASE("model path and closed form agree bit-exactly") {
        CHECK(evaluate(pr_box_model()) == pr_box());
    }
    SUBCASE("a xor b = x and y on every lambda branch") {
        const HVModel m = pr_box_model();
        for (size_t lam = 0; lam < m.size(); ++lam)
            for (int x = 0; x < 2; ++x)
                for (int y = 0; y < 2; ++y) {
                    const int a = m.respond_a[lam][x][y];
                    const int b = m.respond_b[lam][y][x];
                    CHECK(a * b == ((x == 1 && y == 1) ? -1 : +1));
                }
    }
}

TEST_CASE("random local models") {
    SUBCASE("same seed, same model") {
        const HVModel m1 = random_local_model(16, 271828);
        const HVModel m2 = random_local_model(16, 271828);
        CHECK(m1.weights == m2.weights);
        CHECK(m1.respond_a == m2.respond_a);
        CHECK(m1.respond_b == m2.respond_b);
    }
    SUBCASE("k=1 is a deterministic vertex") {
        const Behavior b = evaluate(random_local_model(1, 5));
        bool matched = false;
        for (int i = 0; i < 16 && !matched; ++i) matched = b == deterministic_vertex(i);
        CHECK(matched);
    }
    SUBCASE("local responses satisfy the local bound") {
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            const HVModel m = random_local_model(16, seed);
            CHECK(model_class(m) == ModelClass::NonContextualLocal);
            const Behavior b = evaluate(m);
            CHECK(chsh_all(correlators(b)).s_max <= 2.0 + 1e-12);
            CHECK(ns_residual(b).max_residual < 1e-12);
        }
    }
    SUBCASE("k < 1 rejected") { CHECK_THROWS_AS(random_local_model(0, 1), std::invalid_argument); }
}

TEST_CASE("evaluate matches the direct correlator sum for local models") {
    // E(x,y) = sum_lambda rho(lambda) A(x,lambda) B(y,lambda), computed
    // without going through the probability table.
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        const HVModel m = random_local_model(1 + static_cast<int>(rng() % 16), rng());
        const CorrelatorTable t = correlators(evaluate(m));
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y) {
                double direct = 0.0;
                for (size_t lam = 0; lam < m.size(); ++lam)
                    direct += m.weights[lam] * m.respond_a[lam][x][0] * m.respond_b[lam][y][0];
                CHECK(std::abs(t.e[x][y] - direct) < 1e-12);
            }
    }
}

TEST_CASE("large lambda sets keep the weight invariant") {
    const HVModel m = random_local_model(1 << 16, 7);
    CHECK_NOTHROW(evaluate(m));
}
