#include <doctest.h>

#include <cmath>

#include "oilcast/errors.hpp"
#include "oilcast/tape.hpp"
#include "support/test_support.hpp"

using namespace oilcast;

TEST_SUITE_BEGIN("tape");

TEST_CASE("sum of a matrix backpropagates all-ones") {
    GradTape tape;
    Rng rng(3);
    const Array2 a = testsupport::random_array(rng, 3, 4);
    Var va = tape.param("a", a);
    GradMap grads = tape.backward(tape.sum(va));
    REQUIRE(grads.count("a"));
    CHECK(grads.at("a") == Array2::full(3, 4, 1.0));
}

TEST_CASE("d(x^2)/dx at x=3 is 6") {
    GradTape tape;
    Array2 x(1, 1);
    x.at(0, 0) = 3.0;
    Var vx = tape.param("x", x);
    GradMap grads = tape.backward(tape.mul(vx, vx));
    CHECK(grads.at("x").at(0, 0) == doctest::Approx(6.0).epsilon(1e-14));
}

TEST_CASE("non-scalar loss is rejected") {
    GradTape tape;
    Var v = tape.param("a", Array2::full(2, 2, 1.0));
    CHECK_THROWS_AS(tape.backward(v), ContractError);
}

TEST_CASE("a value used twice accumulates the sum of single-use gradients") {
    Rng rng(11);
    const Array2 x = testsupport::random_array(rng, 2, 3);

    auto grad_of = [&](auto build) {
        GradTape t;
        Var vx = t.param("x", x);
        return t.backward(build(t, vx)).at("x");
    };
    const Array2 g_only = grad_of([](GradTape& t, Var vx) { return t.sum(t.mul(vx, vx)); });
    const Array2 h_only = grad_of([](GradTape& t, Var vx) { return t.sum(t.scale(vx, 3.0)); });
    const Array2 f_both = grad_of([](GradTape& t, Var vx) {
        return t.add(t.sum(t.mul(vx, vx)), t.sum(t.scale(vx, 3.0)));
    });

    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(f_both.data[i] ==
              doctest::Approx(g_only.data[i] + h_only.data[i]).epsilon(1e-14));
}

TEST_CASE("backward consumes the tape") {
    GradTape tape;
    Var v = tape.param("a", Array2::full(1, 1, 2.0));
    tape.backward(tape.sum(v));
    CHECK(tape.size() == 0);
    // The same name can be registered again on the fresh recording.
    CHECK_NOTHROW(tape.param("a", Array2::full(1, 1, 2.0)));
}

TEST_CASE("duplicate parameter names on one recording are rejected") {
    GradTape tape;
    tape.param("w", Array2::full(1, 1, 0.0));
    CHECK_THROWS_AS(tape.param("w", Array2::full(1, 1, 0.0)), ContractError);
}

TEST_CASE("reverse-mode gradients match central finite differences") {
    // Mixed graph exercising every op: matmul, bias add, sub, mul, sigmoid,
    // tanh, relu, concat, scale, sum.
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL, 5ULL}) {
        Rng rng(seed);
        const int n = 1 + static_cast<int>(rng.next_below(8));
        const int m = 1 + static_cast<int>(rng.next_below(8));
        const int k = 1 + static_cast<int>(rng.next_below(8));
        ParameterSet params;
        params.emplace("A", testsupport::random_array(rng, n, m));
        params.emplace("B", testsupport::random_array(rng, m, k));
        params.emplace("bias", testsupport::random_array(rng, 1, k));
        params.emplace("C", testsupport::random_array(rng, n, k));

        auto loss_fn = [&](const ParameterSet& p) {
            GradTape t;
            Var a = t.param("A", p.at("A"));
            Var b = t.param("B", p.at("B"));
            Var bias = t.param("bias", p.at("bias"));
            Var c = t.param("C", p.at("C"));
            Var lin = t.add(t.matmul(a, b), bias);
            Var gate = t.sigmoid(lin);
            Var body = t.tanh(t.sub(lin, c));
            Var mixed = t.mul(gate, body);
            Var rect = t.relu(t.concat_cols(mixed, c));
            return t.scalar(t.scale(t.sum(rect), 0.25));
        };

        GradTape tape;
        VarMap vars = register_params(tape, params);
        Var lin = tape.add(tape.matmul(vars.at("A"), vars.at("B")), vars.at("bias"));
        Var gate = tape.sigmoid(lin);
        Var body = tape.tanh(tape.sub(lin, vars.at("C")));
        Var mixed = tape.mul(gate, body);
        Var rect = tape.relu(tape.concat_cols(mixed, vars.at("C")));
        GradMap ad = tape.backward(tape.scale(tape.sum(rect), 0.25));

        const GradMap fd = testsupport::finite_difference(params, loss_fn);
        CHECK(testsupport::max_rel_error(ad, fd) <= 1e-4);
    }
}

TEST_SUITE_END();
