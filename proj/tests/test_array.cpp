#include <doctest.h>

#include "oilcast/array.hpp"
#include "oilcast/errors.hpp"
#include "oilcast/rng.hpp"
#include "support/test_support.hpp"

using namespace oilcast;

TEST_SUITE_BEGIN("array");

TEST_CASE("matmul identity leaves a matrix unchanged") {
    Rng rng(7);
    const Array2 a = testsupport::random_array(rng, 2, 2, -3.0, 3.0);
    const Array2 i2 = Array2::identity(2);
    CHECK(matmul(i2, a) == a);
    CHECK(matmul(a, i2) == a);
}

TEST_CASE("matmul matches hand arithmetic") {
    const Array2 a = Array2::from_rows({{1, 2}, {3, 4}});
    const Array2 b = Array2::from_rows({{1}, {1}});
    const Array2 c = matmul(a, b);
    CHECK(c.rows == 2);
    CHECK(c.cols == 1);
    CHECK(c.at(0, 0) == 3.0);
    CHECK(c.at(1, 0) == 7.0);
}

TEST_CASE("matmul rejects mismatched inner dimensions") {
    const Array2 a(2, 3);
    const Array2 b(2, 2);
    CHECK_THROWS_AS(matmul(a, b), ShapeError);
    CHECK_THROWS_WITH_AS(matmul(a, b), doctest::Contains("(2x3)"), ShapeError);
}

TEST_CASE("elementwise nonlinearities at reference points") {
    Array2 zero(1, 1);
    CHECK(sigmoid(zero).at(0, 0) == 0.5);
    CHECK(tanh(zero).at(0, 0) == 0.0);
    const Array2 v = Array2::from_rows({{-1, 2}});
    const Array2 r = relu(v);
    CHECK(r.at(0, 0) == 0.0);
    CHECK(r.at(0, 1) == 2.0);
}

TEST_CASE("binary ops broadcast a 1 x cols bias row") {
    const Array2 a = Array2::from_rows({{1, 2}, {3, 4}});
    const Array2 bias = Array2::from_rows({{10, 20}});
    const Array2 s = add(a, bias);
    CHECK(s.at(0, 0) == 11.0);
    CHECK(s.at(1, 1) == 24.0);
    const Array2 s2 = add(bias, a); // bias on either side
    CHECK(s2 == s);
    const Array2 d = sub(a, bias);
    CHECK(d.at(1, 0) == -7.0);
    const Array2 m = mul(bias, a);
    CHECK(m.at(1, 1) == 80.0);
}

TEST_CASE("binary ops reject shapes that are not equal or a bias row") {
    const Array2 a(2, 3);
    CHECK_THROWS_AS(add(a, Array2(2, 2)), ShapeError);
    CHECK_THROWS_AS(sub(a, Array2(3, 3)), ShapeError);
    CHECK_THROWS_AS(mul(a, Array2(2, 1)), ShapeError); // column broadcast unsupported
}

TEST_CASE("finite inputs within 1e6 never produce NaN or Inf") {
    Rng rng(99);
    for (int round = 0; round < 20; ++round) {
        const int r = 1 + static_cast<int>(rng.next_below(8));
        const int c = 1 + static_cast<int>(rng.next_below(8));
        const Array2 a = testsupport::random_array(rng, r, c, -1e6, 1e6);
        const Array2 b = testsupport::random_array(rng, r, c, -1e6, 1e6);
        const Array2 w = testsupport::random_array(rng, c, 3, -1e6, 1e6);
        CHECK(add(a, b).all_finite());
        CHECK(sub(a, b).all_finite());
        CHECK(mul(a, b).all_finite());
        CHECK(matmul(a, w).all_finite());
        CHECK(sigmoid(a).all_finite());
        CHECK(tanh(a).all_finite());
        CHECK(relu(a).all_finite());
        CHECK(scale(a, -2.5).all_finite());
    }
}

TEST_CASE("sigmoid stays in (0,1) and tanh in (-1,1) for moderate inputs") {
    Rng rng(77);
    for (int round = 0; round < 10; ++round) {
        const Array2 a = testsupport::random_array(rng, 4, 4, -5.0, 5.0);
        for (double v : sigmoid(a).data) {
            CHECK(v > 0.0);
            CHECK(v < 1.0);
        }
        for (double v : tanh(a).data) {
            CHECK(v > -1.0);
            CHECK(v < 1.0);
        }
    }
}

TEST_CASE("transpose flips indices") {
    const Array2 a = Array2::from_rows({{1, 2, 3}, {4, 5, 6}});
    const Array2 t = transpose(a);
    CHECK(t.rows == 3);
    CHECK(t.cols == 2);
    CHECK(t.at(2, 1) == 6.0);
}

TEST_SUITE_END();
