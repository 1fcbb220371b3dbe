#include "doctest.h"

#include <cmath>

#include "mlbels/rng.hpp"
#include "mlbels/weighting.hpp"

#include "oracles.hpp"

using namespace mlbels;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
    UniformSource rng(seed);
    Matrix m(r, c);
    for (double& v : m.data()) v = rng.symmetric();
    return m;
}

} // namespace

TEST_CASE("weight classifier identity fit") {
    WeightClassifier wc(2, 2, 0.0);
    wc.train(Matrix::identity(2), Matrix::identity(2));
    REQUIRE(wc.trained());
    CHECK(std::abs(wc.weights()(0, 0) - 1.0) < 1e-12);
    CHECK(std::abs(wc.weights()(1, 1) - 1.0) < 1e-12);

    // an empty chunk changes nothing
    const Matrix before = wc.weights();
    wc.train(Matrix(0, 2), Matrix(0, 2));
    CHECK(wc.weights() == before);
}

TEST_CASE("single-chunk fit matches the explicit-inverse oracle") {
    const Matrix m = random_matrix(10, 4, 3);
    Matrix y(10, 3);
    UniformSource rng(4);
    for (double& v : y.data()) v = rng.unit() < 0.4 ? 1.0 : 0.0;

    WeightClassifier wc(4, 3, 1e-3);
    wc.train(m, y);

    oracle::Grid gm = oracle::zeros(10, 4), gy = oracle::zeros(10, 3);
    for (std::size_t i = 0; i < 10; ++i) {
        for (std::size_t j = 0; j < 4; ++j) gm[i][j] = m(i, j);
        for (std::size_t j = 0; j < 3; ++j) gy[i][j] = y(i, j);
    }
    const oracle::Grid expected = oracle::ridge_fit(gm, gy, 1e-3);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(std::abs(wc.weights()(i, j) - expected[i][j]) < 1e-10);
}

TEST_CASE("row min-max normalization") {
    Matrix raw(3, 3);
    raw(0, 0) = 1.0;
    raw(0, 1) = 2.0;
    raw(0, 2) = 3.0;
    raw(1, 0) = 5.0;  // constant row
    raw(1, 1) = 5.0;
    raw(1, 2) = 5.0;
    raw(2, 0) = -1.0;
    raw(2, 1) = 0.0;
    raw(2, 2) = 7.0;

    const Matrix norm = minmax_rows(raw);
    CHECK(norm(0, 0) == 0.0);
    CHECK(norm(0, 1) == doctest::Approx(0.5));
    CHECK(norm(0, 2) == 1.0);
    for (std::size_t j = 0; j < 3; ++j) CHECK(norm(1, j) == 0.0);
    CHECK(norm(2, 0) == 0.0);
    CHECK(norm(2, 2) == 1.0);
}

TEST_CASE("min-max is invariant to positive affine rescaling") {
    const Matrix raw = random_matrix(6, 5, 9);
    Matrix shifted(6, 5);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 5; ++j) shifted(i, j) = 2.5 * raw(i, j) + 7.0;

    const Matrix a = minmax_rows(raw);
    const Matrix b = minmax_rows(shifted);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 5; ++j) CHECK(a(i, j) == doctest::Approx(b(i, j)).epsilon(1e-12));
}

TEST_CASE("normalized rows with distinct values hit 0 and 1 exactly") {
    const Matrix raw = random_matrix(20, 7, 21);
    const Matrix norm = minmax_rows(raw);
    for (std::size_t i = 0; i < 20; ++i) {
        bool has_zero = false, has_one = false;
        for (std::size_t j = 0; j < 7; ++j) {
            CHECK(norm(i, j) >= 0.0);
            CHECK(norm(i, j) <= 1.0);
            has_zero |= norm(i, j) == 0.0;
            has_one |= norm(i, j) == 1.0;
        }
        CHECK(has_zero);
        CHECK(has_one);
    }
}

TEST_CASE("cardinality tracker runs over the whole stream") {
    CardinalityTracker tracker;
    LabelObservation y(2, 3);
    y.set(0, 0, +1);
    y.set(0, 1, -1);
    y.set(0, 2, +1);
    y.set(1, 0, -1);
    y.set(1, 1, +1);
    y.set(1, 2, -1);
    tracker.update(y);
    CHECK(tracker.lc() == doctest::Approx(1.5));

    // an all-negative chunk pulls the estimate down
    tracker.update(LabelObservation(2, 3, -1));
    CHECK(tracker.lc() == doctest::Approx(0.75));
}

TEST_CASE("chunk-local tracker forgets previous chunks") {
    CardinalityTracker tracker(true);
    LabelObservation dense(1, 3, +1);
    tracker.update(dense);
    CHECK(tracker.lc() == doctest::Approx(3.0));
    tracker.update(LabelObservation(1, 3, -1));
    CHECK(tracker.lc() == 0.0);
}

TEST_CASE("missing entries do not count as positives") {
    CardinalityTracker tracker;
    LabelObservation y(1, 4);
    y.set(0, 0, +1);
    y.set(0, 1, 0);
    y.set(0, 2, 0);
    y.set(0, 3, +1);
    tracker.update(y);
    CHECK(tracker.lc() == doctest::Approx(2.0));
}

TEST_CASE("weighting trigger compares cardinality against tau") {
    CardinalityTracker high;  // Yeast-like
    {
        LabelObservation y(1000, 5);
        std::size_t placed = 0;
        for (std::size_t i = 0; i < 1000 && placed < 4237; ++i)
            for (std::size_t j = 0; j < 5 && placed < 4237; ++j) {
                y.set(i, j, +1);
                ++placed;
            }
        high.update(y);
    }
    CHECK(high.lc() == doctest::Approx(4.237));
    CHECK(should_weight(high, 1.5));

    CardinalityTracker low;  // Slashdot-like
    {
        LabelObservation y(1000, 3);
        std::size_t placed = 0;
        for (std::size_t i = 0; i < 1000 && placed < 1181; ++i)
            for (std::size_t j = 0; j < 3 && placed < 1181; ++j) {
                y.set(i, j, +1);
                ++placed;
            }
        low.update(y);
    }
    CHECK(low.lc() == doctest::Approx(1.181));
    CHECK(!should_weight(low, 1.5));

    CardinalityTracker at;  // lc exactly tau
    {
        LabelObservation y(2, 3);
        y.set(0, 0, +1);
        y.set(0, 1, +1);
        y.set(0, 2, +1);
        at.update(y);
    }
    CHECK(at.lc() == doctest::Approx(1.5));
    CHECK(should_weight(at, 1.5));
}

TEST_CASE("apply_weights scales the two channels") {
    std::vector<Matrix> p_c(1, Matrix(1, 2));
    p_c[0](0, 0) = 0.4;
    p_c[0](0, 1) = 0.6;
    Matrix p_w(1, 1);
    p_w(0, 0) = 0.8;

    const auto out = apply_weights(p_c, p_w);
    CHECK(out[0](0, 0) == doctest::Approx(0.08));
    CHECK(out[0](0, 1) == doctest::Approx(0.48));
}

TEST_CASE("weight of one zeroes the negative channel") {
    std::vector<Matrix> p_c(1, Matrix(2, 2));
    p_c[0](0, 0) = 0.7;
    p_c[0](0, 1) = 0.1;
    p_c[0](1, 0) = 0.3;
    p_c[0](1, 1) = 0.9;
    Matrix p_w(2, 1, 1.0);

    const auto out = apply_weights(p_c, p_w);
    CHECK(out[0](0, 0) == 0.0);
    CHECK(out[0](0, 1) == doctest::Approx(0.1));
    CHECK(out[0](1, 1) == doctest::Approx(0.9));

    // positive raw score forces prediction 1 under weight 1
    const BinaryMatrix yhat = decide(out);
    CHECK(yhat(0, 0) == 1);
    CHECK(yhat(1, 0) == 1);
}

TEST_CASE("uniform weight of one half never changes decisions") {
    UniformSource rng(31);
    std::vector<Matrix> p_c(4, Matrix(10, 2));
    for (auto& m : p_c)
        for (double& v : m.data()) v = rng.symmetric();
    Matrix p_w(10, 4, 0.5);

    CHECK(decide(p_c) == decide(apply_weights(p_c, p_w)));
}

TEST_CASE("decide compares channels with ties toward positive") {
    std::vector<Matrix> p_c(1, Matrix(3, 2));
    p_c[0](0, 0) = 0.2;
    p_c[0](0, 1) = 0.7;
    p_c[0](1, 0) = 0.7;
    p_c[0](1, 1) = 0.2;
    p_c[0](2, 0) = 0.5;
    p_c[0](2, 1) = 0.5;

    const BinaryMatrix yhat = decide(p_c);
    CHECK(yhat(0, 0) == 1);
    CHECK(yhat(1, 0) == 0);
    CHECK(yhat(2, 0) == 1);
}

TEST_CASE("all-zero scores decide all-positive") {
    std::vector<Matrix> p_c(3, Matrix(2, 2));
    const BinaryMatrix yhat = decide(p_c);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(yhat(i, j) == 1);
}

TEST_CASE("untrained weight classifier predicts zeros") {
    WeightClassifier wc(3, 4, 1e-3);
    const Matrix p = wc.predict(random_matrix(5, 3, 8));
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 4; ++j) CHECK(p(i, j) == 0.0);
}
