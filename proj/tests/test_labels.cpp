#include "doctest.h"

#include "mlbels/labels.hpp"

using namespace mlbels;

namespace {

LabelObservation column(std::initializer_list<int> values) {
    LabelObservation obs(values.size(), 1);
    std::size_t i = 0;
    for (int v : values) obs.set(i++, 0, static_cast<std::int8_t>(v));
    return obs;
}

} // namespace

TEST_CASE("mask_for_br keeps observed rows with recoded targets") {
    const LabelObservation obs = column({+1, 0, -1});
    const MaskedColumn col = mask_for_br(obs, 0);
    REQUIRE(col.size() == 2);
    CHECK(col.row_index[0] == 0);
    CHECK(col.row_index[1] == 2);
    CHECK(col.target[0] == 1.0);
    CHECK(col.target[1] == 0.0);
}

TEST_CASE("mask_for_br edge columns") {
    const MaskedColumn full = mask_for_br(column({+1, -1, -1, +1}), 0);
    CHECK(full.size() == 4);

    const MaskedColumn none = mask_for_br(column({0, 0, 0}), 0);
    CHECK(none.empty());

    CHECK_THROWS_AS(mask_for_br(column({+1}), 3), std::invalid_argument);
}

TEST_CASE("impute_for_weights maps missing to negative") {
    LabelObservation obs(2, 3);
    obs.set(0, 0, +1);
    obs.set(0, 1, 0);
    obs.set(0, 2, -1);
    obs.set(1, 0, 0);
    obs.set(1, 1, 0);
    obs.set(1, 2, 0);

    const Matrix y = impute_for_weights(obs);
    CHECK(y(0, 0) == 1.0);
    CHECK(y(0, 1) == 0.0);
    CHECK(y(0, 2) == 0.0);
    // all-missing row imputes to all zeros
    for (std::size_t j = 0; j < 3; ++j) CHECK(y(1, j) == 0.0);
}

TEST_CASE("impute matches plain recoding when nothing is missing") {
    LabelObservation obs(2, 2);
    obs.set(0, 0, +1);
    obs.set(0, 1, -1);
    obs.set(1, 0, -1);
    obs.set(1, 1, +1);
    const Matrix y = impute_for_weights(obs);
    CHECK(y(0, 0) == 1.0);
    CHECK(y(0, 1) == 0.0);
    CHECK(y(1, 0) == 0.0);
    CHECK(y(1, 1) == 1.0);
}

TEST_CASE("drop_labels with keep_fraction 1 returns the input untouched") {
    LabelObservation obs(10, 4);
    for (std::size_t i = 0; i < 10; ++i)
        for (std::size_t j = 0; j < 4; ++j) obs.set(i, j, (i + j) % 2 == 0 ? +1 : -1);
    CHECK(drop_labels(obs, 1.0, 99) == obs);
}

TEST_CASE("drop_labels retained count stays within 3 sigma") {
    LabelObservation obs(100, 100, +1);  // 10,000 observed entries
    const LabelObservation masked = drop_labels(obs, 0.1, 7);
    std::size_t retained = 0;
    for (std::size_t i = 0; i < 100; ++i)
        for (std::size_t j = 0; j < 100; ++j) retained += masked(i, j) != 0;
    // binomial(10000, 0.1): mean 1000, sigma 30
    CHECK(retained >= 1000 - 90);
    CHECK(retained <= 1000 + 90);
}

TEST_CASE("drop_labels is deterministic per seed") {
    LabelObservation obs(50, 8, -1);
    CHECK(drop_labels(obs, 0.4, 123) == drop_labels(obs, 0.4, 123));
    CHECK(!(drop_labels(obs, 0.4, 123) == drop_labels(obs, 0.4, 124)));
}

TEST_CASE("observed count shrinks monotonically as labels are dropped") {
    LabelObservation obs(60, 10, +1);
    auto observed = [](const LabelObservation& o) {
        std::size_t n = 0;
        for (std::size_t i = 0; i < o.rows(); ++i)
            for (std::size_t j = 0; j < o.cols(); ++j) n += o(i, j) != 0;
        return n;
    };
    // same seed: the same uniform draws decide every entry, so masks nest
    const std::size_t at30 = observed(drop_labels(obs, 0.3, 5));
    const std::size_t at60 = observed(drop_labels(obs, 0.6, 5));
    const std::size_t at100 = observed(drop_labels(obs, 1.0, 5));
    CHECK(at30 <= at60);
    CHECK(at60 <= at100);
    CHECK(at100 == 600);
}

TEST_CASE("drop_labels rejects out-of-range fractions") {
    LabelObservation obs(1, 1, +1);
    CHECK_THROWS_AS(drop_labels(obs, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(drop_labels(obs, 1.5, 1), std::invalid_argument);
}

TEST_CASE("positives_of extracts the +1 mask") {
    LabelObservation obs(1, 3);
    obs.set(0, 0, +1);
    obs.set(0, 1, 0);
    obs.set(0, 2, -1);
    const BinaryMatrix y = positives_of(obs);
    CHECK(y(0, 0) == 1);
    CHECK(y(0, 1) == 0);
    CHECK(y(0, 2) == 0);
}
