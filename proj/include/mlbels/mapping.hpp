#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "mlbels/matrix.hpp"
#include "mlbels/rng.hpp"

namespace mlbels {

/// Random feature-mapping and enhancement layers shared by every learner in
/// the model. Parameters are drawn once at construction and never change;
/// everything incremental lives in the downstream least-squares statistics.
///
/// map_features(X) returns M = [F, E] with
///   F = X w_f + beta_f            (linear feature mapping)
///   E = tanh(F w_e + beta_e)      (enhancement layer)
struct BroadMapper {
    Matrix w_f;                  // input_dim x d_f
    std::vector<double> beta_f;  // d_f
    Matrix w_e;                  // d_f x d_e
    std::vector<double> beta_e;  // d_e
    std::size_t input_dim = 0;
    std::size_t d_f = 0;
    std::size_t d_e = 0;
    std::uint64_t seed = 0;

    std::size_t output_dim() const { return d_f + d_e; }
};

/// Weights and biases uniform in [-1, 1), deterministic for a fixed seed.
inline BroadMapper make_mapper(std::size_t input_dim, std::size_t d_f, std::size_t d_e,
                               std::uint64_t seed) {
    if (input_dim == 0 || d_f == 0 || d_e == 0)
        throw std::invalid_argument("make_mapper: dimensions must be >= 1");

    BroadMapper m;
    m.input_dim = input_dim;
    m.d_f = d_f;
    m.d_e = d_e;
    m.seed = seed;

    UniformSource rng(seed);
    m.w_f = Matrix(input_dim, d_f);
    for (double& v : m.w_f.data()) v = rng.symmetric();
    m.beta_f.resize(d_f);
    for (double& v : m.beta_f) v = rng.symmetric();
    m.w_e = Matrix(d_f, d_e);
    for (double& v : m.w_e.data()) v = rng.symmetric();
    m.beta_e.resize(d_e);
    for (double& v : m.beta_e) v = rng.symmetric();
    return m;
}

inline Matrix map_features(const BroadMapper& mapper, const Matrix& x) {
    require_shape(x.cols() == mapper.input_dim, "map_features: input width");

    const std::size_t n = x.rows();
    Matrix out(n, mapper.output_dim());

    // F block, then E computed row by row from the F block in place.
    for (std::size_t i = 0; i < n; ++i) {
        const double* xi = x.row_ptr(i);
        double* oi = out.row_ptr(i);
        for (std::size_t j = 0; j < mapper.d_f; ++j) oi[j] = mapper.beta_f[j];
        for (std::size_t k = 0; k < mapper.input_dim; ++k) {
            const double xik = xi[k];
            if (xik == 0.0) continue;
            const double* wk = mapper.w_f.row_ptr(k);
            for (std::size_t j = 0; j < mapper.d_f; ++j) oi[j] += xik * wk[j];
        }
        for (std::size_t j = 0; j < mapper.d_e; ++j) {
            double s = mapper.beta_e[j];
            for (std::size_t k = 0; k < mapper.d_f; ++k) s += oi[k] * mapper.w_e(k, j);
            oi[mapper.d_f + j] = std::tanh(s);
        }
    }
    return out;
}

} // namespace mlbels
