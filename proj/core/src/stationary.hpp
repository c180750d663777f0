#pragma once

// Stationary distribution of a small continuous-time Markov generator.
//
// The net fluxes derived from the distribution are differences of nearly
// equal gross fluxes whenever a fast edge sits next to a slow bottleneck, so
// the solve and the flux arithmetic run in quad precision where available.

#include <array>
#include <cstddef>
#include <utility>

namespace hybridtherm::detail {

#if defined(__SIZEOF_FLOAT128__)
using wide = __float128;
#else
using wide = long double;
#endif

inline wide wabs(wide x) { return x < 0 ? -x : x; }

template <std::size_t N>
using Matrix = std::array<std::array<wide, N>, N>;

template <std::size_t N>
struct StationarySolution {
    std::array<wide, N> p{};
    double relative_residual = 0.0;  ///< max |L p| / max |L_ij|
};

/// Strong connectivity of the directed graph with an edge s -> t iff
/// generator(t, s) > 0.
template <std::size_t N>
bool strongly_connected(const Matrix<N>& generator) {
    auto reach = [&](bool forward) {
        std::array<bool, N> seen{};
        std::array<std::size_t, N> stack{};
        std::size_t top = 0;
        seen[0] = true;
        stack[top++] = 0;
        while (top > 0) {
            const std::size_t s = stack[--top];
            for (std::size_t t = 0; t < N; ++t) {
                if (t == s || seen[t]) continue;
                const wide rate = forward ? generator[t][s] : generator[s][t];
                if (rate > 0) {
                    seen[t] = true;
                    stack[top++] = t;
                }
            }
        }
        for (bool b : seen) {
            if (!b) return false;
        }
        return true;
    };
    return reach(true) && reach(false);
}

/// Solves L p = 0 with sum(p) = 1 by replacing the last balance row with the
/// normalization row. Gaussian elimination with partial pivoting.
template <std::size_t N>
StationarySolution<N> solve_stationary(const Matrix<N>& generator) {
    Matrix<N> a = generator;
    std::array<wide, N> b{};
    for (std::size_t j = 0; j < N; ++j) a[N - 1][j] = 1;
    b[N - 1] = 1;

    for (std::size_t col = 0; col < N; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < N; ++r) {
            if (wabs(a[r][col]) > wabs(a[pivot][col])) pivot = r;
        }
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t r = col + 1; r < N; ++r) {
            const wide factor = a[r][col] / a[col][col];
            if (factor == 0) continue;
            for (std::size_t c = col; c < N; ++c) a[r][c] -= factor * a[col][c];
            b[r] -= factor * b[col];
        }
    }

    StationarySolution<N> out;
    for (std::size_t i = N; i-- > 0;) {
        wide acc = b[i];
        for (std::size_t c = i + 1; c < N; ++c) acc -= a[i][c] * out.p[c];
        out.p[i] = acc / a[i][i];
    }

    wide scale = 0, residual = 0;
    for (std::size_t r = 0; r < N; ++r) {
        wide row = 0;
        for (std::size_t c = 0; c < N; ++c) {
            row += generator[r][c] * out.p[c];
            if (wabs(generator[r][c]) > scale) scale = wabs(generator[r][c]);
        }
        if (wabs(row) > residual) residual = wabs(row);
    }
    out.relative_residual = scale > 0 ? static_cast<double>(residual / scale) : 0.0;
    return out;
}

}  // namespace hybridtherm::detail
