#pragma once

// Independent reference implementations used as oracles by the test suites.
// Everything here is deliberately naive: schoolbook polynomial arithmetic,
// triple-loop products, Leibniz determinants, digit bookkeeping by hand. None
// of it shares code with the library paths it checks (only Field arithmetic
// for entry-level operations).

#include <cstdint>
#include <random>
#include <vector>

#include "cmsr/matrix.hpp"

namespace oracles {

using cmsr::Field;
using cmsr::Matrix;

// GF(2)[x] multiplication reduced mod poly (bitmask with degree-m leading bit).
inline uint32_t poly_mul_mod(uint32_t a, uint32_t b, uint32_t poly, unsigned m) {
    uint64_t acc = 0;
    for (unsigned i = 0; b >> i; ++i)
        if ((b >> i) & 1) acc ^= static_cast<uint64_t>(a) << i;
    for (int bit = 62; bit >= static_cast<int>(m); --bit)
        if ((acc >> bit) & 1) acc ^= static_cast<uint64_t>(poly) << (bit - m);
    return static_cast<uint32_t>(acc);
}

// Multiplicative order by exhaustive powering.
inline unsigned order_by_powers(const Field& f, uint32_t a) {
    uint32_t v = a;
    unsigned ord = 1;
    while (v != 1) {
        v = f.mul(v, a);
        ++ord;
        if (ord > f.order()) return 0;  // never happens for valid fields
    }
    return ord;
}

inline Matrix naive_mul(const Field& f, const Matrix& a, const Matrix& b) {
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            uint32_t acc = 0;
            for (std::size_t k = 0; k < a.cols(); ++k)
                acc = f.add(acc, f.mul(a(i, k), b(k, j)));
            c(i, j) = acc;
        }
    return c;
}

// Leibniz expansion over all permutations; fine up to ~6x6.
inline uint32_t leibniz_det(const Field& f, const Matrix& a) {
    const std::size_t n = a.rows();
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    uint32_t det = 0;
    // Iterates permutations in lexicographic order; the sign does not matter
    // in characteristic 2 but is tracked through neg() for generality.
    auto parity_of = [](const std::vector<std::size_t>& p) {
        unsigned inv = 0;
        for (std::size_t i = 0; i < p.size(); ++i)
            for (std::size_t j = i + 1; j < p.size(); ++j)
                if (p[i] > p[j]) ++inv;
        return inv % 2;
    };
    do {
        uint32_t term = 1;
        for (std::size_t i = 0; i < n; ++i) term = f.mul(term, a(i, perm[i]));
        if (parity_of(perm)) term = f.neg(term);
        det = f.add(det, term);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return det;
}

// Kronecker product by direct index arithmetic.
inline Matrix naive_kron(const Field& f, const Matrix& a, const Matrix& b) {
    Matrix c(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < c.rows(); ++i)
        for (std::size_t j = 0; j < c.cols(); ++j)
            c(i, j) = f.mul(a(i / b.rows(), j / b.cols()), b(i % b.rows(), j % b.cols()));
    return c;
}

// Blow-up checked entry-by-entry via base-s digits (digit 0 least
// significant): block (i, j) is K(i_a, j_a) when all other digits agree.
inline Matrix digit_blow_up(const Field&, const Matrix& k, unsigned t, unsigned a, unsigned s) {
    const std::size_t p = k.rows() / s, q = k.cols() / s;
    std::size_t st = 1;
    for (unsigned e = 0; e < t; ++e) st *= s;
    auto digit = [&](std::size_t v, unsigned z) {
        for (unsigned e = 0; e < z; ++e) v /= s;
        return v % s;
    };
    Matrix out(st * p, st * q);
    for (std::size_t i = 0; i < st; ++i)
        for (std::size_t j = 0; j < st; ++j) {
            bool same = true;
            for (unsigned z = 0; z < t && same; ++z)
                if (z != a && digit(i, z) != digit(j, z)) same = false;
            if (!same) continue;
            for (std::size_t u = 0; u < p; ++u)
                for (std::size_t w = 0; w < q; ++w)
                    out(i * p + u, j * q + w) = k(digit(i, a) * p + u, digit(j, a) * q + w);
        }
    return out;
}

// Multiplication in F_q[x]/(x^s - 1) on coefficient vectors.
inline std::vector<uint32_t> ring_mul(const Field& f, const std::vector<uint32_t>& a,
                                      const std::vector<uint32_t>& b) {
    const std::size_t s = a.size();
    std::vector<uint32_t> c(s, 0);
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j)
            c[(i + j) % s] = f.add(c[(i + j) % s], f.mul(a[i], b[j]));
    return c;
}

inline Matrix random_matrix(const Field& f, std::mt19937_64& rng, std::size_t rows,
                            std::size_t cols) {
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = static_cast<uint32_t>(rng() % f.order());
    return m;
}

inline std::vector<uint32_t> random_vector(const Field& f, std::mt19937_64& rng, std::size_t n) {
    std::vector<uint32_t> v(n);
    for (auto& x : v) x = static_cast<uint32_t>(rng() % f.order());
    return v;
}

inline Matrix random_invertible(const Field& f, std::mt19937_64& rng, std::size_t n) {
    while (true) {
        Matrix m = random_matrix(f, rng, n, n);
        if (cmsr::is_invertible(f, m)) return m;
    }
}

}  // namespace oracles
