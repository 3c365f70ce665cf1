#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cmsr/errors.hpp"

namespace cmsr::gf {

/// Arithmetic context for a binary extension field GF(2^m), 2 <= m <= 20.
///
/// One fixed primitive polynomial per degree (see gf.cpp for the table), so
/// element encodings are portable: the same degree always produces the same
/// field. The element encoded 2 (the polynomial x) generates the
/// multiplicative group; this is verified at construction.
///
/// add/sub/neg are kept as distinct entry points even though they coincide in
/// characteristic 2, so formulas written for a general field transfer
/// unchanged.
///
/// Immutable after construction; all operations are pure and thread-safe.
class Field {
public:
    static constexpr unsigned kMinDegree = 2;
    static constexpr unsigned kMaxDegree = 20;
    static constexpr unsigned kMaxTableDegree = 16;  // log/antilog tables up to here

    explicit Field(unsigned m);

    unsigned degree() const { return m_; }
    uint32_t order() const { return q_; }
    uint32_t prim_poly() const { return poly_; }
    std::size_t byte_width() const { return (m_ + 7) / 8; }

    /// The fixed primitive element omega (the polynomial x, encoded 2).
    uint32_t omega() const { return 2; }

    uint32_t add(uint32_t a, uint32_t b) const { return a ^ b; }
    uint32_t sub(uint32_t a, uint32_t b) const { return a ^ b; }
    uint32_t neg(uint32_t a) const { return a; }

    uint32_t mul(uint32_t a, uint32_t b) const {
        if (tables_) {
            if (a == 0 || b == 0) return 0;
            return exp_[log_[a] + log_[b]];
        }
        return mul_noluts(a, b);
    }

    uint32_t inv(uint32_t a) const;
    uint32_t div(uint32_t a, uint32_t b) const;

    /// a^e with any integer exponent; negative exponents invert first.
    uint32_t pow(uint32_t a, long long e) const;

    /// Canonical image of a machine integer (reduction mod the characteristic).
    uint32_t from_int(long long v) const { return static_cast<uint32_t>(((v % 2) + 2) % 2); }

    /// Multiplicative order of a nonzero element.
    unsigned element_order(uint32_t a) const;

    /// y += c * x over a row of n entries. Hot path of the matrix kernels.
    void mul_acc(uint32_t* y, uint32_t c, const uint32_t* x, std::size_t n) const;

private:
    uint32_t mul_noluts(uint32_t a, uint32_t b) const;

    unsigned m_;
    uint32_t q_;
    uint32_t poly_;
    bool tables_;
    std::vector<uint16_t> log_;   // index by element, log_[0] unused
    std::vector<uint32_t> exp_;   // doubled so mul needs no reduction mod q-1
};

}  // namespace cmsr::gf
