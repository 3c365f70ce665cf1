#include "cmsr/gf.hpp"

#include <cassert>

namespace cmsr::gf {

namespace {

// Primitive polynomial per extension degree, the classic table used by most
// GF(2^m) coding libraries (degree m at index m). Bitmask form: bit i is the
// coefficient of x^i.
constexpr uint32_t kPrimPoly[Field::kMaxDegree + 1] = {
    0,        0,        0x7,     0xB,      0x13,    0x25,     0x43,
    0x89,     0x11D,    0x211,   0x409,    0x805,   0x1053,   0x201B,
    0x4443,   0x8003,   0x1100B, 0x20009,  0x40081, 0x80027,  0x100009,
};

}  // namespace

Field::Field(unsigned m) : m_(m) {
    if (m < kMinDegree || m > kMaxDegree)
        fail(Errc::unsupported_degree, "extension degree must be in [2, 20], got " + std::to_string(m));
    q_ = 1u << m;
    poly_ = kPrimPoly[m];
    assert((poly_ & 1u) && (poly_ >> m) == 1u);
    tables_ = m <= kMaxTableDegree;
    if (tables_) {
        log_.assign(q_, 0);
        exp_.assign(2 * (q_ - 1), 0);
        uint32_t e = 1;
        for (uint32_t i = 0; i < q_ - 1; ++i) {
            if (e == 1 && i != 0)
                throw std::logic_error("built-in polynomial not primitive for m=" + std::to_string(m));
            exp_[i] = e;
            exp_[i + q_ - 1] = e;
            log_[e] = static_cast<uint16_t>(i);
            e <<= 1;
            if (e & q_) e ^= poly_;
        }
        if (e != 1) throw std::logic_error("bad reduction for m=" + std::to_string(m));
    } else {
        if (element_order(2) != q_ - 1)
            throw std::logic_error("built-in polynomial not primitive for m=" + std::to_string(m));
    }
}

uint32_t Field::mul_noluts(uint32_t a, uint32_t b) const {
    // Carry-less multiply then reduce; products fit easily in 64 bits for m <= 20.
    uint64_t acc = 0;
    uint64_t aa = a;
    while (b) {
        if (b & 1) acc ^= aa;
        aa <<= 1;
        b >>= 1;
    }
    for (int bit = 2 * static_cast<int>(m_) - 2; bit >= static_cast<int>(m_); --bit)
        if (acc >> bit & 1) acc ^= static_cast<uint64_t>(poly_) << (bit - m_);
    return static_cast<uint32_t>(acc);
}

uint32_t Field::inv(uint32_t a) const {
    if (a == 0) fail(Errc::division_by_zero, "inverse of zero");
    if (tables_) return exp_[q_ - 1 - log_[a]];
    return pow(a, static_cast<long long>(q_) - 2);
}

uint32_t Field::div(uint32_t a, uint32_t b) const {
    if (b == 0) fail(Errc::division_by_zero, "division by zero");
    if (a == 0) return 0;
    if (tables_) return exp_[q_ - 1 + log_[a] - log_[b]];
    return mul(a, inv(b));
}

uint32_t Field::pow(uint32_t a, long long e) const {
    if (a == 0) {
        if (e > 0) return 0;
        if (e == 0) return 1;
        fail(Errc::division_by_zero, "0 raised to a negative power");
    }
    long long period = q_ - 1;
    long long r = e % period;
    if (r < 0) r += period;
    if (tables_) return exp_[static_cast<uint32_t>(log_[a]) * static_cast<uint32_t>(r) % (q_ - 1)];
    uint32_t base = a, acc = 1;
    while (r) {
        if (r & 1) acc = mul(acc, base);
        base = mul(base, base);
        r >>= 1;
    }
    return acc;
}

unsigned Field::element_order(uint32_t a) const {
    if (a == 0) fail(Errc::division_by_zero, "order of zero undefined");
    unsigned ord = q_ - 1;
    // Strip each prime factor of q-1 while the power stays 1.
    unsigned rest = q_ - 1;
    for (unsigned p = 2; p * p <= rest; ++p) {
        if (rest % p) continue;
        while (rest % p == 0) rest /= p;
        while (ord % p == 0 && pow(a, ord / p) == 1) ord /= p;
    }
    if (rest > 1)
        while (ord % rest == 0 && pow(a, ord / rest) == 1) ord /= rest;
    return ord;
}

void Field::mul_acc(uint32_t* y, uint32_t c, const uint32_t* x, std::size_t n) const {
    if (c == 0) return;
    if (tables_) {
        const uint32_t lc = log_[c];
        for (std::size_t j = 0; j < n; ++j)
            if (x[j]) y[j] ^= exp_[lc + log_[x[j]]];
    } else {
        for (std::size_t j = 0; j < n; ++j)
            if (x[j]) y[j] ^= mul_noluts(x[j], c);
    }
}

}  // namespace cmsr::gf
