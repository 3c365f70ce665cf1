#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cmsr/codec.hpp"
#include "example1.hpp"
#include "oracles.hpp"

using namespace cmsr;

namespace {

Codeword random_codeword(const CodeDescriptor& desc, std::mt19937_64& rng) {
    const CodeParams& p = desc.params();
    auto msg = oracles::random_vector(desc.field(), rng, static_cast<std::size_t>(p.k) * p.l);
    return encode_systematic(desc, msg);
}

}  // namespace

TEST_CASE("syndrome") {
    CodeDescriptor desc = example1_descriptor();
    const CodeParams& p = desc.params();
    Codeword zero;
    zero.nodes.assign(p.n_int, std::vector<uint32_t>(p.l, 0));
    CHECK(syndrome(desc, zero).is_codeword);

    std::mt19937_64 rng(21);
    Codeword cw = random_codeword(desc, rng);
    CHECK(syndrome(desc, cw).is_codeword);

    cw.nodes[2][5] = desc.field().add(cw.nodes[2][5], 1);
    auto bad = syndrome(desc, cw);
    CHECK(!bad.is_codeword);
    bool nonzero = false;
    for (const auto& layer : bad.residual)
        for (uint32_t v : layer)
            if (v) nonzero = true;
    CHECK(nonzero);
}

TEST_CASE("encode_systematic") {
    CodeDescriptor desc = example1_descriptor();
    const CodeParams& p = desc.params();
    std::vector<uint32_t> zero_msg(static_cast<std::size_t>(p.k) * p.l, 0);
    Codeword z = encode_systematic(desc, zero_msg);
    for (const auto& node : z.nodes)
        for (uint32_t v : node) CHECK(v == 0);

    std::mt19937_64 rng(22);
    auto msg = oracles::random_vector(desc.field(), rng, 72);
    Codeword cw = encode_systematic(desc, msg);
    CHECK(cw.nodes.size() == 6);
    for (const auto& node : cw.nodes) CHECK(node.size() == 24);
    for (int i = 0; i < p.k; ++i)
        for (long t = 0; t < p.l; ++t) CHECK(cw.nodes[i][t] == msg[i * p.l + t]);
    CHECK(syndrome(desc, cw).is_codeword);

    // injective on the systematic prefix
    auto msg2 = msg;
    msg2[10] = desc.field().add(msg2[10], 1);
    Codeword cw2 = encode_systematic(desc, msg2);
    CHECK(cw.nodes[0] != cw2.nodes[0]);

    CHECK_THROWS_AS(encode_systematic(desc, std::span<const uint32_t>(msg).subspan(0, 10)), Error);
}

TEST_CASE("decode_erasures on every erasure pattern of Example 1") {
    CodeDescriptor desc = example1_descriptor();
    const CodeParams& p = desc.params();
    std::mt19937_64 rng(23);
    Codeword cw = random_codeword(desc, rng);

    // empty erasure set: identity
    Codeword same = decode_erasures(desc, cw.nodes, {});
    for (int i = 0; i < p.n; ++i) CHECK(same.nodes[i] == cw.nodes[i]);

    // all 20 triples
    for (int a = 0; a < 6; ++a)
        for (int b = a + 1; b < 6; ++b)
            for (int c = b + 1; c < 6; ++c) {
                std::vector<std::vector<uint32_t>> partial(p.n);
                for (int i = 0; i < p.n; ++i)
                    if (i != a && i != b && i != c) partial[i] = cw.nodes[i];
                Codeword rec = decode_erasures(desc, partial, {a, b, c});
                for (int i = 0; i < p.n; ++i) CHECK(rec.nodes[i] == cw.nodes[i]);
            }

    CHECK_THROWS_AS(decode_erasures(desc, cw.nodes, {0, 1, 2, 3}), Error);
    try {
        decode_erasures(desc, cw.nodes, {0, 1, 2, 3});
    } catch (const Error& e) {
        CHECK(e.code() == Errc::too_many_erasures);
    }
}

TEST_CASE("encode/decode round trip across erasure counts") {
    CodeDescriptor desc = example1_descriptor();
    const CodeParams& p = desc.params();
    std::mt19937_64 rng(24);
    for (int trial = 0; trial < 20; ++trial) {
        Codeword cw = random_codeword(desc, rng);
        std::set<int> erased;
        const int count = trial % (p.n - p.k + 1);
        while (static_cast<int>(erased.size()) < count) erased.insert(rng() % p.n);
        std::vector<std::vector<uint32_t>> partial(p.n);
        for (int i = 0; i < p.n; ++i)
            if (!erased.count(i)) partial[i] = cw.nodes[i];
        Codeword rec = decode_erasures(desc, partial, erased);
        for (int i = 0; i < p.n; ++i) CHECK(rec.nodes[i] == cw.nodes[i]);
    }
}

TEST_CASE("layer independence") {
    CodeDescriptor desc = example1_descriptor();
    const CodeParams& p = desc.params();
    std::mt19937_64 rng(25);
    Codeword cw = random_codeword(desc, rng);
    // rotating the rho layers of every node stays a codeword
    Codeword rotated = cw;
    for (int i = 0; i < p.n_int; ++i)
        for (int j = 0; j < p.rho; ++j) {
            const int src = (j + 1) % p.rho;
            std::copy(cw.nodes[i].begin() + src * p.l_tilde,
                      cw.nodes[i].begin() + (src + 1) * p.l_tilde,
                      rotated.nodes[i].begin() + j * p.l_tilde);
        }
    CHECK(syndrome(desc, rotated).is_codeword);
}

TEST_CASE("decode linearity") {
    CodeDescriptor desc = example1_descriptor();
    const CodeParams& p = desc.params();
    const Field& f = desc.field();
    std::mt19937_64 rng(26);
    Codeword x = random_codeword(desc, rng);
    Codeword y = random_codeword(desc, rng);
    const uint32_t alpha = 1 + rng() % (f.order() - 1);
    std::set<int> erased = {1, 4};

    std::vector<std::vector<uint32_t>> combo(p.n), px(p.n), py(p.n);
    for (int i = 0; i < p.n; ++i) {
        if (erased.count(i)) continue;
        px[i] = x.nodes[i];
        py[i] = y.nodes[i];
        combo[i].resize(p.l);
        for (long t = 0; t < p.l; ++t)
            combo[i][t] = f.add(f.mul(alpha, x.nodes[i][t]), y.nodes[i][t]);
    }
    Codeword dx = decode_erasures(desc, px, erased);
    Codeword dy = decode_erasures(desc, py, erased);
    Codeword dc = decode_erasures(desc, combo, erased);
    for (int i : erased)
        for (long t = 0; t < p.l; ++t)
            CHECK(dc.nodes[i][t] == f.add(f.mul(alpha, dx.nodes[i][t]), dy.nodes[i][t]));
}

TEST_CASE("punctured code encodes and decodes") {
    CodeDescriptor desc = CodeDescriptor::build(derive_params(7, 3, 5, {2}));
    const CodeParams& p = desc.params();
    std::mt19937_64 rng(27);
    auto msg = oracles::random_vector(desc.field(), rng, static_cast<std::size_t>(p.k) * p.l);
    Codeword cw = encode_systematic(desc, msg);
    CHECK(cw.nodes.size() == 8);  // internal length, last node never exported
    CHECK(syndrome(desc, cw).is_codeword);

    // erase up to n - k = 4 public nodes
    std::set<int> erased = {0, 2, 5, 6};
    std::vector<std::vector<uint32_t>> partial(p.n);
    for (int i = 0; i < p.n; ++i)
        if (!erased.count(i)) partial[i] = cw.nodes[i];
    Codeword rec = decode_erasures(desc, partial, erased);
    for (int i = 0; i < p.n; ++i) CHECK(rec.nodes[i] == cw.nodes[i]);

    CHECK_THROWS_AS(decode_erasures(desc, partial, {0, 1, 2, 3, 4}), Error);
    CHECK_THROWS_AS(decode_erasures(desc, partial, {7}), Error);  // internal node not addressable
}
