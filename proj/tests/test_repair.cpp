#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cmsr/repair.hpp"
#include "example1.hpp"
#include "oracles.hpp"

using namespace cmsr;

namespace {

Codeword random_codeword(const CodeDescriptor& desc, std::mt19937_64& rng) {
    const CodeParams& p = desc.params();
    auto msg = oracles::random_vector(desc.field(), rng, static_cast<std::size_t>(p.k) * p.l);
    return encode_systematic(desc, msg);
}

std::map<int, std::vector<uint32_t>> survivors_of(const CodeDescriptor& desc, const Codeword& cw,
                                                  const std::vector<int>& failed) {
    std::map<int, std::vector<uint32_t>> out;
    for (int i = 0; i < desc.params().n; ++i)
        if (std::find(failed.begin(), failed.end(), i) == failed.end()) out[i] = cw.nodes[i];
    return out;
}

std::vector<int> default_helpers(const CodeDescriptor& desc, const std::vector<int>& failed) {
    std::vector<int> h;
    for (int i = 0; i < desc.params().n && static_cast<int>(h.size()) < desc.params().d; ++i)
        if (std::find(failed.begin(), failed.end(), i) == failed.end()) h.push_back(i);
    return h;
}

}  // namespace

TEST_CASE("row_selector") {
    // half = 1, s = 2: R_{0,g} = e_g
    CHECK(row_selector(2, 1, 0, 0) == Matrix::unit_row(2, 0));
    CHECK(row_selector(2, 1, 0, 1) == Matrix::unit_row(2, 1));
    CHECK_THROWS_AS(row_selector(2, 1, 1, 0), Error);
    CHECK_THROWS_AS(row_selector(2, 1, 0, 2), Error);

    // completeness: sum_g R^T R = I
    Field f(4);
    for (int s : {2, 3})
        for (int half : {2, 3})
            for (int a = 0; a < half; ++a) {
                long lt = 1;
                for (int e = 0; e < half; ++e) lt *= s;
                Matrix acc(lt, lt);
                for (int g = 0; g < s; ++g) {
                    Matrix r = row_selector(s, half, a, g);
                    acc = mat_add(f, acc, mat_mul(f, transpose(r), r));
                }
                CHECK(acc == Matrix::identity(lt));
            }

    // digit filtering: rows of R_{a,g} M are the rows of M with digit a == g
    std::mt19937_64 rng(31);
    const int s = 2, half = 3;
    Matrix m = oracles::random_matrix(f, rng, 8, 5);
    for (int a = 0; a < half; ++a)
        for (int g = 0; g < s; ++g) {
            Matrix sel = mat_mul(f, row_selector(s, half, a, g), m);
            std::size_t out_row = 0;
            for (long u = 0; u < 8; ++u) {
                if ((u >> a & 1) != g) continue;
                for (std::size_t j = 0; j < 5; ++j) CHECK(sel(out_row, j) == m(u, j));
                ++out_row;
            }
            CHECK(out_row == sel.rows());
        }
}

TEST_CASE("selection_matrix small shapes") {
    // s=2, h=2, half=1 so l_tilde = 2
    Matrix e0 = Matrix::unit_row(2, 0), e1 = Matrix::unit_row(2, 1);
    Matrix s001 = selection_matrix(2, 1, 2, 0, 0, 1);
    CHECK(s001.rows() == 2);
    CHECK(s001.cols() == 6);
    Matrix expect1(2, 6);
    expect1(0, 0) = 1;  // e_0 in block (0,0)
    expect1(1, 3) = 1;  // e_1 in block (1,1)
    CHECK(s001 == expect1);

    Matrix s000 = selection_matrix(2, 1, 2, 0, 0, 0);
    Matrix expect0(2, 6);
    expect0(0, 0) = 1;  // e_0 at (0,0)
    expect0(0, 4) = 1;  // e_0 at (0, z+s = 2)
    expect0(1, 3) = 1;  // e_1 at (1,1)
    expect0(1, 5) = 1;  // e_1 at (1, 2)
    CHECK(s000 == expect0);

    CHECK_THROWS_AS(selection_matrix(2, 1, 2, 0, 0, 2), Error);
}

TEST_CASE("selector completeness identity") {
    Field f(4);
    for (auto [s, h, half] : {std::tuple{2, 2, 2}, {2, 3, 2}, {3, 2, 2}, {2, 1, 3}}) {
        long lt = 1;
        for (int e = 0; e < half; ++e) lt *= s;
        const long glen = static_cast<long>(s + h - 1) * lt;
        for (int a = 0; a < half; ++a)
            for (int z = 0; z < h; ++z) {
                Matrix acc = q_matrix(f, s, half, h, z);
                for (int g = 0; g < s; ++g)
                    acc = mat_add(f, acc,
                                  mat_mul(f, transpose(selection_matrix(s, half, h, a, g, h - 1)),
                                          selection_matrix(s, half, h, a, g, z)));
                CHECK(acc == Matrix::identity(glen));
            }
    }
}

TEST_CASE("q_matrix") {
    Field f(4);
    // h = 1: no tail blocks and no -I blocks at all
    CHECK(q_matrix(f, 2, 2, 1, 0).is_zero());
    // shape check for h = 3, s = 2: rows [0, s*lt) only hit column block z+s
    Matrix q = q_matrix(f, 2, 2, 3, 1);
    const long lt = 4;
    for (long i = 0; i < 2 * lt; ++i)
        for (long j = 0; j < 4 * lt; ++j)
            if (q(i, j)) CHECK(j / lt == 3);  // z + s = 3
    // annihilation: (S (x) I_r)(I (x) M) Q_z = 0 for random M
    std::mt19937_64 rng(32);
    const int s = 2, half = 2, h = 2, r = 2;
    Matrix m = oracles::random_matrix(f, rng, r * 4, 4);
    for (int a = 0; a < half; ++a)
        for (int z = 0; z < h; ++z) {
            Matrix sk = kron(f, selection_matrix(s, half, h, a, 0, z), Matrix::identity(r));
            Matrix mid = kron(f, Matrix::identity(s + h - 1), m);
            CHECK(mat_mul(f, mat_mul(f, sk, mid), q_matrix(f, s, half, h, z)).is_zero());
        }
}

TEST_CASE("repair_matrix") {
    CodeDescriptor desc = example1_descriptor();
    const CodeParams& p = desc.params();

    // even node: U_0 = I so the repair matrix is the bare selection matrix
    std::vector<int> failed = {0, 2};
    Matrix r0 = repair_matrix(desc, failed, 0);
    CHECK(r0 == selection_matrix(p.s, p.half, 2, 0, 0, 0));
    CHECK(r0.rows() == 8);
    CHECK(r0.cols() == 24);

    // odd node: rows combine Phi(rot(F1)) entries
    std::vector<int> failed_odd = {1, 3};
    Matrix r1 = repair_matrix(desc, failed_odd, 1);
    Matrix phi_u1 = blow_up(desc.field(), desc.pairing().u1, p.half, 0, p.s);
    Matrix expected = mat_mul(desc.field(), selection_matrix(p.s, p.half, 2, 0, 0, 0),
                              kron(desc.field(), Matrix::identity(3), phi_u1));
    CHECK(r1 == expected);

    CHECK_THROWS_AS(repair_matrix(desc, failed, 1), Error);
    try {
        repair_matrix(desc, failed, 1);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::not_failed);
    }
}

TEST_CASE("helper payloads match the D-matrix definition") {
    CodeDescriptor desc = example1_descriptor();
    std::mt19937_64 rng(33);
    Codeword cw = random_codeword(desc, rng);
    std::vector<int> failed = {0, 2};

    for (int j : {1, 3, 4, 5}) {
        auto payload = helper_compute(desc, failed, 0, j, cw.nodes[j]);
        CHECK(payload.size() == 8);  // l / (d-k+h) = 24/3
        Matrix d = (j / 2 == 0) ? selection_matrix(2, 3, 2, 0, 0, 0)
                                : repair_matrix(desc, failed, 0);
        CHECK(payload == mat_vec(desc.field(), d, cw.nodes[j]));
    }
    std::vector<uint32_t> zeros(desc.params().l, 0);
    auto z = helper_compute(desc, failed, 0, 4, zeros);
    for (uint32_t v : z) CHECK(v == 0);

    // payload rows touch at most 2s inputs and only through pairing entries
    Matrix r = repair_matrix(desc, failed, 0);
    for (std::size_t i = 0; i < r.rows(); ++i) {
        int nnz = 0;
        for (std::size_t j = 0; j < r.cols(); ++j)
            if (r(i, j)) ++nnz;
        CHECK(nnz <= 2 * desc.params().s);
    }
}

TEST_CASE("step1_solve recovers the ground-truth pieces") {
    CodeDescriptor desc = example1_descriptor();
    const CodeParams& p = desc.params();
    std::mt19937_64 rng(34);
    Codeword cw = random_codeword(desc, rng);

    std::vector<int> failed = {0, 2};
    std::vector<int> helpers = {1, 3, 4, 5};
    std::map<int, std::vector<uint32_t>> payloads;
    for (int j : helpers) payloads[j] = helper_compute(desc, failed, 0, j, cw.nodes[j]);

    Step1Result res = step1_solve(desc, failed, helpers, 0, payloads);

    // self pieces equal S_{a,g,ihat} C_i
    for (int g = 0; g < p.s; ++g) {
        Matrix d = selection_matrix(p.s, p.half, 2, 0, g, 0);
        CHECK(res.self_pieces[g] == mat_vec(desc.field(), d, cw.nodes[0]));
    }
    // peer piece equals D_{i,j} C_j computed from ground truth
    CHECK(res.peer_pieces.at(2) == helper_compute(desc, failed, 0, 2, cw.nodes[2]));

    // missing payload
    payloads.erase(3);
    CHECK_THROWS_AS(step1_solve(desc, failed, helpers, 0, payloads), Error);
}

TEST_CASE("step2_combine reassembles the node") {
    CodeDescriptor desc = example1_descriptor();
    const CodeParams& p = desc.params();
    std::mt19937_64 rng(35);
    Codeword cw = random_codeword(desc, rng);

    std::vector<int> failed = {0, 2};
    // Build the true pieces directly from the definitions.
    std::vector<std::vector<uint32_t>> self_pieces;
    for (int g = 0; g < p.s; ++g)
        self_pieces.push_back(
            mat_vec(desc.field(), selection_matrix(p.s, p.half, 2, 0, g, 0), cw.nodes[0]));
    std::map<int, std::vector<uint32_t>> peer_pieces;
    peer_pieces[2] = helper_compute(desc, failed, 2, 0, cw.nodes[0]);  // D_{2,0} C_0

    auto rebuilt = step2_combine(desc, failed, 0, self_pieces, peer_pieces);
    CHECK(rebuilt == cw.nodes[0]);

    peer_pieces.erase(2);
    CHECK_THROWS_AS(step2_combine(desc, failed, 0, self_pieces, peer_pieces), Error);
}

TEST_CASE("cooperative repair on Example 1") {
    CodeDescriptor desc = example1_descriptor();
    std::mt19937_64 rng(36);
    Codeword cw = random_codeword(desc, rng);

    SUBCASE("same group failures") {
        std::vector<int> failed = {0, 1}, helpers = {2, 3, 4, 5};
        auto res = cooperative_repair(desc, survivors_of(desc, cw, failed), failed, helpers);
        CHECK(res.repaired.at(0) == cw.nodes[0]);
        CHECK(res.repaired.at(1) == cw.nodes[1]);
        CHECK(res.ledger.step1 == 64);
        CHECK(res.ledger.step2 == 16);
        CHECK(res.ledger.total() == cut_set_bound(desc.params(), 2));
        CHECK(res.ledger.total() == 80);
    }
    SUBCASE("cross group failures") {
        std::vector<int> failed = {0, 2}, helpers = {1, 3, 4, 5};
        auto res = cooperative_repair(desc, survivors_of(desc, cw, failed), failed, helpers);
        CHECK(res.repaired.at(0) == cw.nodes[0]);
        CHECK(res.repaired.at(2) == cw.nodes[2]);
        CHECK(res.ledger.total() == 80);
    }
    SUBCASE("validation") {
        CHECK_THROWS_AS(
            cooperative_repair(desc, survivors_of(desc, cw, {0, 1}), {0, 1}, {1, 2, 3, 4}), Error);
        try {
            cooperative_repair(desc, survivors_of(desc, cw, {0, 1}), {0, 1}, {1, 2, 3, 4});
        } catch (const Error& e) {
            CHECK(e.code() == Errc::overlap);
        }
        CHECK_THROWS_AS(
            cooperative_repair(desc, survivors_of(desc, cw, {0, 1, 2}), {0, 1, 2}, {3, 4, 5}),
            Error);  // h=3 not in h_set
        CHECK_THROWS_AS(cooperative_repair(desc, survivors_of(desc, cw, {0, 1}), {0, 1}, {2, 3}),
                        Error);  // wrong helper count
    }
}

TEST_CASE("every failure pair of Example 1 repairs exactly") {
    CodeDescriptor desc = example1_descriptor();
    std::mt19937_64 rng(37);
    for (int a = 0; a < 6; ++a)
        for (int b = a + 1; b < 6; ++b) {
            std::vector<int> failed = {a, b};
            std::vector<int> helpers = default_helpers(desc, failed);
            RepairPlan plan(desc, failed, helpers);
            for (int t = 0; t < 3; ++t) {
                Codeword cw = random_codeword(desc, rng);
                auto res = plan.apply(survivors_of(desc, cw, failed));
                CHECK(res.repaired.at(a) == cw.nodes[a]);
                CHECK(res.repaired.at(b) == cw.nodes[b]);
                CHECK(res.ledger.total() == 80);
            }
        }
}

TEST_CASE("cut_set_bound") {
    CodeDescriptor desc = example1_descriptor();
    CHECK(cut_set_bound(desc.params(), 2) == 80);
    CHECK_THROWS_AS(cut_set_bound(desc.params(), 3), Error);

    CodeParams p2 = derive_params(8, 4, 6, {2});
    CHECK(cut_set_bound(p2, 2) == 1134);  // 2*7*324/4

    CodeParams single = derive_params(6, 3, 4, {1});
    // h=1 with rho = s: d * l / (d-k+1)
    CHECK(cut_set_bound(single, 1) == static_cast<uint64_t>(single.d) * single.l / single.s);
}

TEST_CASE("single failure repair through the same machinery") {
    CodeDescriptor desc = CodeDescriptor::build(derive_params(6, 3, 4, {1}));
    const CodeParams& p = desc.params();
    CHECK(p.rho == 2);
    std::mt19937_64 rng(38);
    Codeword cw = random_codeword(desc, rng);
    std::vector<int> failed = {3};
    std::vector<int> helpers = {0, 1, 2, 4};
    auto res = cooperative_repair(desc, survivors_of(desc, cw, failed), failed, helpers);
    CHECK(res.repaired.at(3) == cw.nodes[3]);
    CHECK(res.ledger.step2 == 0);
    CHECK(res.ledger.total() == cut_set_bound(p, 1));
}

TEST_CASE("multi-h descriptor repairs both failure counts") {
    CodeDescriptor desc = CodeDescriptor::build(derive_params(8, 4, 6, {1, 2}));
    const CodeParams& p = desc.params();
    CHECK(p.rho == 12);
    CHECK(p.l == 972);
    std::mt19937_64 rng(39);
    Codeword cw = random_codeword(desc, rng);

    std::vector<int> f2 = {1, 6};
    std::vector<int> h2 = default_helpers(desc, f2);
    auto res2 = cooperative_repair(desc, survivors_of(desc, cw, f2), f2, h2);
    CHECK(res2.repaired.at(1) == cw.nodes[1]);
    CHECK(res2.repaired.at(6) == cw.nodes[6]);
    CHECK(res2.ledger.total() == cut_set_bound(p, 2));

    std::vector<int> f1 = {5};
    std::vector<int> h1 = default_helpers(desc, f1);
    auto res1 = cooperative_repair(desc, survivors_of(desc, cw, f1), f1, h1);
    CHECK(res1.repaired.at(5) == cw.nodes[5]);
    CHECK(res1.ledger.total() == cut_set_bound(p, 1));
    CHECK(res1.ledger.total() == 1944);
}

TEST_CASE("punctured code repair never touches the internal node") {
    CodeDescriptor desc = CodeDescriptor::build(derive_params(7, 3, 5, {2}));
    std::mt19937_64 rng(40);
    Codeword cw = random_codeword(desc, rng);
    std::vector<int> failed = {2, 6};
    std::vector<int> helpers = {0, 1, 3, 4, 5};
    auto res = cooperative_repair(desc, survivors_of(desc, cw, failed), failed, helpers);
    CHECK(res.repaired.at(2) == cw.nodes[2]);
    CHECK(res.repaired.at(6) == cw.nodes[6]);
    CHECK(res.ledger.total() == cut_set_bound(desc.params(), 2));

    // the punctured node is not addressable
    CHECK_THROWS_AS(cooperative_repair(desc, survivors_of(desc, cw, {2, 7}), {2, 7}, helpers),
                    Error);
}

TEST_CASE("transcripts are deterministic") {
    CodeDescriptor desc = example1_descriptor();
    std::mt19937_64 rng(41);
    Codeword cw = random_codeword(desc, rng);
    std::vector<int> failed = {1, 4};
    std::vector<int> helpers = default_helpers(desc, failed);
    Transcript t1, t2;
    cooperative_repair(desc, survivors_of(desc, cw, failed), failed, helpers, &t1);
    cooperative_repair(desc, survivors_of(desc, cw, failed), failed, helpers, &t2);
    REQUIRE(t1.size() == t2.size());
    CHECK(t1.size() == 10);  // 2*4 step-1 edges + 2 step-2 edges
    for (std::size_t i = 0; i < t1.size(); ++i) {
        CHECK(t1[i].step == t2[i].step);
        CHECK(t1[i].source == t2[i].source);
        CHECK(t1[i].target == t2[i].target);
        CHECK(t1[i].symbols == t2[i].symbols);
        CHECK(t1[i].payload_hash == t2[i].payload_hash);
    }
}

TEST_CASE("repair identity suite on representative failure sets") {
    CodeDescriptor desc = example1_descriptor();
    for (std::vector<int> failed : {std::vector<int>{0, 1}, {0, 2}, {1, 4}}) {
        IdentityReport rep = verify_repair_identities(desc, failed, 99);
        for (const auto& c : rep.checks) {
            INFO(c.name);
            CHECK(c.pass);
        }
        CHECK(rep.all_pass());
    }
}
