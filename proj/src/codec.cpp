#include "cmsr/codec.hpp"

#include <algorithm>

namespace cmsr {

namespace {

void check_node_lengths(const CodeParams& p, const std::vector<std::vector<uint32_t>>& nodes,
                        const std::set<int>& skip) {
    for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
        if (skip.count(i)) continue;
        if (nodes[i].size() != static_cast<std::size_t>(p.l))
            fail(Errc::dimension_mismatch, "node " + std::to_string(i) + " has wrong length");
    }
}

}  // namespace

SyndromeResult syndrome(const CodeDescriptor& desc, const Codeword& cw) {
    const CodeParams& p = desc.params();
    const Field& f = desc.field();
    if (cw.nodes.size() != static_cast<std::size_t>(p.n_int))
        fail(Errc::dimension_mismatch, "codeword must carry n_int nodes");
    check_node_lengths(p, cw.nodes, {});
    SyndromeResult out;
    out.residual.assign(p.rho, std::vector<uint32_t>(p.r * p.l_tilde, 0));
    out.is_codeword = true;
    for (int j = 0; j < p.rho; ++j) {
        auto& res = out.residual[j];
        for (int i = 0; i < p.n_int; ++i) {
            auto contrib = mat_vec(f, desc.parity_submatrix(i), cw.layer(p, j, i));
            for (std::size_t t = 0; t < res.size(); ++t) res[t] = f.add(res[t], contrib[t]);
        }
        for (uint32_t v : res)
            if (v) out.is_codeword = false;
    }
    return out;
}

Codeword encode_systematic(const CodeDescriptor& desc, std::span<const uint32_t> message) {
    const CodeParams& p = desc.params();
    const Field& f = desc.field();
    if (message.size() != static_cast<std::size_t>(p.k) * p.l)
        fail(Errc::dimension_mismatch, "message must hold k*l symbols");
    Codeword cw;
    cw.nodes.assign(p.n_int, std::vector<uint32_t>(p.l, 0));
    for (int i = 0; i < p.k; ++i)
        std::copy_n(message.begin() + static_cast<std::size_t>(i) * p.l, p.l,
                    cw.nodes[i].begin());

    const Matrix& parity_inv = desc.parity_block_inverse();
    const std::size_t lt = p.l_tilde;
    for (int j = 0; j < p.rho; ++j) {
        std::vector<uint32_t> rhs(p.r * lt, 0);
        for (int i = 0; i < p.k; ++i) {
            auto contrib = mat_vec(f, desc.parity_submatrix(i), cw.layer(p, j, i));
            for (std::size_t t = 0; t < rhs.size(); ++t) rhs[t] = f.add(rhs[t], contrib[t]);
        }
        for (auto& v : rhs) v = f.neg(v);
        auto parity = mat_vec(f, parity_inv, rhs);
        for (int i = 0; i < p.r; ++i)
            std::copy_n(parity.begin() + static_cast<std::size_t>(i) * lt, lt,
                        cw.nodes[p.k + i].begin() + static_cast<std::size_t>(j) * lt);
    }
    return cw;
}

Codeword decode_erasures(const CodeDescriptor& desc,
                         const std::vector<std::vector<uint32_t>>& nodes,
                         const std::set<int>& erased) {
    const CodeParams& p = desc.params();
    const Field& f = desc.field();
    if (nodes.size() < static_cast<std::size_t>(p.n))
        fail(Errc::dimension_mismatch, "need n node slots");
    for (int e : erased)
        if (e < 0 || e >= p.n) fail(Errc::bad_index, "erased index out of range");
    if (static_cast<int>(erased.size()) > p.n - p.k)
        fail(Errc::too_many_erasures, "more than n-k erasures");
    check_node_lengths(p, nodes, erased);

    // Unknown set: the user erasures, the punctured node if any, padded with
    // the lowest surviving nodes up to exactly r columns so the layer system
    // is square. Recomputed pad nodes coincide with their inputs because the
    // survivors are consistent.
    std::set<int> unknown(erased.begin(), erased.end());
    if (p.punctured()) unknown.insert(p.n_int - 1);
    for (int i = 0; i < p.n_int && static_cast<int>(unknown.size()) < p.r; ++i)
        unknown.insert(i);

    Codeword cw;
    cw.nodes.assign(p.n_int, std::vector<uint32_t>(p.l, 0));
    for (int i = 0; i < p.n; ++i)
        if (!unknown.count(i)) cw.nodes[i] = nodes[i];

    std::vector<int> cols(unknown.begin(), unknown.end());
    std::vector<Matrix> blocks;
    for (int i : cols) blocks.push_back(desc.parity_submatrix(i));
    Matrix sys_inv;
    try {
        sys_inv = mat_inverse(f, hconcat(blocks));
    } catch (const Error&) {
        fail(Errc::singular_system, "erasure system not invertible");
    }

    const std::size_t lt = p.l_tilde;
    for (int j = 0; j < p.rho; ++j) {
        std::vector<uint32_t> rhs(p.r * lt, 0);
        for (int i = 0; i < p.n_int; ++i) {
            if (unknown.count(i)) continue;
            auto contrib = mat_vec(f, desc.parity_submatrix(i), cw.layer(p, j, i));
            for (std::size_t t = 0; t < rhs.size(); ++t) rhs[t] = f.add(rhs[t], contrib[t]);
        }
        for (auto& v : rhs) v = f.neg(v);
        auto sol = mat_vec(f, sys_inv, rhs);
        for (std::size_t c = 0; c < cols.size(); ++c)
            std::copy_n(sol.begin() + c * lt, lt,
                        cw.nodes[cols[c]].begin() + static_cast<std::size_t>(j) * lt);
    }
    return cw;
}

}  // namespace cmsr
