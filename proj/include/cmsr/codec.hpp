#pragma once

#include <set>

#include "cmsr/construction.hpp"

namespace cmsr {

/// A codeword of the replicated code: n_int node vectors of length l. For
/// punctured (odd-n) codes, node n_int - 1 exists only inside this structure;
/// persistence and repair never touch it. The layered view is layer(j, i) =
/// symbols [j*l_tilde, (j+1)*l_tilde) of node i.
struct Codeword {
    std::vector<std::vector<uint32_t>> nodes;

    std::span<const uint32_t> layer(const CodeParams& p, int j, int i) const {
        return std::span<const uint32_t>(nodes[i]).subspan(
            static_cast<std::size_t>(j) * p.l_tilde, p.l_tilde);
    }
};

struct SyndromeResult {
    std::vector<std::vector<uint32_t>> residual;  // rho entries of r*l_tilde values
    bool is_codeword = false;
};

SyndromeResult syndrome(const CodeDescriptor& desc, const Codeword& cw);

/// Systematic encoding: nodes [k] carry the message verbatim, parity nodes
/// solve the layer equations through the cached parity-block inverse.
Codeword encode_systematic(const CodeDescriptor& desc, std::span<const uint32_t> message);

/// MDS erasure decoding. `nodes` holds the surviving node vectors (entries
/// for erased indices are ignored); erased lists the missing public nodes.
Codeword decode_erasures(const CodeDescriptor& desc,
                         const std::vector<std::vector<uint32_t>>& nodes,
                         const std::set<int>& erased);

}  // namespace cmsr
