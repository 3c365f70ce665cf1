#pragma once

#include <map>

#include "cmsr/codec.hpp"

namespace cmsr {

// Selector building blocks of the repair scheme. All are 0/1 (or U-scaled)
// matrices at the granularity of one replication group of s+h-1 layers.

/// Row selector R_{a,g}: keeps the rows of an l_tilde-indexed object whose
/// base-s digit a equals g. Shape l_tilde/s x l_tilde.
Matrix row_selector(int s, int half, int a, int g);

/// Selection matrix S_{a,g,z}: s x (s+h-1) block matrix with R_{a,g+i mod s}
/// at block (i,i) and, for z < h-1, the same block repeated at column z+s.
Matrix selection_matrix(int s, int half, int h, int a, int g, int z);

/// Q_z: identity blocks on the diagonal tail, minus-identity at (i, z+s).
Matrix q_matrix(const Field& f, int s, int half, int h, int z);

/// Repair matrix for failed node i: S fold of the blown-up pairing matrix.
Matrix repair_matrix(const CodeDescriptor& desc, const std::vector<int>& failed, int i);

/// Parity-check and piece-extraction matrices of the small code induced by
/// failed node i. self_h[g] / cross_h are r*l_tilde x l_tilde; self_d[g] /
/// cross_d are l_tilde x (s+h-1)*l_tilde. cross maps are keyed by node index
/// in [n_int] \ {i}.
struct SmallCodeMatrices {
    std::vector<Matrix> self_h;
    std::vector<Matrix> self_d;
    std::map<int, Matrix> cross_h;
    std::map<int, Matrix> cross_d;
};

SmallCodeMatrices small_code_matrices(const CodeDescriptor& desc,
                                      const std::vector<int>& failed, int i);

/// What helper (or failed peer) j contributes toward failed node i: one
/// l_tilde slice per replication group, concatenated in group order.
std::vector<uint32_t> helper_compute(const CodeDescriptor& desc, const std::vector<int>& failed,
                                     int i, int j, std::span<const uint32_t> c_j);

struct Step1Result {
    std::vector<std::vector<uint32_t>> self_pieces;     // s entries
    std::map<int, std::vector<uint32_t>> peer_pieces;   // j in failed \ {i}
};

/// Solves the small-code system of node i from the d helper payloads.
Step1Result step1_solve(const CodeDescriptor& desc, const std::vector<int>& failed,
                        const std::vector<int>& helpers, int i,
                        const std::map<int, std::vector<uint32_t>>& payloads);

/// Reassembles C_i from its own s pieces and the pieces received from the
/// other failed nodes.
std::vector<uint32_t> step2_combine(const CodeDescriptor& desc, const std::vector<int>& failed,
                                    int i, const std::vector<std::vector<uint32_t>>& self_pieces,
                                    const std::map<int, std::vector<uint32_t>>& peer_pieces);

struct BandwidthLedger {
    std::map<std::pair<int, int>, uint64_t> edges;  // (source, target) -> symbols
    uint64_t step1 = 0;
    uint64_t step2 = 0;
    uint64_t total() const { return step1 + step2; }
};

/// Exact cut-set bound h(d+h-1)l/(d-k+h) in symbols; always an integer.
uint64_t cut_set_bound(const CodeParams& p, int h);

struct TranscriptEntry {
    int step;  // 1 or 2
    int source, target;
    uint64_t symbols;
    uint64_t payload_hash;  // FNV-1a over the symbol sequence
};
using Transcript = std::vector<TranscriptEntry>;

struct RepairResult {
    std::map<int, std::vector<uint32_t>> repaired;
    BandwidthLedger ledger;
};

/// Precomputed matrices for one (failed, helpers) configuration. Building the
/// plan factors every linear system once; apply() is then cheap per codeword
/// and deterministic regardless of scheduling.
class RepairPlan {
public:
    RepairPlan(const CodeDescriptor& desc, std::vector<int> failed, std::vector<int> helpers);

    const std::vector<int>& failed() const { return failed_; }
    const std::vector<int>& helpers() const { return helpers_; }
    int group_size() const { return group_size_; }
    int num_groups() const { return num_groups_; }
    const SmallCodeMatrices& small_code(int i) const;

    RepairResult apply(const std::map<int, std::vector<uint32_t>>& survivors,
                       Transcript* transcript = nullptr) const;

private:
    friend Step1Result step1_solve(const CodeDescriptor&, const std::vector<int>&,
                                   const std::vector<int>&, int,
                                   const std::map<int, std::vector<uint32_t>>&);

    struct NodePlan {
        int node = 0;
        SmallCodeMatrices sc;
        std::vector<int> unknown_positions;     // ascending small-code positions
        std::map<int, int> unknown_slot;        // position -> slot in the solve vector
        Matrix step1_inv;                       // r*l_tilde square
        Matrix step2_inv;                       // (s+h-1)*l_tilde square
    };

    Step1Result solve_node(const NodePlan& np,
                           const std::map<int, std::vector<uint32_t>>& payloads) const;

    const CodeDescriptor* desc_;
    std::vector<int> failed_, helpers_;
    int group_size_ = 0, num_groups_ = 0;
    std::vector<NodePlan> nodes_;
};

RepairResult cooperative_repair(const CodeDescriptor& desc,
                                const std::map<int, std::vector<uint32_t>>& survivors,
                                const std::vector<int>& failed, const std::vector<int>& helpers,
                                Transcript* transcript = nullptr);

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string details;
};

struct IdentityReport {
    std::vector<CheckResult> checks;
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

/// Mechanical verification of the algebra behind the repair scheme for one
/// failure set: closed forms of the small-code matrices, the decomposition of
/// the folded parity equations, selector completeness, invertibility of the
/// step-2 stack, and sampled MDS subsets of the small code.
IdentityReport verify_repair_identities(const CodeDescriptor& desc, const std::vector<int>& failed,
                                        uint64_t seed = 0);

}  // namespace cmsr
