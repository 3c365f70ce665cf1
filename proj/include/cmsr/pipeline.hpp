#pragma once

#include "cmsr/repair.hpp"
#include "cmsr/shard.hpp"

namespace cmsr {

/// Stripes a byte stream over the code: pads to whole stripes of k*l message
/// symbols and returns one shard per public node. Stripes are processed in
/// parallel; the output is identical to the sequential order.
std::vector<Shard> encode_file(const CodeDescriptor& desc, std::span<const uint8_t> data);

/// Rebuilds the original bytes from any >= k distinct shards.
std::vector<uint8_t> decode_file(const CodeDescriptor& desc, const std::vector<Shard>& available);

struct ShardRepairResult {
    std::vector<Shard> regenerated;       // one per failed node, ascending
    BandwidthLedger per_stripe;           // symbol counts for a single stripe
    uint64_t stripe_count = 0;
    std::vector<int> helpers;             // the helper set actually used
};

/// Regenerates the failed nodes' shards from helper shards via the
/// cooperative repair engine. An empty helper list selects the d
/// lowest-indexed surviving nodes.
ShardRepairResult repair_shards(const CodeDescriptor& desc, const std::vector<Shard>& available,
                                const std::vector<int>& failed, std::vector<int> helpers = {});

}  // namespace cmsr
