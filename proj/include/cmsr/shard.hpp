#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cmsr/construction.hpp"

namespace cmsr {

/// CRC-32 (IEEE 802.3, reflected, init and xorout 0xFFFFFFFF).
uint32_t crc32_ieee(std::span<const uint8_t> data);

/// Packs a byte stream into m-bit symbols, LSB-first within each byte, zero
/// padding the final symbol. The inverse truncates back to byte_len bytes.
std::vector<uint32_t> bytes_to_symbols(std::span<const uint8_t> data, unsigned m);
std::vector<uint8_t> symbols_to_bytes(std::span<const uint32_t> symbols, unsigned m,
                                      std::size_t byte_len);

/// On-disk shard: "CMSR" magic, version 0x01, little-endian header fields
/// (n, k, d, rho, m, node_index as u16; stripe_count u32; original byte
/// length u64), payload of stripe_count * l symbols in ceil(m/8) bytes each,
/// and a trailing CRC-32 of the payload.
struct ShardHeader {
    uint16_t n = 0, k = 0, d = 0, rho = 0, m = 0, node_index = 0;
    uint32_t stripe_count = 0;
    uint64_t original_byte_length = 0;
};

struct Shard {
    ShardHeader header;
    std::vector<uint32_t> symbols;  // stripe_count * l entries
};

std::vector<uint8_t> serialize_shard(const Shard& shard);
Shard parse_shard(std::span<const uint8_t> bytes);

void write_shard(const std::string& path, const Shard& shard);
Shard read_shard(const std::string& path);

/// Header consistency against a descriptor (everything except node_index).
void check_shard_matches(const Shard& shard, const CodeDescriptor& desc);

}  // namespace cmsr
