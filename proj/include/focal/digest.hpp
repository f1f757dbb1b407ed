#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace focal {

/// SHA-256, incremental. Self-contained so digests are identical on every
/// platform and toolchain.
class Sha256 {
public:
    Sha256();
    void update(std::span<const uint8_t> data);
    void update(std::string_view text);
    /// Finalizes and returns the 64-char lowercase hex digest. The hasher is
    /// spent afterwards.
    std::string hex_digest();

private:
    void process_block(const uint8_t* block);

    uint32_t state_[8];
    uint64_t total_len_ = 0;
    uint8_t buffer_[64];
    size_t buffer_len_ = 0;
};

std::string sha256_hex(std::span<const uint8_t> data);
std::string sha256_hex(std::string_view text);

} // namespace focal
