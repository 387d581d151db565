#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "irav/error.hpp"
#include "irav/frame.hpp"

namespace irav {

/// Encoder-side tools for inactive regions plus the SAO switch.
struct ToolFlags {
    bool masked_rdo = false;
    bool zero_inactive_residual = false;
    bool masked_sao = false;
    bool sao_enabled = true;

    /// bit0 masked_rdo, bit1 zero_inactive_residual, bit2 masked_sao, bit3 sao_enabled.
    std::uint8_t to_byte() const;
    static ToolFlags from_byte(std::uint8_t b);

    static ToolFlags none() { return {}; }
    static ToolFlags all() { return {true, true, true, true}; }

    bool operator==(const ToolFlags&) const = default;
};

struct EncoderConfig {
    int qp = 32;
    int ctu_size = 32;
    int min_cu = 8;
    int intra_period = 16;
    int search_range = 8;
    bool half_pel = true;
    ToolFlags tools;

    /// Throws UsageError when a field is out of range.
    void validate() const;
};

inline constexpr std::uint8_t kBitstreamVersion = 1;
inline constexpr std::size_t kHeaderBytes = 18;

struct BitstreamHeader {
    std::uint8_t version = kBitstreamVersion;
    std::uint16_t width = 0;
    std::uint16_t height = 0;
    std::uint32_t frame_count = 0;
    std::uint8_t qp = 0;
    std::uint16_t intra_period = 1;
    std::uint8_t ctu_size = 32;
    std::uint8_t tool_flags = 0;  // informational; never consulted by the decoder

    bool operator==(const BitstreamHeader&) const = default;
};

struct FramePayload {
    std::uint32_t bit_length = 0;
    std::vector<std::uint8_t> bytes;

    bool operator==(const FramePayload&) const = default;
};

struct Bitstream {
    BitstreamHeader header;
    std::vector<FramePayload> frames;

    std::vector<std::uint8_t> serialize() const;
    /// Throws BitstreamError.
    static Bitstream parse(std::span<const std::uint8_t> bytes);

    std::uint64_t total_bits() const { return serialize().size() * 8ULL; }

    bool operator==(const Bitstream&) const = default;
};

class BitstreamError : public DataError {
public:
    enum class Kind { BadMagic, VersionMismatch, Truncated, Malformed };
    BitstreamError(Kind kind, const std::string& what) : DataError(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

struct FrameStats {
    char type = 'I';
    std::uint64_t bits = 0;
    int intra_cus = 0;
    int inter_cus = 0;
    int sao_on = 0;  // plane-CTUs with a non-OFF SAO decision
};

struct EncodeResult {
    Bitstream bitstream;
    std::vector<Frame420> reconstruction;
    std::vector<FrameStats> frames;
    std::uint64_t total_bits = 0;  // whole serialized stream, header included
};

/// Encodes `frames` (IPPP, I every cfg.intra_period). `mask` matches the luma
/// size and is only used by the encoder-side tools.
EncodeResult encode_sequence(const std::vector<Frame420>& frames, const ActivityMask& mask, const EncoderConfig& cfg);

/// Mask-free decode; reproduces the encoder's reconstruction exactly.
std::vector<Frame420> decode_sequence(const Bitstream& bs);
std::vector<Frame420> decode_sequence(std::span<const std::uint8_t> bytes);

}  // namespace irav
