#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace irav {

/// MSB-first bit packer.
class BitWriter {
public:
    void put_bit(bool b);
    void put_bits(std::uint64_t value, int count);
    /// Exp-Golomb of order k for an unsigned value.
    void put_eg(std::uint64_t value, int k);
    void put_ue(std::uint64_t value) { put_eg(value, 0); }
    /// Signed Exp-Golomb (order 0): 0, 1, -1, 2, -2, ...
    void put_se(std::int64_t value);
    void append(const BitWriter& other);

    std::uint64_t bit_count() const { return bits_; }
    const std::vector<std::uint8_t>& bytes() const { return bytes_; }

private:
    std::vector<std::uint8_t> bytes_;
    std::uint64_t bits_ = 0;
};

/// Reads MSB-first bits; throws DataError (naming the bit offset) past the end.
class BitReader {
public:
    BitReader(std::span<const std::uint8_t> bytes, std::uint64_t bit_limit);
    explicit BitReader(std::span<const std::uint8_t> bytes) : BitReader(bytes, bytes.size() * 8ULL) {}

    bool get_bit();
    std::uint64_t get_bits(int count);
    std::uint64_t get_eg(int k);
    std::uint64_t get_ue() { return get_eg(0); }
    std::int64_t get_se();

    std::uint64_t position() const { return pos_; }
    std::uint64_t remaining() const { return limit_ - pos_; }

private:
    std::span<const std::uint8_t> bytes_;
    std::uint64_t limit_;
    std::uint64_t pos_ = 0;
};

int eg_bits(std::uint64_t value, int k);
int se_bits(std::int64_t value);

}  // namespace irav
