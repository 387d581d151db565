#include "irav/bitio.hpp"

#include <bit>
#include <string>

#include "irav/error.hpp"

namespace irav {

namespace {

std::uint64_t se_to_ue(std::int64_t v) {
    return v > 0 ? static_cast<std::uint64_t>(2 * v - 1) : static_cast<std::uint64_t>(-2 * v);
}

}  // namespace

void BitWriter::put_bit(bool b) {
    if (bits_ % 8 == 0)
        bytes_.push_back(0);
    if (b)
        bytes_.back() |= static_cast<std::uint8_t>(0x80u >> (bits_ % 8));
    ++bits_;
}

void BitWriter::put_bits(std::uint64_t value, int count) {
    for (int i = count - 1; i >= 0; --i)
        put_bit(((value >> i) & 1u) != 0);
}

void BitWriter::put_eg(std::uint64_t value, int k) {
    const std::uint64_t v = value + (std::uint64_t{1} << k);
    const int len = std::bit_width(v);
    put_bits(0, len - 1 - k);
    put_bits(v, len);
}

void BitWriter::put_se(std::int64_t value) { put_ue(se_to_ue(value)); }

void BitWriter::append(const BitWriter& other) {
    if (bits_ % 8 == 0) {
        bytes_.insert(bytes_.end(), other.bytes_.begin(), other.bytes_.end());
        bits_ += other.bits_;
        return;
    }
    for (std::uint64_t i = 0; i < other.bits_; ++i)
        put_bit(((other.bytes_[i / 8] >> (7 - i % 8)) & 1u) != 0);
}

int eg_bits(std::uint64_t value, int k) {
    const std::uint64_t v = value + (std::uint64_t{1} << k);
    return 2 * std::bit_width(v) - 1 - k;
}

int se_bits(std::int64_t value) { return eg_bits(se_to_ue(value), 0); }

BitReader::BitReader(std::span<const std::uint8_t> bytes, std::uint64_t bit_limit)
    : bytes_(bytes), limit_(bit_limit) {
    if (bit_limit > bytes.size() * 8ULL)
        throw DataError("bit limit " + std::to_string(bit_limit) + " exceeds buffer of " +
                        std::to_string(bytes.size()) + " bytes");
}

bool BitReader::get_bit() {
    if (pos_ >= limit_)
        throw DataError("bitstream exhausted at bit offset " + std::to_string(pos_));
    const bool b = ((bytes_[pos_ / 8] >> (7 - pos_ % 8)) & 1u) != 0;
    ++pos_;
    return b;
}

std::uint64_t BitReader::get_bits(int count) {
    std::uint64_t v = 0;
    for (int i = 0; i < count; ++i)
        v = (v << 1) | (get_bit() ? 1u : 0u);
    return v;
}

std::uint64_t BitReader::get_eg(int k) {
    const std::uint64_t start = pos_;
    int zeros = 0;
    while (!get_bit()) {
        if (++zeros > 40)
            throw DataError("malformed Exp-Golomb code at bit offset " + std::to_string(start));
    }
    const std::uint64_t rest = get_bits(zeros + k);
    return ((std::uint64_t{1} << (zeros + k)) | rest) - (std::uint64_t{1} << k);
}

std::int64_t BitReader::get_se() {
    const std::uint64_t u = get_ue();
    return (u & 1u) ? static_cast<std::int64_t>((u + 1) / 2) : -static_cast<std::int64_t>(u / 2);
}

}  // namespace irav
