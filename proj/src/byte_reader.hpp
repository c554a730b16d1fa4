#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>

namespace provsig::detail {

/// Bounds-checked little-endian reads. `Err` is the exception type thrown on
/// out-of-range access.
template <typename Err>
class LeReader {
  public:
    LeReader(std::span<const std::uint8_t> data, std::string context) : data_(data), context_(std::move(context)) {}

    [[nodiscard]] std::size_t size() const { return data_.size(); }

    void require(std::uint64_t offset, std::uint64_t len) const {
        if (offset > data_.size() || len > data_.size() - offset) {
            throw Err(context_ + ": read of " + std::to_string(len) + " bytes at offset " + std::to_string(offset) +
                      " past end (" + std::to_string(data_.size()) + " bytes)");
        }
    }

    [[nodiscard]] std::uint8_t u8(std::uint64_t off) const {
        require(off, 1);
        return data_[off];
    }
    [[nodiscard]] std::uint16_t u16(std::uint64_t off) const { return static_cast<std::uint16_t>(read(off, 2)); }
    [[nodiscard]] std::uint32_t u32(std::uint64_t off) const { return static_cast<std::uint32_t>(read(off, 4)); }
    [[nodiscard]] std::uint64_t u64(std::uint64_t off) const { return read(off, 8); }

    /// Word of the file's natural size: 4 bytes for ELF32, 8 for ELF64.
    [[nodiscard]] std::uint64_t word(std::uint64_t off, bool wide) const { return wide ? u64(off) : u32(off); }

    [[nodiscard]] std::span<const std::uint8_t> slice(std::uint64_t off, std::uint64_t len) const {
        require(off, len);
        return data_.subspan(off, len);
    }

  private:
    [[nodiscard]] std::uint64_t read(std::uint64_t off, unsigned n) const {
        require(off, n);
        std::uint64_t v = 0;
        for (unsigned i = 0; i < n; ++i) {
            v |= static_cast<std::uint64_t>(data_[off + i]) << (8 * i);
        }
        return v;
    }

    std::span<const std::uint8_t> data_;
    std::string context_;
};

/// NUL-terminated string at `offset` inside a string table.
template <typename Err>
std::string string_at(std::span<const std::uint8_t> table, std::uint64_t offset, const std::string& context) {
    if (offset >= table.size()) {
        throw Err(context + ": string index " + std::to_string(offset) + " out of range");
    }
    std::size_t end = offset;
    while (end < table.size() && table[end] != 0) {
        ++end;
    }
    return {reinterpret_cast<const char*>(table.data() + offset), end - offset};
}

} // namespace provsig::detail
