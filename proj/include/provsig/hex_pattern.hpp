#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace provsig {

/// One position of a hex pattern: a literal byte, a `??` don't-care byte,
/// or a `{n}` run of exactly n skipped bytes.
struct PatternElement {
    enum class Kind : std::uint8_t { literal, any_byte, gap };

    Kind kind = Kind::literal;
    std::uint8_t byte = 0;
    std::uint32_t gap = 0;

    static PatternElement literal(std::uint8_t b) { return {Kind::literal, b, 0}; }
    static PatternElement any() { return {Kind::any_byte, 0, 0}; }
    static PatternElement skip(std::uint32_t n) { return {Kind::gap, 0, n}; }

    friend bool operator==(const PatternElement&, const PatternElement&) = default;
};

class HexPattern {
  public:
    HexPattern() = default;
    explicit HexPattern(std::vector<PatternElement> elements) : elements_(std::move(elements)) {}

    /// Accepts lowercase hex pairs, `??` and `{n}` (n >= 1), optionally
    /// separated by single spaces. Throws std::invalid_argument.
    static HexPattern parse(std::string_view text);

    /// Packed form, e.g. `5548??{12}c3`; `spaced` separates tokens with one space.
    [[nodiscard]] std::string to_string(bool spaced = false) const;

    [[nodiscard]] const std::vector<PatternElement>& elements() const { return elements_; }
    [[nodiscard]] bool empty() const { return elements_.empty(); }

    [[nodiscard]] std::size_t literal_count() const;
    [[nodiscard]] std::size_t any_byte_count() const;
    /// Literal and `??` positions; gaps excluded.
    [[nodiscard]] std::size_t non_gap_count() const;
    /// Bytes covered by a match, gaps included.
    [[nodiscard]] std::size_t fixed_span() const;
    [[nodiscard]] std::size_t longest_literal_run() const;

    /// Empty string when gap placement is legal (none first/last, none
    /// adjacent, none zero-length), otherwise a description of the problem.
    [[nodiscard]] std::string structural_error() const;

    friend bool operator==(const HexPattern&, const HexPattern&) = default;

  private:
    std::vector<PatternElement> elements_;
};

} // namespace provsig
