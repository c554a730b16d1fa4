#include "provsig/hex_pattern.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace provsig {

namespace {

int hex_digit(char c) {
    if (c >= '0' && c <= '9') {
        return c - '0';
    }
    if (c >= 'a' && c <= 'f') {
        return c - 'a' + 10;
    }
    return -1;
}

constexpr char kDigits[] = "0123456789abcdef";

} // namespace

HexPattern HexPattern::parse(std::string_view text) {
    std::vector<PatternElement> out;
    std::size_t i = 0;
    bool after_token = false;
    while (i < text.size()) {
        const char c = text[i];
        if (c == ' ') {
            if (!after_token || i + 1 >= text.size() || text[i + 1] == ' ') {
                throw std::invalid_argument("stray space at position " + std::to_string(i));
            }
            after_token = false;
            ++i;
            continue;
        }
        if (c == '{') {
            const auto close = text.find('}', i);
            if (close == std::string_view::npos) {
                throw std::invalid_argument("unterminated gap at position " + std::to_string(i));
            }
            const std::string_view digits = text.substr(i + 1, close - i - 1);
            std::uint32_t n = 0;
            const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
            if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size()) {
                throw std::invalid_argument("bad gap length '" + std::string(digits) + "'");
            }
            if (n == 0) {
                throw std::invalid_argument("zero-length gap {0}");
            }
            out.push_back(PatternElement::skip(n));
            i = close + 1;
        } else {
            if (i + 1 >= text.size()) {
                throw std::invalid_argument("odd number of hex digits");
            }
            const char d = text[i + 1];
            if (c == '?' && d == '?') {
                out.push_back(PatternElement::any());
            } else {
                const int hi = hex_digit(c);
                const int lo = hex_digit(d);
                if (hi < 0 || lo < 0) {
                    throw std::invalid_argument("bad hex pair '" + std::string(text.substr(i, 2)) + "'");
                }
                out.push_back(PatternElement::literal(static_cast<std::uint8_t>(hi << 4 | lo)));
            }
            i += 2;
        }
        after_token = true;
    }
    return HexPattern(std::move(out));
}

std::string HexPattern::to_string(bool spaced) const {
    std::string s;
    s.reserve(elements_.size() * 3);
    for (const PatternElement& e : elements_) {
        if (spaced && !s.empty()) {
            s.push_back(' ');
        }
        switch (e.kind) {
        case PatternElement::Kind::literal:
            s.push_back(kDigits[e.byte >> 4]);
            s.push_back(kDigits[e.byte & 0xf]);
            break;
        case PatternElement::Kind::any_byte:
            s += "??";
            break;
        case PatternElement::Kind::gap:
            s += "{" + std::to_string(e.gap) + "}";
            break;
        }
    }
    return s;
}

std::size_t HexPattern::literal_count() const {
    return std::count_if(elements_.begin(), elements_.end(),
                         [](const PatternElement& e) { return e.kind == PatternElement::Kind::literal; });
}

std::size_t HexPattern::any_byte_count() const {
    return std::count_if(elements_.begin(), elements_.end(),
                         [](const PatternElement& e) { return e.kind == PatternElement::Kind::any_byte; });
}

std::size_t HexPattern::non_gap_count() const { return literal_count() + any_byte_count(); }

std::size_t HexPattern::fixed_span() const {
    std::size_t span = 0;
    for (const PatternElement& e : elements_) {
        span += e.kind == PatternElement::Kind::gap ? e.gap : 1;
    }
    return span;
}

std::size_t HexPattern::longest_literal_run() const {
    std::size_t best = 0;
    std::size_t run = 0;
    for (const PatternElement& e : elements_) {
        run = e.kind == PatternElement::Kind::literal ? run + 1 : 0;
        best = std::max(best, run);
    }
    return best;
}

std::string HexPattern::structural_error() const {
    for (std::size_t i = 0; i < elements_.size(); ++i) {
        if (elements_[i].kind != PatternElement::Kind::gap) {
            continue;
        }
        if (elements_[i].gap == 0) {
            return "zero-length gap";
        }
        if (i == 0 || i + 1 == elements_.size()) {
            return "gap at pattern edge";
        }
        if (elements_[i - 1].kind == PatternElement::Kind::gap) {
            return "adjacent gaps";
        }
    }
    return {};
}

} // namespace provsig
