#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "provsig/elf.hpp"
#include "provsig/hex_pattern.hpp"
#include "provsig/signature.hpp"

namespace provsig {

struct Match {
    std::size_t signature_id = 0;
    std::size_t start = 0;
    std::size_t span = 0;

    auto operator<=>(const Match& o) const {
        if (auto c = start <=> o.start; c != 0) {
            return c;
        }
        if (auto c = signature_id <=> o.signature_id; c != 0) {
            return c;
        }
        return span <=> o.span;
    }
    bool operator==(const Match&) const = default;
};

/// Sorted by (start, signature_id), no duplicate (signature_id, start).
using MatchSet = std::vector<Match>;

/// Aho-Corasick automaton over one anchor per pattern, plus the data needed
/// to verify the full fixed-span pattern around each anchor hit.
///
/// The root and its children are dense 256-way rows with failure transitions
/// folded in; deeper nodes keep sorted sparse edge lists and fall back along
/// failure links. Immutable once compiled, so one engine can serve concurrent
/// scans.
class CompiledEngine {
  public:
    struct Anchor {
        Bytes bytes;
        std::size_t offset = 0; // position of bytes[0] within the pattern span
    };

    /// Engine with no signatures; matches nothing.
    CompiledEngine();

    /// Signature ids are indices into `signatures`. Throws Unanchorable,
    /// DuplicateSignatureName, or std::invalid_argument for non-hex or
    /// structurally invalid patterns.
    static CompiledEngine compile(std::span<const Signature> signatures);

    /// Every verified occurrence of every pattern, overlaps included.
    [[nodiscard]] MatchSet scan_once(ByteView buffer) const;

    /// Repeats scan_once on a private copy, zeroing each newly found match,
    /// until a pass yields no new (signature_id, start). `passes`, when given,
    /// receives the number of scan_once runs.
    [[nodiscard]] MatchSet scan_all(ByteView buffer, std::size_t* passes = nullptr) const;

    [[nodiscard]] std::size_t size() const { return patterns_.size(); }
    [[nodiscard]] const std::string& name(std::size_t id) const { return patterns_[id].name; }
    [[nodiscard]] const Anchor& anchor(std::size_t id) const { return patterns_[id].anchor; }
    [[nodiscard]] std::size_t span(std::size_t id) const { return patterns_[id].value.size(); }
    [[nodiscard]] std::size_t node_count() const { return fail_.size(); }

  private:
    struct Unbuilt {};
    explicit CompiledEngine(Unbuilt) {}

    struct Compiled {
        std::string name;
        Bytes value;
        Bytes mask; // 0xff where the buffer byte must equal value, 0 otherwise
        Anchor anchor;
    };

    [[nodiscard]] std::int32_t step(std::int32_t state, std::uint8_t byte) const;
    [[nodiscard]] bool verify(const Compiled& p, ByteView buffer, std::size_t start) const;

    std::vector<Compiled> patterns_;

    // Flattened trie, indexed by node id. Node 0 is the root.
    std::vector<std::int32_t> fail_;
    std::vector<std::int32_t> out_link_;     // next node on the failure chain with outputs, or -1
    std::vector<std::int32_t> dense_row_;    // row in dense_ or -1
    std::vector<std::uint32_t> edge_begin_;  // CSR into edge_bytes_/edge_targets_, size nodes+1
    std::vector<std::uint8_t> edge_bytes_;
    std::vector<std::int32_t> edge_targets_;
    std::vector<std::uint32_t> output_begin_; // CSR into outputs_, size nodes+1
    std::vector<std::uint32_t> outputs_;      // pattern ids whose anchor ends at the node
    std::vector<std::array<std::int32_t, 256>> dense_;
};

/// scan_all over raw `.comment` bytes with an engine of comment signatures.
MatchSet match_comment(const CompiledEngine& engine, ByteView comment_bytes);

} // namespace provsig
