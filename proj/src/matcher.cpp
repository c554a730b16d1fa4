#include "provsig/matcher.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_set>
#include <utility>

#include "provsig/error.hpp"

namespace provsig {

namespace {

// Depth below which trie nodes get complete 256-way rows.
constexpr std::uint32_t kDenseDepth = 2;

CompiledEngine::Anchor choose_anchor(const HexPattern& pattern) {
    CompiledEngine::Anchor best;
    Bytes run;
    std::size_t run_start = 0;
    std::size_t pos = 0;
    const auto close_run = [&] {
        if (run.size() > best.bytes.size()) {
            best = {run, run_start};
        }
        run.clear();
    };
    for (const PatternElement& e : pattern.elements()) {
        if (e.kind == PatternElement::Kind::literal) {
            if (run.empty()) {
                run_start = pos;
            }
            run.push_back(e.byte);
            ++pos;
        } else {
            close_run();
            pos += e.kind == PatternElement::Kind::gap ? e.gap : 1;
        }
    }
    close_run();
    return best;
}

struct BuildNode {
    std::map<std::uint8_t, std::int32_t> children;
    std::vector<std::uint32_t> outputs;
    std::uint32_t depth = 0;
};

} // namespace

CompiledEngine::CompiledEngine() : CompiledEngine(compile({})) {}

CompiledEngine CompiledEngine::compile(std::span<const Signature> signatures) {
    CompiledEngine engine{Unbuilt{}};
    std::unordered_set<std::string> names;
    std::vector<BuildNode> trie(1);

    for (const Signature& sig : signatures) {
        if (!sig.is_hex()) {
            throw std::invalid_argument("signature " + sig.name + " is not a hex pattern");
        }
        if (!names.insert(sig.name).second) {
            throw DuplicateSignatureName(sig.name);
        }
        const HexPattern& pattern = sig.pattern();
        if (const std::string err = pattern.structural_error(); !err.empty()) {
            throw std::invalid_argument("signature " + sig.name + ": " + err);
        }
        Compiled c;
        c.name = sig.name;
        c.anchor = choose_anchor(pattern);
        if (c.anchor.bytes.size() < 2) {
            throw Unanchorable(sig.name);
        }
        c.value.reserve(pattern.fixed_span());
        c.mask.reserve(pattern.fixed_span());
        for (const PatternElement& e : pattern.elements()) {
            const std::size_t width = e.kind == PatternElement::Kind::gap ? e.gap : 1;
            const bool literal = e.kind == PatternElement::Kind::literal;
            c.value.insert(c.value.end(), width, literal ? e.byte : 0);
            c.mask.insert(c.mask.end(), width, literal ? 0xff : 0);
        }

        std::int32_t node = 0;
        for (const std::uint8_t b : c.anchor.bytes) {
            const auto it = trie[node].children.find(b);
            if (it != trie[node].children.end()) {
                node = it->second;
                continue;
            }
            const auto child = static_cast<std::int32_t>(trie.size());
            const std::uint32_t depth = trie[node].depth + 1;
            trie[node].children.emplace(b, child);
            trie.push_back(BuildNode{{}, {}, depth});
            node = child;
        }
        trie[node].outputs.push_back(static_cast<std::uint32_t>(engine.patterns_.size()));
        engine.patterns_.push_back(std::move(c));
    }

    const std::size_t n = trie.size();
    engine.fail_.assign(n, 0);
    engine.out_link_.assign(n, -1);
    engine.dense_row_.assign(n, -1);
    engine.edge_begin_.reserve(n + 1);
    engine.output_begin_.reserve(n + 1);
    for (const BuildNode& node : trie) {
        engine.edge_begin_.push_back(static_cast<std::uint32_t>(engine.edge_bytes_.size()));
        for (const auto& [b, child] : node.children) {
            engine.edge_bytes_.push_back(b);
            engine.edge_targets_.push_back(child);
        }
        engine.output_begin_.push_back(static_cast<std::uint32_t>(engine.outputs_.size()));
        engine.outputs_.insert(engine.outputs_.end(), node.outputs.begin(), node.outputs.end());
    }
    engine.edge_begin_.push_back(static_cast<std::uint32_t>(engine.edge_bytes_.size()));
    engine.output_begin_.push_back(static_cast<std::uint32_t>(engine.outputs_.size()));

    // Breadth-first so every failure target is finished before its users.
    std::deque<std::int32_t> queue{0};
    while (!queue.empty()) {
        const std::int32_t u = queue.front();
        queue.pop_front();
        const BuildNode& node = trie[u];
        if (node.depth < kDenseDepth) {
            std::array<std::int32_t, 256> row{};
            for (int b = 0; b < 256; ++b) {
                row[b] = u == 0 ? 0 : engine.dense_[engine.dense_row_[engine.fail_[u]]][b];
            }
            for (const auto& [b, child] : node.children) {
                row[b] = child;
            }
            engine.dense_row_[u] = static_cast<std::int32_t>(engine.dense_.size());
            engine.dense_.push_back(row);
        }
        for (const auto& [b, child] : node.children) {
            engine.fail_[child] = u == 0 ? 0 : engine.step(engine.fail_[u], b);
            const std::int32_t f = engine.fail_[child];
            engine.out_link_[child] = trie[f].outputs.empty() ? engine.out_link_[f] : f;
            queue.push_back(child);
        }
    }
    return engine;
}

std::int32_t CompiledEngine::step(std::int32_t state, std::uint8_t byte) const {
    while (true) {
        if (const std::int32_t row = dense_row_[state]; row >= 0) {
            return dense_[row][byte];
        }
        const auto first = edge_bytes_.begin() + edge_begin_[state];
        const auto last = edge_bytes_.begin() + edge_begin_[state + 1];
        const auto it = std::lower_bound(first, last, byte);
        if (it != last && *it == byte) {
            return edge_targets_[it - edge_bytes_.begin()];
        }
        state = fail_[state];
    }
}

bool CompiledEngine::verify(const Compiled& p, ByteView buffer, std::size_t start) const {
    const std::uint8_t* at = buffer.data() + start;
    for (std::size_t i = 0; i < p.value.size(); ++i) {
        if ((at[i] & p.mask[i]) != p.value[i]) {
            return false;
        }
    }
    return true;
}

MatchSet CompiledEngine::scan_once(ByteView buffer) const {
    MatchSet out;
    if (patterns_.empty()) {
        return out;
    }
    std::int32_t state = 0;
    for (std::size_t i = 0; i < buffer.size(); ++i) {
        state = step(state, buffer[i]);
        std::int32_t node = output_begin_[state] != output_begin_[state + 1] ? state : out_link_[state];
        for (; node >= 0; node = out_link_[node]) {
            for (std::uint32_t k = output_begin_[node]; k < output_begin_[node + 1]; ++k) {
                const std::uint32_t id = outputs_[k];
                const Compiled& p = patterns_[id];
                const std::size_t anchor_start = i + 1 - p.anchor.bytes.size();
                if (anchor_start < p.anchor.offset) {
                    continue;
                }
                const std::size_t start = anchor_start - p.anchor.offset;
                if (p.value.size() > buffer.size() - start) {
                    continue;
                }
                if (verify(p, buffer, start)) {
                    out.push_back({id, start, p.value.size()});
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

MatchSet CompiledEngine::scan_all(ByteView buffer, std::size_t* passes) const {
    Bytes work(buffer.begin(), buffer.end());
    std::set<std::pair<std::size_t, std::size_t>> seen;
    MatchSet all;
    std::size_t runs = 0;
    while (true) {
        ++runs;
        MatchSet fresh;
        for (const Match& m : scan_once(work)) {
            if (seen.emplace(m.signature_id, m.start).second) {
                fresh.push_back(m);
            }
        }
        if (fresh.empty()) {
            break;
        }
        // Zero only after the whole pass so same-pass overlaps all survive.
        for (const Match& m : fresh) {
            std::fill_n(work.begin() + static_cast<std::ptrdiff_t>(m.start), m.span, 0);
        }
        all.insert(all.end(), fresh.begin(), fresh.end());
    }
    std::sort(all.begin(), all.end());
    if (passes != nullptr) {
        *passes = runs;
    }
    return all;
}

MatchSet match_comment(const CompiledEngine& engine, ByteView comment_bytes) {
    return engine.scan_all(comment_bytes);
}

} // namespace provsig
