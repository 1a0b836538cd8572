#pragma once

#include <cctype>
#include <compare>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcl/scalar.hpp"

namespace qcl {

// Weakly decreasing integer vector; the empty signature is the root vertex
// at level 0. Entries may be negative.
class Signature {
public:
    Signature() = default;

    explicit Signature(std::vector<long long> entries) : entries_(std::move(entries)) {
        for (size_t i = 1; i < entries_.size(); ++i)
            if (entries_[i - 1] < entries_[i])
                throw std::invalid_argument("signature entries must be weakly decreasing");
    }

    static Signature root() { return Signature(); }

    static Signature constant(int level, long long value) {
        return Signature(std::vector<long long>(static_cast<size_t>(level), value));
    }

    int level() const { return static_cast<int>(entries_.size()); }
    bool is_root() const { return entries_.empty(); }
    long long operator[](size_t i) const { return entries_[i]; }
    const std::vector<long long>& entries() const { return entries_; }

    // |nu| = sum of entries (possibly negative).
    long long box_sum() const {
        long long s = 0;
        for (long long e : entries_) s += e;
        return s;
    }

    // Level first, then entries lexicographically; this is the canonical
    // order used for measure atoms and block indexing.
    friend auto operator<=>(const Signature& a, const Signature& b) {
        if (auto c = a.entries_.size() <=> b.entries_.size(); c != 0) return c;
        return a.entries_ <=> b.entries_;
    }
    friend bool operator==(const Signature&, const Signature&) = default;

    std::string str() const {
        std::string s = "[";
        for (size_t i = 0; i < entries_.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(entries_[i]);
        }
        return s + "]";
    }

private:
    std::vector<long long> entries_;
};

// Parses "[2,0,-1]" (whitespace tolerated); "[]" is the root.
inline Signature parse_signature(const std::string& text) {
    size_t pos = 0;
    auto skip_ws = [&] { while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos; };
    skip_ws();
    if (pos == text.size() || text[pos] != '[')
        throw std::invalid_argument("malformed signature literal: " + text);
    ++pos;
    std::vector<long long> entries;
    skip_ws();
    if (pos < text.size() && text[pos] == ']') {
        ++pos;
    } else {
        while (true) {
            skip_ws();
            size_t consumed = 0;
            long long v = 0;
            try {
                v = std::stoll(text.substr(pos), &consumed);
            } catch (const std::exception&) {
                throw std::invalid_argument("malformed signature literal: " + text);
            }
            pos += consumed;
            entries.push_back(v);
            skip_ws();
            if (pos < text.size() && text[pos] == ',') {
                ++pos;
                continue;
            }
            if (pos < text.size() && text[pos] == ']') {
                ++pos;
                break;
            }
            throw std::invalid_argument("malformed signature literal: " + text);
        }
    }
    skip_ws();
    if (pos != text.size())
        throw std::invalid_argument("malformed signature literal: " + text);
    return Signature(std::move(entries));
}

// Interlacing chain of signatures at consecutive levels K, K+1, ..., N.
class GTPath {
public:
    GTPath() = default;

    explicit GTPath(std::vector<Signature> chain) : chain_(std::move(chain)) {
        if (chain_.empty()) throw std::invalid_argument("empty path");
        for (size_t i = 1; i < chain_.size(); ++i)
            if (chain_[i].level() != chain_[i - 1].level() + 1)
                throw std::invalid_argument("path levels must be consecutive");
    }

    const std::vector<Signature>& chain() const { return chain_; }
    const Signature& bottom() const { return chain_.front(); }
    const Signature& top() const { return chain_.back(); }
    int bottom_level() const { return chain_.front().level(); }
    int top_level() const { return chain_.back().level(); }
    size_t edge_count() const { return chain_.size() - 1; }

    // Vertex of the chain at an absolute level.
    const Signature& at_level(int level) const {
        if (level < bottom_level() || level > top_level())
            throw std::invalid_argument("level outside path range");
        return chain_[static_cast<size_t>(level - bottom_level())];
    }

    GTPath prefix_to(int level) const {
        std::vector<Signature> c(chain_.begin(),
                                 chain_.begin() + (level - bottom_level()) + 1);
        return GTPath(std::move(c));
    }

    // The sub-chain from `level` up to the top; two paths into the same
    // vertex agree above `level` iff their suffixes compare equal.
    std::vector<Signature> suffix_from(int level) const {
        if (level < bottom_level() || level > top_level())
            throw std::invalid_argument("level outside path range");
        return std::vector<Signature>(chain_.begin() + (level - bottom_level()),
                                      chain_.end());
    }

    friend auto operator<=>(const GTPath& a, const GTPath& b) { return a.chain_ <=> b.chain_; }
    friend bool operator==(const GTPath&, const GTPath&) = default;

private:
    std::vector<Signature> chain_;
};

}  // namespace qcl
