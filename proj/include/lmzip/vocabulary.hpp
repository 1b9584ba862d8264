/*
Copyright 2026 The lmzip Authors
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
you may obtain a copy of the License at

                http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#ifndef LMZIP_VOCABULARY_HPP
#define LMZIP_VOCABULARY_HPP

#include "lmzip/checksum.hpp"
#include "lmzip/tokens.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lmz {

/// Token id <-> byte-string table.
///
/// Every entry is non-empty, unique and at most max_token_bytes() long, and
/// all 256 single-byte strings are present so that any input can be
/// tokenized. Ids are 0-based.
///
/// Text form: a header line "D B" (entry count, maximum entry length)
/// followed by one entry per line in id order. Bytes 0x21..0x7e other than
/// '\' are written literally, everything else as \xNN.
class Vocabulary {
public:
    /// The 256 single bytes, id == byte value.
    static Vocabulary bytes();

    /// Validates the invariants; max_token_bytes defaults to the longest entry.
    static Vocabulary from_entries(std::vector<std::string> entries,
                                   std::optional<std::size_t> max_token_bytes = std::nullopt);

    static Vocabulary parse(std::string_view text);
    static Vocabulary load(const std::filesystem::path& path);

    std::string serialize() const;
    void save(const std::filesystem::path& path) const;

    std::size_t size() const noexcept { return entries_.size(); }
    std::size_t max_token_bytes() const noexcept { return max_token_bytes_; }
    std::string_view entry(TokenId id) const { return entries_.at(id); }
    std::optional<TokenId> find(std::string_view bytes) const;

    /// True when the table is exactly the byte alphabet with id == byte.
    bool is_byte_identity() const noexcept { return byte_identity_; }

    /// SHA-256 of serialize(); identifies the table inside containers.
    const Digest& digest() const noexcept { return digest_; }

    /// Length (in bytes) of the longest entry that prefixes `text`; 0 if text is empty.
    /// The id of that entry is written to `id`.
    std::size_t longest_match(std::string_view text, TokenId& id) const;

private:
    Vocabulary() = default;
    void build_index();

    static constexpr std::uint32_t kNoToken = 0xffffffffu;

    struct Node {
        std::uint32_t token = kNoToken;
    };

    std::vector<std::string> entries_;
    std::size_t max_token_bytes_ = 0;
    bool byte_identity_ = false;
    Digest digest_{};

    // Byte trie over the entries. Children of node n under byte b are looked
    // up with key (n << 8) | b.
    std::vector<Node> nodes_;
    std::unordered_map<std::uint64_t, std::uint32_t> children_;
    std::unordered_map<std::string, TokenId> by_bytes_;
};

} // namespace lmz

#endif
