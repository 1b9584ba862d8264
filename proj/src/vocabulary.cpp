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

#include "lmzip/vocabulary.hpp"

#include "lmzip/error.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace lmz {

namespace {

bool is_literal(unsigned char b)
{
    return b >= 0x21 && b <= 0x7e && b != '\\';
}

int hex_value(char c)
{
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

std::string escape_entry(std::string_view entry)
{
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (const char c : entry) {
        const auto b = static_cast<unsigned char>(c);
        if (is_literal(b)) {
            out.push_back(c);
        } else {
            out += "\\x";
            out.push_back(kHex[b >> 4]);
            out.push_back(kHex[b & 15]);
        }
    }
    return out;
}

std::string unescape_entry(std::string_view line, std::size_t line_no)
{
    std::string out;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] != '\\') {
            out.push_back(line[i]);
            continue;
        }
        if (i + 3 >= line.size())
            fail(Errc::invalid_argument, "vocabulary line " + std::to_string(line_no) + ": truncated escape");
        if (line[i + 1] != 'x')
            fail(Errc::invalid_argument, "vocabulary line " + std::to_string(line_no) + ": unknown escape");
        const int hi = hex_value(line[i + 2]);
        const int lo = hex_value(line[i + 3]);
        if (hi < 0 || lo < 0)
            fail(Errc::invalid_argument, "vocabulary line " + std::to_string(line_no) + ": bad hex escape");
        out.push_back(static_cast<char>(hi * 16 + lo));
        i += 3;
    }
    return out;
}

std::uint64_t parse_count(std::string_view field, const char* what)
{
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        fail(Errc::invalid_argument, std::string("vocabulary header: bad ") + what);
    return v;
}

} // namespace

Vocabulary Vocabulary::bytes()
{
    std::vector<std::string> entries;
    entries.reserve(256);
    for (int b = 0; b < 256; ++b)
        entries.emplace_back(1, static_cast<char>(b));
    return from_entries(std::move(entries), 1);
}

Vocabulary Vocabulary::from_entries(std::vector<std::string> entries, std::optional<std::size_t> max_token_bytes)
{
    Vocabulary v;
    v.entries_ = std::move(entries);

    std::size_t longest = 0;
    for (const auto& e : v.entries_) {
        if (e.empty())
            fail(Errc::invalid_argument, "vocabulary entries must be non-empty");
        longest = std::max(longest, e.size());
    }
    v.max_token_bytes_ = max_token_bytes.value_or(longest);
    if (longest > v.max_token_bytes_)
        fail(Errc::invalid_argument, "vocabulary entry longer than the declared maximum of "
                                         + std::to_string(v.max_token_bytes_) + " bytes");
    if (v.entries_.size() >= 0xffffffffull)
        fail(Errc::vocabulary_too_large, "vocabulary has too many entries");

    v.build_index();

    for (int b = 0; b < 256; ++b) {
        if (!v.find(std::string(1, static_cast<char>(b))))
            fail(Errc::invalid_argument, "vocabulary lacks the single byte " + escape_entry(std::string(1, static_cast<char>(b))));
    }

    v.byte_identity_ = v.entries_.size() == 256;
    for (std::size_t i = 0; v.byte_identity_ && i < 256; ++i)
        v.byte_identity_ = v.entries_[i].size() == 1 && static_cast<unsigned char>(v.entries_[i][0]) == i;

    v.digest_ = sha256(v.serialize());
    return v;
}

void Vocabulary::build_index()
{
    nodes_.assign(1, Node{});
    children_.clear();
    by_bytes_.clear();
    by_bytes_.reserve(entries_.size());

    for (std::size_t id = 0; id < entries_.size(); ++id) {
        const auto& e = entries_[id];
        if (!by_bytes_.emplace(e, static_cast<TokenId>(id)).second)
            fail(Errc::invalid_argument, "duplicate vocabulary entry \"" + escape_entry(e) + "\"");

        std::uint32_t node = 0;
        for (const char c : e) {
            const std::uint64_t key = (std::uint64_t{node} << 8) | static_cast<unsigned char>(c);
            auto it = children_.find(key);
            if (it == children_.end()) {
                it = children_.emplace(key, static_cast<std::uint32_t>(nodes_.size())).first;
                nodes_.push_back(Node{});
            }
            node = it->second;
        }
        nodes_[node].token = static_cast<std::uint32_t>(id);
    }
}

std::optional<TokenId> Vocabulary::find(std::string_view bytes) const
{
    const auto it = by_bytes_.find(std::string(bytes));
    if (it == by_bytes_.end())
        return std::nullopt;
    return it->second;
}

std::size_t Vocabulary::longest_match(std::string_view text, TokenId& id) const
{
    if (text.empty())
        return 0;
    if (byte_identity_) {
        id = static_cast<unsigned char>(text[0]);
        return 1;
    }
    std::uint32_t node = 0;
    std::size_t best = 0;
    const std::size_t limit = std::min(text.size(), max_token_bytes_);
    for (std::size_t i = 0; i < limit; ++i) {
        const std::uint64_t key = (std::uint64_t{node} << 8) | static_cast<unsigned char>(text[i]);
        const auto it = children_.find(key);
        if (it == children_.end())
            break;
        node = it->second;
        if (nodes_[node].token != kNoToken) {
            best = i + 1;
            id = nodes_[node].token;
        }
    }
    return best;
}

std::string Vocabulary::serialize() const
{
    std::string out = std::to_string(entries_.size()) + " " + std::to_string(max_token_bytes_) + "\n";
    for (const auto& e : entries_) {
        out += escape_entry(e);
        out.push_back('\n');
    }
    return out;
}

Vocabulary Vocabulary::parse(std::string_view text)
{
    std::size_t pos = 0;
    auto next_line = [&](std::string_view& line) {
        if (pos >= text.size())
            return false;
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos)
            end = text.size();
        line = text.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        pos = end + 1;
        return true;
    };

    std::string_view header;
    if (!next_line(header))
        fail(Errc::invalid_argument, "vocabulary: missing header line");
    const auto space = header.find(' ');
    if (space == std::string_view::npos)
        fail(Errc::invalid_argument, "vocabulary header must be \"D B\"");
    const auto count = parse_count(header.substr(0, space), "entry count");
    const auto max_bytes = parse_count(header.substr(space + 1), "maximum entry length");

    std::vector<std::string> entries;
    entries.reserve(count);
    std::string_view line;
    for (std::uint64_t i = 0; i < count; ++i) {
        if (!next_line(line))
            fail(Errc::invalid_argument, "vocabulary: expected " + std::to_string(count) + " entries, found "
                                             + std::to_string(i));
        entries.push_back(unescape_entry(line, i + 2));
    }
    while (next_line(line)) {
        if (!line.empty())
            fail(Errc::invalid_argument, "vocabulary: trailing data after the declared entries");
    }
    return from_entries(std::move(entries), max_bytes);
}

Vocabulary Vocabulary::load(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail(Errc::io, "cannot open vocabulary " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

void Vocabulary::save(const std::filesystem::path& path) const
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        fail(Errc::io, "cannot write vocabulary " + path.string());
    out << serialize();
}

} // namespace lmz
