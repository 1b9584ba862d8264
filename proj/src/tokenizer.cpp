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

#include "lmzip/tokenizer.hpp"

#include "lmzip/error.hpp"

#include <numeric>

namespace lmz {

void TokenStream::push_back(Token token)
{
    items_.push_back(token);
    n_chars_ += token.byte_len;
}

std::vector<TokenId> TokenStream::ids() const
{
    std::vector<TokenId> out;
    out.reserve(items_.size());
    for (const auto& t : items_)
        out.push_back(t.id);
    return out;
}

TokenStream TokenStream::slice(std::size_t first, std::size_t count) const
{
    if (first > items_.size() || count > items_.size() - first)
        fail(Errc::invalid_argument, "token slice out of range");
    TokenStream out;
    out.reserve(count);
    for (std::size_t i = first; i < first + count; ++i)
        out.push_back(items_[i]);
    return out;
}

TokenBoundaryIndex TokenBoundaryIndex::from_stream(const TokenStream& stream)
{
    TokenBoundaryIndex index;
    index.boundaries.reserve(stream.n_tokens());
    std::uint64_t end = 0;
    for (const auto& t : stream.items()) {
        end += t.byte_len;
        index.boundaries.push_back(end);
    }
    return index;
}

Rational make_rational(std::uint64_t num, std::uint64_t den)
{
    if (den == 0)
        fail(Errc::undefined_statistic, "rational with zero denominator");
    const auto g = std::gcd(num, den);
    return g == 0 ? Rational{0, 1} : Rational{num / g, den / g};
}

Rational mean_chars_per_token(const TokenStream& stream)
{
    if (stream.empty())
        fail(Errc::undefined_statistic, "mean characters per token of an empty stream");
    return make_rational(stream.n_chars(), stream.n_tokens());
}

Tokenization tokenize(std::string_view text, const Vocabulary& vocab)
{
    Tokenization out;
    out.stream.reserve(text.size() / 2 + 1);
    std::size_t pos = 0;
    while (pos < text.size()) {
        TokenId id = 0;
        const std::size_t len = vocab.longest_match(text.substr(pos), id);
        // longest_match never returns 0 on non-empty input: single bytes are always entries.
        out.stream.push_back(Token{id, static_cast<std::uint32_t>(len)});
        pos += len;
    }
    out.boundaries = TokenBoundaryIndex::from_stream(out.stream);
    return out;
}

std::string detokenize(std::span<const TokenId> ids, const Vocabulary& vocab)
{
    std::string out;
    for (const TokenId id : ids) {
        if (id >= vocab.size())
            fail(Errc::invalid_stream, "token id " + std::to_string(id) + " outside vocabulary of size "
                                           + std::to_string(vocab.size()));
        out += vocab.entry(id);
    }
    return out;
}

std::string detokenize(const TokenStream& stream, const Vocabulary& vocab)
{
    return detokenize(stream.ids(), vocab);
}

VocabularyTokenizer::VocabularyTokenizer(Vocabulary vocab)
    : vocab_(std::move(vocab))
    , kind_(vocab_.is_byte_identity() ? TokenizerKind::byte : TokenizerKind::vocab)
{
}

TokenStream VocabularyTokenizer::tokenize(std::string_view text)
{
    return lmz::tokenize(text, vocab_).stream;
}

std::string VocabularyTokenizer::detokenize(std::span<const TokenId> ids)
{
    return lmz::detokenize(ids, vocab_);
}

} // namespace lmz
