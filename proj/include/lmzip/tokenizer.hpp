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

#ifndef LMZIP_TOKENIZER_HPP
#define LMZIP_TOKENIZER_HPP

#include "lmzip/checksum.hpp"
#include "lmzip/tokens.hpp"
#include "lmzip/vocabulary.hpp"

#include <memory>
#include <span>
#include <string>
#include <string_view>

namespace lmz {

struct Tokenization {
    TokenStream stream;
    TokenBoundaryIndex boundaries;
};

/// Greedy longest-match, left to right. Always succeeds because every
/// vocabulary contains the 256 single bytes.
Tokenization tokenize(std::string_view text, const Vocabulary& vocab);

/// Concatenation of the entries. Throws invalid_stream for ids >= D.
std::string detokenize(std::span<const TokenId> ids, const Vocabulary& vocab);
std::string detokenize(const TokenStream& stream, const Vocabulary& vocab);

enum class TokenizerKind : std::uint8_t { byte = 0, vocab = 1, external = 2 };

class Tokenizer {
public:
    virtual ~Tokenizer() = default;

    virtual TokenizerKind kind() const noexcept = 0;
    virtual std::size_t vocab_size() const noexcept = 0;
    virtual Digest digest() const = 0;
    virtual TokenStream tokenize(std::string_view text) = 0;
    virtual std::string detokenize(std::span<const TokenId> ids) = 0;
};

class VocabularyTokenizer final : public Tokenizer {
public:
    explicit VocabularyTokenizer(Vocabulary vocab);

    TokenizerKind kind() const noexcept override { return kind_; }
    std::size_t vocab_size() const noexcept override { return vocab_.size(); }
    Digest digest() const override { return vocab_.digest(); }
    TokenStream tokenize(std::string_view text) override;
    std::string detokenize(std::span<const TokenId> ids) override;

    const Vocabulary& vocabulary() const noexcept { return vocab_; }

private:
    Vocabulary vocab_;
    TokenizerKind kind_;
};

} // namespace lmz

#endif
