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

#ifndef LMZIP_TOKENS_HPP
#define LMZIP_TOKENS_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace lmz {

using TokenId = std::uint32_t;

struct Token {
    TokenId id = 0;
    std::uint32_t byte_len = 1;

    friend bool operator==(const Token&, const Token&) = default;
};

/// A tokenized text: token ids with the number of bytes each one covers.
/// n_chars() is always the sum of byte_len over the stream.
class TokenStream {
public:
    TokenStream() = default;

    void push_back(Token token);
    void reserve(std::size_t n) { items_.reserve(n); }

    std::size_t n_tokens() const noexcept { return items_.size(); }
    std::uint64_t n_chars() const noexcept { return n_chars_; }
    bool empty() const noexcept { return items_.empty(); }

    std::span<const Token> items() const noexcept { return items_; }
    const Token& operator[](std::size_t i) const { return items_[i]; }

    std::vector<TokenId> ids() const;

    /// Contiguous sub-stream [first, first + count).
    TokenStream slice(std::size_t first, std::size_t count) const;

    friend bool operator==(const TokenStream&, const TokenStream&) = default;

private:
    std::vector<Token> items_;
    std::uint64_t n_chars_ = 0;
};

// End offset (in bytes) of every token: boundaries[i] - boundaries[i-1]
// equals the byte length of token i, boundaries[0] the length of token 0.
struct TokenBoundaryIndex {
    std::vector<std::uint64_t> boundaries;

    static TokenBoundaryIndex from_stream(const TokenStream& stream);
};

struct Rational {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
    friend bool operator==(const Rational&, const Rational&) = default;
};

/// Reduced fraction num/den; den must be non-zero.
Rational make_rational(std::uint64_t num, std::uint64_t den);

/// N_c / N_T as an exact fraction. Throws undefined_statistic on an empty stream.
Rational mean_chars_per_token(const TokenStream& stream);

} // namespace lmz

#endif
