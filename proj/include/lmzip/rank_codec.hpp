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

#ifndef LMZIP_RANK_CODEC_HPP
#define LMZIP_RANK_CODEC_HPP

#include "lmzip/pmf.hpp"
#include "lmzip/predictor.hpp"
#include "lmzip/tokens.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace lmz {

struct CodelengthTally;

using RankSequence = std::vector<std::uint32_t>;

/// Tokens sorted by descending weight, ties by ascending id: order[r] is the
/// token with rank r.
struct RankPermutation {
    std::vector<TokenId> order;

    /// inverse()[t] is the rank of token t.
    std::vector<std::uint32_t> inverse() const;
};

RankPermutation rank_permutation(const QuantizedPmf& pmf);

/// Rank of one token under the (weight desc, id asc) order.
std::uint32_t rank_of(const QuantizedPmf& pmf, TokenId token);

/// Token holding rank `rank`. Throws corrupt_stream when rank >= D.
TokenId token_at_rank(const QuantizedPmf& pmf, std::uint32_t rank);

/// Ranks of the stream under a fresh predictor, updating it after each token.
RankSequence to_ranks(std::span<const TokenId> tokens, Predictor& predictor, CodelengthTally* tally = nullptr);

/// Inverse of to_ranks given an identically configured fresh predictor.
std::vector<TokenId> from_ranks(std::span<const std::uint32_t> ranks, Predictor& predictor);

/// Ranks as LEB128 varints under a raw DEFLATE stream.
std::vector<std::uint8_t> encode_ranks(std::span<const std::uint32_t> ranks, int level = 9);
RankSequence decode_ranks(std::span<const std::uint8_t> payload);

} // namespace lmz

#endif
