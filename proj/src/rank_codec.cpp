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

#include "lmzip/rank_codec.hpp"

#include "lmzip/codelength.hpp"
#include "lmzip/deflate.hpp"
#include "lmzip/error.hpp"
#include "lmzip/kernels.hpp"

#include <algorithm>
#include <numeric>

namespace lmz {

std::vector<std::uint32_t> RankPermutation::inverse() const
{
    std::vector<std::uint32_t> inv(order.size());
    for (std::size_t r = 0; r < order.size(); ++r)
        inv[order[r]] = static_cast<std::uint32_t>(r);
    return inv;
}

RankPermutation rank_permutation(const QuantizedPmf& pmf)
{
    RankPermutation perm;
    perm.order.resize(pmf.size());
    std::iota(perm.order.begin(), perm.order.end(), TokenId{0});
    const auto w = pmf.weights();
    std::stable_sort(perm.order.begin(), perm.order.end(),
                     [&](TokenId a, TokenId b) { return w[a] > w[b]; });
    return perm;
}

std::uint32_t rank_of(const QuantizedPmf& pmf, TokenId token)
{
    if (token >= pmf.size())
        fail(Errc::invalid_stream, "token id " + std::to_string(token) + " outside vocabulary");
    return kernels::active().rank_of(pmf.weights().data(), pmf.size(), token);
}

TokenId token_at_rank(const QuantizedPmf& pmf, std::uint32_t rank)
{
    if (rank >= pmf.size())
        fail(Errc::corrupt_stream, "rank " + std::to_string(rank) + " outside vocabulary of size "
                                       + std::to_string(pmf.size()));
    const auto w = pmf.weights();
    // The rank-r token is the one with exactly r tokens ahead of it in
    // (weight desc, id asc) order; select it without a full sort.
    thread_local std::vector<TokenId> scratch;
    scratch.resize(pmf.size());
    std::iota(scratch.begin(), scratch.end(), TokenId{0});
    const auto nth = scratch.begin() + rank;
    std::nth_element(scratch.begin(), nth, scratch.end(), [&](TokenId a, TokenId b) {
        return w[a] != w[b] ? w[a] > w[b] : a < b;
    });
    return *nth;
}

RankSequence to_ranks(std::span<const TokenId> tokens, Predictor& predictor, CodelengthTally* tally)
{
    RankSequence ranks;
    ranks.reserve(tokens.size());
    for (const TokenId x : tokens) {
        const auto& pmf = predictor.predict();
        ranks.push_back(rank_of(pmf, x));
        if (tally)
            tally->observe(pmf.weight(x));
        predictor.update(x);
    }
    return ranks;
}

std::vector<TokenId> from_ranks(std::span<const std::uint32_t> ranks, Predictor& predictor)
{
    std::vector<TokenId> tokens;
    tokens.reserve(ranks.size());
    for (const auto r : ranks) {
        const TokenId x = token_at_rank(predictor.predict(), r);
        tokens.push_back(x);
        predictor.update(x);
    }
    return tokens;
}

std::vector<std::uint8_t> encode_ranks(std::span<const std::uint32_t> ranks, int level)
{
    std::vector<std::uint8_t> varints;
    varints.reserve(ranks.size() + ranks.size() / 4);
    for (std::uint32_t r : ranks) {
        while (r >= 0x80) {
            varints.push_back(static_cast<std::uint8_t>(r | 0x80));
            r >>= 7;
        }
        varints.push_back(static_cast<std::uint8_t>(r));
    }
    return deflate_raw(varints, level);
}

RankSequence decode_ranks(std::span<const std::uint8_t> payload)
{
    if (payload.empty())
        return {};
    const auto varints = inflate_raw(payload);
    RankSequence ranks;
    ranks.reserve(varints.size());
    std::uint64_t value = 0;
    unsigned shift = 0;
    for (const auto b : varints) {
        value |= std::uint64_t{b & 0x7fu} << shift;
        if (value > 0xffffffffull)
            fail(Errc::corrupt_stream, "rank varint exceeds 32 bits");
        if (b & 0x80) {
            shift += 7;
            if (shift > 28)
                fail(Errc::corrupt_stream, "rank varint too long");
            continue;
        }
        ranks.push_back(static_cast<std::uint32_t>(value));
        value = 0;
        shift = 0;
    }
    if (shift != 0)
        fail(Errc::corrupt_stream, "rank stream ends inside a varint");
    return ranks;
}

} // namespace lmz
