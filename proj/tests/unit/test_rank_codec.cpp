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

#include "test_util.hpp"

#include "lmzip/codelength.hpp"
#include "lmzip/deflate.hpp"
#include "lmzip/rank_codec.hpp"
#include "lmzip/tokenizer.hpp"
#include "lmzip/vocabulary.hpp"

#include <doctest.h>

#include <algorithm>
#include <map>

using namespace lmz;
using lmz::testing::error_of;
using lmz::testing::Rng;

namespace {

// Shared toy vocabulary for the two worked PMFs. Ids are deliberately not
// in probability order so the tie rule cannot produce the answer by itself.
enum Word : TokenId { driving, cycling, writing, reading, a, an, the, other, kWords };

// "I like ___": reading 0.3, writing 0.2, cycling 0.1, driving 0.05, rest spread.
QuantizedPmf activity_pmf()
{
    std::vector<std::uint64_t> s(kWords, 875);
    s[reading] = 3000;
    s[writing] = 2000;
    s[cycling] = 1000;
    s[driving] = 500;
    return quantize_scores(s);
}

// "... writing ___": a 0.7, an 0.2, the 0.05, rest spread.
QuantizedPmf article_pmf()
{
    std::vector<std::uint64_t> s(kWords, 100);
    s[a] = 7000;
    s[an] = 2000;
    s[the] = 500;
    return quantize_scores(s);
}

std::vector<std::uint8_t> varints(std::span<const std::uint32_t> ranks)
{
    std::vector<std::uint8_t> out;
    for (auto r : ranks) {
        while (r >= 0x80) {
            out.push_back(static_cast<std::uint8_t>(r | 0x80));
            r >>= 7;
        }
        out.push_back(static_cast<std::uint8_t>(r));
    }
    return out;
}

} // namespace

TEST_SUITE("rank_codec")
{
    TEST_CASE("worked examples")
    {
        CHECK(rank_of(activity_pmf(), writing) == 1);
        CHECK(rank_of(activity_pmf(), reading) == 0);
        CHECK(rank_of(article_pmf(), a) == 0);

        const auto order = rank_permutation(activity_pmf()).order;
        CHECK(order[0] == reading);
        CHECK(order[1] == writing);
        CHECK(order[2] == cycling);

        lmz::testing::ScriptedPredictor enc({activity_pmf(), article_pmf()});
        const std::vector<TokenId> sentence = {writing, a};
        CHECK(to_ranks(sentence, enc) == RankSequence{1, 0});

        lmz::testing::ScriptedPredictor dec({activity_pmf(), article_pmf()});
        const RankSequence ranks = {1, 0};
        CHECK(from_ranks(ranks, dec) == sentence);
    }

    TEST_CASE("uniform pmf ranks are token ids")
    {
        const auto uniform = quantize_scores(std::vector<std::uint64_t>(4, 1));
        CHECK(rank_permutation(uniform).order == std::vector<TokenId>{0, 1, 2, 3});

        UniformModel m(256);
        const std::vector<TokenId> one = {173};
        CHECK(to_ranks(one, m) == RankSequence{173});

        UniformModel u(256);
        const RankSequence zeros(50, 0);
        CHECK(from_ranks(zeros, u) == std::vector<TokenId>(50, 0));
    }

    TEST_CASE("permutation is a stable bijection")
    {
        Rng rng(8);
        for (int trial = 0; trial < 200; ++trial) {
            const std::size_t d = 1 + rng() % 300;
            std::vector<std::uint64_t> scores(d);
            for (auto& s : scores)
                s = rng() % (trial % 2 ? 4 : 1000);
            const auto pmf = quantize_scores(scores);
            const auto perm = rank_permutation(pmf);
            const auto inv = perm.inverse();
            REQUIRE(perm.order.size() == d);
            for (std::uint32_t r = 0; r < d; ++r) {
                CHECK(inv[perm.order[r]] == r);
                CHECK(token_at_rank(pmf, r) == perm.order[r]);
                CHECK(rank_of(pmf, perm.order[r]) == r);
                if (r > 0) {
                    const auto prev = pmf.weight(perm.order[r - 1]);
                    const auto cur = pmf.weight(perm.order[r]);
                    CHECK(prev >= cur);
                    if (prev == cur)
                        CHECK(perm.order[r - 1] < perm.order[r]);
                }
            }
        }
    }

    TEST_CASE("from_ranks inverts to_ranks")
    {
        Rng rng(21);
        for (int trial = 0; trial < 40; ++trial) {
            const std::size_t d = 2 + rng() % 300;
            const auto tokens = lmz::testing::random_tokens(rng, 1000, d);
            AdaptiveModel enc(d, static_cast<unsigned>(rng() % 5), 1 + static_cast<std::uint32_t>(rng() % 500));
            AdaptiveModel dec = enc;
            const auto ranks = to_ranks(tokens, enc);
            REQUIRE(ranks.size() == tokens.size());
            CHECK(std::all_of(ranks.begin(), ranks.end(), [&](auto r) { return r < d; }));
            CHECK(from_ranks(ranks, dec) == tokens);

            lmz::testing::RandomPmfPredictor p1(d, trial, 1.0);
            lmz::testing::RandomPmfPredictor p2(d, trial, 1.0);
            CHECK(from_ranks(to_ranks(tokens, p1), p2) == tokens);
        }
    }

    TEST_CASE("rank at or beyond the vocabulary is corrupt")
    {
        UniformModel m(16);
        const RankSequence bad = {3, 16};
        CHECK(error_of([&] { from_ranks(bad, m); }) == Errc::corrupt_stream);
        CHECK(error_of([&] { token_at_rank(quantize_scores(std::vector<std::uint64_t>(4, 1)), 4); })
              == Errc::corrupt_stream);
    }

    TEST_CASE("varint and deflate serialization")
    {
        CHECK(decode_ranks(encode_ranks({})).empty());

        const RankSequence zeros(100000, 0);
        const auto packed = encode_ranks(zeros);
        CHECK(packed.size() * 100 < varints(zeros).size());
        CHECK(decode_ranks(packed) == zeros);

        Rng rng(4);
        for (int trial = 0; trial < 100; ++trial) {
            RankSequence r(rng() % 3000);
            for (auto& x : r)
                x = static_cast<std::uint32_t>(rng() >> (40 + rng() % 24));
            for (const int level : {1, 6, 9})
                CHECK(decode_ranks(encode_ranks(r, level)) == r);
        }
        const RankSequence extremes = {0, 127, 128, 16383, 16384, 0xffffffffu};
        CHECK(decode_ranks(encode_ranks(extremes)) == extremes);
    }

    TEST_CASE("damaged rank payloads are corrupt")
    {
        const RankSequence r = {1, 2, 3, 500, 7, 7, 7, 0};
        auto packed = encode_ranks(r);
        auto truncated = packed;
        truncated.resize(truncated.size() / 2);
        CHECK(error_of([&] { decode_ranks(truncated); }) == Errc::corrupt_stream);

        const std::vector<std::uint8_t> junk = {0xff, 0xfe, 0xfd, 0x00, 0x12};
        CHECK(error_of([&] { decode_ranks(junk); }) == Errc::corrupt_stream);

        // A varint cut short by the end of the inflated data.
        const std::vector<std::uint8_t> dangling = {0x05, 0x80};
        const auto deflated = deflate_raw(std::span<const std::uint8_t>(dangling));
        CHECK(error_of([&] { decode_ranks(deflated); }) == Errc::corrupt_stream);
    }

    TEST_CASE("zero is the most frequent rank on natural text")
    {
        const auto& text = lmz::testing::corpus();
        const auto stream = tokenize(std::string_view(text).substr(0, 200000), Vocabulary::bytes()).stream;
        AdaptiveModel m(256, 8, 1u << 20);
        const auto ranks = to_ranks(stream.ids(), m);
        std::map<std::uint32_t, std::size_t> freq;
        for (auto r : ranks)
            ++freq[r];
        for (const auto& [rank, n] : freq)
            if (rank != 0)
                CHECK(freq[0] > n);
        MESSAGE("rank-0 share: " << static_cast<double>(freq[0]) / static_cast<double>(ranks.size()));
    }
}
