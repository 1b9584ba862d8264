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

#include "lmzip/checksum.hpp"
#include "lmzip/container.hpp"

#include <doctest.h>

using namespace lmz;
using lmz::testing::error_of;
using lmz::testing::Rng;

namespace {

ContainerHeader sample_header()
{
    ContainerHeader h;
    h.codec = CodecId::rank;
    h.codec_param = 9;
    h.tokenizer = TokenizerKind::vocab;
    for (std::size_t i = 0; i < h.vocab_digest.size(); ++i)
        h.vocab_digest[i] = static_cast<std::uint8_t>(0xa0 + i);
    h.predictor = PredictorKind::external;
    h.memory = 0x01020304;
    h.order = 0;
    h.model_tag = "m/v2";
    h.n_tokens = 0x1122334455667788ull;
    h.n_chars = 0x1122334455667789ull;
    h.padding_bits = 3;
    h.crc = 0xdeadbeef;
    return h;
}

void put(std::vector<std::uint8_t>& out, std::uint64_t v, int bytes)
{
    for (int i = 0; i < bytes; ++i)
        out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

// Field-by-field transcription of the documented layout.
std::vector<std::uint8_t> oracle_bytes(const ContainerHeader& h, std::span<const std::uint8_t> payload)
{
    std::vector<std::uint8_t> out = {'L', 'M', 'Z', '1'};
    put(out, h.version, 2);
    put(out, static_cast<std::uint8_t>(h.codec), 1);
    put(out, h.codec_param, 1);
    put(out, static_cast<std::uint8_t>(h.tokenizer), 1);
    out.insert(out.end(), h.vocab_digest.begin(), h.vocab_digest.end());
    put(out, static_cast<std::uint8_t>(h.predictor), 1);
    put(out, h.memory, 4);
    put(out, h.order, 1);
    put(out, h.model_tag.size(), 2);
    out.insert(out.end(), h.model_tag.begin(), h.model_tag.end());
    put(out, h.n_tokens, 8);
    put(out, h.n_chars, 8);
    put(out, payload.size(), 8);
    put(out, h.padding_bits, 1);
    put(out, h.crc, 4);
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

} // namespace

TEST_SUITE("container")
{
    TEST_CASE("checksums match published test vectors")
    {
        CHECK(crc32("123456789") == 0xcbf43926u);
        CHECK(crc32("") == 0u);
        CHECK(to_hex(sha256("abc")) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
        CHECK(to_hex(sha256("")) == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    }

    TEST_CASE("codec names")
    {
        for (const auto c : {CodecId::rank, CodecId::tbyt, CodecId::ac})
            CHECK(parse_codec(codec_name(c)) == c);
        CHECK(!parse_codec("zip"));
    }

    TEST_CASE("byte layout is the documented one")
    {
        const auto h = sample_header();
        const std::vector<std::uint8_t> payload = {1, 2, 3, 4, 5};
        const auto bytes = write_container(h, payload);
        CHECK(bytes == oracle_bytes(h, payload));
        CHECK(header_size(h) == 78 + h.model_tag.size());
        CHECK(bytes.size() == header_size(h) + payload.size());

        ContainerHeader empty;
        CHECK(header_size(empty) == 78);
    }

    TEST_CASE("read inverts write")
    {
        Rng rng(3);
        for (int i = 0; i < 100; ++i) {
            ContainerHeader h;
            h.codec = static_cast<CodecId>(rng() % 3);
            h.codec_param = static_cast<std::uint8_t>(rng() % 10);
            h.tokenizer = static_cast<TokenizerKind>(rng() % 3);
            for (auto& b : h.vocab_digest)
                b = static_cast<std::uint8_t>(rng());
            h.predictor = static_cast<PredictorKind>(rng() % 3);
            h.memory = static_cast<std::uint32_t>(rng());
            h.order = static_cast<std::uint8_t>(rng() % 13);
            h.model_tag = lmz::testing::random_bytes(rng, rng() % 40);
            h.n_chars = rng() >> 20;
            h.n_tokens = h.n_chars ? rng() % h.n_chars : 0;
            h.padding_bits = static_cast<std::uint8_t>(rng() % 8);
            h.crc = static_cast<std::uint32_t>(rng());
            const auto payload = lmz::testing::random_bytes(rng, rng() % 200);
            const auto bytes = write_container(h, lmz::testing::as_bytes(payload));
            const auto view = read_container(bytes);
            h.payload_len = payload.size();
            CHECK(view.header == h);
            CHECK(std::string(view.payload.begin(), view.payload.end()) == payload);
        }
    }

    TEST_CASE("malformed containers are corrupt")
    {
        const auto h = sample_header();
        const std::vector<std::uint8_t> payload(20, 7);
        const auto good = write_container(h, payload);
        REQUIRE_NOTHROW(read_container(good));

        auto corrupt = [&](auto mutate) {
            auto b = good;
            mutate(b);
            return error_of([&] { read_container(b); });
        };
        const std::size_t tag_end = 49 + h.model_tag.size();

        CHECK(corrupt([](auto& b) { b[0] = 'X'; }) == Errc::corrupt_stream);
        CHECK(corrupt([](auto& b) { b[4] = 2; }) == Errc::corrupt_stream);
        CHECK(corrupt([](auto& b) { b[6] = 3; }) == Errc::corrupt_stream);
        CHECK(corrupt([](auto& b) { b[8] = 9; }) == Errc::corrupt_stream);
        CHECK(corrupt([](auto& b) { b[41] = 3; }) == Errc::corrupt_stream);
        CHECK(corrupt([&](auto& b) { b[tag_end + 24] = 8; }) == Errc::corrupt_stream);
        // N_T > N_c
        CHECK(corrupt([&](auto& b) { b[tag_end] = 0xff; }) == Errc::corrupt_stream);
        // payload_len disagreeing with the file
        CHECK(corrupt([](auto& b) { b.pop_back(); }) == Errc::corrupt_stream);
        CHECK(corrupt([](auto& b) { b.push_back(0); }) == Errc::corrupt_stream);
        // tag length running past the end
        CHECK(corrupt([](auto& b) { b[47] = 0xff; b[48] = 0xff; }) == Errc::corrupt_stream);

        for (std::size_t n = 0; n < header_size(h); ++n) {
            const std::vector<std::uint8_t> prefix(good.begin(), good.begin() + static_cast<std::ptrdiff_t>(n));
            CHECK(error_of([&] { read_container(prefix); }) == Errc::corrupt_stream);
        }
    }

    TEST_CASE("oversized model tag is refused when writing")
    {
        ContainerHeader h;
        h.model_tag.assign(kMaxModelTag + 1, 'x');
        CHECK(error_of([&] { write_container(h, {}); }) == Errc::invalid_argument);
    }

    TEST_CASE("predictor spec from header")
    {
        ContainerHeader h;
        h.predictor = PredictorKind::adaptive;
        h.memory = 512;
        h.order = 5;
        const auto s = h.predictor_spec();
        CHECK(s.kind == PredictorKind::adaptive);
        CHECK(s.memory == 512);
        CHECK(s.order == 5);
    }
}
