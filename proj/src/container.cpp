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

#include "lmzip/container.hpp"

#include "lmzip/error.hpp"
#include "lmzip/wire.hpp"

#include <algorithm>

namespace lmz {

namespace {

constexpr char kMagic[4] = {'L', 'M', 'Z', '1'};

// Everything except the model tag.
constexpr std::size_t kFixedHeaderSize = 4 + 2 + 1 + 1 + 1 + 32 + 1 + 4 + 1 + 2 + 8 + 8 + 8 + 1 + 4;

} // namespace

const char* codec_name(CodecId codec) noexcept
{
    switch (codec) {
    case CodecId::rank: return "rank";
    case CodecId::tbyt: return "tbyt";
    case CodecId::ac: return "ac";
    }
    return "?";
}

std::optional<CodecId> parse_codec(std::string_view name) noexcept
{
    if (name == "rank")
        return CodecId::rank;
    if (name == "tbyt")
        return CodecId::tbyt;
    if (name == "ac")
        return CodecId::ac;
    return std::nullopt;
}

PredictorSpec ContainerHeader::predictor_spec() const
{
    PredictorSpec spec;
    spec.kind = predictor;
    spec.memory = memory;
    spec.order = order;
    spec.model_tag = model_tag;
    return spec;
}

std::size_t header_size(const ContainerHeader& header)
{
    return kFixedHeaderSize + header.model_tag.size();
}

std::vector<std::uint8_t> write_container(ContainerHeader header, std::span<const std::uint8_t> payload)
{
    if (header.model_tag.size() > kMaxModelTag)
        fail(Errc::invalid_argument, "model tag longer than 65535 bytes");
    header.payload_len = payload.size();

    ByteWriter w;
    w.buffer().reserve(header_size(header) + payload.size());
    w.bytes(std::string_view(kMagic, 4));
    w.u16(header.version);
    w.u8(static_cast<std::uint8_t>(header.codec));
    w.u8(header.codec_param);
    w.u8(static_cast<std::uint8_t>(header.tokenizer));
    w.bytes(header.vocab_digest);
    w.u8(static_cast<std::uint8_t>(header.predictor));
    w.u32(header.memory);
    w.u8(header.order);
    w.u16(static_cast<std::uint16_t>(header.model_tag.size()));
    w.bytes(header.model_tag);
    w.u64(header.n_tokens);
    w.u64(header.n_chars);
    w.u64(header.payload_len);
    w.u8(header.padding_bits);
    w.u32(header.crc);
    w.bytes(payload);
    return w.take();
}

ContainerView read_container(std::span<const std::uint8_t> bytes)
{
    ByteReader r(bytes, Errc::corrupt_stream, "container header");
    const auto magic = r.bytes(4);
    if (!std::equal(magic.begin(), magic.end(), kMagic))
        fail(Errc::corrupt_stream, "not an lmzip container (bad magic)");

    ContainerView view;
    auto& h = view.header;
    h.version = r.u16();
    if (h.version != kContainerVersion)
        fail(Errc::corrupt_stream, "unsupported container version " + std::to_string(h.version));

    const auto codec = r.u8();
    if (codec > static_cast<std::uint8_t>(CodecId::ac))
        fail(Errc::corrupt_stream, "unknown codec id " + std::to_string(codec));
    h.codec = static_cast<CodecId>(codec);
    h.codec_param = r.u8();

    const auto tokenizer = r.u8();
    if (tokenizer > static_cast<std::uint8_t>(TokenizerKind::external))
        fail(Errc::corrupt_stream, "unknown tokenizer id " + std::to_string(tokenizer));
    h.tokenizer = static_cast<TokenizerKind>(tokenizer);
    const auto digest = r.bytes(h.vocab_digest.size());
    std::copy(digest.begin(), digest.end(), h.vocab_digest.begin());

    const auto predictor = r.u8();
    if (predictor > static_cast<std::uint8_t>(PredictorKind::external))
        fail(Errc::corrupt_stream, "unknown predictor id " + std::to_string(predictor));
    h.predictor = static_cast<PredictorKind>(predictor);
    h.memory = r.u32();
    h.order = r.u8();
    h.model_tag = r.string(r.u16());

    h.n_tokens = r.u64();
    h.n_chars = r.u64();
    h.payload_len = r.u64();
    h.padding_bits = r.u8();
    h.crc = r.u32();

    if (h.padding_bits > 7)
        fail(Errc::corrupt_stream, "padding bit count out of range");
    if (h.n_tokens > h.n_chars)
        fail(Errc::corrupt_stream, "header claims more tokens than characters");
    if (h.payload_len != r.remaining())
        fail(Errc::corrupt_stream, "payload length does not match the file size");
    view.payload = r.bytes(h.payload_len);
    return view;
}

} // namespace lmz
