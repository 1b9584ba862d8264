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

#ifndef LMZIP_CONTAINER_HPP
#define LMZIP_CONTAINER_HPP

#include "lmzip/checksum.hpp"
#include "lmzip/predictor.hpp"
#include "lmzip/tokenizer.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lmz {

enum class CodecId : std::uint8_t { rank = 0, tbyt = 1, ac = 2 };

const char* codec_name(CodecId codec) noexcept;
std::optional<CodecId> parse_codec(std::string_view name) noexcept;

inline constexpr std::uint16_t kContainerVersion = 1;
inline constexpr std::size_t kMaxModelTag = 0xffff;

// On-disk layout, all integers little-endian:
//
//   "LMZ1"  u16 version  u8 codec  u8 codec_param  u8 tokenizer  [32] digest
//   u8 predictor  u32 M  u8 k  u16 tag_len  [tag_len] model_tag
//   u64 N_T  u64 N_c  u64 payload_len  u8 padding_bits  u32 crc32
//   [payload_len] payload
//
// codec_param is the DEFLATE level for the rank codec and 0 otherwise. The
// digest identifies the vocabulary (all zero for the byte tokenizer). The
// crc covers the text that was tokenized.
struct ContainerHeader {
    std::uint16_t version = kContainerVersion;
    CodecId codec = CodecId::ac;
    std::uint8_t codec_param = 0;
    TokenizerKind tokenizer = TokenizerKind::byte;
    Digest vocab_digest{};
    PredictorKind predictor = PredictorKind::adaptive;
    std::uint32_t memory = 0;
    std::uint8_t order = 0;
    std::string model_tag;
    std::uint64_t n_tokens = 0;
    std::uint64_t n_chars = 0;
    std::uint64_t payload_len = 0;
    std::uint8_t padding_bits = 0;
    std::uint32_t crc = 0;

    friend bool operator==(const ContainerHeader&, const ContainerHeader&) = default;

    PredictorSpec predictor_spec() const;
};

std::size_t header_size(const ContainerHeader& header);

/// Header followed by the payload; payload_len is taken from the payload.
std::vector<std::uint8_t> write_container(ContainerHeader header, std::span<const std::uint8_t> payload);

struct ContainerView {
    ContainerHeader header;
    std::span<const std::uint8_t> payload;
};

/// Validates magic, version and field ranges before touching the payload;
/// throws corrupt_stream on any violation.
ContainerView read_container(std::span<const std::uint8_t> bytes);

} // namespace lmz

#endif
