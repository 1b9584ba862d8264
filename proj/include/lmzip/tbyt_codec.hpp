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

#ifndef LMZIP_TBYT_CODEC_HPP
#define LMZIP_TBYT_CODEC_HPP

#include "lmzip/codelength.hpp"
#include "lmzip/kernels.hpp"
#include "lmzip/pmf.hpp"
#include "lmzip/predictor.hpp"
#include "lmzip/tokens.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace lmz {

// Token-by-token prefix code: at every epoch a canonical code is built over
// all D tokens with lengths ceil(log2(2^24 / w)) (clamped to at least one
// bit for emission) and the current token's codeword is written MSB first.

struct CodeLengthProfile {
    std::vector<std::uint32_t> lengths; // accounting lengths, ceil(log2(2^24 / w))
    std::uint64_t total_bits = 0;       // sum of lengths
    std::uint64_t emitted_bits = 0;     // bits actually written (lengths clamped to >= 1)
};

struct TbytEncoded {
    std::vector<std::uint8_t> bytes;
    std::uint8_t padding_bits = 0; // zero bits appended to fill the last byte
    CodeLengthProfile profile;
};

/// Codeword of `token` under the epoch's canonical code.
kernels::CanonicalCode tbyt_codeword(const QuantizedPmf& pmf, TokenId token);

TbytEncoded tbyt_encode(std::span<const TokenId> tokens, Predictor& predictor, CodelengthTally* tally = nullptr);

/// Reads exactly n_tokens codewords. Throws corrupt_stream if the bits run
/// out or a bit pattern matches no codeword. With `padding_bits` set, also
/// requires the codewords to end exactly that many zero bits before the end
/// of the payload.
std::vector<TokenId> tbyt_decode(std::span<const std::uint8_t> bytes, std::size_t n_tokens, Predictor& predictor,
                                 std::optional<std::uint8_t> padding_bits = std::nullopt);

class BitWriter {
public:
    void write(std::uint32_t code, unsigned length);
    /// Pads the last byte with zeros; returns the number of padding bits.
    std::uint8_t finish();
    std::vector<std::uint8_t> take() { return std::move(bytes_); }
    std::uint64_t bits_written() const noexcept { return bits_; }

private:
    std::vector<std::uint8_t> bytes_;
    std::uint64_t acc_ = 0;
    unsigned pending_ = 0;
    std::uint64_t bits_ = 0;
};

class BitReader {
public:
    explicit BitReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    /// Throws corrupt_stream when the input is exhausted.
    unsigned read_bit();
    std::uint64_t position() const noexcept { return pos_; }

private:
    std::span<const std::uint8_t> bytes_;
    std::uint64_t pos_ = 0;
};

} // namespace lmz

#endif
