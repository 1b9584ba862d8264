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

#ifndef LMZIP_AC_CODEC_HPP
#define LMZIP_AC_CODEC_HPP

#include "lmzip/codelength.hpp"
#include "lmzip/pmf.hpp"
#include "lmzip/predictor.hpp"
#include "lmzip/tokens.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace lmz {

/// [cum_lo, cum_hi) of a token in id order; intervals of all tokens
/// partition [0, 2^24).
struct CumulativeInterval {
    std::uint32_t cum_lo = 0;
    std::uint32_t cum_hi = 0;

    friend bool operator==(const CumulativeInterval&, const CumulativeInterval&) = default;
};

CumulativeInterval cumulative_interval(const QuantizedPmf& pmf, TokenId token);

/// Range coder over 2^24-scaled frequencies.
///
/// low is a 64-bit register with carries propagated into already-produced
/// bytes (one cached byte plus a run of 0xff); range is 64 bits and is
/// renormalized byte-wise to stay >= 2^56, so the range / 2^24 truncation
/// costs under 2^-31 bits per symbol. finish() emits a single byte: the
/// top byte of low rounded up to a multiple of 2^56, which lies inside the
/// final interval because range >= 2^56. The decoder supplies exactly seven zero
/// bytes past the end; any other payload length is corrupt.
///
/// Output length N_b (bits) satisfies  I <= N_b < I + 8 + N * 2^-31  where
/// I = sum log2(2^24 / w_i).
class RangeEncoder {
public:
    void encode(std::uint32_t cum_lo, std::uint32_t weight);
    std::vector<std::uint8_t> finish();

private:
    void shift_low();

    std::uint64_t low_ = 0;
    std::uint64_t range_ = ~std::uint64_t{0};
    bool carry_ = false;
    bool have_cache_ = false;
    std::uint8_t cache_ = 0;
    std::uint64_t pending_ff_ = 0;
    std::vector<std::uint8_t> out_;
};

class RangeDecoder {
public:
    explicit RangeDecoder(std::span<const std::uint8_t> bytes);

    /// Scaled target in [0, 2^24) for the next symbol.
    std::uint32_t target();
    void consume(std::uint32_t cum_lo, std::uint32_t weight);

    /// Throws corrupt_stream unless the whole payload was consumed.
    void expect_end() const;

private:
    std::uint8_t next_byte();

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
    unsigned virtual_bytes_ = 0;
    std::uint64_t code_ = 0;
    std::uint64_t range_ = ~std::uint64_t{0};
    std::uint64_t step_ = 0;
};

std::vector<std::uint8_t> ac_encode(std::span<const TokenId> tokens, Predictor& predictor,
                                    CodelengthTally* tally = nullptr);

std::vector<TokenId> ac_decode(std::span<const std::uint8_t> bytes, std::size_t n_tokens, Predictor& predictor);

} // namespace lmz

#endif
