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

#include "lmzip/ac_codec.hpp"

#include "lmzip/error.hpp"
#include "lmzip/kernels.hpp"

namespace lmz {

namespace {

constexpr std::uint64_t kTop = std::uint64_t{1} << 56;
constexpr unsigned kFlushSlack = 7; // zero bytes the decoder may read past the end

} // namespace

CumulativeInterval cumulative_interval(const QuantizedPmf& pmf, TokenId token)
{
    if (token >= pmf.size())
        fail(Errc::invalid_stream, "token id " + std::to_string(token) + " outside vocabulary");
    const std::uint32_t lo = kernels::active().prefix_sum(pmf.weights().data(), token);
    return {lo, lo + pmf.weight(token)};
}

void RangeEncoder::encode(std::uint32_t cum_lo, std::uint32_t weight)
{
    const std::uint64_t step = range_ >> kPmfBits;
    const std::uint64_t add = std::uint64_t{cum_lo} * step;
    low_ += add;
    if (low_ < add)
        carry_ = true;
    range_ = std::uint64_t{weight} * step;
    while (range_ < kTop) {
        shift_low();
        range_ <<= 8;
    }
}

void RangeEncoder::shift_low()
{
    if (low_ < 0xff00000000000000ull || carry_) {
        const auto c = static_cast<std::uint8_t>(carry_);
        if (have_cache_)
            out_.push_back(static_cast<std::uint8_t>(cache_ + c));
        for (; pending_ff_ > 0; --pending_ff_)
            out_.push_back(static_cast<std::uint8_t>(0xff + c));
        cache_ = static_cast<std::uint8_t>(low_ >> 56);
        have_cache_ = true;
        carry_ = false;
    } else {
        ++pending_ff_;
    }
    low_ <<= 8;
}

std::vector<std::uint8_t> RangeEncoder::finish()
{
    const std::uint64_t add = kTop - 1;
    low_ += add;
    if (low_ < add)
        carry_ = true;
    low_ &= ~(kTop - 1);
    shift_low();
    if (have_cache_)
        out_.push_back(cache_);
    for (; pending_ff_ > 0; --pending_ff_)
        out_.push_back(0xff);
    have_cache_ = false;
    return std::move(out_);
}

RangeDecoder::RangeDecoder(std::span<const std::uint8_t> bytes)
    : bytes_(bytes)
{
    for (int i = 0; i < 8; ++i)
        code_ = (code_ << 8) | next_byte();
}

std::uint8_t RangeDecoder::next_byte()
{
    if (pos_ < bytes_.size())
        return bytes_[pos_++];
    if (++virtual_bytes_ > kFlushSlack)
        fail(Errc::corrupt_stream, "arithmetic-coded payload is truncated");
    return 0;
}

std::uint32_t RangeDecoder::target()
{
    step_ = range_ >> kPmfBits;
    const std::uint64_t v = code_ / step_;
    if (v >= kPmfTotal)
        fail(Errc::corrupt_stream, "arithmetic-coded payload is corrupt");
    return static_cast<std::uint32_t>(v);
}

void RangeDecoder::consume(std::uint32_t cum_lo, std::uint32_t weight)
{
    code_ -= std::uint64_t{cum_lo} * step_;
    range_ = std::uint64_t{weight} * step_;
    while (range_ < kTop) {
        code_ = (code_ << 8) | next_byte();
        range_ <<= 8;
    }
}

void RangeDecoder::expect_end() const
{
    // The decoder renormalizes exactly as often as the encoder did, so a
    // well-formed payload is always read to its end plus the full slack.
    if (pos_ != bytes_.size() || virtual_bytes_ != kFlushSlack)
        fail(Errc::corrupt_stream, "trailing bytes after arithmetic-coded payload");
}

std::vector<std::uint8_t> ac_encode(std::span<const TokenId> tokens, Predictor& predictor, CodelengthTally* tally)
{
    RangeEncoder enc;
    for (const TokenId x : tokens) {
        const auto& pmf = predictor.predict();
        const auto iv = cumulative_interval(pmf, x);
        enc.encode(iv.cum_lo, iv.cum_hi - iv.cum_lo);
        if (tally)
            tally->observe(iv.cum_hi - iv.cum_lo);
        predictor.update(x);
    }
    return enc.finish();
}

std::vector<TokenId> ac_decode(std::span<const std::uint8_t> bytes, std::size_t n_tokens, Predictor& predictor)
{
    const auto& k = kernels::active();
    RangeDecoder dec(bytes);
    std::vector<TokenId> tokens;
    tokens.reserve(n_tokens);
    for (std::size_t i = 0; i < n_tokens; ++i) {
        const auto& pmf = predictor.predict();
        const std::uint32_t v = dec.target();
        std::uint32_t cum_lo = 0;
        const std::uint32_t x = k.locate(pmf.weights().data(), pmf.size(), v, &cum_lo);
        dec.consume(cum_lo, pmf.weight(x));
        tokens.push_back(x);
        predictor.update(x);
    }
    dec.expect_end();
    return tokens;
}

} // namespace lmz
