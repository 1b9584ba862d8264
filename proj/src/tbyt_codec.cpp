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

#include "lmzip/tbyt_codec.hpp"

#include "lmzip/error.hpp"

namespace lmz {

void BitWriter::write(std::uint32_t code, unsigned length)
{
    acc_ = (acc_ << length) | (code & ((std::uint64_t{1} << length) - 1));
    pending_ += length;
    bits_ += length;
    while (pending_ >= 8) {
        pending_ -= 8;
        bytes_.push_back(static_cast<std::uint8_t>(acc_ >> pending_));
    }
    acc_ &= (std::uint64_t{1} << pending_) - 1;
}

std::uint8_t BitWriter::finish()
{
    if (pending_ == 0)
        return 0;
    const auto padding = static_cast<std::uint8_t>(8 - pending_);
    bytes_.push_back(static_cast<std::uint8_t>(acc_ << padding));
    acc_ = 0;
    pending_ = 0;
    return padding;
}

unsigned BitReader::read_bit()
{
    if (pos_ >= bytes_.size() * 8)
        fail(Errc::corrupt_stream, "token-by-token payload ended inside a codeword");
    const unsigned bit = (bytes_[pos_ >> 3] >> (7 - (pos_ & 7))) & 1u;
    ++pos_;
    return bit;
}

kernels::CanonicalCode tbyt_codeword(const QuantizedPmf& pmf, TokenId token)
{
    if (token >= pmf.size())
        fail(Errc::invalid_stream, "token id " + std::to_string(token) + " outside vocabulary");
    return kernels::active().canonical_code(pmf.weights().data(), pmf.size(), token);
}

TbytEncoded tbyt_encode(std::span<const TokenId> tokens, Predictor& predictor, CodelengthTally* tally)
{
    TbytEncoded out;
    out.profile.lengths.reserve(tokens.size());
    BitWriter writer;
    for (const TokenId x : tokens) {
        const auto& pmf = predictor.predict();
        const auto cw = tbyt_codeword(pmf, x);
        writer.write(cw.code, cw.length);

        const std::uint32_t w = pmf.weight(x);
        const std::uint32_t accounting = code_length(w);
        out.profile.lengths.push_back(accounting);
        out.profile.total_bits += accounting;
        if (tally)
            tally->observe(w);
        predictor.update(x);
    }
    out.padding_bits = writer.finish();
    out.profile.emitted_bits = writer.bits_written();
    out.bytes = writer.take();
    return out;
}

std::vector<TokenId> tbyt_decode(std::span<const std::uint8_t> bytes, std::size_t n_tokens, Predictor& predictor,
                                 std::optional<std::uint8_t> padding_bits)
{
    const auto& k = kernels::active();
    std::vector<TokenId> tokens;
    tokens.reserve(n_tokens);
    BitReader reader(bytes);
    kernels::LengthHistogram hist{};

    for (std::size_t i = 0; i < n_tokens; ++i) {
        const auto& pmf = predictor.predict();
        const auto w = pmf.weights();
        k.length_histogram(w.data(), w.size(), &hist);

        // Canonical decoding: `first` is the smallest codeword of the current
        // length, and codes of one length are consecutive in id order.
        std::uint32_t code = 0;
        std::uint32_t first = 0;
        std::uint32_t length = 0;
        std::uint32_t index = 0;
        bool found = false;
        for (length = 1; length <= 24; ++length) {
            code = (code << 1) | reader.read_bit();
            const std::uint32_t count = hist[length];
            if (code >= first && code - first < count) {
                index = code - first;
                found = true;
                break;
            }
            first = (first + count) << 1;
        }
        if (!found)
            fail(Errc::corrupt_stream, "bit pattern matches no codeword");

        TokenId x = 0;
        for (std::size_t t = 0; t < w.size(); ++t) {
            if (kernels::emitted_length(w[t]) == length && index-- == 0) {
                x = static_cast<TokenId>(t);
                break;
            }
        }
        tokens.push_back(x);
        predictor.update(x);
    }

    if (padding_bits) {
        if (reader.position() + *padding_bits != std::uint64_t{bytes.size()} * 8)
            fail(Errc::corrupt_stream, "token-by-token payload length disagrees with the header");
        for (unsigned i = 0; i < *padding_bits; ++i)
            if (reader.read_bit() != 0)
                fail(Errc::corrupt_stream, "non-zero padding bits");
    }
    return tokens;
}

} // namespace lmz
