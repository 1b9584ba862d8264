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

#include "lmzip/pipeline.hpp"

#include "lmzip/ac_codec.hpp"
#include "lmzip/checksum.hpp"
#include "lmzip/deflate.hpp"
#include "lmzip/error.hpp"
#include "lmzip/rank_codec.hpp"
#include "lmzip/text.hpp"

#include <cstdlib>

namespace lmz {

TokenizerSpec parse_tokenizer_spec(std::string_view text)
{
    TokenizerSpec spec;
    if (text == "byte") {
        spec.kind = TokenizerKind::byte;
    } else if (text == "external") {
        spec.kind = TokenizerKind::external;
    } else if (text.rfind("vocab:", 0) == 0 && text.size() > 6) {
        spec.kind = TokenizerKind::vocab;
        spec.vocab_path = std::string(text.substr(6));
    } else {
        fail(Errc::invalid_argument, "unknown tokenizer '" + std::string(text) + "' (byte, vocab:PATH, external)");
    }
    return spec;
}

PredictorSpec parse_predictor_spec(std::string_view text)
{
    PredictorSpec spec;
    if (text == "uniform") {
        spec.kind = PredictorKind::uniform;
    } else if (text == "adaptive") {
        spec.kind = PredictorKind::adaptive;
    } else if (text == "external") {
        spec.kind = PredictorKind::external;
    } else if (text.rfind("external:", 0) == 0 && text.size() > 9) {
        spec.kind = PredictorKind::external;
        spec.address = std::string(text.substr(9));
    } else {
        fail(Errc::invalid_argument,
             "unknown predictor '" + std::string(text) + "' (uniform, adaptive, external[:ADDR])");
    }
    return spec;
}

std::string resolve_bridge_address(const std::string& explicit_address)
{
    if (!explicit_address.empty())
        return explicit_address;
    if (const char* env = std::getenv(kBridgeAddressEnv); env && *env)
        return env;
    fail(Errc::invalid_argument, std::string("no bridge address: use external:ADDR or set ") + kBridgeAddressEnv);
}

Session::Session(const TokenizerSpec& tokenizer, const PredictorSpec& predictor, std::chrono::milliseconds timeout)
    : predictor_(predictor)
{
    const bool needs_bridge =
        tokenizer.kind == TokenizerKind::external || predictor.kind == PredictorKind::external;
    if (needs_bridge) {
        bridge_ = BridgeClient::connect(resolve_bridge_address(predictor.address), timeout);
        if (predictor_.kind == PredictorKind::external)
            predictor_.model_tag = bridge_->hello().model_tag;
    }

    switch (tokenizer.kind) {
    case TokenizerKind::byte:
        tokenizer_ = std::make_unique<VocabularyTokenizer>(Vocabulary::bytes());
        break;
    case TokenizerKind::vocab:
        tokenizer_ = std::make_unique<VocabularyTokenizer>(Vocabulary::load(tokenizer.vocab_path));
        break;
    case TokenizerKind::external:
        tokenizer_ = std::make_unique<ExternalTokenizer>(*bridge_);
        break;
    }

    if (predictor_.kind == PredictorKind::external && bridge_->hello().vocab_size != tokenizer_->vocab_size())
        fail(Errc::invalid_argument, "tokenizer vocabulary size " + std::to_string(tokenizer_->vocab_size())
                                         + " differs from the bridge model's "
                                         + std::to_string(bridge_->hello().vocab_size));
    if (predictor_.kind == PredictorKind::adaptive && predictor_.order > kMaxAdaptiveOrder)
        fail(Errc::invalid_argument, "adaptive order must be at most " + std::to_string(kMaxAdaptiveOrder));
}

std::unique_ptr<Predictor> Session::fresh_predictor()
{
    if (predictor_.kind == PredictorKind::external)
        return std::make_unique<RemotePredictor>(*bridge_, predictor_.memory);
    return make_local_predictor(predictor_, vocab_size());
}

EncodedPayload encode_payload(CodecId codec, std::span<const TokenId> tokens, Predictor& predictor,
                              CodelengthTally* tally, int deflate_level)
{
    EncodedPayload out;
    switch (codec) {
    case CodecId::rank: {
        const auto ranks = to_ranks(tokens, predictor, tally);
        out.bytes = encode_ranks(ranks, deflate_level);
        out.codec_param = static_cast<std::uint8_t>(deflate_level);
        break;
    }
    case CodecId::tbyt: {
        auto enc = tbyt_encode(tokens, predictor, tally);
        out.bytes = std::move(enc.bytes);
        out.padding_bits = enc.padding_bits;
        out.tbyt_profile = std::move(enc.profile);
        break;
    }
    case CodecId::ac:
        out.bytes = ac_encode(tokens, predictor, tally);
        break;
    }
    return out;
}

std::vector<TokenId> decode_payload(CodecId codec, std::span<const std::uint8_t> payload, std::size_t n_tokens,
                                    Predictor& predictor, std::uint8_t padding_bits)
{
    switch (codec) {
    case CodecId::rank: {
        const auto ranks = decode_ranks(payload);
        if (ranks.size() != n_tokens)
            fail(Errc::corrupt_stream, "rank payload holds " + std::to_string(ranks.size()) + " ranks, header says "
                                           + std::to_string(n_tokens));
        return from_ranks(ranks, predictor);
    }
    case CodecId::tbyt:
        return tbyt_decode(payload, n_tokens, predictor, padding_bits);
    case CodecId::ac:
        return ac_decode(payload, n_tokens, predictor);
    }
    fail(Errc::corrupt_stream, "unknown codec");
}

CompressResult compress(std::string_view input, const CompressOptions& options)
{
    std::string preprocessed;
    if (options.preprocess_text8)
        preprocessed = preprocess_text8(input);
    const std::string_view text = options.preprocess_text8 ? std::string_view(preprocessed) : input;

    Session session(options.tokenizer, options.predictor, options.bridge_timeout);
    const TokenStream stream = session.tokenizer().tokenize(text);
    const auto ids = stream.ids();

    auto predictor = session.fresh_predictor();
    CodelengthTally tally;
    auto payload = encode_payload(options.codec, ids, *predictor, &tally, options.deflate_level);

    const PredictorSpec& spec = session.predictor_spec();
    ContainerHeader h;
    h.codec = options.codec;
    h.codec_param = payload.codec_param;
    h.tokenizer = session.tokenizer().kind();
    if (h.tokenizer != TokenizerKind::byte)
        h.vocab_digest = session.tokenizer().digest();
    h.predictor = spec.kind;
    if (spec.kind != PredictorKind::uniform)
        h.memory = spec.memory;
    if (spec.kind == PredictorKind::adaptive)
        h.order = spec.order;
    h.model_tag = spec.kind == PredictorKind::external ? spec.model_tag : std::string();
    h.n_tokens = stream.n_tokens();
    h.n_chars = stream.n_chars();
    h.padding_bits = payload.padding_bits;
    h.crc = crc32(text);

    CompressResult result;
    result.container = write_container(h, payload.bytes);
    h.payload_len = payload.bytes.size();
    result.header = h;
    result.header_bytes = header_size(h);

    auto& m = result.metrics;
    m.n_chars = stream.n_chars();
    m.n_tokens = stream.n_tokens();
    m.cross_entropy_bits = tally.ideal_bits.value();
    const std::uint64_t payload_bits = std::uint64_t{8} * payload.bytes.size();
    switch (options.codec) {
    case CodecId::rank: m.rank_bits = payload_bits; break;
    case CodecId::tbyt:
        m.tbyt_bits = payload.tbyt_profile.total_bits;
        m.tbyt_emitted_bits = payload.tbyt_profile.emitted_bits;
        break;
    case CodecId::ac: m.ac_bits = payload_bits; break;
    }
    m.deflate_bits = std::uint64_t{8} * deflate_raw(text).size();
    return result;
}

namespace {

[[noreturn]] void mismatch(const std::string& what)
{
    fail(Errc::predictor_mismatch, "refusing to decompress: " + what);
}

} // namespace

std::string decompress(std::span<const std::uint8_t> container, const DecompressOptions& options)
{
    const ContainerView view = read_container(container);
    const ContainerHeader& h = view.header;

    if (options.predictor && *options.predictor != h.predictor)
        mismatch(std::string("container was written with the ") + predictor_name(h.predictor) + " predictor, not "
                 + predictor_name(*options.predictor));
    if (options.memory && h.predictor != PredictorKind::uniform && *options.memory != h.memory)
        mismatch("container was written with memory " + std::to_string(h.memory));
    if (options.order && h.predictor == PredictorKind::adaptive && *options.order != h.order)
        mismatch("container was written with order " + std::to_string(h.order));
    if (h.predictor == PredictorKind::adaptive && h.order > kMaxAdaptiveOrder)
        fail(Errc::corrupt_stream, "adaptive order in header out of range");

    TokenizerSpec tok;
    tok.kind = h.tokenizer;
    if (options.tokenizer) {
        // A byte-identity vocabulary file is reported as the byte tokenizer.
        const bool byte_equivalent = h.tokenizer == TokenizerKind::byte && options.tokenizer->kind == TokenizerKind::vocab;
        if (options.tokenizer->kind != h.tokenizer && !byte_equivalent)
            mismatch("tokenizer differs from the one recorded in the container");
        if (options.tokenizer->kind == TokenizerKind::vocab)
            tok = *options.tokenizer;
        if (byte_equivalent)
            tok.kind = TokenizerKind::vocab;
    } else if (h.tokenizer == TokenizerKind::vocab) {
        fail(Errc::invalid_argument, "container uses a vocabulary tokenizer; pass --tokenizer vocab:PATH");
    }

    PredictorSpec pspec = h.predictor_spec();
    pspec.address = options.bridge_address;
    Session session(tok, pspec, options.bridge_timeout);

    if (session.tokenizer().kind() != h.tokenizer)
        mismatch("tokenizer differs from the one recorded in the container");
    if (h.tokenizer != TokenizerKind::byte && session.tokenizer().digest() != h.vocab_digest)
        mismatch("vocabulary digest " + to_hex(session.tokenizer().digest()) + " does not match the container's "
                 + to_hex(h.vocab_digest));
    if (h.predictor == PredictorKind::external && session.predictor_spec().model_tag != h.model_tag)
        mismatch("bridge model tag '" + session.predictor_spec().model_tag + "' does not match the container's '"
                 + h.model_tag + "'");

    auto predictor = session.fresh_predictor();
    const auto ids = decode_payload(h.codec, view.payload, h.n_tokens, *predictor, h.padding_bits);

    std::string text;
    try {
        text = session.tokenizer().detokenize(ids);
    } catch (const Error& e) {
        if (e.code() == Errc::invalid_stream)
            fail(Errc::corrupt_stream, e.what());
        throw;
    }
    if (text.size() != h.n_chars)
        fail(Errc::corrupt_stream, "decoded " + std::to_string(text.size()) + " bytes, header says "
                                       + std::to_string(h.n_chars));
    if (crc32(text) != h.crc)
        fail(Errc::corrupt_stream, "crc32 mismatch after decoding");
    return text;
}

} // namespace lmz
