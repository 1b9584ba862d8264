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

#ifndef LMZIP_PIPELINE_HPP
#define LMZIP_PIPELINE_HPP

#include "lmzip/bridge.hpp"
#include "lmzip/codelength.hpp"
#include "lmzip/container.hpp"
#include "lmzip/metrics.hpp"
#include "lmzip/predictor.hpp"
#include "lmzip/tbyt_codec.hpp"
#include "lmzip/tokenizer.hpp"

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lmz {

inline constexpr const char* kBridgeAddressEnv = "LMZIP_BRIDGE_ADDR";

struct TokenizerSpec {
    TokenizerKind kind = TokenizerKind::byte;
    std::string vocab_path; // vocab only

    friend bool operator==(const TokenizerSpec&, const TokenizerSpec&) = default;
};

/// "byte", "vocab:PATH" or "external".
TokenizerSpec parse_tokenizer_spec(std::string_view text);

/// "uniform", "adaptive", "external" or "external:ADDR". Memory and order
/// keep their defaults.
PredictorSpec parse_predictor_spec(std::string_view text);

/// Where to reach the bridge: an explicit address, else LMZIP_BRIDGE_ADDR.
/// Throws invalid_argument if neither is set.
std::string resolve_bridge_address(const std::string& explicit_address);

/// Tokenizer, predictor factory, and the bridge connection they may share.
class Session {
public:
    /// Connects to the bridge if either side is external.
    Session(const TokenizerSpec& tokenizer, const PredictorSpec& predictor,
            std::chrono::milliseconds bridge_timeout = std::chrono::seconds(60));

    Tokenizer& tokenizer() noexcept { return *tokenizer_; }
    std::size_t vocab_size() const noexcept { return tokenizer_->vocab_size(); }
    BridgeClient* bridge() noexcept { return bridge_.get(); }

    /// Predictor spec with model_tag filled in from the bridge hello.
    const PredictorSpec& predictor_spec() const noexcept { return predictor_; }

    /// A new predictor with no history.
    std::unique_ptr<Predictor> fresh_predictor();

private:
    std::unique_ptr<BridgeClient> bridge_;
    std::unique_ptr<Tokenizer> tokenizer_;
    PredictorSpec predictor_;
};

struct EncodedPayload {
    std::vector<std::uint8_t> bytes;
    std::uint8_t padding_bits = 0;
    std::uint8_t codec_param = 0;
    CodeLengthProfile tbyt_profile; // tbyt only
};

/// Runs one codec over `tokens` with `predictor` (fresh).
EncodedPayload encode_payload(CodecId codec, std::span<const TokenId> tokens, Predictor& predictor,
                              CodelengthTally* tally = nullptr, int deflate_level = 9);

/// Inverse of encode_payload; throws corrupt_stream on any inconsistency.
std::vector<TokenId> decode_payload(CodecId codec, std::span<const std::uint8_t> payload, std::size_t n_tokens,
                                    Predictor& predictor, std::uint8_t padding_bits);

struct CompressOptions {
    CodecId codec = CodecId::ac;
    TokenizerSpec tokenizer;
    PredictorSpec predictor;
    bool preprocess_text8 = false;
    int deflate_level = 9;
    std::chrono::milliseconds bridge_timeout = std::chrono::seconds(60);
};

struct CompressResult {
    std::vector<std::uint8_t> container;
    ContainerHeader header;
    std::size_t header_bytes = 0;
    StreamMetrics metrics; // the chosen codec, plus the standalone DEFLATE baseline
};

CompressResult compress(std::string_view input, const CompressOptions& options);

/// Settings the caller asserts for decompression. Unset fields are taken
/// from the header; set fields that disagree with it are refused with
/// predictor_mismatch.
struct DecompressOptions {
    std::optional<PredictorKind> predictor;
    std::optional<std::uint32_t> memory;
    std::optional<std::uint8_t> order;
    std::optional<TokenizerSpec> tokenizer; // required for vocab containers (the file path)
    std::string bridge_address;
    std::chrono::milliseconds bridge_timeout = std::chrono::seconds(60);
};

std::string decompress(std::span<const std::uint8_t> container, const DecompressOptions& options = {});

} // namespace lmz

#endif
