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

#ifndef LMZIP_BRIDGE_HPP
#define LMZIP_BRIDGE_HPP

#include "lmzip/pmf.hpp"
#include "lmzip/predictor.hpp"
#include "lmzip/tokenizer.hpp"
#include "lmzip/tokens.hpp"

#include <chrono>
#include <cstdint>
#include <deque>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lmz {

// Client side of the external-predictor protocol.
//
// Every frame is  u32 length | u8 type | payload  where length counts the
// type byte and the payload. Integers are little-endian.
//
//   0x01 hello        client: u16 version
//                     server: u16 version, u32 D, u32 pmf_total, u32 max_memory,
//                             u32 tag_len, tag bytes (UTF-8)
//   0x02 predict      u32 n, n x u32 context ids (oldest first)
//   0x03 pmf          u8 mode; mode 0: D x u32 weights
//                              mode 1: u32 count, count x (u32 id, u32 weight),
//                                      u32 rest_weight
//   0x04 tokenize     request: u32 len, bytes
//                     reply:   u32 n, n x (u32 id, u32 byte_len)
//   0x05 detokenize   request: u32 n, n x u32 ids
//                     reply:   u32 len, bytes
//   0x7f error        UTF-8 message
//
// Any violation, timeout, or error frame surfaces as Errc::bridge_failure.

inline constexpr std::uint16_t kBridgeVersion = 1;
inline constexpr std::uint32_t kMaxFrameBytes = 1u << 28;

enum class FrameType : std::uint8_t {
    hello = 0x01,
    predict = 0x02,
    pmf = 0x03,
    tokenize = 0x04,
    detokenize = 0x05,
    error = 0x7f,
};

struct Frame {
    FrameType type = FrameType::error;
    std::vector<std::uint8_t> payload;
};

/// A reliable byte stream to the server.
class Transport {
public:
    virtual ~Transport() = default;
    virtual void write_all(std::span<const std::uint8_t> bytes) = 0;
    /// Fills `out` completely or throws bridge_failure (EOF or timeout).
    virtual void read_exact(std::span<std::uint8_t> out) = 0;
};

/// "host:port", "tcp://host:port", or "exec:COMMAND" (spawned through
/// /bin/sh, frames over its stdin/stdout).
std::unique_ptr<Transport> open_transport(const std::string& address, std::chrono::milliseconds timeout);

void write_frame(Transport& t, FrameType type, std::span<const std::uint8_t> payload);
Frame read_frame(Transport& t);

struct BridgeHello {
    std::uint16_t version = kBridgeVersion;
    std::uint32_t vocab_size = 0;
    std::uint32_t pmf_total = kPmfTotal;
    std::uint32_t max_memory = 0;
    std::string model_tag;

    friend bool operator==(const BridgeHello&, const BridgeHello&) = default;
};

struct SparseWeight {
    TokenId id = 0;
    std::uint32_t weight = 0;
};

// Payload codecs, shared with test servers.
std::vector<std::uint8_t> encode_client_hello(std::uint16_t version = kBridgeVersion);
std::uint16_t decode_client_hello(std::span<const std::uint8_t> payload);
std::vector<std::uint8_t> encode_server_hello(const BridgeHello& hello);
BridgeHello decode_server_hello(std::span<const std::uint8_t> payload);
std::vector<std::uint8_t> encode_predict(std::span<const TokenId> context);
std::vector<TokenId> decode_predict(std::span<const std::uint8_t> payload);
std::vector<std::uint8_t> encode_dense_pmf(std::span<const std::uint32_t> weights);
std::vector<std::uint8_t> encode_sparse_pmf(std::span<const SparseWeight> listed, std::uint32_t rest_weight);
std::vector<std::uint8_t> encode_tokenize_request(std::string_view text);
std::string decode_tokenize_request(std::span<const std::uint8_t> payload);
std::vector<std::uint8_t> encode_tokenize_reply(std::span<const Token> tokens);
std::vector<Token> decode_tokenize_reply(std::span<const std::uint8_t> payload);
std::vector<std::uint8_t> encode_detokenize_request(std::span<const TokenId> ids);
std::vector<TokenId> decode_detokenize_request(std::span<const std::uint8_t> payload);
std::vector<std::uint8_t> encode_detokenize_reply(std::string_view text);
std::string decode_detokenize_reply(std::span<const std::uint8_t> payload);

/// Dense weights from a sparse reply: listed ids (strictly increasing) get
/// their weight, rest_weight is split evenly over the unlisted ids with the
/// remainder going one unit each to the lowest unlisted ids. Throws
/// bridge_failure unless the result is a valid QuantizedPmf.
QuantizedPmf expand_sparse(std::size_t vocab_size, std::span<const SparseWeight> listed, std::uint32_t rest_weight);

/// Parses a 0x03 payload for a vocabulary of `vocab_size` tokens.
QuantizedPmf decode_pmf(std::span<const std::uint8_t> payload, std::size_t vocab_size);

/// One connection; strictly request/response.
class BridgeClient {
public:
    /// Performs the hello exchange. Throws bridge_failure on a version or
    /// pmf_total mismatch or if D < 2.
    explicit BridgeClient(std::unique_ptr<Transport> transport);

    static std::unique_ptr<BridgeClient> connect(const std::string& address,
                                                 std::chrono::milliseconds timeout = std::chrono::seconds(60));

    const BridgeHello& hello() const noexcept { return hello_; }

    QuantizedPmf predict(std::span<const TokenId> context);
    std::vector<Token> tokenize(std::string_view text);
    std::string detokenize(std::span<const TokenId> ids);

private:
    Frame exchange(FrameType type, std::span<const std::uint8_t> payload, FrameType expect);

    std::unique_ptr<Transport> transport_;
    BridgeHello hello_;
};

/// Predictor backed by a bridge connection. Sends the last min(i-1, M)
/// tokens each epoch.
class RemotePredictor final : public Predictor {
public:
    /// Throws invalid_argument if memory exceeds the server's max_memory.
    RemotePredictor(BridgeClient& client, std::uint32_t memory);

    std::size_t vocab_size() const noexcept override { return client_.hello().vocab_size; }
    const QuantizedPmf& predict() override;
    void update(TokenId actual) override;

private:
    BridgeClient& client_;
    std::uint32_t memory_;
    std::deque<TokenId> window_;
    std::vector<TokenId> request_;
    QuantizedPmf pmf_;
    bool fresh_ = false;
};

/// Tokenizer delegated to the server (frames 0x04 / 0x05). Its digest is
/// the SHA-256 of the model tag.
class ExternalTokenizer final : public Tokenizer {
public:
    explicit ExternalTokenizer(BridgeClient& client) : client_(client) {}

    TokenizerKind kind() const noexcept override { return TokenizerKind::external; }
    std::size_t vocab_size() const noexcept override { return client_.hello().vocab_size; }
    Digest digest() const override;
    TokenStream tokenize(std::string_view text) override;
    std::string detokenize(std::span<const TokenId> ids) override;

private:
    BridgeClient& client_;
};

} // namespace lmz

#endif
