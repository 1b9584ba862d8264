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

#ifndef LMZIP_PREDICTOR_HPP
#define LMZIP_PREDICTOR_HPP

#include "lmzip/pmf.hpp"
#include "lmzip/tokens.hpp"

#include <cstdint>
#include <deque>
#include <memory>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lmz {

enum class PredictorKind : std::uint8_t { uniform = 0, adaptive = 1, external = 2 };

const char* predictor_name(PredictorKind kind) noexcept;

inline constexpr unsigned kMaxAdaptiveOrder = 12;

struct PredictorSpec {
    PredictorKind kind = PredictorKind::adaptive;
    std::uint32_t memory = 64; // M, in tokens
    std::uint8_t order = 3;    // k, adaptive model only
    std::string address;       // external only; not part of the identity
    std::string model_tag;     // external only; filled in from the bridge hello

    /// Identity used for encoder/decoder agreement (address excluded).
    bool same_model(const PredictorSpec& other) const noexcept;
};

/// A stateful next-token source for one codec stream. predict() returns the
/// distribution for the next epoch and is stable until update() is called
/// with the token that actually occurred. Encoders and decoders drive their
/// own instance through the same predict/update sequence.
class Predictor {
public:
    virtual ~Predictor() = default;

    virtual std::size_t vocab_size() const noexcept = 0;
    virtual const QuantizedPmf& predict() = 0;
    virtual void update(TokenId actual) = 0;
};

class UniformModel final : public Predictor {
public:
    explicit UniformModel(std::size_t vocab_size);

    std::size_t vocab_size() const noexcept override { return pmf_.size(); }
    const QuantizedPmf& predict() override { return pmf_; }
    void update(TokenId) override {}

private:
    QuantizedPmf pmf_;
};

/// Memoryless model with a fixed distribution.
class StaticModel final : public Predictor {
public:
    explicit StaticModel(QuantizedPmf pmf) : pmf_(std::move(pmf)) {}

    std::size_t vocab_size() const noexcept override { return pmf_.size(); }
    const QuantizedPmf& predict() override { return pmf_; }
    void update(TokenId) override {}

private:
    QuantizedPmf pmf_;
};

/// Order-k backoff count model over a sliding window of the last M tokens.
///
/// score(t) = 1 + sum_{j=0..k} 4^j * c_j(ctx_j, t), where c_j counts how
/// often t followed the current length-j context inside the window. Counts
/// only cover n-grams lying entirely within the window, so a prediction is
/// a pure function of the last min(i-1, M) tokens.
class AdaptiveModel final : public Predictor {
public:
    AdaptiveModel(std::size_t vocab_size, unsigned order, std::uint32_t memory);

    std::size_t vocab_size() const noexcept override { return vocab_size_; }
    const QuantizedPmf& predict() override;
    void update(TokenId actual) override;

    unsigned order() const noexcept { return order_; }
    std::uint32_t memory() const noexcept { return memory_; }

    /// Raw scores for the next epoch (before quantization).
    const std::vector<std::uint64_t>& scores();

private:
    struct Node {
        std::uint64_t total = 0;
        std::vector<std::pair<TokenId, std::uint32_t>> counts;
    };

    std::uint32_t child(std::uint32_t node, TokenId token) const;
    std::uint32_t child_or_create(std::uint32_t node, TokenId token);
    void add_count(std::uint32_t node, TokenId token);
    void remove_count(std::uint32_t node, TokenId token);
    void compute_scores();

    static constexpr std::uint32_t kNone = 0xffffffffu;

    std::size_t vocab_size_;
    unsigned order_;
    std::uint32_t memory_;

    std::deque<TokenId> window_;
    std::vector<std::uint32_t> root_counts_; // order-0 counts, dense
    std::vector<Node> nodes_;                // nodes_[0] is the empty context
    std::unordered_map<std::uint64_t, std::uint32_t> children_;

    bool fresh_ = false;
    bool pmf_fresh_ = false;
    std::vector<std::uint64_t> scores_;
    ScoreQuantizer quantizer_;
    QuantizedPmf pmf_;
};

/// Builds a uniform or adaptive predictor. External predictors are created
/// through the bridge client.
std::unique_ptr<Predictor> make_local_predictor(const PredictorSpec& spec, std::size_t vocab_size);

} // namespace lmz

#endif
