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

#ifndef LMZIP_PMF_HPP
#define LMZIP_PMF_HPP

#include "lmzip/tokens.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace lmz {

inline constexpr unsigned kPmfBits = 24;
inline constexpr std::uint32_t kPmfTotal = std::uint32_t{1} << kPmfBits;

/// Integer next-token distribution: D weights, each >= 1, summing to
/// exactly kPmfTotal. This is the only form in which probabilities reach the
/// codecs, so encoder and decoder see bit-identical values.
class QuantizedPmf {
public:
    QuantizedPmf() = default;

    /// Validates the weights; throws invalid_pmf on a zero weight or a wrong sum.
    explicit QuantizedPmf(std::vector<std::uint32_t> weights);

    std::size_t size() const noexcept { return weights_.size(); }
    std::uint32_t weight(TokenId t) const { return weights_[t]; }
    std::span<const std::uint32_t> weights() const noexcept { return weights_; }

    friend bool operator==(const QuantizedPmf&, const QuantizedPmf&) = default;

    /// Checks the invariants without throwing.
    static bool valid(std::span<const std::uint32_t> weights) noexcept;

private:
    friend class ScoreQuantizer;
    std::vector<std::uint32_t> weights_;
};

/// Turns non-negative integer scores into a QuantizedPmf:
///
///   weight_t = 1 + floor(score_t * (kPmfTotal - D) / S),  S = sum of scores
///
/// and the residue kPmfTotal - sum(weight) goes one unit each to the tokens
/// with the largest fractional parts, ties to the lower id. An all-zero
/// score vector is treated as all ones. Exact integer arithmetic throughout.
///
/// Keeps its scratch buffers between calls; one instance per stream.
class ScoreQuantizer {
public:
    void quantize(std::span<const std::uint64_t> scores, QuantizedPmf& out);

private:
    std::vector<std::uint64_t> remainders_;
    std::vector<std::uint64_t> selection_;
};

QuantizedPmf quantize_scores(std::span<const std::uint64_t> scores);

} // namespace lmz

#endif
