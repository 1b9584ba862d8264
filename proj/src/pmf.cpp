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

#include "lmzip/pmf.hpp"

#include "lmzip/error.hpp"

#include <algorithm>
#include <functional>

namespace lmz {

QuantizedPmf::QuantizedPmf(std::vector<std::uint32_t> weights)
    : weights_(std::move(weights))
{
    if (!valid(weights_))
        fail(Errc::invalid_pmf, "weights must be >= 1 and sum to 2^24");
}

bool QuantizedPmf::valid(std::span<const std::uint32_t> weights) noexcept
{
    if (weights.empty())
        return false;
    std::uint64_t sum = 0;
    for (const auto w : weights) {
        if (w == 0)
            return false;
        sum += w;
    }
    return sum == kPmfTotal;
}

namespace {

__extension__ typedef unsigned __int128 u128;

// Largest-remainder completion. Sum is u64 on the common path and u128 when
// the scores add up past 64 bits; Rem matches it.
template <typename Sum>
void quantize_with(std::span<const std::uint64_t> scores, bool all_zero, Sum sum, std::vector<std::uint32_t>& weights,
                   std::vector<Sum>& remainders, std::vector<Sum>& selection)
{
    const std::size_t d = scores.size();
    const std::uint64_t spread = kPmfTotal - d;
    weights.resize(d);
    remainders.resize(d);

    // Most tokens share a handful of score values (typically the smoothing
    // floor), so the last quotient/remainder pair is reused.
    std::uint64_t cached_score = ~std::uint64_t{0};
    std::uint64_t cached_q = 0;
    Sum cached_r = 0;
    std::uint64_t assigned = 0;
    for (std::size_t t = 0; t < d; ++t) {
        const std::uint64_t s = all_zero ? 1 : scores[t];
        if (s != cached_score) {
            const u128 n = static_cast<u128>(s) * spread;
            if ((n >> 64) == 0 && sizeof(Sum) == 8) {
                const auto n64 = static_cast<std::uint64_t>(n);
                cached_q = n64 / static_cast<std::uint64_t>(sum);
                cached_r = static_cast<Sum>(n64 % static_cast<std::uint64_t>(sum));
            } else {
                cached_q = static_cast<std::uint64_t>(n / sum);
                cached_r = static_cast<Sum>(n % sum);
            }
            cached_score = s;
        }
        weights[t] = static_cast<std::uint32_t>(1 + cached_q);
        remainders[t] = cached_r;
        assigned += 1 + cached_q;
    }

    const std::uint64_t residue = kPmfTotal - assigned;
    if (residue == 0)
        return;

    // Threshold = residue-th largest remainder. Everything above it gets a
    // unit; ties at the threshold are served in ascending id order.
    selection.assign(remainders.begin(), remainders.end());
    const auto nth = selection.begin() + static_cast<std::ptrdiff_t>(residue - 1);
    std::nth_element(selection.begin(), nth, selection.end(), std::greater<>{});
    const Sum threshold = *nth;

    std::uint64_t above = 0;
    for (const auto r : remainders)
        above += r > threshold;
    std::uint64_t at_threshold = residue - above;
    for (std::size_t t = 0; t < d; ++t) {
        if (remainders[t] > threshold) {
            ++weights[t];
        } else if (remainders[t] == threshold && at_threshold > 0) {
            ++weights[t];
            --at_threshold;
        }
    }
}

} // namespace

void ScoreQuantizer::quantize(std::span<const std::uint64_t> scores, QuantizedPmf& out)
{
    const std::size_t d = scores.size();
    if (d == 0)
        fail(Errc::invalid_argument, "cannot quantize an empty score vector");
    if (d > kPmfTotal / 2)
        fail(Errc::vocabulary_too_large, "vocabulary of " + std::to_string(d) + " tokens exceeds 2^23");

    u128 wide_sum = 0;
    for (const auto s : scores)
        wide_sum += s;
    const bool all_zero = wide_sum == 0;
    if (all_zero)
        wide_sum = d;

    if ((wide_sum >> 64) == 0) {
        quantize_with<std::uint64_t>(scores, all_zero, static_cast<std::uint64_t>(wide_sum), out.weights_,
                                     remainders_, selection_);
    } else {
        std::vector<u128> remainders;
        std::vector<u128> selection;
        quantize_with<u128>(scores, all_zero, wide_sum, out.weights_, remainders, selection);
    }
}

QuantizedPmf quantize_scores(std::span<const std::uint64_t> scores)
{
    ScoreQuantizer q;
    QuantizedPmf out;
    q.quantize(scores, out);
    return out;
}

} // namespace lmz
