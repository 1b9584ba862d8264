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

#include "lmzip/error.hpp"
#include "lmzip/predictor.hpp"

#include <algorithm>

namespace lmz {

AdaptiveModel::AdaptiveModel(std::size_t vocab_size, unsigned order, std::uint32_t memory)
    : vocab_size_(vocab_size)
    , order_(order)
    , memory_(memory)
    , root_counts_(vocab_size, 0)
    , nodes_(1)
    , scores_(vocab_size, 1)
{
    if (vocab_size < 1)
        fail(Errc::invalid_argument, "adaptive model needs a non-empty vocabulary");
    if (vocab_size > kPmfTotal / 2)
        fail(Errc::vocabulary_too_large, "vocabulary of " + std::to_string(vocab_size) + " tokens exceeds 2^23");
    if (order > kMaxAdaptiveOrder)
        fail(Errc::invalid_argument, "adaptive order " + std::to_string(order) + " exceeds the maximum of "
                                         + std::to_string(kMaxAdaptiveOrder));
}

std::uint32_t AdaptiveModel::child(std::uint32_t node, TokenId token) const
{
    const auto it = children_.find((std::uint64_t{node} << 32) | token);
    return it == children_.end() ? kNone : it->second;
}

std::uint32_t AdaptiveModel::child_or_create(std::uint32_t node, TokenId token)
{
    const auto [it, inserted] =
        children_.try_emplace((std::uint64_t{node} << 32) | token, static_cast<std::uint32_t>(nodes_.size()));
    if (inserted)
        nodes_.emplace_back();
    return it->second;
}

void AdaptiveModel::add_count(std::uint32_t node, TokenId token)
{
    if (node == 0) {
        ++root_counts_[token];
        ++nodes_[0].total;
        return;
    }
    auto& n = nodes_[node];
    ++n.total;
    for (auto& [t, c] : n.counts) {
        if (t == token) {
            ++c;
            return;
        }
    }
    n.counts.emplace_back(token, 1);
}

void AdaptiveModel::remove_count(std::uint32_t node, TokenId token)
{
    if (node == 0) {
        --root_counts_[token];
        --nodes_[0].total;
        return;
    }
    auto& n = nodes_[node];
    --n.total;
    for (std::size_t i = 0; i < n.counts.size(); ++i) {
        if (n.counts[i].first != token)
            continue;
        if (--n.counts[i].second == 0) {
            n.counts[i] = n.counts.back();
            n.counts.pop_back();
        }
        return;
    }
}

void AdaptiveModel::compute_scores()
{
    for (std::size_t t = 0; t < vocab_size_; ++t)
        scores_[t] = 1 + std::uint64_t{root_counts_[t]};

    // Context nodes are keyed most-recent-token first, so walking down the
    // tree visits orders 1, 2, ... of the current context.
    const std::size_t depth = std::min<std::size_t>(order_, window_.size());
    std::uint32_t node = 0;
    for (std::size_t j = 1; j <= depth; ++j) {
        node = child(node, window_[window_.size() - j]);
        if (node == kNone)
            break;
        const std::uint64_t scale = std::uint64_t{1} << (2 * j);
        for (const auto& [t, c] : nodes_[node].counts)
            scores_[t] += scale * c;
    }
    fresh_ = true;
}

const std::vector<std::uint64_t>& AdaptiveModel::scores()
{
    if (!fresh_)
        compute_scores();
    return scores_;
}

const QuantizedPmf& AdaptiveModel::predict()
{
    if (!pmf_fresh_) {
        if (!fresh_)
            compute_scores();
        quantizer_.quantize(scores_, pmf_);
        pmf_fresh_ = true;
    }
    return pmf_;
}

void AdaptiveModel::update(TokenId actual)
{
    if (actual >= vocab_size_)
        fail(Errc::invalid_stream, "token id " + std::to_string(actual) + " outside vocabulary");

    // n-grams ending at the new token whose context lies inside the window.
    const std::size_t depth = std::min<std::size_t>(order_, window_.size());
    std::uint32_t node = 0;
    add_count(node, actual);
    for (std::size_t j = 1; j <= depth; ++j) {
        node = child_or_create(node, window_[window_.size() - j]);
        add_count(node, actual);
    }

    window_.push_back(actual);
    if (window_.size() > memory_) {
        // Drop every n-gram that starts at the evicted position; the target of
        // the order-j n-gram is window_[j].
        const std::size_t max_j = std::min<std::size_t>({order_, memory_, window_.size() - 1});
        for (std::size_t j = 0; j <= max_j; ++j) {
            std::uint32_t n = 0;
            for (std::size_t m = j; m-- > 0;) {
                n = child(n, window_[m]);
                if (n == kNone)
                    break;
            }
            if (n != kNone)
                remove_count(n, window_[j]);
        }
        window_.pop_front();
    }
    fresh_ = false;
    pmf_fresh_ = false;
}

} // namespace lmz
