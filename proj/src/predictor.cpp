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

#include "lmzip/predictor.hpp"

#include "lmzip/error.hpp"

namespace lmz {

const char* predictor_name(PredictorKind kind) noexcept
{
    switch (kind) {
    case PredictorKind::uniform: return "uniform";
    case PredictorKind::adaptive: return "adaptive";
    case PredictorKind::external: return "external";
    }
    return "unknown";
}

bool PredictorSpec::same_model(const PredictorSpec& other) const noexcept
{
    if (kind != other.kind)
        return false;
    switch (kind) {
    case PredictorKind::uniform:
        return true;
    case PredictorKind::adaptive:
        return memory == other.memory && order == other.order;
    case PredictorKind::external:
        return memory == other.memory && model_tag == other.model_tag;
    }
    return false;
}

UniformModel::UniformModel(std::size_t vocab_size)
{
    const std::vector<std::uint64_t> ones(vocab_size, 1);
    pmf_ = quantize_scores(ones);
}

std::unique_ptr<Predictor> make_local_predictor(const PredictorSpec& spec, std::size_t vocab_size)
{
    switch (spec.kind) {
    case PredictorKind::uniform:
        return std::make_unique<UniformModel>(vocab_size);
    case PredictorKind::adaptive:
        return std::make_unique<AdaptiveModel>(vocab_size, spec.order, spec.memory);
    case PredictorKind::external:
        break;
    }
    fail(Errc::invalid_argument, "external predictors are created through the bridge client");
}

} // namespace lmz
