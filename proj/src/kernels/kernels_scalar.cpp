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

#include "lmzip/kernels.hpp"

namespace lmz::kernels {

namespace {

std::uint32_t prefix_sum_scalar(const std::uint32_t* w, std::size_t n)
{
    std::uint32_t sum = 0;
    for (std::size_t i = 0; i < n; ++i)
        sum += w[i];
    return sum;
}

std::uint32_t rank_of_scalar(const std::uint32_t* w, std::size_t d, std::uint32_t token)
{
    const std::uint32_t wx = w[token];
    std::uint32_t rank = 0;
    for (std::size_t t = 0; t < token; ++t)
        rank += w[t] >= wx;
    for (std::size_t t = token + 1; t < d; ++t)
        rank += w[t] > wx;
    return rank;
}

std::uint32_t locate_scalar(const std::uint32_t* w, std::size_t d, std::uint32_t target, std::uint32_t* cum_lo)
{
    std::uint32_t cum = 0;
    for (std::size_t t = 0; t < d; ++t) {
        if (target < cum + w[t]) {
            *cum_lo = cum;
            return static_cast<std::uint32_t>(t);
        }
        cum += w[t];
    }
    *cum_lo = cum;
    return static_cast<std::uint32_t>(d);
}

CanonicalCode canonical_code_scalar(const std::uint32_t* w, std::size_t d, std::uint32_t token)
{
    const std::uint32_t lx = emitted_length(w[token]);
    std::uint32_t code = 0;
    for (std::size_t t = 0; t < d; ++t) {
        const std::uint32_t l = emitted_length(w[t]);
        if (l < lx)
            code += std::uint32_t{1} << (lx - l);
        else if (l == lx && t < token)
            code += 1;
    }
    return {code, lx};
}

std::uint32_t kraft_numerator_scalar(const std::uint32_t* w, std::size_t d)
{
    std::uint32_t sum = 0;
    for (std::size_t t = 0; t < d; ++t)
        sum += std::uint32_t{1} << (24 - emitted_length(w[t]));
    return sum;
}

void length_histogram_scalar(const std::uint32_t* w, std::size_t d, LengthHistogram* out)
{
    out->fill(0);
    for (std::size_t t = 0; t < d; ++t)
        ++(*out)[emitted_length(w[t])];
}

constexpr KernelTable kScalar{
    "scalar",
    prefix_sum_scalar,
    rank_of_scalar,
    locate_scalar,
    canonical_code_scalar,
    kraft_numerator_scalar,
    length_histogram_scalar,
};

} // namespace

const KernelTable& scalar() noexcept
{
    return kScalar;
}

} // namespace lmz::kernels
