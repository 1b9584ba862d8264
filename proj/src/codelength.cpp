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

#include "lmzip/codelength.hpp"

#include "lmzip/error.hpp"

#include <cmath>

namespace lmz {

std::uint32_t code_length(std::uint64_t w, std::uint64_t total)
{
    if (w == 0 || w > total)
        fail(Errc::invalid_pmf, "code length needs 1 <= w <= total");
    __extension__ typedef unsigned __int128 u128;
    std::uint32_t bits = 0;
    while ((static_cast<u128>(w) << bits) < total)
        ++bits;
    return bits;
}

void CompensatedSum::add(double x) noexcept
{
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x))
        compensation_ += (sum_ - t) + x;
    else
        compensation_ += (x - t) + sum_;
    sum_ = t;
}

void CodelengthTally::observe(std::uint32_t weight)
{
    ideal_bits.add(static_cast<double>(kPmfBits) - std::log2(static_cast<double>(weight)));
    ceil_bits += code_length(weight);
    ++tokens;
}

} // namespace lmz
