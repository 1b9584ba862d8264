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

#ifndef LMZIP_CODELENGTH_HPP
#define LMZIP_CODELENGTH_HPP

#include "lmzip/pmf.hpp"

#include <cstdint>

namespace lmz {

/// ceil(log2(total / w)) in exact integer arithmetic. Throws invalid_pmf
/// unless 1 <= w <= total.
std::uint32_t code_length(std::uint64_t w, std::uint64_t total = kPmfTotal);

/// Compensated (Neumaier) floating-point sum.
class CompensatedSum {
public:
    void add(double x) noexcept;
    double value() const noexcept { return sum_ + compensation_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

/// Ideal and ceiled code lengths of the coded tokens, accumulated per epoch
/// next to whichever codec is running.
struct CodelengthTally {
    CompensatedSum ideal_bits;     // sum log2(2^24 / w)
    std::uint64_t ceil_bits = 0;   // sum ceil(log2(2^24 / w))
    std::uint64_t tokens = 0;

    void observe(std::uint32_t weight);
};

} // namespace lmz

#endif
