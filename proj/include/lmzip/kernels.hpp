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

#ifndef LMZIP_KERNELS_HPP
#define LMZIP_KERNELS_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

// Per-epoch O(D) loops over a QuantizedPmf's weights. Every kernel has a
// scalar reference and, where the build and CPU allow it, an AVX2 variant
// that must return identical results. active() picks the variant once at
// startup; LMZIP_KERNELS=scalar|avx2 in the environment overrides it.
//
// All kernels assume a valid QuantizedPmf: 1 <= w <= 2^24 and sum(w) == 2^24.

namespace lmz::kernels {

struct CanonicalCode {
    std::uint32_t code = 0;   // right-aligned codeword
    std::uint32_t length = 0; // bits, 1..24

    friend bool operator==(const CanonicalCode&, const CanonicalCode&) = default;
};

// Emitted codeword length for a weight: max(1, 24 - floor(log2 w)).
inline constexpr std::uint32_t emitted_length(std::uint32_t w) noexcept
{
    const std::uint32_t floor_log2 = 31u - static_cast<std::uint32_t>(__builtin_clz(w));
    return floor_log2 >= 24 ? 1u : 24u - floor_log2;
}

using LengthHistogram = std::array<std::uint32_t, 25>;

struct KernelTable {
    const char* name;

    // Sum of w[0..n).
    std::uint32_t (*prefix_sum)(const std::uint32_t* w, std::size_t n);

    // Position of `token` in (weight desc, id asc) order.
    std::uint32_t (*rank_of)(const std::uint32_t* w, std::size_t d, std::uint32_t token);

    // Token t with cum(t) <= target < cum(t) + w[t]; cum(t) goes to *cum_lo.
    // Returns d if target >= sum(w).
    std::uint32_t (*locate)(const std::uint32_t* w, std::size_t d, std::uint32_t target, std::uint32_t* cum_lo);

    // Canonical prefix code over lengths emitted_length(w[t]) assigned in
    // (length, id) order; returns the codeword of `token`.
    CanonicalCode (*canonical_code)(const std::uint32_t* w, std::size_t d, std::uint32_t token);

    // sum_t 2^(24 - emitted_length(w[t])); the Kraft sum scaled by 2^24.
    std::uint32_t (*kraft_numerator)(const std::uint32_t* w, std::size_t d);

    // Number of tokens per emitted length (index 0 unused).
    void (*length_histogram)(const std::uint32_t* w, std::size_t d, LengthHistogram* out);
};

const KernelTable& scalar() noexcept;

// nullptr unless the AVX2 variant was compiled in and the CPU supports it.
const KernelTable* avx2() noexcept;

const KernelTable& active() noexcept;

} // namespace lmz::kernels

#endif
