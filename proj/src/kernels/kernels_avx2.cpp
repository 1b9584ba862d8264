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

#include <immintrin.h>

namespace lmz::kernels {

namespace {

inline std::uint32_t hsum_epi32(__m256i v)
{
    __m128i s = _mm_add_epi32(_mm256_castsi256_si128(v), _mm256_extracti128_si256(v, 1));
    s = _mm_add_epi32(s, _mm_shuffle_epi32(s, _MM_SHUFFLE(1, 0, 3, 2)));
    s = _mm_add_epi32(s, _mm_shuffle_epi32(s, _MM_SHUFFLE(2, 3, 0, 1)));
    return static_cast<std::uint32_t>(_mm_cvtsi128_si32(s));
}

inline __m256i load8(const std::uint32_t* p)
{
    return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p));
}

// max(1, 24 - floor(log2 w)) per lane. Weights are <= 2^24, so the int ->
// float conversion is exact and the biased exponent is floor(log2 w) + 127.
inline __m256i emitted_length8(__m256i w)
{
    const __m256i bits = _mm256_castps_si256(_mm256_cvtepi32_ps(w));
    const __m256i e = _mm256_sub_epi32(_mm256_srli_epi32(bits, 23), _mm256_set1_epi32(127));
    return _mm256_max_epi32(_mm256_sub_epi32(_mm256_set1_epi32(24), e), _mm256_set1_epi32(1));
}

std::uint32_t prefix_sum_avx2(const std::uint32_t* w, std::size_t n)
{
    __m256i acc = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8)
        acc = _mm256_add_epi32(acc, load8(w + i));
    std::uint32_t sum = hsum_epi32(acc);
    for (; i < n; ++i)
        sum += w[i];
    return sum;
}

// Lanes with w > threshold, over [lo, hi).
std::uint32_t count_greater(const std::uint32_t* w, std::size_t lo, std::size_t hi, std::uint32_t threshold)
{
    const __m256i th = _mm256_set1_epi32(static_cast<int>(threshold));
    __m256i acc = _mm256_setzero_si256();
    std::size_t i = lo;
    for (; i + 8 <= hi; i += 8)
        acc = _mm256_sub_epi32(acc, _mm256_cmpgt_epi32(load8(w + i), th));
    std::uint32_t count = hsum_epi32(acc);
    for (; i < hi; ++i)
        count += w[i] > threshold;
    return count;
}

std::uint32_t rank_of_avx2(const std::uint32_t* w, std::size_t d, std::uint32_t token)
{
    const std::uint32_t wx = w[token];
    // w >= wx  <=>  w > wx - 1, and wx >= 1.
    return count_greater(w, 0, token, wx - 1) + count_greater(w, token + 1, d, wx);
}

std::uint32_t locate_avx2(const std::uint32_t* w, std::size_t d, std::uint32_t target, std::uint32_t* cum_lo)
{
    std::uint32_t cum = 0;
    std::size_t t = 0;
    for (; t + 8 <= d; t += 8) {
        const std::uint32_t block = hsum_epi32(load8(w + t));
        if (target < cum + block)
            break;
        cum += block;
    }
    for (; t < d; ++t) {
        if (target < cum + w[t]) {
            *cum_lo = cum;
            return static_cast<std::uint32_t>(t);
        }
        cum += w[t];
    }
    *cum_lo = cum;
    return static_cast<std::uint32_t>(d);
}

CanonicalCode canonical_code_avx2(const std::uint32_t* w, std::size_t d, std::uint32_t token)
{
    const std::uint32_t lx = emitted_length(w[token]);
    const __m256i vlx = _mm256_set1_epi32(static_cast<int>(lx));
    const __m256i vtok = _mm256_set1_epi32(static_cast<int>(token));
    const __m256i one = _mm256_set1_epi32(1);
    __m256i idx = _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7);
    const __m256i step = _mm256_set1_epi32(8);

    __m256i acc = _mm256_setzero_si256();
    std::size_t t = 0;
    for (; t + 8 <= d; t += 8) {
        const __m256i l = emitted_length8(load8(w + t));
        const __m256i shorter = _mm256_cmpgt_epi32(vlx, l);
        const __m256i shifted = _mm256_sllv_epi32(one, _mm256_sub_epi32(vlx, l));
        const __m256i same_before = _mm256_and_si256(_mm256_cmpeq_epi32(l, vlx), _mm256_cmpgt_epi32(vtok, idx));
        acc = _mm256_add_epi32(acc, _mm256_and_si256(shorter, shifted));
        acc = _mm256_sub_epi32(acc, same_before);
        idx = _mm256_add_epi32(idx, step);
    }
    std::uint32_t code = hsum_epi32(acc);
    for (; t < d; ++t) {
        const std::uint32_t l = emitted_length(w[t]);
        if (l < lx)
            code += std::uint32_t{1} << (lx - l);
        else if (l == lx && t < token)
            code += 1;
    }
    return {code, lx};
}

std::uint32_t kraft_numerator_avx2(const std::uint32_t* w, std::size_t d)
{
    const __m256i one = _mm256_set1_epi32(1);
    const __m256i v24 = _mm256_set1_epi32(24);
    __m256i acc = _mm256_setzero_si256();
    std::size_t t = 0;
    for (; t + 8 <= d; t += 8) {
        const __m256i l = emitted_length8(load8(w + t));
        acc = _mm256_add_epi32(acc, _mm256_sllv_epi32(one, _mm256_sub_epi32(v24, l)));
    }
    std::uint32_t sum = hsum_epi32(acc);
    for (; t < d; ++t)
        sum += std::uint32_t{1} << (24 - emitted_length(w[t]));
    return sum;
}

void length_histogram_avx2(const std::uint32_t* w, std::size_t d, LengthHistogram* out)
{
    out->fill(0);
    alignas(32) std::uint32_t lanes[8];
    std::size_t t = 0;
    for (; t + 8 <= d; t += 8) {
        _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), emitted_length8(load8(w + t)));
        for (const auto l : lanes)
            ++(*out)[l];
    }
    for (; t < d; ++t)
        ++(*out)[emitted_length(w[t])];
}

constexpr KernelTable kAvx2{
    "avx2",
    prefix_sum_avx2,
    rank_of_avx2,
    locate_avx2,
    canonical_code_avx2,
    kraft_numerator_avx2,
    length_histogram_avx2,
};

} // namespace

const KernelTable* avx2_table() noexcept
{
    return &kAvx2;
}

} // namespace lmz::kernels
