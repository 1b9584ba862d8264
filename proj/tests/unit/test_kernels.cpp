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

#include "test_util.hpp"

#include "lmzip/codelength.hpp"
#include "lmzip/kernels.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>

using namespace lmz;
using lmz::testing::Rng;

namespace {

std::vector<std::uint32_t> make_weights(Rng& rng, std::size_t d, int shape)
{
    QuantizedPmf pmf;
    switch (shape % 5) {
    case 0: pmf = lmz::testing::random_pmf(rng, d); break;
    case 1: pmf = lmz::testing::random_pmf(rng, d, 2.0); break;
    case 2: pmf = quantize_scores(std::vector<std::uint64_t>(d, 1)); break;
    case 3: {
        std::vector<std::uint64_t> s(d, 0);
        s[rng() % d] = 1;
        pmf = quantize_scores(s);
        break;
    }
    default: {
        std::vector<std::uint64_t> s(d);
        for (auto& x : s)
            x = rng() % 3;
        pmf = quantize_scores(s);
        break;
    }
    }
    return {pmf.weights().begin(), pmf.weights().end()};
}

std::uint32_t oracle_rank(const std::vector<std::uint32_t>& w, std::uint32_t token)
{
    std::uint32_t r = 0;
    for (std::uint32_t t = 0; t < w.size(); ++t)
        if (w[t] > w[token] || (w[t] == w[token] && t < token))
            ++r;
    return r;
}

// Canonical code by the textbook sequential assignment.
std::vector<kernels::CanonicalCode> oracle_codes(const std::vector<std::uint32_t>& w)
{
    std::vector<std::uint32_t> len(w.size());
    for (std::size_t t = 0; t < w.size(); ++t)
        len[t] = std::max<std::uint32_t>(1, code_length(w[t]));
    std::vector<std::uint32_t> order(w.size());
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return len[a] < len[b]; });
    std::vector<kernels::CanonicalCode> codes(w.size());
    std::uint64_t code = 0;
    std::uint32_t prev = len[order[0]];
    for (const auto t : order) {
        code <<= (len[t] - prev);
        prev = len[t];
        codes[t] = {static_cast<std::uint32_t>(code), len[t]};
        ++code;
    }
    return codes;
}

std::vector<const kernels::KernelTable*> tables()
{
    std::vector<const kernels::KernelTable*> out = {&kernels::scalar()};
    if (kernels::avx2())
        out.push_back(kernels::avx2());
    return out;
}

} // namespace

TEST_SUITE("kernels")
{
    TEST_CASE("emitted length equals the clamped exact code length")
    {
        for (std::uint32_t w = 1; w <= kPmfTotal; w = w < 5000 ? w + 1 : w + w / 7 + 1)
            CHECK(kernels::emitted_length(w) == std::max<std::uint32_t>(1, code_length(w)));
        CHECK(kernels::emitted_length(kPmfTotal) == 1);
        CHECK(kernels::emitted_length(1) == 24);
    }

    TEST_CASE("active table is one of the compiled variants")
    {
        const auto& active = kernels::active();
        const bool known = &active == &kernels::scalar() || &active == kernels::avx2();
        CHECK(known);
        MESSAGE("active kernels: " << std::string(active.name) << (kernels::avx2() ? " (avx2 available)" : " (avx2 unavailable)"));
    }

    TEST_CASE("every variant matches the oracles")
    {
        Rng rng(2024);
        const std::vector<std::size_t> sizes = {1, 2, 3, 7, 8, 9, 15, 16, 17, 31, 33, 64, 100, 255, 256, 257, 1000, 32000};
        for (const auto* k : tables()) {
            CAPTURE(k->name);
            for (const auto d : sizes) {
                for (int shape = 0; shape < 5; ++shape) {
                    CAPTURE(d);
                    CAPTURE(shape);
                    const auto w = make_weights(rng, d, shape);
                    const auto codes = oracle_codes(w);

                    kernels::LengthHistogram hist{};
                    k->length_histogram(w.data(), d, &hist);
                    kernels::LengthHistogram expect_hist{};
                    std::uint64_t kraft = 0;
                    for (const auto& c : codes) {
                        ++expect_hist[c.length];
                        kraft += std::uint64_t{1} << (24 - c.length);
                    }
                    CHECK(hist == expect_hist);
                    CHECK(k->kraft_numerator(w.data(), d) == kraft);

                    const std::size_t probes = std::min<std::size_t>(d, 40);
                    for (std::size_t i = 0; i < probes; ++i) {
                        const auto t = static_cast<std::uint32_t>(i < 8 ? (i * d) / 8 : rng() % d);
                        CHECK(k->prefix_sum(w.data(), t) == std::accumulate(w.begin(), w.begin() + t, 0u));
                        CHECK(k->rank_of(w.data(), d, t) == oracle_rank(w, t));
                        CHECK(k->canonical_code(w.data(), d, t) == codes[t]);

                        const std::uint32_t target = static_cast<std::uint32_t>(rng() % kPmfTotal);
                        std::uint32_t lo = 0;
                        const std::uint32_t x = k->locate(w.data(), d, target, &lo);
                        std::uint32_t cum = 0;
                        std::uint32_t expect = 0;
                        while (cum + w[expect] <= target)
                            cum += w[expect++];
                        CHECK(x == expect);
                        CHECK(lo == cum);
                    }
                    std::uint32_t lo = 0;
                    CHECK(k->locate(w.data(), d, kPmfTotal - 1, &lo) == d - 1);
                    CHECK(k->locate(w.data(), d, 0, &lo) == 0);
                    CHECK(k->prefix_sum(w.data(), d) == kPmfTotal);
                }
            }
        }
    }

    TEST_CASE("scalar and avx2 agree on arbitrary weight vectors")
    {
        const auto* avx = kernels::avx2();
        if (!avx) {
            MESSAGE("AVX2 variant not available on this machine; equivalence not exercised");
            return;
        }
        const auto& sc = kernels::scalar();
        Rng rng(77);
        for (int trial = 0; trial < 300; ++trial) {
            const std::size_t d = 1 + rng() % 600;
            // Not a PMF: weights in [1, 2^24 / d], any tie structure.
            std::vector<std::uint32_t> w(d);
            const std::uint32_t cap = std::max<std::uint32_t>(1, kPmfTotal / static_cast<std::uint32_t>(d));
            for (auto& x : w)
                x = 1 + static_cast<std::uint32_t>(rng() % (trial % 3 == 0 ? 4 : cap));
            const std::uint32_t total = std::accumulate(w.begin(), w.end(), 0u);

            kernels::LengthHistogram h1{};
            kernels::LengthHistogram h2{};
            sc.length_histogram(w.data(), d, &h1);
            avx->length_histogram(w.data(), d, &h2);
            CHECK(h1 == h2);
            CHECK(sc.kraft_numerator(w.data(), d) == avx->kraft_numerator(w.data(), d));
            for (int probe = 0; probe < 10; ++probe) {
                const auto t = static_cast<std::uint32_t>(rng() % d);
                CHECK(sc.prefix_sum(w.data(), t) == avx->prefix_sum(w.data(), t));
                CHECK(sc.rank_of(w.data(), d, t) == avx->rank_of(w.data(), d, t));
                CHECK(sc.canonical_code(w.data(), d, t) == avx->canonical_code(w.data(), d, t));
                const auto target = static_cast<std::uint32_t>(rng() % (total + 5));
                std::uint32_t lo1 = 0;
                std::uint32_t lo2 = 0;
                const auto x1 = sc.locate(w.data(), d, target, &lo1);
                const auto x2 = avx->locate(w.data(), d, target, &lo2);
                CHECK(x1 == x2);
                if (x1 < d)
                    CHECK(lo1 == lo2);
            }
        }
    }
}
