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

#include "lmzip/io.hpp"

namespace lmz::testing {

std::string corpus_path()
{
    return std::string(LMZIP_TEST_DATA_DIR) + "/enwiki_text8_1mb.txt";
}

const std::string& corpus()
{
    static const std::string data = read_file(corpus_path());
    return data;
}

TempDir::TempDir()
{
    std::random_device rd;
    const auto base = std::filesystem::temp_directory_path();
    for (;;) {
        path_ = base / ("lmzip-test-" + std::to_string(rd()) + std::to_string(rd()));
        if (std::filesystem::create_directory(path_))
            return;
    }
}

TempDir::~TempDir()
{
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

std::string random_bytes(Rng& rng, std::size_t n)
{
    std::string s(n, '\0');
    std::uniform_int_distribution<int> byte(0, 255);
    for (auto& c : s)
        c = static_cast<char>(byte(rng));
    return s;
}

std::string random_text(Rng& rng, std::size_t n)
{
    static constexpr std::string_view alphabet = "etaoin shrdlu";
    std::string s(n, ' ');
    std::geometric_distribution<std::size_t> pick(0.3);
    for (auto& c : s)
        c = alphabet[std::min(pick(rng), alphabet.size() - 1)];
    return s;
}

std::vector<TokenId> random_tokens(Rng& rng, std::size_t n, std::size_t vocab_size)
{
    std::uniform_int_distribution<TokenId> tok(0, static_cast<TokenId>(vocab_size - 1));
    std::vector<TokenId> out(n);
    for (auto& t : out)
        t = tok(rng);
    return out;
}

QuantizedPmf random_pmf(Rng& rng, std::size_t vocab_size, double skew)
{
    std::vector<std::uint64_t> scores(vocab_size);
    std::uniform_int_distribution<std::uint64_t> base(0, 1000);
    for (auto& s : scores)
        s = base(rng);
    if (skew > 0.0) {
        std::uniform_int_distribution<std::size_t> which(0, vocab_size - 1);
        const auto boost = static_cast<std::uint64_t>(1000.0 * static_cast<double>(vocab_size) * skew);
        for (int i = 0; i < 3; ++i)
            scores[which(rng)] += boost;
    }
    return quantize_scores(scores);
}

} // namespace lmz::testing
