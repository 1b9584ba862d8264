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

#ifndef LMZIP_TESTS_TEST_UTIL_HPP
#define LMZIP_TESTS_TEST_UTIL_HPP

#include "lmzip/error.hpp"
#include "lmzip/pmf.hpp"
#include "lmzip/predictor.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace lmz::testing {

using Rng = std::mt19937_64;

std::string corpus_path();
const std::string& corpus(); // cached contents of the 1 MB sample

std::string random_bytes(Rng& rng, std::size_t n);

/// Text-like bytes drawn from a small alphabet, so codecs see repetition.
std::string random_text(Rng& rng, std::size_t n);

std::vector<TokenId> random_tokens(Rng& rng, std::size_t n, std::size_t vocab_size);

/// Random valid PMF; `skew` > 0 makes a few tokens dominate.
QuantizedPmf random_pmf(Rng& rng, std::size_t vocab_size, double skew = 0.0);

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const noexcept { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

/// Error code thrown by `f`, or nullopt if it returned normally.
template <typename F>
std::optional<Errc> error_of(F&& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return std::nullopt;
}

inline std::span<const std::uint8_t> as_bytes(std::string_view s)
{
    return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

/// Plays back a fixed list of PMFs, one per epoch, cycling if exhausted.
class ScriptedPredictor final : public Predictor {
public:
    explicit ScriptedPredictor(std::vector<QuantizedPmf> script) : script_(std::move(script)) {}
    std::size_t vocab_size() const noexcept override { return script_.front().size(); }
    const QuantizedPmf& predict() override { return script_[epoch_ % script_.size()]; }
    void update(TokenId) override { ++epoch_; }

private:
    std::vector<QuantizedPmf> script_;
    std::size_t epoch_ = 0;
};

/// Draws a fresh random PMF every epoch from a seed; copies replay identically.
class RandomPmfPredictor final : public Predictor {
public:
    RandomPmfPredictor(std::size_t vocab_size, std::uint64_t seed, double skew)
        : rng_(seed), vocab_size_(vocab_size), skew_(skew) {}
    std::size_t vocab_size() const noexcept override { return vocab_size_; }
    const QuantizedPmf& predict() override
    {
        if (!fresh_) {
            pmf_ = random_pmf(rng_, vocab_size_, skew_);
            fresh_ = true;
        }
        return pmf_;
    }
    void update(TokenId) override { fresh_ = false; }

private:
    Rng rng_;
    std::size_t vocab_size_;
    double skew_;
    QuantizedPmf pmf_;
    bool fresh_ = false;
};

} // namespace lmz::testing

#endif
