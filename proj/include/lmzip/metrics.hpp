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

#ifndef LMZIP_METRICS_HPP
#define LMZIP_METRICS_HPP

#include "lmzip/predictor.hpp"
#include "lmzip/tokens.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lmz {

/// Sizes and code lengths for one token stream. Bit counts are kept raw so
/// that totals over several streams can be pooled exactly.
struct StreamMetrics {
    std::uint64_t n_chars = 0;
    std::uint64_t n_tokens = 0;
    double cross_entropy_bits = 0.0; // sum log2(2^24 / w_i(x_i))

    std::optional<std::uint64_t> rank_bits;         // 8 * deflated rank payload
    std::optional<std::uint64_t> tbyt_bits;         // sum ceil(log2(2^24 / w_i))
    std::optional<std::uint64_t> tbyt_emitted_bits; // bits written, 1-bit clamp applied
    std::optional<std::uint64_t> ac_bits;           // 8 * range-coder payload
    std::optional<std::uint64_t> deflate_bits;      // 8 * raw DEFLATE of the text itself

    double h_ub_bpc() const;
    double h_ub_bits_per_token() const;
};

struct HubEstimate {
    double bits = 0.0;
    double bpc = 0.0;
    double bits_per_token = 0.0;
    Rational chars_per_token;
};

/// Runs `predictor` over the stream (it must be fresh) and returns the
/// cross-entropy upper bound. Throws undefined_statistic on an empty stream.
HubEstimate estimate_h_ub(const TokenStream& stream, Predictor& predictor);

/// N_b / N_c. Throws undefined_statistic when n_chars is zero.
double compression_ratio(std::uint64_t n_bits, std::uint64_t n_chars);

enum class Column : std::uint8_t {
    n_chars,
    n_tokens,
    h_ub,
    rho_rank,
    rho_tbyt,
    rho_ac,
    rho_deflate,
};

inline constexpr std::array<Column, 7> kAllColumns = {
    Column::n_chars, Column::n_tokens, Column::h_ub,  Column::rho_rank,
    Column::rho_tbyt, Column::rho_ac,  Column::rho_deflate,
};

const char* column_name(Column column) noexcept;

/// Per-stream value of a column (ratios in bpc), or nullopt if the codec
/// was not run.
std::optional<double> column_value(const StreamMetrics& m, Column column);

struct ColumnSummary {
    Column column = Column::h_ub;
    double mean = 0.0;   // unweighted mean over batches
    double stddev = 0.0; // population standard deviation (divide by n)
    double pooled = 0.0; // token-weighted: sum of bits / sum of chars (sums for counts)
};

struct BatchReport {
    std::vector<StreamMetrics> batches;
    std::vector<ColumnSummary> columns; // columns present in every batch
    StreamMetrics totals;               // summed counts and bits
};

/// Throws undefined_statistic on an empty batch set.
BatchReport batch_stats(std::span<const StreamMetrics> batches);

/// "0.7093 ± 0.0228"
std::string format_mean_std(double mean, double stddev);

} // namespace lmz

#endif
