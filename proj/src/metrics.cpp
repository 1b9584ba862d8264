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

#include "lmzip/metrics.hpp"

#include "lmzip/codelength.hpp"
#include "lmzip/error.hpp"

#include <fmt/format.h>

#include <cmath>

namespace lmz {

double StreamMetrics::h_ub_bpc() const
{
    if (n_chars == 0)
        fail(Errc::undefined_statistic, "entropy bound of an empty stream");
    return cross_entropy_bits / static_cast<double>(n_chars);
}

double StreamMetrics::h_ub_bits_per_token() const
{
    if (n_tokens == 0)
        fail(Errc::undefined_statistic, "entropy bound of an empty stream");
    return cross_entropy_bits / static_cast<double>(n_tokens);
}

HubEstimate estimate_h_ub(const TokenStream& stream, Predictor& predictor)
{
    if (stream.empty())
        fail(Errc::undefined_statistic, "entropy bound of an empty stream");
    CodelengthTally tally;
    for (const Token& t : stream.items()) {
        tally.observe(predictor.predict().weight(t.id));
        predictor.update(t.id);
    }
    HubEstimate est;
    est.bits = tally.ideal_bits.value();
    est.bpc = est.bits / static_cast<double>(stream.n_chars());
    est.bits_per_token = est.bits / static_cast<double>(stream.n_tokens());
    est.chars_per_token = mean_chars_per_token(stream);
    return est;
}

double compression_ratio(std::uint64_t n_bits, std::uint64_t n_chars)
{
    if (n_chars == 0)
        fail(Errc::undefined_statistic, "compression ratio of an empty input");
    return static_cast<double>(n_bits) / static_cast<double>(n_chars);
}

const char* column_name(Column column) noexcept
{
    switch (column) {
    case Column::n_chars: return "N_c";
    case Column::n_tokens: return "N_T";
    case Column::h_ub: return "H_ub";
    case Column::rho_rank: return "rho_rank";
    case Column::rho_tbyt: return "rho_tbyt";
    case Column::rho_ac: return "rho_ac";
    case Column::rho_deflate: return "rho_deflate";
    }
    return "?";
}

namespace {

const std::optional<std::uint64_t>* codec_bits(const StreamMetrics& m, Column column)
{
    switch (column) {
    case Column::rho_rank: return &m.rank_bits;
    case Column::rho_tbyt: return &m.tbyt_bits;
    case Column::rho_ac: return &m.ac_bits;
    case Column::rho_deflate: return &m.deflate_bits;
    default: return nullptr;
    }
}

std::optional<std::uint64_t> sum_bits(std::span<const StreamMetrics> batches,
                                      std::optional<std::uint64_t> StreamMetrics::*field)
{
    std::uint64_t total = 0;
    for (const auto& b : batches) {
        if (!(b.*field))
            return std::nullopt;
        total += *(b.*field);
    }
    return total;
}

} // namespace

std::optional<double> column_value(const StreamMetrics& m, Column column)
{
    switch (column) {
    case Column::n_chars: return static_cast<double>(m.n_chars);
    case Column::n_tokens: return static_cast<double>(m.n_tokens);
    case Column::h_ub: return m.h_ub_bpc();
    default: break;
    }
    const auto& bits = *codec_bits(m, column);
    if (!bits)
        return std::nullopt;
    return compression_ratio(*bits, m.n_chars);
}

BatchReport batch_stats(std::span<const StreamMetrics> batches)
{
    if (batches.empty())
        fail(Errc::undefined_statistic, "batch statistics over zero batches");

    BatchReport report;
    report.batches.assign(batches.begin(), batches.end());

    auto& t = report.totals;
    CompensatedSum xent;
    for (const auto& b : batches) {
        t.n_chars += b.n_chars;
        t.n_tokens += b.n_tokens;
        xent.add(b.cross_entropy_bits);
    }
    t.cross_entropy_bits = xent.value();
    t.rank_bits = sum_bits(batches, &StreamMetrics::rank_bits);
    t.tbyt_bits = sum_bits(batches, &StreamMetrics::tbyt_bits);
    t.tbyt_emitted_bits = sum_bits(batches, &StreamMetrics::tbyt_emitted_bits);
    t.ac_bits = sum_bits(batches, &StreamMetrics::ac_bits);
    t.deflate_bits = sum_bits(batches, &StreamMetrics::deflate_bits);

    const auto n = static_cast<double>(batches.size());
    for (const Column c : kAllColumns) {
        std::vector<double> values;
        values.reserve(batches.size());
        for (const auto& b : batches) {
            const auto v = column_value(b, c);
            if (!v)
                break;
            values.push_back(*v);
        }
        if (values.size() != batches.size())
            continue;

        CompensatedSum sum;
        for (const double v : values)
            sum.add(v);
        const double mean = sum.value() / n;
        CompensatedSum sq;
        for (const double v : values)
            sq.add((v - mean) * (v - mean));

        ColumnSummary s;
        s.column = c;
        s.mean = mean;
        s.stddev = std::sqrt(sq.value() / n);
        s.pooled = *column_value(t, c);
        report.columns.push_back(s);
    }
    return report;
}

std::string format_mean_std(double mean, double stddev)
{
    return fmt::format("{:.4f} ± {:.4f}", mean, stddev);
}

} // namespace lmz
