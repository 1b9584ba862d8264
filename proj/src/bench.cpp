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

#include "lmzip/bench.hpp"

#include "lmzip/deflate.hpp"
#include "lmzip/error.hpp"
#include "lmzip/text.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace lmz {

namespace {

struct BatchSpan {
    std::size_t first = 0;
    std::size_t count = 0;
};

std::vector<BatchSpan> plan_batches(std::size_t n_tokens, const BenchConfig& config)
{
    if (config.batch_tokens == 0)
        fail(Errc::invalid_argument, "batch size must be at least one token");
    if (n_tokens == 0)
        fail(Errc::undefined_statistic, "benchmark corpus is empty");

    std::size_t count = config.batch_count;
    if (count == 0)
        count = std::max<std::size_t>(1, n_tokens / config.batch_tokens);
    std::vector<BatchSpan> spans;
    if (config.batch_count == 0 && n_tokens < config.batch_tokens) {
        spans.push_back({0, n_tokens});
        return spans;
    }
    if (count > n_tokens / config.batch_tokens)
        fail(Errc::invalid_argument, fmt::format("corpus has {} tokens, too few for {} batches of {}", n_tokens,
                                                 count, config.batch_tokens));
    for (std::size_t b = 0; b < count; ++b)
        spans.push_back({b * config.batch_tokens, config.batch_tokens});
    return spans;
}

class Worker {
public:
    Worker(const BenchConfig& config, std::size_t vocab_size) : config_(config), vocab_size_(vocab_size) {}

    std::unique_ptr<Predictor> predictor(std::uint32_t memory)
    {
        PredictorSpec spec = config_.predictor;
        spec.memory = memory;
        if (spec.kind != PredictorKind::external)
            return make_local_predictor(spec, vocab_size_);
        if (!client_)
            client_ = BridgeClient::connect(resolve_bridge_address(spec.address), config_.bridge_timeout);
        return std::make_unique<RemotePredictor>(*client_, memory);
    }

private:
    const BenchConfig& config_;
    std::size_t vocab_size_;
    std::unique_ptr<BridgeClient> client_;
};

StreamMetrics run_batch(Worker& worker, std::uint32_t memory, const TokenStream& batch, std::string_view text,
                        const BenchConfig& config)
{
    StreamMetrics m;
    m.n_chars = batch.n_chars();
    m.n_tokens = batch.n_tokens();
    const auto ids = batch.ids();

    bool have_xent = false;
    for (const CodecId codec : config.codecs) {
        auto predictor = worker.predictor(memory);
        CodelengthTally tally;
        const auto payload = encode_payload(codec, ids, *predictor, &tally);
        if (!have_xent) {
            m.cross_entropy_bits = tally.ideal_bits.value();
            have_xent = true;
        }
        const std::uint64_t bits = std::uint64_t{8} * payload.bytes.size();
        switch (codec) {
        case CodecId::rank: m.rank_bits = bits; break;
        case CodecId::tbyt:
            m.tbyt_bits = payload.tbyt_profile.total_bits;
            m.tbyt_emitted_bits = payload.tbyt_profile.emitted_bits;
            break;
        case CodecId::ac: m.ac_bits = bits; break;
        }
    }
    if (!have_xent) {
        auto predictor = worker.predictor(memory);
        m.cross_entropy_bits = estimate_h_ub(batch, *predictor).bits;
    }
    if (config.deflate_baseline)
        m.deflate_bits = std::uint64_t{8} * deflate_raw(text).size();
    return m;
}

} // namespace

BenchReport run_bench(std::string_view corpus, const BenchConfig& config)
{
    std::string preprocessed;
    if (config.preprocess_text8)
        preprocessed = preprocess_text8(corpus);
    const std::string_view text = config.preprocess_text8 ? std::string_view(preprocessed) : corpus;

    Session session(config.tokenizer, config.predictor, config.bridge_timeout);
    const TokenStream stream = session.tokenizer().tokenize(text);
    const auto bounds = TokenBoundaryIndex::from_stream(stream);
    const auto spans = plan_batches(stream.n_tokens(), config);

    std::vector<TokenStream> batches;
    std::vector<std::string_view> batch_text;
    for (const auto& s : spans) {
        batches.push_back(stream.slice(s.first, s.count));
        const std::uint64_t begin = s.first == 0 ? 0 : bounds.boundaries[s.first - 1];
        const std::uint64_t end = bounds.boundaries[s.first + s.count - 1];
        batch_text.push_back(text.substr(begin, end - begin));
    }

    std::vector<std::uint32_t> memories = config.memories;
    if (memories.empty())
        memories.push_back(config.predictor.memory);

    unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, batches.size()));

    BenchReport report;
    report.codecs = config.codecs;
    report.deflate_baseline = config.deflate_baseline;

    for (const std::uint32_t memory : memories) {
        std::vector<StreamMetrics> rows(batches.size());
        std::atomic<std::size_t> next{0};
        std::exception_ptr error;
        std::mutex error_mutex;

        auto work = [&] {
            try {
                Worker worker(config, session.vocab_size());
                for (std::size_t b = next++; b < batches.size(); b = next++)
                    rows[b] = run_batch(worker, memory, batches[b], batch_text[b], config);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                next = batches.size();
            }
        };

        if (threads <= 1) {
            work();
        } else {
            std::vector<std::thread> pool;
            for (unsigned t = 0; t < threads; ++t)
                pool.emplace_back(work);
            for (auto& t : pool)
                t.join();
        }
        if (error)
            std::rethrow_exception(error);

        report.runs.push_back({memory, batch_stats(rows)});
    }
    return report;
}

namespace {

std::vector<Column> report_columns(const BenchReport& report)
{
    std::vector<Column> cols = {Column::n_chars, Column::n_tokens, Column::h_ub};
    for (const CodecId c : {CodecId::rank, CodecId::tbyt, CodecId::ac}) {
        if (std::find(report.codecs.begin(), report.codecs.end(), c) == report.codecs.end())
            continue;
        cols.push_back(c == CodecId::rank ? Column::rho_rank : c == CodecId::tbyt ? Column::rho_tbyt : Column::rho_ac);
    }
    if (report.deflate_baseline)
        cols.push_back(Column::rho_deflate);
    return cols;
}

bool is_count(Column c)
{
    return c == Column::n_chars || c == Column::n_tokens;
}

std::string cell(Column c, double v)
{
    return is_count(c) ? fmt::format("{:.0f}", v) : fmt::format("{:.4f}", v);
}

const ColumnSummary& summary(const BatchReport& r, Column c)
{
    for (const auto& s : r.columns)
        if (s.column == c)
            return s;
    fail(Errc::undefined_statistic, std::string("no summary for column ") + column_name(c));
}

} // namespace

std::string format_csv(const BenchReport& report)
{
    const auto cols = report_columns(report);
    std::string out = "# std: population (divide by n); total: token-weighted (sum of bits / sum of chars)\n";
    out += "M,row";
    for (const Column c : cols)
        out += fmt::format(",{}", column_name(c));
    out += '\n';

    auto full = [](double v) { return fmt::format("{:.17g}", v); };
    for (const auto& run : report.runs) {
        const auto& r = run.report;
        for (std::size_t b = 0; b < r.batches.size(); ++b) {
            out += fmt::format("{},{}", run.memory, b);
            for (const Column c : cols)
                out += "," + full(*column_value(r.batches[b], c));
            out += '\n';
        }
        for (const char* kind : {"mean", "std", "total"}) {
            out += fmt::format("{},{}", run.memory, kind);
            for (const Column c : cols) {
                const auto& s = summary(r, c);
                const double v = kind[0] == 'm' ? s.mean : kind[0] == 's' ? s.stddev : s.pooled;
                out += "," + full(v);
            }
            out += '\n';
        }
    }
    return out;
}

std::string format_table(const BenchReport& report)
{
    const auto cols = report_columns(report);
    std::string out;

    auto row = [&](const std::vector<std::string>& cells) {
        out += fmt::format("{:>8}", cells[0]);
        for (std::size_t i = 1; i < cells.size(); ++i)
            out += fmt::format("  {:>17}", cells[i]);
        out += '\n';
    };

    std::vector<std::string> head = {"batch"};
    for (const Column c : cols)
        head.emplace_back(column_name(c));

    for (const auto& run : report.runs) {
        const auto& r = run.report;
        out += fmt::format("M = {}  ({} batches)\n", run.memory, r.batches.size());
        row(head);
        for (std::size_t b = 0; b < r.batches.size(); ++b) {
            std::vector<std::string> cells = {std::to_string(b + 1)};
            for (const Column c : cols)
                cells.push_back(cell(c, *column_value(r.batches[b], c)));
            row(cells);
        }
        std::vector<std::string> mean = {"mean"};
        std::vector<std::string> total = {"total"};
        for (const Column c : cols) {
            const auto& s = summary(r, c);
            mean.push_back(is_count(c) ? cell(c, s.mean) : format_mean_std(s.mean, s.stddev));
            total.push_back(cell(c, s.pooled));
        }
        row(mean);
        row(total);
        out += '\n';
    }

    if (report.runs.size() > 1) {
        out += "memory sweep (token-weighted totals)\n";
        std::vector<std::string> sweep_head = {"M"};
        for (const Column c : cols)
            sweep_head.emplace_back(column_name(c));
        row(sweep_head);
        for (const auto& run : report.runs) {
            std::vector<std::string> cells = {std::to_string(run.memory)};
            for (const Column c : cols)
                cells.push_back(cell(c, summary(run.report, c).pooled));
            row(cells);
        }
        out += '\n';
    }
    out += "mean ± population std over batches; total = sum of bits / sum of chars\n";
    return out;
}

} // namespace lmz
