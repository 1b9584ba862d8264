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

// lmzip: compress, decompress, estimate and bench from the command line.

#include "lmzip/bench.hpp"
#include "lmzip/deflate.hpp"
#include "lmzip/error.hpp"
#include "lmzip/io.hpp"
#include "lmzip/kernels.hpp"
#include "lmzip/metrics.hpp"
#include "lmzip/pipeline.hpp"
#include "lmzip/text.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <iostream>

namespace {

constexpr std::uint32_t kDefaultMemory = 1u << 20;
constexpr unsigned kDefaultOrder = 8;

struct PredictorFlags {
    std::string predictor = "adaptive";
    std::uint32_t memory = kDefaultMemory;
    unsigned order = kDefaultOrder;
    std::string tokenizer = "byte";
    long timeout_ms = 60000;

    CLI::Option* predictor_opt = nullptr;
    CLI::Option* memory_opt = nullptr;
    CLI::Option* order_opt = nullptr;
    CLI::Option* tokenizer_opt = nullptr;

    void add(CLI::App& app)
    {
        predictor_opt = app.add_option("--predictor", predictor, "uniform | adaptive | external[:ADDR]")
                            ->capture_default_str();
        memory_opt = app.add_option("--memory", memory, "predictor memory M in tokens")->capture_default_str();
        order_opt = app.add_option("--order", order, "adaptive context order k")
                        ->check(CLI::Range(0u, lmz::kMaxAdaptiveOrder))
                        ->capture_default_str();
        tokenizer_opt = app.add_option("--tokenizer", tokenizer, "byte | vocab:PATH | external")
                            ->capture_default_str();
        app.add_option("--bridge-timeout-ms", timeout_ms, "per-read timeout for the external predictor")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
    }

    lmz::PredictorSpec spec() const
    {
        auto s = lmz::parse_predictor_spec(predictor);
        s.memory = memory;
        s.order = static_cast<std::uint8_t>(order);
        return s;
    }

    std::chrono::milliseconds timeout() const { return std::chrono::milliseconds(timeout_ms); }
};

lmz::CodecId to_codec(const std::string& name)
{
    const auto c = lmz::parse_codec(name);
    if (!c)
        lmz::fail(lmz::Errc::invalid_argument, "unknown codec '" + name + "' (rank, tbyt, ac)");
    return *c;
}

std::vector<lmz::CodecId> to_codecs(const std::vector<std::string>& names)
{
    std::vector<lmz::CodecId> out;
    for (const auto& n : names) {
        if (n == "all")
            return {lmz::CodecId::rank, lmz::CodecId::tbyt, lmz::CodecId::ac};
        out.push_back(to_codec(n));
    }
    return out;
}

// file_bytes is the container size, 0 when no container was written.
void print_metrics(const lmz::StreamMetrics& m, std::size_t header_bytes, std::size_t file_bytes)
{
    fmt::print("{:<14}{}\n", "N_c", m.n_chars);
    fmt::print("{:<14}{}\n", "N_T", m.n_tokens);
    if (m.n_chars == 0)
        return;
    fmt::print("{:<14}{:.6f} chars/token\n", "E[B]", static_cast<double>(m.n_chars) / static_cast<double>(m.n_tokens));
    fmt::print("{:<14}{:.6f} bpc   {:.6f} bits/token\n", "H_ub", m.h_ub_bpc(), m.h_ub_bits_per_token());
    auto ratio = [&](const char* name, const std::optional<std::uint64_t>& bits) {
        if (bits)
            fmt::print("{:<14}{:.6f} bpc   ({} bits)\n", name, lmz::compression_ratio(*bits, m.n_chars), *bits);
    };
    ratio("rho_rank", m.rank_bits);
    ratio("rho_tbyt", m.tbyt_bits);
    ratio("rho_tbyt_emit", m.tbyt_emitted_bits);
    ratio("rho_ac", m.ac_bits);
    if (file_bytes > 0)
        fmt::print("{:<14}{:.6f} bpc   (whole file, {} header bytes)\n", "rho_file",
                   lmz::compression_ratio(std::uint64_t{8} * file_bytes, m.n_chars), header_bytes);
    ratio("rho_deflate", m.deflate_bits);
}

std::string default_decompressed_name(const std::string& in)
{
    constexpr std::string_view ext = ".lmz";
    if (in.size() > ext.size() && in.compare(in.size() - ext.size(), ext.size(), ext) == 0)
        return in.substr(0, in.size() - ext.size());
    return in + ".out";
}

std::vector<std::uint32_t> parse_memories(const std::vector<std::string>& values, std::uint32_t fallback)
{
    std::vector<std::uint32_t> out;
    for (const auto& v : values) {
        try {
            std::size_t used = 0;
            const unsigned long x = std::stoul(v, &used);
            if (used != v.size() || x > 0xffffffffUL)
                throw std::invalid_argument(v);
            out.push_back(static_cast<std::uint32_t>(x));
        } catch (const std::logic_error&) {
            lmz::fail(lmz::Errc::invalid_argument, "bad memory value '" + v + "'");
        }
    }
    if (out.empty())
        out.push_back(fallback);
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"lmzip: language-model-driven text compression"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "lmzip 1.0.0");

    // compress
    auto* compress = app.add_subcommand("compress", "compress a file into an .lmz container");
    std::string c_in;
    std::string c_out;
    std::string c_codec = "ac";
    bool c_text8 = false;
    PredictorFlags c_flags;
    compress->add_option("input", c_in, "file to compress")->required();
    compress->add_option("--out,-o", c_out, "output path (default INPUT.lmz)");
    compress->add_option("--codec", c_codec, "rank | tbyt | ac")->capture_default_str();
    compress->add_flag("--preprocess-text8", c_text8, "reduce the input to lowercase letters and single spaces first");
    c_flags.add(*compress);

    // decompress
    auto* decompress = app.add_subcommand("decompress", "restore the text from an .lmz container");
    std::string d_in;
    std::string d_out;
    PredictorFlags d_flags;
    decompress->add_option("input", d_in, "container file")->required();
    decompress->add_option("--out,-o", d_out, "output path (default INPUT without .lmz)");
    d_flags.add(*decompress);

    // estimate
    auto* estimate = app.add_subcommand("estimate", "entropy upper bound and compression ratios of a file");
    std::string e_in;
    std::vector<std::string> e_codecs;
    bool e_text8 = false;
    PredictorFlags e_flags;
    estimate->add_option("input", e_in, "text file")->required();
    estimate->add_option("--codec", e_codecs, "codecs to run (rank, tbyt, ac, all)")->delimiter(',');
    estimate->add_flag("--preprocess-text8", e_text8, "reduce the input to lowercase letters and single spaces first");
    e_flags.add(*estimate);

    // bench
    auto* bench = app.add_subcommand("bench", "batched benchmark with a memory sweep");
    std::string b_in;
    std::string b_out;
    std::string b_report = "table";
    std::vector<std::string> b_codecs = {"all"};
    std::vector<std::string> b_memories;
    std::size_t b_batch_tokens = 100000;
    std::size_t b_batches = 0;
    unsigned b_threads = 0;
    bool b_text8 = false;
    PredictorFlags b_flags;
    bench->add_option("corpus", b_in, "corpus file")->required();
    bench->add_option("--out,-o", b_out, "write the report here instead of standard output");
    bench->add_option("--report", b_report, "csv | table")->check(CLI::IsMember({"csv", "table"}))->capture_default_str();
    bench->add_option("--codec", b_codecs, "codecs to run (rank, tbyt, ac, all)")->delimiter(',')->capture_default_str();
    bench->add_option("--memories", b_memories, "memory sweep, e.g. 4,16,64 (default: --memory)")->delimiter(',');
    bench->add_option("--batch-tokens", b_batch_tokens, "tokens per batch")->check(CLI::PositiveNumber)->capture_default_str();
    bench->add_option("--batches", b_batches, "number of batches (0: all full batches)")->capture_default_str();
    bench->add_option("--threads", b_threads, "worker threads (0: all cores)")->capture_default_str();
    bench->add_flag("--preprocess-text8", b_text8, "reduce the corpus to lowercase letters and single spaces first");
    b_flags.add(*bench);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*compress) {
            lmz::CompressOptions opt;
            opt.codec = to_codec(c_codec);
            opt.tokenizer = lmz::parse_tokenizer_spec(c_flags.tokenizer);
            opt.predictor = c_flags.spec();
            opt.preprocess_text8 = c_text8;
            opt.bridge_timeout = c_flags.timeout();
            const std::string input = lmz::read_file(c_in);
            const auto result = lmz::compress(input, opt);
            lmz::write_file(c_out.empty() ? c_in + ".lmz" : c_out, result.container);
            print_metrics(result.metrics, result.header_bytes, result.container.size());
            fmt::print("{:<14}{}\n", "file_bytes", result.container.size());
        } else if (*decompress) {
            lmz::DecompressOptions opt;
            if (d_flags.predictor_opt->count() > 0) {
                const auto spec = lmz::parse_predictor_spec(d_flags.predictor);
                opt.predictor = spec.kind;
                opt.bridge_address = spec.address;
            }
            if (d_flags.memory_opt->count() > 0)
                opt.memory = d_flags.memory;
            if (d_flags.order_opt->count() > 0)
                opt.order = static_cast<std::uint8_t>(d_flags.order);
            if (d_flags.tokenizer_opt->count() > 0)
                opt.tokenizer = lmz::parse_tokenizer_spec(d_flags.tokenizer);
            opt.bridge_timeout = d_flags.timeout();
            const std::string container = lmz::read_file(d_in);
            const std::string text = lmz::decompress(
                std::span(reinterpret_cast<const std::uint8_t*>(container.data()), container.size()), opt);
            lmz::write_file(d_out.empty() ? default_decompressed_name(d_in) : d_out, text);
        } else if (*estimate) {
            std::string text = lmz::read_file(e_in);
            if (e_text8)
                text = lmz::preprocess_text8(text);
            lmz::Session session(lmz::parse_tokenizer_spec(e_flags.tokenizer), e_flags.spec(), e_flags.timeout());
            const auto stream = session.tokenizer().tokenize(text);
            const auto ids = stream.ids();

            lmz::StreamMetrics m;
            m.n_chars = stream.n_chars();
            m.n_tokens = stream.n_tokens();
            if (!stream.empty()) {
                auto p = session.fresh_predictor();
                m.cross_entropy_bits = lmz::estimate_h_ub(stream, *p).bits;
            }
            for (const auto codec : to_codecs(e_codecs)) {
                auto p = session.fresh_predictor();
                const auto payload = lmz::encode_payload(codec, ids, *p);
                const std::uint64_t bits = 8 * payload.bytes.size();
                if (codec == lmz::CodecId::rank)
                    m.rank_bits = bits;
                else if (codec == lmz::CodecId::ac)
                    m.ac_bits = bits;
                else {
                    m.tbyt_bits = payload.tbyt_profile.total_bits;
                    m.tbyt_emitted_bits = payload.tbyt_profile.emitted_bits;
                }
            }
            m.deflate_bits = 8 * lmz::deflate_raw(text).size();
            if (stream.empty())
                lmz::fail(lmz::Errc::undefined_statistic, "entropy bound of an empty input");
            print_metrics(m, 0, 0);
        } else if (*bench) {
            lmz::BenchConfig cfg;
            cfg.batch_tokens = b_batch_tokens;
            cfg.batch_count = b_batches;
            cfg.codecs = to_codecs(b_codecs);
            cfg.tokenizer = lmz::parse_tokenizer_spec(b_flags.tokenizer);
            cfg.predictor = b_flags.spec();
            cfg.memories = parse_memories(b_memories, cfg.predictor.memory);
            cfg.preprocess_text8 = b_text8;
            cfg.threads = b_threads;
            cfg.bridge_timeout = b_flags.timeout();
            const auto report = lmz::run_bench(lmz::read_file(b_in), cfg);
            const std::string out = b_report == "csv" ? lmz::format_csv(report) : lmz::format_table(report);
            if (b_out.empty())
                std::fwrite(out.data(), 1, out.size(), stdout);
            else
                lmz::write_file(b_out, out);
        }
    } catch (const lmz::Error& e) {
        fmt::print(stderr, "lmzip: {} ({})\n", e.what(), lmz::errc_name(e.code()));
        return lmz::exit_code(e.code());
    } catch (const std::exception& e) {
        fmt::print(stderr, "lmzip: {}\n", e.what());
        return 1;
    }
    return 0;
}
