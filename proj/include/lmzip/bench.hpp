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

#ifndef LMZIP_BENCH_HPP
#define LMZIP_BENCH_HPP

#include "lmzip/container.hpp"
#include "lmzip/metrics.hpp"
#include "lmzip/pipeline.hpp"

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lmz {

struct BenchConfig {
    std::size_t batch_tokens = 100000;
    std::size_t batch_count = 0; // 0: every full batch (one short batch if the corpus is smaller)
    std::vector<std::uint32_t> memories; // empty: predictor.memory only
    std::vector<CodecId> codecs = {CodecId::rank, CodecId::tbyt, CodecId::ac};
    TokenizerSpec tokenizer;
    PredictorSpec predictor;
    bool preprocess_text8 = false;
    bool deflate_baseline = true;
    unsigned threads = 0; // 0: hardware concurrency
    std::chrono::milliseconds bridge_timeout = std::chrono::seconds(60);
};

struct BenchRun {
    std::uint32_t memory = 0;
    BatchReport report;
};

struct BenchReport {
    std::vector<BenchRun> runs; // one per memory value, in config order
    std::vector<CodecId> codecs;
    bool deflate_baseline = true;
};

/// Tokenizes `corpus` once, slices it into contiguous batches, and runs
/// every codec on every batch with a fresh predictor. Batches are spread
/// over a worker pool; results are kept in batch order.
BenchReport run_bench(std::string_view corpus, const BenchConfig& config);

std::string format_csv(const BenchReport& report);
std::string format_table(const BenchReport& report);

} // namespace lmz

#endif
