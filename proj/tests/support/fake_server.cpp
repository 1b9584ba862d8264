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

#include "fake_server.hpp"

#include "lmzip/error.hpp"
#include "lmzip/predictor.hpp"
#include "lmzip/tokenizer.hpp"

#include <algorithm>
#include <cerrno>
#include <numeric>
#include <thread>

#include <unistd.h>

namespace lmz::testing {

Vocabulary fake_vocabulary(bool extended)
{
    if (!extended)
        return Vocabulary::bytes();
    std::vector<std::string> entries;
    for (int b = 0; b < 256; ++b)
        entries.emplace_back(1, static_cast<char>(b));
    for (const char* s : {"th", "he", "in", "er", "an", " t", "the", "ing", "e "})
        entries.emplace_back(s);
    return Vocabulary::from_entries(std::move(entries));
}

QuantizedPmf fake_pmf(std::span<const TokenId> context, const FakeServerConfig& config, std::size_t vocab_size)
{
    AdaptiveModel model(vocab_size, config.order, static_cast<std::uint32_t>(std::max<std::size_t>(1, context.size())));
    for (const TokenId t : context)
        model.update(t);
    return model.predict();
}

namespace {

std::vector<SparseWeight> top_k(const QuantizedPmf& pmf, std::uint32_t k, std::uint32_t& rest)
{
    std::vector<TokenId> ids(pmf.size());
    std::iota(ids.begin(), ids.end(), TokenId{0});
    const std::size_t n = std::min<std::size_t>(k, ids.size() - 1);
    std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n), ids.end(), [&](TokenId a, TokenId b) {
        return pmf.weight(a) != pmf.weight(b) ? pmf.weight(a) > pmf.weight(b) : a < b;
    });
    ids.resize(n);
    std::sort(ids.begin(), ids.end());
    std::vector<SparseWeight> listed;
    std::uint64_t sum = 0;
    for (const TokenId id : ids) {
        listed.push_back({id, pmf.weight(id)});
        sum += pmf.weight(id);
    }
    rest = static_cast<std::uint32_t>(kPmfTotal - sum);
    return listed;
}

void send_error(Transport& t, const std::string& message)
{
    write_frame(t, FrameType::error,
                std::span(reinterpret_cast<const std::uint8_t*>(message.data()), message.size()));
}

} // namespace

QuantizedPmf fake_effective_pmf(std::span<const TokenId> context, const FakeServerConfig& config)
{
    const auto vocab_size = fake_vocabulary(config.extended_vocab).size();
    auto pmf = fake_pmf(context, config, vocab_size);
    if (config.sparse_top == 0)
        return pmf;
    std::uint32_t rest = 0;
    const auto listed = top_k(pmf, config.sparse_top, rest);
    return expand_sparse(vocab_size, listed, rest);
}

void FdTransport::write_all(std::span<const std::uint8_t> bytes)
{
    std::size_t done = 0;
    while (done < bytes.size()) {
        const ssize_t n = ::write(out_, bytes.data() + done, bytes.size() - done);
        if (n < 0 && errno == EINTR)
            continue;
        if (n <= 0)
            fail(Errc::bridge_failure, "write failed");
        done += static_cast<std::size_t>(n);
    }
}

void FdTransport::read_exact(std::span<std::uint8_t> out)
{
    std::size_t done = 0;
    while (done < out.size()) {
        const ssize_t n = ::read(in_, out.data() + done, out.size() - done);
        if (n < 0 && errno == EINTR)
            continue;
        if (n <= 0)
            fail(Errc::bridge_failure, "eof");
        done += static_cast<std::size_t>(n);
    }
}

std::size_t serve(int in_fd, int out_fd, const FakeServerConfig& config)
{
    FdTransport t(in_fd, out_fd);
    const Vocabulary vocab = fake_vocabulary(config.extended_vocab);
    std::size_t predicts = 0;
    try {
        for (;;) {
            const Frame f = read_frame(t);
            switch (f.type) {
            case FrameType::hello: {
                decode_client_hello(f.payload);
                BridgeHello h;
                h.version = config.version;
                h.vocab_size = static_cast<std::uint32_t>(vocab.size());
                h.pmf_total = config.pmf_total;
                h.max_memory = config.max_memory;
                h.model_tag = config.model_tag;
                write_frame(t, FrameType::hello, encode_server_hello(h));
                break;
            }
            case FrameType::predict: {
                const auto ctx = decode_predict(f.payload);
                if (ctx.size() > config.max_memory) {
                    send_error(t, "context too long");
                    break;
                }
                const bool faulty = config.fault != Fault::none && predicts >= config.fault_after;
                ++predicts;
                if (faulty) {
                    switch (config.fault) {
                    case Fault::close: return predicts;
                    case Fault::stall: std::this_thread::sleep_for(std::chrono::hours(1)); return predicts;
                    case Fault::error_frame: send_error(t, "model exploded"); continue;
                    case Fault::truncated: {
                        const std::uint8_t half[] = {0x01, 0x04, 0x00, 0x00, 0x03, 0x00};
                        t.write_all(half);
                        return predicts;
                    }
                    default: break;
                    }
                }
                auto pmf = fake_pmf(ctx, config, vocab.size());
                if (faulty && (config.fault == Fault::bad_sum || config.fault == Fault::zero_weight)) {
                    std::vector<std::uint32_t> w(pmf.weights().begin(), pmf.weights().end());
                    if (config.fault == Fault::bad_sum) {
                        w[0] -= 1;
                    } else {
                        w[1] += w[0];
                        w[0] = 0;
                    }
                    write_frame(t, FrameType::pmf, encode_dense_pmf(w));
                } else if (config.sparse_top > 0) {
                    std::uint32_t rest = 0;
                    const auto listed = top_k(pmf, config.sparse_top, rest);
                    write_frame(t, FrameType::pmf, encode_sparse_pmf(listed, rest));
                } else {
                    write_frame(t, FrameType::pmf, encode_dense_pmf(pmf.weights()));
                }
                break;
            }
            case FrameType::tokenize: {
                const auto text = decode_tokenize_request(f.payload);
                const auto tk = lmz::tokenize(text, vocab);
                write_frame(t, FrameType::tokenize, encode_tokenize_reply(tk.stream.items()));
                break;
            }
            case FrameType::detokenize: {
                const auto ids = decode_detokenize_request(f.payload);
                try {
                    write_frame(t, FrameType::detokenize, encode_detokenize_reply(lmz::detokenize(ids, vocab)));
                } catch (const Error& e) {
                    send_error(t, e.what());
                }
                break;
            }
            default: send_error(t, "unknown frame type"); break;
            }
        }
    } catch (const Error&) {
        // EOF or a broken client; end of session.
    }
    return predicts;
}

FakeServerConfig parse_fake_server_args(const std::vector<std::string>& args)
{
    FakeServerConfig c;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        auto value = [&]() -> const std::string& {
            if (i + 1 >= args.size())
                fail(Errc::invalid_argument, a + " needs a value");
            return args[++i];
        };
        if (a == "--tag") {
            c.model_tag = value();
        } else if (a == "--sparse") {
            c.sparse_top = static_cast<std::uint32_t>(std::stoul(value()));
        } else if (a == "--max-memory") {
            c.max_memory = static_cast<std::uint32_t>(std::stoul(value()));
        } else if (a == "--order") {
            c.order = static_cast<unsigned>(std::stoul(value()));
        } else if (a == "--extended-vocab") {
            c.extended_vocab = true;
        } else if (a == "--pmf-total") {
            c.pmf_total = static_cast<std::uint32_t>(std::stoul(value()));
        } else if (a == "--protocol") {
            c.version = static_cast<std::uint16_t>(std::stoul(value()));
        } else if (a == "--fault-after") {
            c.fault_after = static_cast<std::uint32_t>(std::stoul(value()));
        } else if (a == "--fault") {
            const std::string& f = value();
            if (f == "bad-sum")
                c.fault = Fault::bad_sum;
            else if (f == "zero-weight")
                c.fault = Fault::zero_weight;
            else if (f == "error")
                c.fault = Fault::error_frame;
            else if (f == "close")
                c.fault = Fault::close;
            else if (f == "stall")
                c.fault = Fault::stall;
            else if (f == "truncated")
                c.fault = Fault::truncated;
            else
                fail(Errc::invalid_argument, "unknown fault " + f);
        } else {
            fail(Errc::invalid_argument, "unknown argument " + a);
        }
    }
    return c;
}

} // namespace lmz::testing
