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

#include "lmzip/bridge.hpp"

#include "lmzip/checksum.hpp"
#include "lmzip/error.hpp"
#include "lmzip/wire.hpp"

#include <cerrno>
#include <cstring>
#include <thread>

#include <fcntl.h>
#include <netdb.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

namespace lmz {

namespace {

[[noreturn]] void bridge_fail(const std::string& message)
{
    fail(Errc::bridge_failure, message);
}

[[noreturn]] void sys_fail(const std::string& what)
{
    bridge_fail(what + ": " + std::strerror(errno));
}

ByteReader reader(std::span<const std::uint8_t> payload, const char* what)
{
    return ByteReader(payload, Errc::bridge_failure, what);
}

/// Socket-backed transport; SOCK_STREAM so send() can suppress SIGPIPE.
class SocketTransport : public Transport {
public:
    SocketTransport(int fd, std::chrono::milliseconds timeout) : fd_(fd), timeout_(timeout) {}
    ~SocketTransport() override
    {
        if (fd_ >= 0)
            ::close(fd_);
    }

    SocketTransport(const SocketTransport&) = delete;
    SocketTransport& operator=(const SocketTransport&) = delete;

    void write_all(std::span<const std::uint8_t> bytes) override
    {
        std::size_t done = 0;
        while (done < bytes.size()) {
            wait(POLLOUT);
            const ssize_t n = ::send(fd_, bytes.data() + done, bytes.size() - done, MSG_NOSIGNAL);
            if (n < 0) {
                if (errno == EINTR || errno == EAGAIN)
                    continue;
                sys_fail("bridge write failed");
            }
            done += static_cast<std::size_t>(n);
        }
    }

    void read_exact(std::span<std::uint8_t> out) override
    {
        std::size_t done = 0;
        while (done < out.size()) {
            wait(POLLIN);
            const ssize_t n = ::recv(fd_, out.data() + done, out.size() - done, 0);
            if (n < 0) {
                if (errno == EINTR || errno == EAGAIN)
                    continue;
                sys_fail("bridge read failed");
            }
            if (n == 0)
                bridge_fail("bridge server closed the connection");
            done += static_cast<std::size_t>(n);
        }
    }

protected:
    void close_fd()
    {
        if (fd_ >= 0)
            ::close(fd_);
        fd_ = -1;
    }

private:
    void wait(short events)
    {
        pollfd p{fd_, events, 0};
        for (;;) {
            const int r = ::poll(&p, 1, static_cast<int>(timeout_.count()));
            if (r > 0)
                return;
            if (r == 0)
                bridge_fail("bridge server timed out");
            if (errno != EINTR)
                sys_fail("poll");
        }
    }

    int fd_;
    std::chrono::milliseconds timeout_;
};

class ExecTransport final : public SocketTransport {
public:
    ExecTransport(int fd, pid_t child, std::chrono::milliseconds timeout)
        : SocketTransport(fd, timeout), child_(child) {}

    ~ExecTransport() override
    {
        close_fd();
        // The server sees EOF and should exit; give it a moment, then kill.
        for (int i = 0; i < 100; ++i) {
            if (::waitpid(child_, nullptr, WNOHANG) != 0) {
                ::kill(-child_, SIGKILL);
                return;
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(10));
        }
        // The shell may have forked the server; kill its whole group.
        ::kill(-child_, SIGKILL);
        ::waitpid(child_, nullptr, 0);
    }

private:
    pid_t child_;
};

std::unique_ptr<Transport> open_exec(const std::string& command, std::chrono::milliseconds timeout)
{
    int sv[2];
    if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, sv) != 0)
        sys_fail("socketpair");
    const pid_t pid = ::fork();
    if (pid < 0) {
        ::close(sv[0]);
        ::close(sv[1]);
        sys_fail("fork");
    }
    if (pid == 0) {
        ::setpgid(0, 0);
        ::dup2(sv[1], STDIN_FILENO);
        ::dup2(sv[1], STDOUT_FILENO);
        ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
        ::_exit(127);
    }
    ::close(sv[1]);
    return std::make_unique<ExecTransport>(sv[0], pid, timeout);
}

std::unique_ptr<Transport> open_tcp(std::string hostport, std::chrono::milliseconds timeout)
{
    std::string host;
    std::string port;
    if (!hostport.empty() && hostport.front() == '[') {
        const auto close = hostport.find(']');
        if (close == std::string::npos || close + 1 >= hostport.size() || hostport[close + 1] != ':')
            fail(Errc::invalid_argument, "bad bridge address '" + hostport + "'");
        host = hostport.substr(1, close - 1);
        port = hostport.substr(close + 2);
    } else {
        const auto colon = hostport.rfind(':');
        if (colon == std::string::npos)
            fail(Errc::invalid_argument, "bridge address needs host:port, got '" + hostport + "'");
        host = hostport.substr(0, colon);
        port = hostport.substr(colon + 1);
    }

    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    if (const int rc = ::getaddrinfo(host.c_str(), port.c_str(), &hints, &res); rc != 0)
        bridge_fail("cannot resolve '" + hostport + "': " + ::gai_strerror(rc));

    std::string last_error = "no addresses";
    for (addrinfo* ai = res; ai; ai = ai->ai_next) {
        const int fd = ::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC | SOCK_NONBLOCK, ai->ai_protocol);
        if (fd < 0)
            continue;
        int rc = ::connect(fd, ai->ai_addr, ai->ai_addrlen);
        if (rc != 0 && errno == EINPROGRESS) {
            pollfd p{fd, POLLOUT, 0};
            rc = ::poll(&p, 1, static_cast<int>(timeout.count()));
            int err = 0;
            socklen_t len = sizeof err;
            if (rc == 1 && ::getsockopt(fd, SOL_SOCKET, SO_ERROR, &err, &len) == 0 && err == 0)
                rc = 0;
            else
                errno = rc == 0 ? ETIMEDOUT : err;
            if (rc != 0)
                rc = -1;
        }
        if (rc == 0) {
            ::freeaddrinfo(res);
            return std::make_unique<SocketTransport>(fd, timeout);
        }
        last_error = std::strerror(errno);
        ::close(fd);
    }
    ::freeaddrinfo(res);
    bridge_fail("cannot connect to '" + hostport + "': " + last_error);
}

} // namespace

std::unique_ptr<Transport> open_transport(const std::string& address, std::chrono::milliseconds timeout)
{
    if (address.rfind("exec:", 0) == 0)
        return open_exec(address.substr(5), timeout);
    if (address.rfind("tcp://", 0) == 0)
        return open_tcp(address.substr(6), timeout);
    return open_tcp(address, timeout);
}

void write_frame(Transport& t, FrameType type, std::span<const std::uint8_t> payload)
{
    if (payload.size() + 1 > kMaxFrameBytes)
        fail(Errc::bridge_failure, "frame too large");
    ByteWriter w;
    w.buffer().reserve(5 + payload.size());
    w.u32(static_cast<std::uint32_t>(payload.size() + 1));
    w.u8(static_cast<std::uint8_t>(type));
    w.bytes(payload);
    t.write_all(w.buffer());
}

Frame read_frame(Transport& t)
{
    std::uint8_t head[5];
    t.read_exact(head);
    const std::uint32_t length = std::uint32_t{head[0]} | std::uint32_t{head[1]} << 8
                                 | std::uint32_t{head[2]} << 16 | std::uint32_t{head[3]} << 24;
    if (length == 0 || length > kMaxFrameBytes)
        bridge_fail("frame length " + std::to_string(length) + " out of range");
    Frame f;
    f.type = static_cast<FrameType>(head[4]);
    f.payload.resize(length - 1);
    t.read_exact(f.payload);
    return f;
}

std::vector<std::uint8_t> encode_client_hello(std::uint16_t version)
{
    ByteWriter w;
    w.u16(version);
    return w.take();
}

std::uint16_t decode_client_hello(std::span<const std::uint8_t> payload)
{
    auto r = reader(payload, "client hello");
    const auto v = r.u16();
    r.expect_end();
    return v;
}

std::vector<std::uint8_t> encode_server_hello(const BridgeHello& hello)
{
    ByteWriter w;
    w.u16(hello.version);
    w.u32(hello.vocab_size);
    w.u32(hello.pmf_total);
    w.u32(hello.max_memory);
    w.u32(static_cast<std::uint32_t>(hello.model_tag.size()));
    w.bytes(hello.model_tag);
    return w.take();
}

BridgeHello decode_server_hello(std::span<const std::uint8_t> payload)
{
    auto r = reader(payload, "server hello");
    BridgeHello h;
    h.version = r.u16();
    h.vocab_size = r.u32();
    h.pmf_total = r.u32();
    h.max_memory = r.u32();
    h.model_tag = r.string(r.u32());
    r.expect_end();
    return h;
}

std::vector<std::uint8_t> encode_predict(std::span<const TokenId> context)
{
    ByteWriter w;
    w.u32(static_cast<std::uint32_t>(context.size()));
    for (const TokenId t : context)
        w.u32(t);
    return w.take();
}

std::vector<TokenId> decode_predict(std::span<const std::uint8_t> payload)
{
    auto r = reader(payload, "predict request");
    const std::uint32_t n = r.u32();
    if (r.remaining() != std::size_t{n} * 4)
        bridge_fail("predict request: context length does not match frame size");
    std::vector<TokenId> ids(n);
    for (auto& id : ids)
        id = r.u32();
    return ids;
}

std::vector<std::uint8_t> encode_dense_pmf(std::span<const std::uint32_t> weights)
{
    ByteWriter w;
    w.buffer().reserve(1 + 4 * weights.size());
    w.u8(0);
    for (const auto x : weights)
        w.u32(x);
    return w.take();
}

std::vector<std::uint8_t> encode_sparse_pmf(std::span<const SparseWeight> listed, std::uint32_t rest_weight)
{
    ByteWriter w;
    w.u8(1);
    w.u32(static_cast<std::uint32_t>(listed.size()));
    for (const auto& e : listed) {
        w.u32(e.id);
        w.u32(e.weight);
    }
    w.u32(rest_weight);
    return w.take();
}

std::vector<std::uint8_t> encode_tokenize_request(std::string_view text)
{
    ByteWriter w;
    w.u32(static_cast<std::uint32_t>(text.size()));
    w.bytes(text);
    return w.take();
}

std::string decode_tokenize_request(std::span<const std::uint8_t> payload)
{
    auto r = reader(payload, "tokenize request");
    auto s = r.string(r.u32());
    r.expect_end();
    return s;
}

std::vector<std::uint8_t> encode_tokenize_reply(std::span<const Token> tokens)
{
    ByteWriter w;
    w.u32(static_cast<std::uint32_t>(tokens.size()));
    for (const auto& t : tokens) {
        w.u32(t.id);
        w.u32(t.byte_len);
    }
    return w.take();
}

std::vector<Token> decode_tokenize_reply(std::span<const std::uint8_t> payload)
{
    auto r = reader(payload, "tokenize reply");
    const std::uint32_t n = r.u32();
    if (r.remaining() != std::size_t{n} * 8)
        bridge_fail("tokenize reply: token count does not match frame size");
    std::vector<Token> tokens(n);
    for (auto& t : tokens) {
        t.id = r.u32();
        t.byte_len = r.u32();
    }
    return tokens;
}

std::vector<std::uint8_t> encode_detokenize_request(std::span<const TokenId> ids)
{
    return encode_predict(ids);
}

std::vector<TokenId> decode_detokenize_request(std::span<const std::uint8_t> payload)
{
    return decode_predict(payload);
}

std::vector<std::uint8_t> encode_detokenize_reply(std::string_view text)
{
    return encode_tokenize_request(text);
}

std::string decode_detokenize_reply(std::span<const std::uint8_t> payload)
{
    auto r = reader(payload, "detokenize reply");
    auto s = r.string(r.u32());
    r.expect_end();
    return s;
}

QuantizedPmf expand_sparse(std::size_t vocab_size, std::span<const SparseWeight> listed, std::uint32_t rest_weight)
{
    if (listed.size() > vocab_size)
        bridge_fail("sparse reply lists more tokens than the vocabulary holds");
    std::vector<std::uint32_t> weights(vocab_size, 0);
    std::vector<bool> is_listed(vocab_size, false);
    std::uint64_t sum = rest_weight;
    for (std::size_t i = 0; i < listed.size(); ++i) {
        const auto& e = listed[i];
        if (e.id >= vocab_size)
            bridge_fail("sparse reply: token id " + std::to_string(e.id) + " outside vocabulary");
        if (i > 0 && e.id <= listed[i - 1].id)
            bridge_fail("sparse reply: token ids not strictly increasing");
        weights[e.id] = e.weight;
        is_listed[e.id] = true;
        sum += e.weight;
    }
    if (sum != kPmfTotal)
        bridge_fail("sparse reply: weights sum to " + std::to_string(sum) + ", not 2^24");

    const std::size_t unlisted = vocab_size - listed.size();
    if (unlisted == 0) {
        if (rest_weight != 0)
            bridge_fail("sparse reply: rest weight with no unlisted tokens");
    } else {
        const std::uint32_t each = static_cast<std::uint32_t>(rest_weight / unlisted);
        std::uint32_t extra = static_cast<std::uint32_t>(rest_weight % unlisted);
        for (std::size_t t = 0; t < vocab_size; ++t) {
            if (is_listed[t])
                continue;
            weights[t] = each + (extra > 0 ? 1u : 0u);
            if (extra > 0)
                --extra;
        }
    }
    if (!QuantizedPmf::valid(weights))
        bridge_fail("sparse reply expands to a zero weight");
    return QuantizedPmf(std::move(weights));
}

QuantizedPmf decode_pmf(std::span<const std::uint8_t> payload, std::size_t vocab_size)
{
    auto r = reader(payload, "pmf reply");
    const auto mode = r.u8();
    if (mode == 0) {
        if (r.remaining() != vocab_size * 4)
            bridge_fail("dense reply: expected " + std::to_string(vocab_size) + " weights");
        std::vector<std::uint32_t> weights(vocab_size);
        for (auto& w : weights)
            w = r.u32();
        if (!QuantizedPmf::valid(weights))
            bridge_fail("dense reply: weights must be >= 1 and sum to 2^24");
        return QuantizedPmf(std::move(weights));
    }
    if (mode == 1) {
        const std::uint32_t count = r.u32();
        if (r.remaining() != std::size_t{count} * 8 + 4)
            bridge_fail("sparse reply: entry count does not match frame size");
        std::vector<SparseWeight> listed(count);
        for (auto& e : listed) {
            e.id = r.u32();
            e.weight = r.u32();
        }
        const std::uint32_t rest = r.u32();
        return expand_sparse(vocab_size, listed, rest);
    }
    bridge_fail("pmf reply: unknown mode " + std::to_string(mode));
}

BridgeClient::BridgeClient(std::unique_ptr<Transport> transport)
    : transport_(std::move(transport))
{
    const auto hello = encode_client_hello();
    const Frame reply = exchange(FrameType::hello, hello, FrameType::hello);
    hello_ = decode_server_hello(reply.payload);
    if (hello_.version != kBridgeVersion)
        bridge_fail("bridge protocol version " + std::to_string(hello_.version) + " not supported");
    if (hello_.pmf_total != kPmfTotal)
        bridge_fail("server pmf_total " + std::to_string(hello_.pmf_total) + " is not 2^24");
    if (hello_.vocab_size < 2)
        bridge_fail("server vocabulary must hold at least 2 tokens");
    if (hello_.vocab_size > kPmfTotal / 2)
        bridge_fail("server vocabulary too large for 2^24 weights");
}

std::unique_ptr<BridgeClient> BridgeClient::connect(const std::string& address, std::chrono::milliseconds timeout)
{
    return std::make_unique<BridgeClient>(open_transport(address, timeout));
}

Frame BridgeClient::exchange(FrameType type, std::span<const std::uint8_t> payload, FrameType expect)
{
    write_frame(*transport_, type, payload);
    Frame reply = read_frame(*transport_);
    if (reply.type == FrameType::error)
        bridge_fail("bridge server error: "
                    + std::string(reinterpret_cast<const char*>(reply.payload.data()), reply.payload.size()));
    if (reply.type != expect)
        bridge_fail("unexpected frame type " + std::to_string(static_cast<unsigned>(reply.type)));
    return reply;
}

QuantizedPmf BridgeClient::predict(std::span<const TokenId> context)
{
    const Frame reply = exchange(FrameType::predict, encode_predict(context), FrameType::pmf);
    return decode_pmf(reply.payload, hello_.vocab_size);
}

std::vector<Token> BridgeClient::tokenize(std::string_view text)
{
    const Frame reply = exchange(FrameType::tokenize, encode_tokenize_request(text), FrameType::tokenize);
    auto tokens = decode_tokenize_reply(reply.payload);
    std::uint64_t covered = 0;
    for (const auto& t : tokens) {
        if (t.id >= hello_.vocab_size || t.byte_len == 0)
            bridge_fail("tokenize reply: invalid token");
        covered += t.byte_len;
    }
    if (covered != text.size())
        bridge_fail("tokenize reply does not cover the input exactly");
    return tokens;
}

std::string BridgeClient::detokenize(std::span<const TokenId> ids)
{
    const Frame reply = exchange(FrameType::detokenize, encode_detokenize_request(ids), FrameType::detokenize);
    return decode_detokenize_reply(reply.payload);
}

RemotePredictor::RemotePredictor(BridgeClient& client, std::uint32_t memory)
    : client_(client), memory_(memory)
{
    if (memory > client.hello().max_memory)
        fail(Errc::invalid_argument, "memory " + std::to_string(memory) + " exceeds the server maximum "
                                         + std::to_string(client.hello().max_memory));
}

const QuantizedPmf& RemotePredictor::predict()
{
    if (!fresh_) {
        request_.assign(window_.begin(), window_.end());
        pmf_ = client_.predict(request_);
        fresh_ = true;
    }
    return pmf_;
}

void RemotePredictor::update(TokenId actual)
{
    if (actual >= vocab_size())
        fail(Errc::invalid_stream, "token id " + std::to_string(actual) + " outside vocabulary");
    fresh_ = false;
    if (memory_ == 0)
        return;
    if (window_.size() == memory_)
        window_.pop_front();
    window_.push_back(actual);
}

Digest ExternalTokenizer::digest() const
{
    return sha256(client_.hello().model_tag);
}

TokenStream ExternalTokenizer::tokenize(std::string_view text)
{
    TokenStream stream;
    const auto tokens = client_.tokenize(text);
    stream.reserve(tokens.size());
    for (const auto& t : tokens)
        stream.push_back(t);
    return stream;
}

std::string ExternalTokenizer::detokenize(std::span<const TokenId> ids)
{
    return client_.detokenize(ids);
}

} // namespace lmz
