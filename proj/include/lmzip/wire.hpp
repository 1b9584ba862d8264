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

#ifndef LMZIP_WIRE_HPP
#define LMZIP_WIRE_HPP

#include "lmzip/error.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lmz {

// Little-endian serialization shared by the container and the bridge frames.

class ByteWriter {
public:
    void u8(std::uint8_t v) { out_.push_back(v); }
    void u16(std::uint16_t v) { put(v, 2); }
    void u32(std::uint32_t v) { put(v, 4); }
    void u64(std::uint64_t v) { put(v, 8); }
    void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }
    void bytes(std::string_view b) { out_.insert(out_.end(), b.begin(), b.end()); }

    std::size_t size() const noexcept { return out_.size(); }
    std::vector<std::uint8_t>& buffer() noexcept { return out_; }
    std::vector<std::uint8_t> take() { return std::move(out_); }

private:
    void put(std::uint64_t v, int n)
    {
        for (int i = 0; i < n; ++i)
            out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }

    std::vector<std::uint8_t> out_;
};

/// Bounds-checked reader; running past the end throws `errc`.
class ByteReader {
public:
    ByteReader(std::span<const std::uint8_t> in, Errc errc, const char* what)
        : in_(in), errc_(errc), what_(what) {}

    std::uint8_t u8() { return static_cast<std::uint8_t>(get(1)); }
    std::uint16_t u16() { return static_cast<std::uint16_t>(get(2)); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
    std::uint64_t u64() { return get(8); }

    std::span<const std::uint8_t> bytes(std::size_t n)
    {
        need(n);
        auto s = in_.subspan(pos_, n);
        pos_ += n;
        return s;
    }

    std::string string(std::size_t n)
    {
        const auto s = bytes(n);
        return {reinterpret_cast<const char*>(s.data()), s.size()};
    }

    std::size_t position() const noexcept { return pos_; }
    std::size_t remaining() const noexcept { return in_.size() - pos_; }

    void expect_end() const
    {
        if (pos_ != in_.size())
            fail(errc_, std::string(what_) + ": unexpected trailing bytes");
    }

private:
    void need(std::size_t n) const
    {
        if (n > in_.size() - pos_)
            fail(errc_, std::string(what_) + ": truncated");
    }

    std::uint64_t get(int n)
    {
        need(static_cast<std::size_t>(n));
        std::uint64_t v = 0;
        for (int i = 0; i < n; ++i)
            v |= std::uint64_t{in_[pos_ + i]} << (8 * i);
        pos_ += static_cast<std::size_t>(n);
        return v;
    }

    std::span<const std::uint8_t> in_;
    std::size_t pos_ = 0;
    Errc errc_;
    const char* what_;
};

} // namespace lmz

#endif
