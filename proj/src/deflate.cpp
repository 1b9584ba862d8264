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

#include "lmzip/deflate.hpp"

#include "lmzip/error.hpp"

#include <zlib.h>

#include <memory>

namespace lmz {

namespace {

constexpr int kRawWindowBits = -15;
constexpr std::size_t kChunk = 1 << 16;

} // namespace

std::vector<std::uint8_t> deflate_raw(std::span<const std::uint8_t> input, int level)
{
    z_stream zs{};
    if (deflateInit2(&zs, level, Z_DEFLATED, kRawWindowBits, 9, Z_DEFAULT_STRATEGY) != Z_OK)
        fail(Errc::invalid_argument, "deflateInit2 failed");
    std::unique_ptr<z_stream, decltype(&deflateEnd)> guard(&zs, &deflateEnd);

    std::vector<std::uint8_t> out(deflateBound(&zs, static_cast<uLong>(input.size())));
    zs.next_in = const_cast<Bytef*>(input.data());
    zs.avail_in = static_cast<uInt>(input.size());
    zs.next_out = out.data();
    zs.avail_out = static_cast<uInt>(out.size());
    if (deflate(&zs, Z_FINISH) != Z_STREAM_END)
        fail(Errc::io, "deflate did not finish");
    out.resize(zs.total_out);
    return out;
}

std::vector<std::uint8_t> deflate_raw(std::string_view input, int level)
{
    return deflate_raw(std::span(reinterpret_cast<const std::uint8_t*>(input.data()), input.size()), level);
}

std::vector<std::uint8_t> inflate_raw(std::span<const std::uint8_t> input)
{
    z_stream zs{};
    if (inflateInit2(&zs, kRawWindowBits) != Z_OK)
        fail(Errc::io, "inflateInit2 failed");
    std::unique_ptr<z_stream, decltype(&inflateEnd)> guard(&zs, &inflateEnd);

    std::vector<std::uint8_t> out;
    zs.next_in = const_cast<Bytef*>(input.data());
    zs.avail_in = static_cast<uInt>(input.size());
    int rc = Z_OK;
    while (rc != Z_STREAM_END) {
        const std::size_t used = out.size();
        out.resize(used + kChunk);
        zs.next_out = out.data() + used;
        zs.avail_out = static_cast<uInt>(kChunk);
        rc = inflate(&zs, Z_NO_FLUSH);
        out.resize(used + kChunk - zs.avail_out);
        if (rc == Z_STREAM_END)
            break;
        if (rc != Z_OK || (zs.avail_in == 0 && zs.avail_out != 0))
            fail(Errc::corrupt_stream, "DEFLATE payload is corrupt or truncated");
    }
    if (zs.avail_in != 0)
        fail(Errc::corrupt_stream, "trailing bytes after DEFLATE payload");
    return out;
}

} // namespace lmz
