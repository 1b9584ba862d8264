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

#ifndef LMZIP_DEFLATE_HPP
#define LMZIP_DEFLATE_HPP

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace lmz {

inline constexpr int kDeflateMaxLevel = 9;

// Raw DEFLATE (RFC 1951) streams: no zlib or gzip wrapper.
std::vector<std::uint8_t> deflate_raw(std::span<const std::uint8_t> input, int level = kDeflateMaxLevel);
std::vector<std::uint8_t> deflate_raw(std::string_view input, int level = kDeflateMaxLevel);

// Throws corrupt_stream on malformed or truncated input.
std::vector<std::uint8_t> inflate_raw(std::span<const std::uint8_t> input);

} // namespace lmz

#endif
