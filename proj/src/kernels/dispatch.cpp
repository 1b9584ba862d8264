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

#include "lmzip/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace lmz::kernels {

#if defined(LMZIP_HAVE_AVX2)
const KernelTable* avx2_table() noexcept;
#endif

const KernelTable* avx2() noexcept
{
#if defined(LMZIP_HAVE_AVX2)
    static const bool supported = __builtin_cpu_supports("avx2");
    return supported ? avx2_table() : nullptr;
#else
    return nullptr;
#endif
}

namespace {

const KernelTable& select() noexcept
{
    const char* env = std::getenv("LMZIP_KERNELS");
    const std::string_view want = env ? env : "";
    if (want == "scalar")
        return scalar();
    if (const auto* v = avx2())
        return *v;
    return scalar();
}

} // namespace

const KernelTable& active() noexcept
{
    static const KernelTable& table = select();
    return table;
}

} // namespace lmz::kernels
