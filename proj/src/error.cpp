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

#include "lmzip/error.hpp"

namespace lmz {

const char* errc_name(Errc code) noexcept
{
    switch (code) {
    case Errc::invalid_argument: return "invalid argument";
    case Errc::invalid_stream: return "invalid stream";
    case Errc::corrupt_stream: return "corrupt stream";
    case Errc::predictor_mismatch: return "predictor mismatch";
    case Errc::bridge_failure: return "bridge failure";
    case Errc::undefined_statistic: return "undefined statistic";
    case Errc::vocabulary_too_large: return "vocabulary too large";
    case Errc::invalid_pmf: return "invalid pmf";
    case Errc::io: return "i/o error";
    }
    return "unknown error";
}

int exit_code(Errc code) noexcept
{
    switch (code) {
    case Errc::invalid_argument:
    case Errc::vocabulary_too_large:
        return 2;
    case Errc::invalid_stream:
    case Errc::corrupt_stream:
    case Errc::invalid_pmf:
        return 3;
    case Errc::predictor_mismatch:
        return 4;
    case Errc::bridge_failure:
        return 5;
    case Errc::undefined_statistic:
    case Errc::io:
        return 1;
    }
    return 1;
}

void fail(Errc code, const std::string& message)
{
    throw Error(code, message);
}

} // namespace lmz
