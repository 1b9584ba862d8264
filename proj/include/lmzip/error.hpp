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

#ifndef LMZIP_ERROR_HPP
#define LMZIP_ERROR_HPP

#include <stdexcept>
#include <string>

namespace lmz {

enum class Errc {
    invalid_argument,    // bad option or precondition violated by the caller
    invalid_stream,      // token id outside the vocabulary
    corrupt_stream,      // payload or container cannot be decoded
    predictor_mismatch,  // decoder configuration differs from the encoder's
    bridge_failure,      // external predictor unreachable or misbehaving
    undefined_statistic, // statistic over an empty population
    vocabulary_too_large,
    invalid_pmf,
    io,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

// Process exit status used by the command-line tool.
//   0 ok, 1 i/o, 2 usage, 3 corrupt, 4 predictor mismatch, 5 bridge failure
int exit_code(Errc code) noexcept;

[[noreturn]] void fail(Errc code, const std::string& message);

} // namespace lmz

#endif
