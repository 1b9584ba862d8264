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

#include "lmzip/text.hpp"

namespace lmz {

std::string preprocess_text8(std::string_view raw)
{
    std::string out;
    out.reserve(raw.size());
    bool pending_space = false;
    for (const char c : raw) {
        const auto b = static_cast<unsigned char>(c);
        char letter = 0;
        if (b >= 'a' && b <= 'z')
            letter = static_cast<char>(b);
        else if (b >= 'A' && b <= 'Z')
            letter = static_cast<char>(b - 'A' + 'a');

        if (letter == 0) {
            pending_space = true;
            continue;
        }
        if (pending_space && !out.empty())
            out.push_back(' ');
        pending_space = false;
        out.push_back(letter);
    }
    return out;
}

} // namespace lmz
