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

#ifndef LMZIP_TEXT_HPP
#define LMZIP_TEXT_HPP

#include <string>
#include <string_view>

namespace lmz {

// Reduces arbitrary bytes to the text8 alphabet: ASCII letters are
// lowercased, every maximal run of other bytes becomes one space, and
// leading/trailing spaces are dropped. Digits are not spelled out and no
// wiki markup is recognized.
std::string preprocess_text8(std::string_view raw);

} // namespace lmz

#endif
