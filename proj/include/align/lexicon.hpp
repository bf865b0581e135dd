/* Copyright 2026 The Align Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef ALIGN_LEXICON_HPP_
#define ALIGN_LEXICON_HPP_

#include <map>
#include <string>
#include <vector>

namespace align {

// Word -> pronunciation map. Pronunciations are phoneme id sequences over
// {1..K}; blank (0) never appears. One pronunciation per word.
class Lexicon {
 public:
  void add(const std::string& word, std::vector<int> phonemes);

  bool contains(const std::string& word) const { return prons_.count(word) > 0; }
  const std::vector<int>& pronunciation(const std::string& word) const;
  const std::map<std::string, std::vector<int>>& entries() const { return prons_; }
  size_t size() const { return prons_.size(); }

  // Concatenated pronunciation of a word sequence.
  std::vector<int> phonemes_of(const std::vector<std::string>& words) const;

  // `word<TAB>p1 p2 p3` per line, sorted by word.
  std::string serialize() const;
  static Lexicon parse(const std::string& text);

 private:
  std::map<std::string, std::vector<int>> prons_;
};

}  // namespace align

#endif  // ALIGN_LEXICON_HPP_
