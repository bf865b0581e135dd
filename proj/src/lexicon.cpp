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
#include "align/lexicon.hpp"

#include <sstream>

#include "align/errors.hpp"
#include "align/textio.hpp"

namespace align {

void Lexicon::add(const std::string& word, std::vector<int> phonemes) {
  if (word.empty()) throw DataError("lexicon: empty word");
  if (phonemes.empty()) throw DataError("lexicon: empty pronunciation for '" + word + "'");
  for (int p : phonemes)
    if (p <= 0) throw DataError("lexicon: pronunciation of '" + word + "' contains blank or invalid id");
  if (prons_.count(word)) throw DataError("lexicon: duplicate word '" + word + "'");
  prons_[word] = std::move(phonemes);
}

const std::vector<int>& Lexicon::pronunciation(const std::string& word) const {
  auto it = prons_.find(word);
  if (it == prons_.end()) throw DataError("lexicon: unknown word '" + word + "'");
  return it->second;
}

std::vector<int> Lexicon::phonemes_of(const std::vector<std::string>& words) const {
  std::vector<int> out;
  for (const auto& w : words) {
    const auto& p = pronunciation(w);
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

std::string Lexicon::serialize() const {
  std::string out;
  for (const auto& [word, pron] : prons_) {
    out += word;
    out += '\t';
    for (size_t i = 0; i < pron.size(); ++i) {
      if (i) out += ' ';
      out += std::to_string(pron[i]);
    }
    out += '\n';
  }
  return out;
}

Lexicon Lexicon::parse(const std::string& text) {
  Lexicon lex;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const size_t tab = line.find('\t');
    if (tab == std::string::npos) throw DataError("lexicon: malformed line '" + line + "'");
    std::string word = trim(line.substr(0, tab));
    std::vector<int> pron;
    for (const auto& tok : split_ws(line.substr(tab + 1))) pron.push_back(std::stoi(tok));
    lex.add(word, std::move(pron));
  }
  return lex;
}

}  // namespace align
