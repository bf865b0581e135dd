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
#ifndef ALIGN_DATAGEN_HPP_
#define ALIGN_DATAGEN_HPP_

#include <string>
#include <vector>

#include "align/lexicon.hpp"
#include "align/matrix.hpp"
#include "align/rng.hpp"

namespace align::datagen {

enum class Split { kSource, kTarget, kValidation, kTest };

std::string split_name(Split s);
Split split_from_name(const std::string& name);

// Phoneme set with one prototype channel vector per phoneme. Id 0 is the CTC
// blank and owns no prototype; label sequences never contain it.
struct PhonemeInventory {
  int channels = 0;
  std::vector<std::vector<double>> prototypes;  // prototypes[k-1] belongs to phoneme id k

  int count() const { return static_cast<int>(prototypes.size()); }  // K, excluding blank
  double min_pairwise_distance() const;
  void validate() const;
};

// Per-session linear drift: mix = I + mix_drift*index*R, offset =
// bias_drift*index*v, gain = exp(gain_drift*index*g) elementwise, with
// (R, v, g) fixed per corpus (R unit Frobenius norm, v and g unit L2).
struct DriftBasis {
  Matrix mix_direction;           // R, c x c
  std::vector<double> bias_direction;  // v
  std::vector<double> gain_direction;  // g
};

struct SessionParams {
  int session_index = 0;
  Matrix mix;                  // A_s, c x c
  std::vector<double> offset;  // b_s
  std::vector<double> gain;    // per-channel multiplier
  double noise_sd = 0.0;
  double speed_min = 1.0;
  double speed_max = 1.0;
};

struct Trial {
  Matrix features;  // T x c
  std::vector<int> labels;  // phoneme ids, private ground truth
  std::string transcript;   // word sequence, private ground truth
  int session_id = 0;
  Split split = Split::kSource;
};

struct GenConfig {
  uint64_t seed = 1;
  int channels = 8;
  int phonemes = 6;  // K
  int sessions_source = 3;
  int sessions_target = 2;
  int sessions_test = 1;
  int trials_per_session = 40;
  double val_fraction = 0.5;  // labeled share of each target session
  double drift_strength = 0.0;  // mixing-matrix drift per session index
  double bias_drift = 0.0;
  double gain_drift = 0.0;
  double noise_sd = 0.1;
  double speed_min = 1.0;
  double speed_max = 1.0;
  int dur_min = 6;  // frames per phoneme before the trial speed factor
  int dur_max = 12;
  int lexicon_size = 24;
  int word_len_min = 1;
  int word_len_max = 4;
  int sentence_len_min = 2;
  int sentence_len_max = 4;
  int lm_sentences = 2000;  // synthetic text for n-gram estimation

  void validate() const;
};

struct Corpus {
  GenConfig config;
  PhonemeInventory inventory;
  Lexicon lexicon;
  std::vector<SessionParams> sessions;          // ordered by session_index
  std::vector<Trial> trials;                    // all sessions, generation order
  std::vector<std::string> lm_corpus;           // sentences for LM training

  int total_sessions() const { return static_cast<int>(sessions.size()); }
  Split session_split(int session_index) const;
  std::vector<const Trial*> trials_of_session(int session_index) const;
  std::vector<const Trial*> trials_of_split(Split split) const;

  // Label-free view used by every training code path. Target and test trials
  // come back with empty labels and transcripts.
  Trial training_view(const Trial& t) const;
};

PhonemeInventory make_inventory(int phoneme_count, int channels, Rng& rng);

DriftBasis make_drift_basis(int channels, Rng& rng);

SessionParams make_session_params(int session_index, const GenConfig& config, const DriftBasis& basis);

// Convenience form drawing its own basis from rng; resamples on a singular
// mixing matrix.
SessionParams make_session_params(int session_index, double drift_strength, Rng& rng);

Lexicon make_toy_lexicon(const PhonemeInventory& inventory, const GenConfig& config, Rng& rng);

std::pair<std::vector<std::string>, std::vector<int>> sample_sentence(const Lexicon& lexicon, int len_min,
                                                                      int len_max, Rng& rng);

Trial render_trial(const std::vector<int>& phonemes, const SessionParams& session,
                   const PhonemeInventory& inventory, const GenConfig& config, Rng& rng);

Corpus generate_corpus(const GenConfig& config);

// Directory layout: meta, lexicon.tsv, lm_corpus.txt, session_<idx>.jsonl.
// Floats are written with 9 significant digits; a fixed config and seed
// reproduce the directory byte for byte.
void save_corpus(const Corpus& corpus, const std::string& dir);
Corpus load_corpus(const std::string& dir);

}  // namespace align::datagen

#endif  // ALIGN_DATAGEN_HPP_
