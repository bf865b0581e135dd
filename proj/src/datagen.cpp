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
#include "align/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "align/errors.hpp"
#include "align/textio.hpp"
#include "json.hpp"

namespace align::datagen {

namespace fs = std::filesystem;

std::string split_name(Split s) {
  switch (s) {
    case Split::kSource: return "source";
    case Split::kTarget: return "target";
    case Split::kValidation: return "validation";
    case Split::kTest: return "test";
  }
  throw DataError("split_name: bad split");
}

Split split_from_name(const std::string& name) {
  if (name == "source") return Split::kSource;
  if (name == "target") return Split::kTarget;
  if (name == "validation") return Split::kValidation;
  if (name == "test") return Split::kTest;
  throw DataError("split_from_name: unknown split '" + name + "'");
}

double PhonemeInventory::min_pairwise_distance() const {
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < prototypes.size(); ++i) {
    for (size_t j = i + 1; j < prototypes.size(); ++j) {
      double d = 0.0;
      for (int k = 0; k < channels; ++k) {
        const double diff = prototypes[i][k] - prototypes[j][k];
        d += diff * diff;
      }
      best = std::min(best, std::sqrt(d));
    }
  }
  return best;
}

void PhonemeInventory::validate() const {
  if (count() < 2) throw DataError("inventory: need at least 2 phonemes");
  if (channels < 2) throw DataError("inventory: need at least 2 channels");
  for (const auto& p : prototypes)
    if (static_cast<int>(p.size()) != channels) throw DataError("inventory: prototype dimension mismatch");
  if (!(min_pairwise_distance() > 0.0)) throw DataError("inventory: prototypes not pairwise distinct");
}

void GenConfig::validate() const {
  if (channels < 2) throw ConfigError("datagen: channels must be >= 2");
  if (phonemes < 2 || phonemes > 26) throw ConfigError("datagen: phonemes must be in [2,26]");
  if (sessions_source < 1 || sessions_target < 1 || sessions_test < 1)
    throw ConfigError("datagen: partition counts must each be >= 1");
  if (trials_per_session < 1) throw ConfigError("datagen: trials_per_session must be >= 1");
  if (val_fraction < 0.0 || val_fraction > 1.0) throw ConfigError("datagen: val_fraction must be in [0,1]");
  if (drift_strength < 0.0 || bias_drift < 0.0 || gain_drift < 0.0)
    throw ConfigError("datagen: drift strengths must be >= 0");
  if (noise_sd < 0.0) throw ConfigError("datagen: noise_sd must be >= 0");
  if (!(speed_min > 0.5 && speed_max < 3.0 && speed_min <= speed_max))
    throw ConfigError("datagen: speed range must satisfy 0.5 < min <= max < 3.0");
  if (dur_min < 2 || dur_min > dur_max) throw ConfigError("datagen: need 2 <= dur_min <= dur_max");
  if (lexicon_size < 1) throw ConfigError("datagen: lexicon_size must be >= 1");
  if (word_len_min < 1 || word_len_min > word_len_max || word_len_max > 8)
    throw ConfigError("datagen: word length range invalid");
  if (sentence_len_min < 1 || sentence_len_min > sentence_len_max)
    throw ConfigError("datagen: sentence length range invalid");
  if (lm_sentences < 1) throw ConfigError("datagen: lm_sentences must be >= 1");
}

Split Corpus::session_split(int session_index) const {
  if (session_index < config.sessions_source) return Split::kSource;
  if (session_index < config.sessions_source + config.sessions_target) return Split::kTarget;
  if (session_index < total_sessions()) return Split::kTest;
  throw DataError("session_split: index out of range");
}

std::vector<const Trial*> Corpus::trials_of_session(int session_index) const {
  std::vector<const Trial*> out;
  for (const auto& t : trials)
    if (t.session_id == session_index) out.push_back(&t);
  return out;
}

std::vector<const Trial*> Corpus::trials_of_split(Split split) const {
  std::vector<const Trial*> out;
  for (const auto& t : trials)
    if (t.split == split) out.push_back(&t);
  return out;
}

Trial Corpus::training_view(const Trial& t) const {
  Trial view = t;
  if (t.split == Split::kTarget || t.split == Split::kTest) {
    view.labels.clear();
    view.transcript.clear();
  }
  return view;
}

PhonemeInventory make_inventory(int phoneme_count, int channels, Rng& rng) {
  if (phoneme_count < 2) throw DataError("make_inventory: K must be >= 2");
  if (channels < 2) throw DataError("make_inventory: c must be >= 2");
  constexpr double kMinDistance = 1.0;
  constexpr int kResampleBudget = 100;

  for (int attempt = 0; attempt < kResampleBudget; ++attempt) {
    PhonemeInventory inv;
    inv.channels = channels;
    inv.prototypes.resize(phoneme_count);
    for (auto& proto : inv.prototypes) {
      proto.resize(channels);
      for (double& v : proto) v = rng.normal();
    }
    if (inv.min_pairwise_distance() > kMinDistance) return inv;
  }
  throw DataError("make_inventory: could not place " + std::to_string(phoneme_count) + " prototypes in " +
                  std::to_string(channels) + " channels within the resample budget");
}

DriftBasis make_drift_basis(int channels, Rng& rng) {
  DriftBasis basis;
  basis.mix_direction = Matrix(channels, channels);
  for (size_t i = 0; i < basis.mix_direction.size(); ++i) basis.mix_direction[i] = rng.normal();
  const double fro = basis.mix_direction.frobenius_norm();
  for (size_t i = 0; i < basis.mix_direction.size(); ++i) basis.mix_direction[i] /= fro;

  auto unit_vector = [&rng, channels]() {
    std::vector<double> v(channels);
    double norm = 0.0;
    for (double& x : v) {
      x = rng.normal();
      norm += x * x;
    }
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
    return v;
  };
  basis.bias_direction = unit_vector();
  basis.gain_direction = unit_vector();
  return basis;
}

namespace {

// |det| via LU with partial pivoting; used only as a singularity check.
double abs_determinant(const Matrix& m) {
  const int n = m.rows();
  Matrix a = m;
  double det = 1.0;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    if (a(pivot, col) == 0.0) return 0.0;
    if (pivot != col)
      for (int k = 0; k < n; ++k) std::swap(a(pivot, k), a(col, k));
    det *= a(col, col);
    for (int r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      for (int k = col; k < n; ++k) a(r, k) -= f * a(col, k);
    }
  }
  return std::abs(det);
}

constexpr double kSingularTol = 1e-6;

}  // namespace

SessionParams make_session_params(int session_index, const GenConfig& config, const DriftBasis& basis) {
  const int c = config.channels;
  SessionParams sp;
  sp.session_index = session_index;
  sp.mix = Matrix::identity(c);
  const double mix_scale = config.drift_strength * session_index;
  for (int i = 0; i < c; ++i)
    for (int j = 0; j < c; ++j) sp.mix(i, j) += mix_scale * basis.mix_direction(i, j);
  if (abs_determinant(sp.mix) <= kSingularTol)
    throw DataError("make_session_params: singular mixing matrix at session " + std::to_string(session_index));

  sp.offset.resize(c);
  sp.gain.resize(c);
  const double bias_scale = config.bias_drift * session_index;
  const double gain_scale = config.gain_drift * session_index;
  for (int i = 0; i < c; ++i) {
    sp.offset[i] = bias_scale * basis.bias_direction[i];
    sp.gain[i] = std::exp(gain_scale * basis.gain_direction[i]);
  }
  sp.noise_sd = config.noise_sd;
  sp.speed_min = config.speed_min;
  sp.speed_max = config.speed_max;
  return sp;
}

SessionParams make_session_params(int session_index, double drift_strength, Rng& rng) {
  GenConfig cfg;
  cfg.drift_strength = drift_strength;
  cfg.noise_sd = 0.0;
  for (int attempt = 0; attempt < 100; ++attempt) {
    DriftBasis basis = make_drift_basis(cfg.channels, rng);
    try {
      return make_session_params(session_index, cfg, basis);
    } catch (const DataError&) {
      continue;  // singular mix, redraw the direction
    }
  }
  throw DataError("make_session_params: no nonsingular mixing matrix found");
}

Lexicon make_toy_lexicon(const PhonemeInventory& inventory, const GenConfig& config, Rng& rng) {
  const int k = inventory.count();
  Lexicon lex;
  std::set<std::vector<int>> seen;
  int made = 0;
  int attempts = 0;
  const int max_attempts = config.lexicon_size * 1000;
  while (made < config.lexicon_size) {
    if (++attempts > max_attempts)
      throw DataError("make_toy_lexicon: could not build enough distinct pronunciations");
    const int len = rng.uniform_int_range(config.word_len_min, config.word_len_max);
    std::vector<int> pron(len);
    for (int& p : pron) p = 1 + static_cast<int>(rng.uniform_int(static_cast<uint64_t>(k)));
    if (!seen.insert(pron).second) continue;
    // word string spells the pronunciation, one letter per phoneme id
    std::string word;
    for (int p : pron) word += static_cast<char>('a' + p - 1);
    lex.add(word, std::move(pron));
    ++made;
  }
  return lex;
}

std::pair<std::vector<std::string>, std::vector<int>> sample_sentence(const Lexicon& lexicon, int len_min,
                                                                      int len_max, Rng& rng) {
  if (lexicon.size() == 0) throw DataError("sample_sentence: empty lexicon");
  if (len_min < 1 || len_min > len_max) throw DataError("sample_sentence: bad length range");
  std::vector<std::string> words_pool;
  words_pool.reserve(lexicon.size());
  for (const auto& [w, _] : lexicon.entries()) words_pool.push_back(w);

  const int len = rng.uniform_int_range(len_min, len_max);
  std::vector<std::string> words(len);
  std::vector<int> phonemes;
  for (auto& w : words) {
    w = words_pool[rng.uniform_int(words_pool.size())];
    const auto& pron = lexicon.pronunciation(w);
    phonemes.insert(phonemes.end(), pron.begin(), pron.end());
  }
  return {std::move(words), std::move(phonemes)};
}

Trial render_trial(const std::vector<int>& phonemes, const SessionParams& session,
                   const PhonemeInventory& inventory, const GenConfig& config, Rng& rng) {
  if (phonemes.empty()) throw DataError("render_trial: empty phoneme sequence");
  const int c = inventory.channels;

  const double speed = rng.uniform(session.speed_min, session.speed_max);
  std::vector<int> durations(phonemes.size());
  int total = 0;
  for (size_t i = 0; i < phonemes.size(); ++i) {
    const int base = rng.uniform_int_range(config.dur_min, config.dur_max);
    durations[i] = std::max(2, static_cast<int>(std::llround(base * speed)));
    total += durations[i];
  }

  Trial trial;
  trial.labels = phonemes;
  trial.session_id = session.session_index;
  trial.features = Matrix(total, c);

  // session response to a prototype: gain (.) (A mu + b)
  std::vector<double> response(c);
  int t = 0;
  for (size_t i = 0; i < phonemes.size(); ++i) {
    const int k = phonemes[i];
    if (k < 1 || k > inventory.count()) throw DataError("render_trial: phoneme id out of range");
    const auto& proto = inventory.prototypes[k - 1];
    for (int r = 0; r < c; ++r) {
      double acc = 0.0;
      for (int j = 0; j < c; ++j) acc += session.mix(r, j) * proto[j];
      response[r] = session.gain[r] * (acc + session.offset[r]);
    }
    for (int d = 0; d < durations[i]; ++d, ++t) {
      for (int r = 0; r < c; ++r) {
        const double eps = session.noise_sd > 0.0 ? rng.normal(0.0, session.noise_sd) : 0.0;
        trial.features(t, r) = response[r] + eps;
      }
    }
  }
  return trial;
}

Corpus generate_corpus(const GenConfig& config) {
  config.validate();
  Corpus corpus;
  corpus.config = config;

  Rng inv_rng = Rng::substream(config.seed, "datagen/inventory");
  corpus.inventory = make_inventory(config.phonemes, config.channels, inv_rng);

  Rng lex_rng = Rng::substream(config.seed, "datagen/lexicon");
  corpus.lexicon = make_toy_lexicon(corpus.inventory, config, lex_rng);

  const int total_sessions = config.sessions_source + config.sessions_target + config.sessions_test;

  DriftBasis basis;
  bool ok = false;
  for (uint64_t attempt = 0; attempt < 100 && !ok; ++attempt) {
    Rng basis_rng = Rng::substream(config.seed, "datagen/basis", attempt);
    basis = make_drift_basis(config.channels, basis_rng);
    ok = true;
    for (int s = 0; s < total_sessions && ok; ++s) {
      try {
        (void)make_session_params(s, config, basis);
      } catch (const DataError&) {
        ok = false;
      }
    }
  }
  if (!ok) throw DataError("generate_corpus: could not find a nonsingular drift basis");

  const int val_count = static_cast<int>(std::llround(config.val_fraction * config.trials_per_session));
  for (int s = 0; s < total_sessions; ++s) {
    SessionParams sp = make_session_params(s, config, basis);
    corpus.sessions.push_back(sp);
    const Split session_split = corpus.session_split(s);
    for (int i = 0; i < config.trials_per_session; ++i) {
      Rng sent_rng = Rng::substream(config.seed, "datagen/sentence", static_cast<uint64_t>(s),
                                    static_cast<uint64_t>(i));
      auto [words, phonemes] =
          sample_sentence(corpus.lexicon, config.sentence_len_min, config.sentence_len_max, sent_rng);
      Rng render_rng = Rng::substream(config.seed, "datagen/render", static_cast<uint64_t>(s),
                                      static_cast<uint64_t>(i));
      Trial trial = render_trial(phonemes, sp, corpus.inventory, config, render_rng);
      trial.transcript = join(words, " ");
      if (session_split == Split::kTarget) {
        trial.split = (i < val_count) ? Split::kValidation : Split::kTarget;
      } else {
        trial.split = session_split;
      }
      corpus.trials.push_back(std::move(trial));
    }
  }

  Rng lm_rng = Rng::substream(config.seed, "datagen/lmtext");
  corpus.lm_corpus.reserve(config.lm_sentences);
  for (int i = 0; i < config.lm_sentences; ++i) {
    auto [words, _] = sample_sentence(corpus.lexicon, config.sentence_len_min, config.sentence_len_max, lm_rng);
    corpus.lm_corpus.push_back(join(words, " "));
  }
  return corpus;
}

namespace {

std::string trial_to_json(const Trial& t) {
  std::string out = "{\"dims\":[" + std::to_string(t.features.rows()) + "," +
                    std::to_string(t.features.cols()) + "],\"features\":[";
  for (size_t i = 0; i < t.features.size(); ++i) {
    if (i) out += ',';
    out += format_g9(t.features[i]);
  }
  out += "],\"labels\":[";
  for (size_t i = 0; i < t.labels.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(t.labels[i]);
  }
  out += "],\"transcript\":\"" + t.transcript + "\",\"split\":\"" + split_name(t.split) + "\"}";
  return out;
}

Trial trial_from_json(const std::string& line, int session_index) {
  const nlohmann::json j = nlohmann::json::parse(line);
  Trial t;
  const int rows = j.at("dims").at(0).get<int>();
  const int cols = j.at("dims").at(1).get<int>();
  t.features = Matrix(rows, cols);
  const auto& feats = j.at("features");
  if (static_cast<size_t>(feats.size()) != t.features.size())
    throw DataError("corpus: feature count does not match dims");
  for (size_t i = 0; i < t.features.size(); ++i) t.features[i] = feats.at(i).get<double>();
  for (const auto& l : j.at("labels")) t.labels.push_back(l.get<int>());
  t.transcript = j.at("transcript").get<std::string>();
  t.split = split_from_name(j.at("split").get<std::string>());
  t.session_id = session_index;
  return t;
}

std::string meta_text(const GenConfig& c) {
  std::ostringstream out;
  out << "format = align-corpus-v1\n";
  out << "seed = " << c.seed << "\n";
  out << "channels = " << c.channels << "\n";
  out << "phonemes = " << c.phonemes << "\n";
  out << "sessions_source = " << c.sessions_source << "\n";
  out << "sessions_target = " << c.sessions_target << "\n";
  out << "sessions_test = " << c.sessions_test << "\n";
  out << "trials_per_session = " << c.trials_per_session << "\n";
  out << "val_fraction = " << format_g9(c.val_fraction) << "\n";
  out << "drift_strength = " << format_g9(c.drift_strength) << "\n";
  out << "bias_drift = " << format_g9(c.bias_drift) << "\n";
  out << "gain_drift = " << format_g9(c.gain_drift) << "\n";
  out << "noise_sd = " << format_g9(c.noise_sd) << "\n";
  out << "speed_min = " << format_g9(c.speed_min) << "\n";
  out << "speed_max = " << format_g9(c.speed_max) << "\n";
  out << "dur_min = " << c.dur_min << "\n";
  out << "dur_max = " << c.dur_max << "\n";
  out << "lexicon_size = " << c.lexicon_size << "\n";
  out << "word_len_min = " << c.word_len_min << "\n";
  out << "word_len_max = " << c.word_len_max << "\n";
  out << "sentence_len_min = " << c.sentence_len_min << "\n";
  out << "sentence_len_max = " << c.sentence_len_max << "\n";
  out << "lm_sentences = " << c.lm_sentences << "\n";
  return out.str();
}

GenConfig meta_parse(const std::string& text) {
  GenConfig c;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const size_t eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key == "format") {
      if (val != "align-corpus-v1") throw DataError("corpus meta: unknown format '" + val + "'");
    } else if (key == "seed") c.seed = std::stoull(val);
    else if (key == "channels") c.channels = std::stoi(val);
    else if (key == "phonemes") c.phonemes = std::stoi(val);
    else if (key == "sessions_source") c.sessions_source = std::stoi(val);
    else if (key == "sessions_target") c.sessions_target = std::stoi(val);
    else if (key == "sessions_test") c.sessions_test = std::stoi(val);
    else if (key == "trials_per_session") c.trials_per_session = std::stoi(val);
    else if (key == "val_fraction") c.val_fraction = std::stod(val);
    else if (key == "drift_strength") c.drift_strength = std::stod(val);
    else if (key == "bias_drift") c.bias_drift = std::stod(val);
    else if (key == "gain_drift") c.gain_drift = std::stod(val);
    else if (key == "noise_sd") c.noise_sd = std::stod(val);
    else if (key == "speed_min") c.speed_min = std::stod(val);
    else if (key == "speed_max") c.speed_max = std::stod(val);
    else if (key == "dur_min") c.dur_min = std::stoi(val);
    else if (key == "dur_max") c.dur_max = std::stoi(val);
    else if (key == "lexicon_size") c.lexicon_size = std::stoi(val);
    else if (key == "word_len_min") c.word_len_min = std::stoi(val);
    else if (key == "word_len_max") c.word_len_max = std::stoi(val);
    else if (key == "sentence_len_min") c.sentence_len_min = std::stoi(val);
    else if (key == "sentence_len_max") c.sentence_len_max = std::stoi(val);
    else if (key == "lm_sentences") c.lm_sentences = std::stoi(val);
    else throw DataError("corpus meta: unknown key '" + key + "'");
  }
  return c;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << content;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

void save_corpus(const Corpus& corpus, const std::string& dir) {
  fs::create_directories(dir);
  write_file(fs::path(dir) / "meta", meta_text(corpus.config));
  write_file(fs::path(dir) / "lexicon.tsv", corpus.lexicon.serialize());
  std::string lm_text;
  for (const auto& s : corpus.lm_corpus) lm_text += s + "\n";
  write_file(fs::path(dir) / "lm_corpus.txt", lm_text);

  for (int s = 0; s < corpus.total_sessions(); ++s) {
    std::string body;
    for (const Trial* t : corpus.trials_of_session(s)) body += trial_to_json(*t) + "\n";
    write_file(fs::path(dir) / ("session_" + std::to_string(s) + ".jsonl"), body);
  }
}

Corpus load_corpus(const std::string& dir) {
  Corpus corpus;
  corpus.config = meta_parse(read_file(fs::path(dir) / "meta"));
  corpus.config.validate();
  corpus.lexicon = Lexicon::parse(read_file(fs::path(dir) / "lexicon.tsv"));
  {
    std::istringstream in(read_file(fs::path(dir) / "lm_corpus.txt"));
    std::string line;
    while (std::getline(in, line))
      if (!trim(line).empty()) corpus.lm_corpus.push_back(trim(line));
  }

  // regenerate inventory and session params from the echoed config; the
  // serialized trials are the data of record
  Rng inv_rng = Rng::substream(corpus.config.seed, "datagen/inventory");
  corpus.inventory = make_inventory(corpus.config.phonemes, corpus.config.channels, inv_rng);

  const int total_sessions =
      corpus.config.sessions_source + corpus.config.sessions_target + corpus.config.sessions_test;
  DriftBasis basis;
  bool ok = false;
  for (uint64_t attempt = 0; attempt < 100 && !ok; ++attempt) {
    Rng basis_rng = Rng::substream(corpus.config.seed, "datagen/basis", attempt);
    basis = make_drift_basis(corpus.config.channels, basis_rng);
    ok = true;
    for (int s = 0; s < total_sessions && ok; ++s) {
      try {
        (void)make_session_params(s, corpus.config, basis);
      } catch (const DataError&) {
        ok = false;
      }
    }
  }
  if (!ok) throw DataError("load_corpus: could not rebuild drift basis");
  for (int s = 0; s < total_sessions; ++s) corpus.sessions.push_back(make_session_params(s, corpus.config, basis));

  for (int s = 0; s < total_sessions; ++s) {
    const fs::path file = fs::path(dir) / ("session_" + std::to_string(s) + ".jsonl");
    std::istringstream in(read_file(file));
    std::string line;
    while (std::getline(in, line)) {
      if (trim(line).empty()) continue;
      corpus.trials.push_back(trial_from_json(line, s));
    }
  }
  return corpus;
}

}  // namespace align::datagen
