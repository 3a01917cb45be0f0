// Copyright 2026 The stag Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "stag/error.hpp"
#include "stag/text.hpp"

namespace stag {

struct WerBreakdown {
  std::size_t deletions = 0;
  std::size_t substitutions = 0;
  std::size_t insertions = 0;
  std::size_t reference_words = 0;
  double wer = 0.0;  // percent, may exceed 100

  std::size_t errors() const { return deletions + substitutions + insertions; }
};

/// Word error rate from a unit-cost Levenshtein alignment. When several
/// minimal alignments exist, backtracking from the end prefers a
/// substitution (or match), then an insertion, then a deletion.
template <typename Word>
WerBreakdown wer(std::span<const Word> ref, std::span<const Word> hyp) {
  const std::size_t n = ref.size();
  const std::size_t m = hyp.size();
  if (n == 0) throw ArgumentError("WER is undefined for an empty reference");
  std::vector<std::size_t> d((n + 1) * (m + 1));
  const auto at = [&](std::size_t i, std::size_t j) -> std::size_t& { return d[i * (m + 1) + j]; };
  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = i;
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t sub = at(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      at(i, j) = std::min({sub, at(i, j - 1) + 1, at(i - 1, j) + 1});
    }
  }
  WerBreakdown b;
  b.reference_words = n;
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && at(i, j) == at(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0 : 1)) {
      if (ref[i - 1] != hyp[j - 1]) ++b.substitutions;
      --i;
      --j;
    } else if (j > 0 && at(i, j) == at(i, j - 1) + 1) {
      ++b.insertions;
      --j;
    } else {
      ++b.deletions;
      --i;
    }
  }
  b.wer = static_cast<double>(b.errors()) / static_cast<double>(n) * 100.0;
  return b;
}

inline WerBreakdown wer(const std::vector<std::string>& ref, const std::vector<std::string>& hyp) {
  return wer<std::string>(std::span<const std::string>(ref), std::span<const std::string>(hyp));
}

/// Reference entities with no matching (type, filler) in the hypothesis.
/// Each hypothesis entity can match one reference entity.
inline std::size_t incorrect_entities(std::span<const EntityRecord> ref, std::span<const EntityRecord> hyp) {
  std::vector<bool> used(hyp.size(), false);
  std::size_t wrong = 0;
  for (const auto& r : ref) {
    bool found = false;
    for (std::size_t k = 0; k < hyp.size(); ++k) {
      if (!used[k] && hyp[k].type == r.type && hyp[k].filler == r.filler) {
        used[k] = true;
        found = true;
        break;
      }
    }
    if (!found) ++wrong;
  }
  return wrong;
}

/// A sentence is correct only if every reference entity is recognized.
/// Extra hypothesis entities do not count against it.
inline bool sentence_correct(std::span<const EntityRecord> ref, std::span<const EntityRecord> hyp) {
  return incorrect_entities(ref, hyp) == 0;
}

struct SentenceDetail {
  std::string id;
  WerBreakdown wer;
  std::size_t entities = 0;
  std::size_t incorrect_entities = 0;
  bool correct = true;
};

struct CorpusReport {
  double wer = 0.0;   // pooled: sum(errors) / sum(N) * 100
  double ser = 0.0;   // incorrect sentences / sentences * 100
  double seer = 0.0;  // incorrect entities / entities * 100
  std::size_t errors = 0;
  std::size_t words = 0;
  std::size_t sentences = 0;
  std::size_t incorrect_sentences = 0;
  std::size_t entities = 0;
  std::size_t incorrect_entity_count = 0;
  bool has_entities = false;
  std::vector<SentenceDetail> details;
};

/// Corpus WER plus, when entity lists are given, SER and SEER. Every
/// transcript needs at least one reference entity and every entity id must
/// name a transcript.
inline CorpusReport corpus_report(std::span<const TranscriptPair> transcripts,
                                  std::optional<std::span<const EntityRecord>> ref_entities = std::nullopt,
                                  std::optional<std::span<const EntityRecord>> hyp_entities = std::nullopt) {
  if (transcripts.empty()) throw ArgumentError("corpus has no sentences");
  if (ref_entities.has_value() != hyp_entities.has_value()) {
    throw ArgumentError("reference and hypothesis entities must be given together");
  }
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < transcripts.size(); ++i) {
    if (!index.emplace(transcripts[i].id, i).second) throw InputError("duplicate transcript id '" + transcripts[i].id + "'");
  }
  std::vector<std::vector<EntityRecord>> ref_by(transcripts.size());
  std::vector<std::vector<EntityRecord>> hyp_by(transcripts.size());
  const auto group = [&](std::span<const EntityRecord> list, std::vector<std::vector<EntityRecord>>& out,
                         const char* which) {
    for (const auto& e : list) {
      const auto it = index.find(e.id);
      if (it == index.end()) throw InputError(std::string(which) + " entity id '" + e.id + "' has no transcript");
      out[it->second].push_back(e);
    }
  };

  CorpusReport rep;
  rep.has_entities = ref_entities.has_value();
  if (rep.has_entities) {
    group(*ref_entities, ref_by, "reference");
    group(*hyp_entities, hyp_by, "hypothesis");
  }
  rep.sentences = transcripts.size();
  for (std::size_t i = 0; i < transcripts.size(); ++i) {
    const auto& t = transcripts[i];
    SentenceDetail sd;
    sd.id = t.id;
    if (t.reference.empty()) throw InputError("transcript '" + t.id + "' has an empty reference");
    sd.wer = wer(t.reference, t.hypothesis);
    rep.errors += sd.wer.errors();
    rep.words += sd.wer.reference_words;
    if (rep.has_entities) {
      if (ref_by[i].empty()) throw InputError("transcript '" + t.id + "' has no reference entities");
      sd.entities = ref_by[i].size();
      sd.incorrect_entities = incorrect_entities(ref_by[i], hyp_by[i]);
      sd.correct = sd.incorrect_entities == 0;
      rep.entities += sd.entities;
      rep.incorrect_entity_count += sd.incorrect_entities;
      if (!sd.correct) ++rep.incorrect_sentences;
    }
    rep.details.push_back(std::move(sd));
  }
  rep.wer = static_cast<double>(rep.errors) / static_cast<double>(rep.words) * 100.0;
  if (rep.has_entities) {
    rep.ser = static_cast<double>(rep.incorrect_sentences) / static_cast<double>(rep.sentences) * 100.0;
    rep.seer = static_cast<double>(rep.incorrect_entity_count) / static_cast<double>(rep.entities) * 100.0;
  }
  return rep;
}

namespace detail {
inline std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}
}  // namespace detail

/// Key-value summary, one `key=value` per line.
inline void write_report(const CorpusReport& r, std::ostream& os) {
  os << "sentences=" << r.sentences << '\n';
  os << "words=" << r.words << '\n';
  os << "word_errors=" << r.errors << '\n';
  os << "wer_pct=" << detail::pct(r.wer) << '\n';
  if (r.has_entities) {
    os << "incorrect_sentences=" << r.incorrect_sentences << '\n';
    os << "ser_pct=" << detail::pct(r.ser) << '\n';
    os << "entities=" << r.entities << '\n';
    os << "incorrect_entities=" << r.incorrect_entity_count << '\n';
    os << "seer_pct=" << detail::pct(r.seer) << '\n';
  }
}

/// Per-sentence TSV: id, N, S, D, I, wer_pct, entities, incorrect_entities, correct.
inline void write_details(const CorpusReport& r, std::ostream& os) {
  os << "id\tN\tS\tD\tI\twer_pct\tentities\tincorrect_entities\tcorrect\n";
  for (const auto& s : r.details) {
    os << s.id << '\t' << s.wer.reference_words << '\t' << s.wer.substitutions << '\t' << s.wer.deletions << '\t'
       << s.wer.insertions << '\t' << detail::pct(s.wer.wer) << '\t' << s.entities << '\t' << s.incorrect_entities
       << '\t' << (s.correct ? "yes" : "no") << '\n';
  }
}

}  // namespace stag
