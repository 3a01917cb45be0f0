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

#include <cctype>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "stag/error.hpp"

namespace stag {

/// Lowercases, drops ASCII punctuation and collapses whitespace.
inline std::string normalize_text(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (unsigned char c : s) {
    if (std::ispunct(c)) continue;
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

inline std::vector<std::string> tokenize(std::string_view s) {
  std::vector<std::string> words;
  const std::string norm = normalize_text(s);
  std::size_t start = 0;
  while (start < norm.size()) {
    auto end = norm.find(' ', start);
    if (end == std::string::npos) end = norm.size();
    words.emplace_back(norm.substr(start, end - start));
    start = end + 1;
  }
  return words;
}

struct TranscriptPair {
  std::string id;
  std::vector<std::string> reference;
  std::vector<std::string> hypothesis;
};

struct EntityRecord {
  std::string id;
  std::string type;
  std::string filler;

  bool operator==(const EntityRecord&) const = default;
};

namespace detail {

template <typename Fn>
void for_each_tsv_row(std::istream& is, Fn&& fn) {
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.empty() || raw.front() == '#') continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const auto pos = raw.find('\t', start);
      fields.emplace_back(raw.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    fn(line_no, fields);
  }
}

inline std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InputError("cannot open " + path.string());
  return is;
}

}  // namespace detail

/// `id<TAB>reference<TAB>hypothesis` per line; `#` lines are comments.
inline std::vector<TranscriptPair> read_transcripts(std::istream& is) {
  std::vector<TranscriptPair> out;
  detail::for_each_tsv_row(is, [&](std::size_t line, const std::vector<std::string>& f) {
    if (f.size() != 3) throw ParseError(line, "expected id<TAB>reference<TAB>hypothesis");
    if (f[0].empty()) throw ParseError(line, "empty id");
    out.push_back({f[0], tokenize(f[1]), tokenize(f[2])});
  });
  return out;
}

inline std::vector<TranscriptPair> read_transcripts(const std::filesystem::path& path) {
  auto is = detail::open_input(path);
  return read_transcripts(is);
}

/// `id<TAB>type<TAB>filler` per line, one entity each.
inline std::vector<EntityRecord> read_entities(std::istream& is) {
  std::vector<EntityRecord> out;
  detail::for_each_tsv_row(is, [&](std::size_t line, const std::vector<std::string>& f) {
    if (f.size() != 3) throw ParseError(line, "expected id<TAB>type<TAB>filler");
    EntityRecord e{f[0], normalize_text(f[1]), normalize_text(f[2])};
    if (e.id.empty() || e.type.empty() || e.filler.empty()) {
      throw ParseError(line, "id, type and filler must be nonempty");
    }
    out.push_back(std::move(e));
  });
  return out;
}

inline std::vector<EntityRecord> read_entities(const std::filesystem::path& path) {
  auto is = detail::open_input(path);
  return read_entities(is);
}

}  // namespace stag
