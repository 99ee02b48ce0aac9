//
// ChemForge - Copyright 2026 ChemForge Developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemforge/tokenizer.hpp"

#include <fstream>

#include "chemforge/elements.hpp"

namespace chemforge {

namespace {

using Code = TokenizerError::Code;

const char* kSpecials[4] = {"[BOS]", "[EOS]", "[PAD]", "[UNK]"};

bool is_letter(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

}  // namespace

Vocabulary Vocabulary::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TokenizerError(Code::BadVocabFile, "cannot open vocabulary file " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return from_lines(lines);
}

Vocabulary Vocabulary::from_lines(const std::vector<std::string>& lines) {
  Vocabulary v;
  for (const std::string& tok : lines) {
    if (tok.empty()) throw TokenizerError(Code::BadVocabFile, "empty vocabulary line");
    if (v.index_.count(tok))
      throw TokenizerError(Code::DuplicateToken, "duplicate token '" + tok + "'");
    v.index_.emplace(tok, static_cast<int>(v.tokens_.size()));
    v.tokens_.push_back(tok);
  }
  if (v.tokens_.size() < 4)
    throw TokenizerError(Code::MissingSpecials, "vocabulary too small for specials");
  for (int i = 0; i < 4; ++i)
    if (v.tokens_[static_cast<size_t>(i)] != kSpecials[i])
      throw TokenizerError(Code::MissingSpecials,
                           std::string("line ") + std::to_string(i) + " must be " + kSpecials[i]);
  return v;
}

int Vocabulary::id_of(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? -1 : it->second;
}

std::vector<std::string> tokenize(std::string_view s, const Vocabulary& vocab,
                                  const EncodeOptions& opts) {
  std::vector<std::string> out;
  bool in_bracket = false;
  size_t i = 0;
  auto push = [&](std::string tok, size_t off) {
    if (vocab.id_of(tok) < 0) {
      if (opts.permissive) {
        out.push_back(kSpecials[3]);
        return;
      }
      throw TokenizerError(Code::UnknownToken, "unknown token '" + tok + "'", off);
    }
    out.push_back(std::move(tok));
  };
  while (i < s.size()) {
    char c = s[i];
    if (c == '[') {
      in_bracket = true;
      push("[", i);
      ++i;
      continue;
    }
    if (c == ']') {
      in_bracket = false;
      push("]", i);
      ++i;
      continue;
    }
    if (c == '@') {
      if (i + 1 < s.size() && s[i + 1] == '@') {
        push("@@", i);
        i += 2;
      } else {
        push("@", i);
        ++i;
      }
      continue;
    }
    if (is_letter(c)) {
      // two-letter element symbols stay whole; outside brackets only the
      // bare-writable halogens Cl and Br qualify
      size_t len = 1;
      if (i + 1 < s.size() && is_letter(s[i + 1])) {
        std::string two(s.substr(i, 2));
        if (in_bracket) {
          if (find_element(two, nullptr) != nullptr) len = 2;
        } else if (two == "Cl" || two == "Br") {
          len = 2;
        }
      }
      push(std::string(s.substr(i, len)), i);
      i += len;
      continue;
    }
    push(std::string(1, c), i);
    ++i;
  }
  return out;
}

TokenSequence encode(std::string_view smiles, const Vocabulary& vocab, const EncodeOptions& opts) {
  std::vector<std::string> toks = tokenize(smiles, vocab, opts);
  TokenSequence seq;
  seq.ids.reserve(toks.size() + 2);
  seq.ids.push_back(static_cast<uint16_t>(vocab.bos()));
  for (const auto& t : toks) seq.ids.push_back(static_cast<uint16_t>(vocab.id_of(t)));
  seq.ids.push_back(static_cast<uint16_t>(vocab.eos()));
  if (opts.max_length > 0 && seq.length() > opts.max_length)
    throw TokenizerError(Code::SequenceTooLong,
                         "sequence of " + std::to_string(seq.length()) +
                             " tokens exceeds context length " + std::to_string(opts.max_length));
  return seq;
}

std::string decode(const TokenSequence& seq, const Vocabulary& vocab) {
  std::string out;
  for (uint16_t id : seq.ids) {
    if (id >= vocab.size())
      throw TokenizerError(Code::IdOutOfRange, "token id " + std::to_string(id) + " out of range");
    if (id == vocab.bos() || id == vocab.eos() || id == vocab.pad()) continue;
    out += vocab.token(id);
  }
  return out;
}

}  // namespace chemforge
