#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mmt::corpus {

using Tokens = std::vector<std::string>;

/// Lowercases (Unicode simple case mapping), isolates every punctuation
/// code point (general category P*) as its own token, and splits on Unicode
/// whitespace. Idempotent: normalize_text(join_tokens(normalize_text(s)))
/// equals normalize_text(s). Invalid UTF-8 bytes are replaced by U+FFFD.
Tokens normalize_text(std::string_view text);

/// Whitespace-joined tokens.
std::string join_tokens(const Tokens& tokens);

/// Splits on ASCII spaces/tabs only; used on text that is already normalized.
Tokens split_whitespace(std::string_view text);

/// Decodes UTF-8 into code points (invalid sequences become U+FFFD).
std::u32string utf8_decode(std::string_view text);
std::string utf8_encode(std::u32string_view text);
void utf8_append(std::string& out, char32_t cp);

/// Rejoins normalized tokens for display: no space before closing
/// punctuation, after opening punctuation, or around apostrophes/hyphens.
std::string detokenize(const Tokens& tokens);

}  // namespace mmt::corpus
