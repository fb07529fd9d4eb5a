#include "parse_util.hpp"

#include <cctype>
#include <charconv>

#include "qsd/errors.hpp"

namespace qsd::parse {

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> toks;
    std::size_t line = 1, col = 1;
    std::size_t i = 0;
    while (i < text.size()) {
        const char ch = text[i];
        if (ch == '#') {
            while (i < text.size() && text[i] != '\n') ++i;
            continue;
        }
        if (ch == '\n') {
            ++line;
            col = 1;
            ++i;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(ch))) {
            ++col;
            ++i;
            continue;
        }
        std::size_t start = i, startcol = col;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) &&
               text[i] != '#') {
            ++i;
            ++col;
        }
        toks.push_back({std::string(text.substr(start, i - start)), line, startcol});
    }
    return toks;
}

const Token& Cursor::peek() const {
    if (done()) fail("unexpected end of input");
    return (*toks_)[at_];
}

const Token& Cursor::take(const char* what) {
    if (done()) fail(std::string("expected ") + what + ", got end of input");
    return (*toks_)[at_++];
}

std::size_t Cursor::take_size(const char* what) {
    const Token& t = take(what);
    std::size_t v = 0;
    auto [p, e] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (e != std::errc() || p != t.text.data() + t.text.size())
        throw parse_error(std::string("expected ") + what + ", got '" + t.text + "'", t.line,
                          t.column);
    return v;
}

void Cursor::expect_word(const char* word) {
    const Token& t = take(word);
    if (t.text != word)
        throw parse_error(std::string("expected '") + word + "', got '" + t.text + "'", t.line,
                          t.column);
}

bool Cursor::peek_is_size() const {
    if (done()) return false;
    const Token& t = (*toks_)[at_];
    std::size_t v = 0;
    auto [p, e] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    return e == std::errc() && p == t.text.data() + t.text.size();
}

bool Cursor::peek_is(std::string_view word) const {
    return !done() && (*toks_)[at_].text == word;
}

void Cursor::fail(const std::string& message) const {
    if (at_ < toks_->size())
        throw parse_error(message, (*toks_)[at_].line, (*toks_)[at_].column);
    if (!toks_->empty()) throw parse_error(message, toks_->back().line, toks_->back().column);
    throw parse_error(message, 1, 1);
}

}  // namespace qsd::parse
