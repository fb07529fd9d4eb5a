#pragma once

// Token-stream helpers shared by the text formats (matrix files, circuit
// files, proof system files). Internal to the library; not installed.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace qsd::parse {

struct Token {
    std::string text;
    std::size_t line;
    std::size_t column;
};

// Whitespace-separated tokens; '#' comments run to end of line. Line and
// column are 1-based and refer to the token's first character.
std::vector<Token> tokenize(std::string_view text);

// Cursor over a token vector. Every failed extraction throws parse_error
// positioned at the offending token (or at the end of input).
class Cursor {
public:
    explicit Cursor(const std::vector<Token>& toks) : toks_(&toks) {}

    bool done() const { return at_ >= toks_->size(); }
    const Token& peek() const;
    const Token& take(const char* what);
    std::size_t take_size(const char* what);
    void expect_word(const char* word);
    bool peek_is_size() const;
    bool peek_is(std::string_view word) const;

    [[noreturn]] void fail(const std::string& message) const;

private:
    const std::vector<Token>* toks_;
    std::size_t at_ = 0;
};

}  // namespace qsd::parse
