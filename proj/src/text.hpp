#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "omqkit/core.hpp"

namespace omqkit::text {

struct Token {
    enum Kind { Ident, Number, Punct, End };
    Kind kind = End;
    std::string text;
    int line = 1;
    int col = 1;
};

// Whitespace and '#' comments are skipped. Punctuation: ":-" "->" and the
// single characters ( ) , . ; | = / :
std::vector<Token> tokenize(std::string_view src, int first_line = 1);

class TokenStream {
public:
    explicit TokenStream(std::vector<Token> toks) : toks_(std::move(toks)) {}

    const Token& peek(std::size_t ahead = 0) const;
    Token next();
    bool at_end() const { return peek().kind == Token::End; }
    bool is(const char* punct) const;
    bool is_word(const char* word) const;
    bool accept(const char* punct);
    bool accept_word(const char* word);
    void expect(const char* punct);
    void expect_word(const char* word);
    std::string expect_ident(const char* what = "identifier");
    std::size_t expect_number();
    [[noreturn]] void fail(const std::string& msg) const;

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

struct Line {
    int number;
    std::string text;  // comment stripped, trimmed, non-empty
};

std::vector<Line> split_lines(std::string_view src);

// First word of the first non-comment line, or "".
std::string first_keyword(std::string_view src);

bool is_identifier(std::string_view s);

// "Name(a,b,...)" with identifiers; the predicate may be "=" only through the
// infix form handled by callers.
Atom parse_atom(TokenStream& ts);

// "Name/arity" lists as used by schema headers.
void parse_signature_list(TokenStream& ts, Schema& into, int only_line = -1);

}  // namespace omqkit::text
