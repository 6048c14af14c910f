#include "text.hpp"

#include <cctype>

namespace omqkit::text {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }

}  // namespace

std::vector<Token> tokenize(std::string_view src, int first_line) {
    std::vector<Token> out;
    int line = first_line;
    int col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        Token t;
        t.line = line;
        t.col = col;
        if (ident_start(c)) {
            std::size_t j = i;
            while (j < src.size() && ident_char(src[j])) ++j;
            t.kind = Token::Ident;
            t.text = std::string(src.substr(i, j - i));
            advance(j - i);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            t.kind = Token::Number;
            t.text = std::string(src.substr(i, j - i));
            advance(j - i);
        } else if (src.substr(i, 2) == ":-" || src.substr(i, 2) == "->") {
            t.kind = Token::Punct;
            t.text = std::string(src.substr(i, 2));
            advance(2);
        } else if (std::string_view("(),.;|=/:").find(c) != std::string_view::npos) {
            t.kind = Token::Punct;
            t.text = std::string(1, c);
            advance(1);
        } else {
            throw ParseError(line, col, std::string("unexpected character '") + c + "'");
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.kind = Token::End;
    end.line = line;
    end.col = col;
    out.push_back(end);
    return out;
}

const Token& TokenStream::peek(std::size_t ahead) const {
    std::size_t p = pos_ + ahead;
    if (p >= toks_.size()) return toks_.back();
    return toks_[p];
}

Token TokenStream::next() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
}

bool TokenStream::is(const char* punct) const {
    const Token& t = peek();
    return t.kind == Token::Punct && t.text == punct;
}

bool TokenStream::is_word(const char* word) const {
    const Token& t = peek();
    return t.kind == Token::Ident && t.text == word;
}

bool TokenStream::accept(const char* punct) {
    if (!is(punct)) return false;
    next();
    return true;
}

bool TokenStream::accept_word(const char* word) {
    if (!is_word(word)) return false;
    next();
    return true;
}

void TokenStream::expect(const char* punct) {
    if (!accept(punct)) fail(std::string("expected '") + punct + "'");
}

void TokenStream::expect_word(const char* word) {
    if (!accept_word(word)) fail(std::string("expected '") + word + "'");
}

std::string TokenStream::expect_ident(const char* what) {
    if (peek().kind != Token::Ident) fail(std::string("expected ") + what);
    return next().text;
}

std::size_t TokenStream::expect_number() {
    if (peek().kind != Token::Number) fail("expected a number");
    return static_cast<std::size_t>(std::stoul(next().text));
}

void TokenStream::fail(const std::string& msg) const {
    const Token& t = peek();
    std::string found = t.kind == Token::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(t.line, t.col, msg + ", found " + found);
}

std::vector<Line> split_lines(std::string_view src) {
    std::vector<Line> out;
    int number = 0;
    std::size_t start = 0;
    while (start <= src.size()) {
        std::size_t end = src.find('\n', start);
        if (end == std::string_view::npos) end = src.size();
        ++number;
        std::string_view raw = src.substr(start, end - start);
        std::size_t hash = raw.find('#');
        if (hash != std::string_view::npos) raw = raw.substr(0, hash);
        std::size_t b = 0;
        std::size_t e = raw.size();
        while (b < e && std::isspace(static_cast<unsigned char>(raw[b]))) ++b;
        while (e > b && std::isspace(static_cast<unsigned char>(raw[e - 1]))) --e;
        if (e > b) out.push_back(Line{number, std::string(raw.substr(b, e - b))});
        if (end == src.size()) break;
        start = end + 1;
    }
    return out;
}

std::string first_keyword(std::string_view src) {
    auto lines = split_lines(src);
    if (lines.empty()) return "";
    const std::string& l = lines.front().text;
    std::size_t i = 0;
    while (i < l.size() && ident_char(l[i])) ++i;
    return l.substr(0, i);
}

bool is_identifier(std::string_view s) {
    if (s.empty() || !ident_start(s[0])) return false;
    for (char c : s)
        if (!ident_char(c)) return false;
    return true;
}

Atom parse_atom(TokenStream& ts) {
    Atom a;
    a.predicate = ts.expect_ident("predicate name");
    ts.expect("(");
    if (!ts.is(")")) {
        do {
            a.args.push_back(ts.expect_ident("argument"));
        } while (ts.accept(","));
    }
    ts.expect(")");
    return a;
}

void parse_signature_list(TokenStream& ts, Schema& into, int only_line) {
    while (ts.peek().kind == Token::Ident && (only_line < 0 || ts.peek().line == only_line)) {
        const Token& t = ts.peek();
        int line = t.line;
        int col = t.col;
        std::string name = ts.next().text;
        ts.expect("/");
        std::size_t ar = ts.expect_number();
        try {
            into.add(name, ar);
        } catch (const ValidationError& e) {
            throw ParseError(line, col, e.what());
        }
    }
}

}  // namespace omqkit::text
