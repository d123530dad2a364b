#pragma once

#include "jibisim/error.hpp"
#include "jibisim/term.hpp"

#include <cctype>
#include <optional>
#include <string>
#include <vector>

namespace jibisim {

struct ParsedFile {
    DefinitionSet defs;
    std::optional<ProcessTerm> root;
};

/// Parses the process language:
///
///   file      := (defn ";")* term?
///   defn      := "def" NAME "=" term
///   term      := sum
///   sum       := join ("+" join)*
///   join      := prefix ("&" prefix)*
///   prefix    := ACTION "." prefix | atom
///   atom      := "0" | ACTION | NAME | "(" term ")"
///
/// ACTION = [a-z][a-z0-9_]*, NAME = [A-Z][A-Za-z0-9_]*. A bare action as an
/// atom abbreviates action.0. '#' starts a comment; whitespace is free.
/// Unbound names and unguarded recursion are rejected with positions.
inline ParsedFile parse(const std::string& text) {
    enum class Tok { Def, Name, Action, Zero, Plus, Amp, Dot, Equals, Semi, LParen, RParen, End };
    struct Token {
        Tok kind;
        std::string text;
        int line, col;
    };

    struct Lexer {
        const std::string& s;
        std::size_t pos = 0;
        int line = 1, col = 1;

        void bump() {
            if (s[pos] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++pos;
        }

        Token next() {
            for (;;) {
                while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) bump();
                if (pos < s.size() && s[pos] == '#') {
                    while (pos < s.size() && s[pos] != '\n') bump();
                    continue;
                }
                break;
            }
            const int l = line, c = col;
            if (pos >= s.size()) return {Tok::End, "", l, c};
            const char ch = s[pos];
            switch (ch) {
            case '+': bump(); return {Tok::Plus, "+", l, c};
            case '&': bump(); return {Tok::Amp, "&", l, c};
            case '.': bump(); return {Tok::Dot, ".", l, c};
            case '=': bump(); return {Tok::Equals, "=", l, c};
            case ';': bump(); return {Tok::Semi, ";", l, c};
            case '(': bump(); return {Tok::LParen, "(", l, c};
            case ')': bump(); return {Tok::RParen, ")", l, c};
            case '0': bump(); return {Tok::Zero, "0", l, c};
            default: break;
            }
            if (std::islower(static_cast<unsigned char>(ch))) {
                std::string word;
                while (pos < s.size() &&
                       (std::islower(static_cast<unsigned char>(s[pos])) ||
                        std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) {
                    word.push_back(s[pos]);
                    bump();
                }
                if (word == "def") return {Tok::Def, word, l, c};
                return {Tok::Action, word, l, c};
            }
            if (std::isupper(static_cast<unsigned char>(ch))) {
                std::string word;
                while (pos < s.size() &&
                       (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) {
                    word.push_back(s[pos]);
                    bump();
                }
                return {Tok::Name, word, l, c};
            }
            throw ParseError(std::string("unexpected character '") + ch + "'", l, c);
        }
    };

    struct Parser {
        Lexer lex;
        Token tok;
        std::vector<Token> ref_sites;

        explicit Parser(const std::string& text) : lex{text} { tok = lex.next(); }

        void advance() { tok = lex.next(); }
        [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, tok.line, tok.col); }

        ProcessTerm parse_term() { return parse_sum(); }

        ProcessTerm parse_sum() {
            ProcessTerm t = parse_join();
            while (tok.kind == Tok::Plus) {
                advance();
                t = ProcessTerm::sum(std::move(t), parse_join());
            }
            return t;
        }

        ProcessTerm parse_join() {
            ProcessTerm t = parse_prefix();
            while (tok.kind == Tok::Amp) {
                advance();
                t = ProcessTerm::join(std::move(t), parse_prefix());
            }
            return t;
        }

        ProcessTerm parse_prefix() {
            if (tok.kind == Tok::Action) {
                const std::string action = tok.text;
                advance();
                if (tok.kind == Tok::Dot) {
                    advance();
                    return ProcessTerm::prefix(action, parse_prefix());
                }
                return ProcessTerm::prefix(action, ProcessTerm::nil()); // bare action
            }
            return parse_atom();
        }

        ProcessTerm parse_atom() {
            switch (tok.kind) {
            case Tok::Zero:
                advance();
                return ProcessTerm::nil();
            case Tok::Name: {
                ref_sites.push_back(tok);
                ProcessTerm t = ProcessTerm::ref(tok.text);
                advance();
                return t;
            }
            case Tok::LParen: {
                advance();
                ProcessTerm t = parse_term();
                if (tok.kind != Tok::RParen) fail("expected ')'");
                advance();
                return t;
            }
            default:
                fail("expected a term");
            }
        }

        ParsedFile parse_file() {
            ParsedFile out;
            std::vector<Token> def_sites;
            while (tok.kind == Tok::Def) {
                advance();
                if (tok.kind != Tok::Name) fail("expected a definition name after 'def'");
                const Token name = tok;
                advance();
                if (tok.kind != Tok::Equals) fail("expected '=' in definition");
                advance();
                ProcessTerm body = parse_term();
                if (tok.kind != Tok::Semi) fail("expected ';' after definition");
                advance();
                if (!out.defs.add(name.text, std::move(body)))
                    throw ParseError("duplicate definition of '" + name.text + "'", name.line,
                                     name.col);
                def_sites.push_back(name);
            }
            if (tok.kind != Tok::End) {
                out.root = parse_term();
                if (tok.kind != Tok::End) fail("trailing input after term");
            }

            for (const Token& ref : ref_sites)
                if (!out.defs.find(ref.text))
                    throw ParseError("unbound name '" + ref.text + "'", ref.line, ref.col);

            if (auto cyclic = find_unguarded_cycle(out.defs)) {
                for (const Token& d : def_sites)
                    if (d.text == *cyclic)
                        throw ParseError("unguarded recursion through '" + *cyclic + "'",
                                         d.line, d.col);
                throw ParseError("unguarded recursion through '" + *cyclic + "'", 1, 1);
            }
            return out;
        }
    };

    Parser p(text);
    return p.parse_file();
}

/// Parses a source that must denote a single process: definitions plus a
/// root term.
inline std::pair<ProcessTerm, DefinitionSet> parse_process(const std::string& text) {
    ParsedFile f = parse(text);
    if (!f.root) throw ParseError("input has no root term", 1, 1);
    return {*f.root, std::move(f.defs)};
}

} // namespace jibisim
