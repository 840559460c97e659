#include "swx/regex.hpp"

#include <memory>
#include <set>
#include <vector>

namespace swx {

namespace {

// Tokens: symbols, ( ) | * +, and the multi-byte literals for the empty
// language and the empty word.
struct Token {
    enum class Kind { symbol, lparen, rparen, alt, star, plus, empty_lang, empty_word, end };
    Kind kind;
    char symbol = 0;
    size_t pos = 0;  // byte offset, for diagnostics
};

std::vector<Token> tokenize(std::string_view text, const Alphabet& alphabet) {
    std::vector<Token> out;
    size_t i = 0;
    auto starts_with = [&](std::string_view lit) {
        return text.size() - i >= lit.size() && text.substr(i, lit.size()) == lit;
    };
    while (i < text.size()) {
        char c = text[i];
        size_t at = i;
        if (c == ' ' || c == '\t') { ++i; continue; }
        if (starts_with("\xe2\x88\x85")) {  // U+2205 empty set
            out.push_back({Token::Kind::empty_lang, 0, at});
            i += 3;
            continue;
        }
        if (starts_with("\xce\xb5")) {  // U+03B5 epsilon
            out.push_back({Token::Kind::empty_word, 0, at});
            i += 2;
            continue;
        }
        switch (c) {
            case '(': out.push_back({Token::Kind::lparen, 0, at}); break;
            case ')': out.push_back({Token::Kind::rparen, 0, at}); break;
            case '|': out.push_back({Token::Kind::alt, 0, at}); break;
            case '*': out.push_back({Token::Kind::star, 0, at}); break;
            case '+': out.push_back({Token::Kind::plus, 0, at}); break;
            default:
                if (!alphabet.contains(c))
                    raise(Errc::parse, "undeclared symbol '" + std::string(1, c) + "' at position " +
                                           std::to_string(at));
                out.push_back({Token::Kind::symbol, c, at});
        }
        ++i;
    }
    out.push_back({Token::Kind::end, 0, text.size()});
    return out;
}

struct Node {
    enum class Kind { empty_lang, empty_word, symbol, cat, alt, star, plus };
    Kind kind;
    uint32_t position = 0;  // symbol nodes: 1-based Glushkov position
    char symbol = 0;
    std::unique_ptr<Node> left, right;
};

using NodePtr = std::unique_ptr<Node>;

class Parser {
public:
    Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    NodePtr parse() {
        NodePtr e = expr();
        if (peek().kind != Token::Kind::end)
            raise(Errc::parse, "unexpected token at position " + std::to_string(peek().pos));
        return e;
    }

    uint32_t positions = 0;

private:
    const Token& peek() const { return tokens_[cursor_]; }
    Token take() { return tokens_[cursor_++]; }

    static bool starts_atom(Token::Kind k) {
        return k == Token::Kind::symbol || k == Token::Kind::lparen || k == Token::Kind::empty_lang ||
               k == Token::Kind::empty_word;
    }

    NodePtr expr() {
        NodePtr left = term();
        while (peek().kind == Token::Kind::alt) {
            take();
            NodePtr right = term();
            auto n = std::make_unique<Node>();
            n->kind = Node::Kind::alt;
            n->left = std::move(left);
            n->right = std::move(right);
            left = std::move(n);
        }
        return left;
    }

    NodePtr term() {
        if (!starts_atom(peek().kind)) {
            // empty concatenation denotes the empty word, e.g. "(|a)"
            auto n = std::make_unique<Node>();
            n->kind = Node::Kind::empty_word;
            return n;
        }
        NodePtr left = factor();
        while (starts_atom(peek().kind)) {
            NodePtr right = factor();
            auto n = std::make_unique<Node>();
            n->kind = Node::Kind::cat;
            n->left = std::move(left);
            n->right = std::move(right);
            left = std::move(n);
        }
        return left;
    }

    NodePtr factor() {
        NodePtr a = atom();
        while (peek().kind == Token::Kind::star || peek().kind == Token::Kind::plus) {
            Token t = take();
            auto n = std::make_unique<Node>();
            n->kind = t.kind == Token::Kind::star ? Node::Kind::star : Node::Kind::plus;
            n->left = std::move(a);
            a = std::move(n);
        }
        return a;
    }

    NodePtr atom() {
        Token t = take();
        auto n = std::make_unique<Node>();
        switch (t.kind) {
            case Token::Kind::symbol:
                n->kind = Node::Kind::symbol;
                n->symbol = t.symbol;
                n->position = ++positions;
                return n;
            case Token::Kind::empty_lang:
                n->kind = Node::Kind::empty_lang;
                return n;
            case Token::Kind::empty_word:
                n->kind = Node::Kind::empty_word;
                return n;
            case Token::Kind::lparen: {
                NodePtr e = expr();
                if (peek().kind != Token::Kind::rparen)
                    raise(Errc::parse, "missing ')' at position " + std::to_string(peek().pos));
                take();
                return e;
            }
            default:
                raise(Errc::parse, "unexpected token at position " + std::to_string(t.pos));
        }
    }

    std::vector<Token> tokens_;
    size_t cursor_ = 0;
};

// Glushkov attributes
struct Attrs {
    bool nullable = false;
    std::set<uint32_t> first, last;
};

void collect(const Node* n, Attrs& out, std::vector<std::set<uint32_t>>& follow,
             std::vector<char>& symbol_of) {
    switch (n->kind) {
        case Node::Kind::empty_lang:
            out = {false, {}, {}};
            return;
        case Node::Kind::empty_word:
            out = {true, {}, {}};
            return;
        case Node::Kind::symbol:
            symbol_of[n->position] = n->symbol;
            out = {false, {n->position}, {n->position}};
            return;
        case Node::Kind::cat: {
            Attrs a, b;
            collect(n->left.get(), a, follow, symbol_of);
            collect(n->right.get(), b, follow, symbol_of);
            for (uint32_t p : a.last)
                for (uint32_t q : b.first) follow[p].insert(q);
            out.nullable = a.nullable && b.nullable;
            out.first = a.first;
            if (a.nullable) out.first.insert(b.first.begin(), b.first.end());
            out.last = b.last;
            if (b.nullable) out.last.insert(a.last.begin(), a.last.end());
            return;
        }
        case Node::Kind::alt: {
            Attrs a, b;
            collect(n->left.get(), a, follow, symbol_of);
            collect(n->right.get(), b, follow, symbol_of);
            out.nullable = a.nullable || b.nullable;
            out.first = a.first;
            out.first.insert(b.first.begin(), b.first.end());
            out.last = a.last;
            out.last.insert(b.last.begin(), b.last.end());
            return;
        }
        case Node::Kind::star:
        case Node::Kind::plus: {
            Attrs a;
            collect(n->left.get(), a, follow, symbol_of);
            for (uint32_t p : a.last)
                for (uint32_t q : a.first) follow[p].insert(q);
            out.nullable = n->kind == Node::Kind::star || a.nullable;
            out.first = a.first;
            out.last = a.last;
            return;
        }
    }
}

}  // namespace

Nfa regex_to_nfa(std::string_view pattern, const Alphabet& alphabet) {
    if (pattern.empty()) raise(Errc::parse, "empty regex");
    Parser parser(tokenize(pattern, alphabet));
    NodePtr root = parser.parse();
    uint32_t m = parser.positions;

    std::vector<std::set<uint32_t>> follow(m + 1);
    std::vector<char> symbol_of(m + 1, 0);
    Attrs attrs;
    collect(root.get(), attrs, follow, symbol_of);

    Nfa nfa;
    nfa.alphabet = alphabet;
    nfa.state_count = m + 1;  // 0 = start, 1..m = positions
    nfa.initials = {0};
    if (attrs.nullable) nfa.finals.push_back(0);
    for (uint32_t p : attrs.last) nfa.finals.push_back(p);
    for (uint32_t p : attrs.first)
        nfa.transitions.emplace_back(0, static_cast<uint32_t>(alphabet.index(symbol_of[p])), p);
    for (uint32_t p = 1; p <= m; ++p)
        for (uint32_t q : follow[p])
            nfa.transitions.emplace_back(p, static_cast<uint32_t>(alphabet.index(symbol_of[q])), q);
    return nfa;
}

Dfa build_dfa_from_regex(std::string_view pattern, const Alphabet& alphabet, char pad) {
    Dfa dfa = minimize(determinize(regex_to_nfa(pattern, alphabet)));
    dfa.pad = pad ? pad : alphabet.symbol(0);
    if (!dfa.alphabet.contains(dfa.pad)) raise(Errc::contract, "pad symbol is not in the alphabet");
    return dfa;
}

}  // namespace swx
