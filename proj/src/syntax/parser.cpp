#include "pepa/parser.hpp"
#include "pepa/error.hpp"
#include "pepa/log.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace pepa {

namespace {

enum class Tok { ident, number, symbol, end };

struct Token {
    Tok kind = Tok::end;
    std::string text;
    int line = 1;
    int column = 1;
};

std::string describe(const Token& t) {
    switch (t.kind) {
    case Tok::end: return "end of input";
    case Tok::ident: return "identifier '" + t.text + "'";
    case Tok::number: return "number '" + t.text + "'";
    case Tok::symbol: return "'" + t.text + "'";
    }
    return "?";
}

std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    int line = 1;
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
        if (c == '%' || (c == '/' && i + 1 < src.size() && src[i + 1] == '/')) {
            while (i < src.size() && src[i] != '\n')
                advance(1);
            continue;
        }
        Token t;
        t.line = line;
        t.column = col;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) ||
                                      src[j] == '_' || src[j] == '\''))
                ++j;
            t.kind = Tok::ident;
            t.text = std::string(src.substr(i, j - i));
            advance(j - i);
        } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                   (c == '.' && i + 1 < src.size() &&
                    std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
            std::size_t j = i;
            while (j < src.size() && (std::isdigit(static_cast<unsigned char>(src[j])) || src[j] == '.'))
                ++j;
            if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
                std::size_t k = j + 1;
                if (k < src.size() && (src[k] == '+' || src[k] == '-'))
                    ++k;
                if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
                    j = k;
                    while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
                        ++j;
                }
            }
            t.kind = Tok::number;
            t.text = std::string(src.substr(i, j - i));
            advance(j - i);
        } else if (c == '|' && i + 1 < src.size() && src[i + 1] == '|') {
            t.kind = Tok::symbol;
            t.text = "||";
            advance(2);
        } else if (std::string_view("(){}[]<>,.;=+-*/").find(c) != std::string_view::npos) {
            t.kind = Tok::symbol;
            t.text = std::string(1, c);
            advance(1);
        } else {
            throw ParseError(line, col, std::string("unexpected character '") + c + "'");
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.line = line;
    end.column = col;
    out.push_back(end);
    return out;
}

// Value of a rate expression: a number, possibly times the passive symbol.
struct RateValue {
    double number = 0.0;
    bool passive = false;
};

struct LeafSite {
    std::string label;
    int line;
    int column;
};

class Parser {
public:
    Parser(std::string_view text, const ParameterOverrides& overrides)
        : tokens_(tokenize(text)), overrides_(overrides) {}

    GroupedModel run() {
        while (!at_end())
            item();
        finish();
        return std::move(model_);
    }

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    const ParameterOverrides& overrides_;
    GroupedModel model_;
    bool have_system_ = false;
    std::vector<LeafSite> leaf_sites_;
    std::map<std::string, Token> definition_sites_;
    std::map<std::string, Token> hint_sites_;

    const Token& peek(std::size_t ahead = 0) const {
        return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
    }
    bool at_end() const { return peek().kind == Tok::end; }
    bool is_symbol(std::string_view s, std::size_t ahead = 0) const {
        return peek(ahead).kind == Tok::symbol && peek(ahead).text == s;
    }
    bool is_keyword(std::string_view s) const {
        return peek().kind == Tok::ident && peek().text == s;
    }

    [[noreturn]] void fail(const Token& at, const std::string& message) const {
        throw ParseError(at.line, at.column, message);
    }
    [[noreturn]] void expected(const std::string& what) const {
        fail(peek(), "expected " + what + ", found " + describe(peek()));
    }

    Token take() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

    void expect_symbol(std::string_view s) {
        if (!is_symbol(s))
            expected("'" + std::string(s) + "'");
        take();
    }

    Token expect_ident(const std::string& what = "identifier") {
        if (peek().kind != Tok::ident)
            expected(what);
        return take();
    }

    void item() {
        if (is_keyword("rates") && is_symbol("{", 1)) {
            take();
            take();
            while (!is_symbol("}")) {
                Token name = expect_ident("constant name or '}'");
                if (name.text == "T")
                    fail(name, "'T' is reserved for the passive rate");
                expect_symbol("=");
                RateValue v = rate_expr();
                if (v.passive)
                    fail(name, "constant '" + name.text + "' cannot be passive");
                expect_symbol(";");
                if (model_.constants.count(name.text))
                    fail(name, "duplicate constant '" + name.text + "'");
                auto o = overrides_.find(name.text);
                model_.constants[name.text] = o != overrides_.end() ? o->second : v.number;
            }
            take();
            return;
        }
        if (is_keyword("system") && is_symbol("=", 1)) {
            Token at = take();
            take();
            if (have_system_)
                fail(at, "system equation defined twice");
            have_system_ = true;
            model_.equation.root = coop_expr();
            expect_symbol(";");
            return;
        }
        if ((is_keyword("small") || is_keyword("large")) && peek(1).kind == Tok::ident &&
            !is_symbol("=", 1)) {
            SizeClass cls = take().text == "small" ? SizeClass::small : SizeClass::large;
            do {
                Token g = expect_ident("group label");
                if (model_.size_hints.count(g.text))
                    fail(g, "group '" + g.text + "' classified twice");
                model_.size_hints[g.text] = cls;
                hint_sites_[g.text] = g;
            } while (is_symbol(",") && (take(), true));
            expect_symbol(";");
            return;
        }
        if (is_keyword("threshold") && !is_symbol("=", 1)) {
            take();
            model_.threshold = integer_value("threshold");
            expect_symbol(";");
            return;
        }
        definition();
    }

    void definition() {
        Token name = expect_ident("definition, 'rates', 'system', 'small', 'large' or 'threshold'");
        if (name.text == "T")
            fail(name, "'T' is reserved for the passive rate");
        expect_symbol("=");
        if (model_.definition(name.text) != nullptr)
            fail(name, "duplicate definition of '" + name.text + "'");
        ProcessDefinition def;
        def.name = name.text;
        do {
            expect_symbol("(");
            Token action = expect_ident("action type");
            expect_symbol(",");
            Token rate_at = peek();
            RateValue v = rate_expr();
            expect_symbol(")");
            expect_symbol(".");
            Token target = expect_ident("process name");
            Rate rate;
            if (v.passive) {
                if (v.number < 1.0 || std::floor(v.number) != v.number)
                    fail(rate_at, "passive weight must be a positive integer");
                rate = Rate::passive(v.number);
            } else {
                if (!(v.number > 0.0))
                    fail(rate_at, "rate must be positive");
                rate = Rate::active(v.number);
            }
            def.choices.push_back({action.text, rate, target.text});
        } while (is_symbol("+") && (take(), true));
        expect_symbol(";");
        definition_sites_[def.name] = name;
        model_.definitions.push_back(std::move(def));
    }

    // expr := term (('+'|'-') term)*
    RateValue rate_expr() {
        Token at = peek();
        RateValue v = rate_term();
        while (is_symbol("+") || is_symbol("-")) {
            bool plus = take().text == "+";
            RateValue r = rate_term();
            if (v.passive || r.passive)
                fail(at, "the passive rate can only be scaled, not added");
            v.number = plus ? v.number + r.number : v.number - r.number;
        }
        return v;
    }

    RateValue rate_term() {
        Token at = peek();
        RateValue v = rate_factor();
        while (is_symbol("*") || is_symbol("/")) {
            bool times = take().text == "*";
            RateValue r = rate_factor();
            if (times) {
                if (v.passive && r.passive)
                    fail(at, "passive rate multiplied by itself");
                v.number *= r.number;
                v.passive = v.passive || r.passive;
            } else {
                if (r.passive)
                    fail(at, "division by the passive rate");
                if (r.number == 0.0)
                    fail(at, "division by zero");
                v.number /= r.number;
            }
        }
        return v;
    }

    RateValue rate_factor() {
        if (is_symbol("-")) {
            take();
            RateValue v = rate_factor();
            v.number = -v.number;
            return v;
        }
        if (is_symbol("(")) {
            take();
            RateValue v = rate_expr();
            expect_symbol(")");
            return v;
        }
        if (peek().kind == Tok::number) {
            Token t = take();
            return {std::stod(t.text), false};
        }
        if (peek().kind == Tok::ident) {
            Token t = take();
            if (t.text == "T")
                return {1.0, true};
            return {constant(t), false};
        }
        expected("rate expression");
    }

    double constant(const Token& t) const {
        auto it = model_.constants.find(t.text);
        if (it == model_.constants.end())
            fail(t, "undefined constant '" + t.text + "'");
        return it->second;
    }

    int integer_value(const std::string& what) {
        Token t = peek();
        double v;
        if (t.kind == Tok::number) {
            take();
            v = std::stod(t.text);
        } else if (t.kind == Tok::ident) {
            take();
            v = constant(t);
        } else {
            expected(what);
        }
        if (v < 0 || std::floor(v) != v)
            fail(t, what + " must be a nonnegative integer");
        return static_cast<int>(v);
    }

    int add_node(EquationNode node) {
        model_.equation.nodes.push_back(std::move(node));
        return static_cast<int>(model_.equation.nodes.size()) - 1;
    }

    // Left-associative cooperation: P <L> Q <K> R = (P <L> Q) <K> R.
    int coop_expr() {
        int left = coop_operand();
        while (is_symbol("<") || is_symbol("||")) {
            EquationNode node;
            node.kind = EquationNode::Kind::cooperation;
            if (take().text == "<") {
                if (!is_symbol(">")) {
                    do {
                        node.coop_set.insert(expect_ident("action type").text);
                    } while (is_symbol(",") && (take(), true));
                }
                expect_symbol(">");
            }
            node.left = left;
            node.right = coop_operand();
            left = add_node(std::move(node));
        }
        return left;
    }

    int coop_operand() {
        if (is_symbol("(")) {
            take();
            int inner = coop_expr();
            expect_symbol(")");
            return inner;
        }
        Token label = expect_ident("group label or '('");
        expect_symbol("{");
        EquationNode node;
        node.kind = EquationNode::Kind::group;
        node.label = label.text;
        do {
            Token state = expect_ident("process name");
            int count = 1;
            if (is_symbol("[")) {
                take();
                count = integer_value("population");
                expect_symbol("]");
            }
            auto same = std::find_if(node.initial_counts.begin(), node.initial_counts.end(),
                                     [&](const auto& p) { return p.first == state.text; });
            if (same != node.initial_counts.end())
                same->second += count;
            else
                node.initial_counts.emplace_back(state.text, count);
        } while (is_symbol("||") && (take(), true));
        expect_symbol("}");
        leaf_sites_.push_back({label.text, label.line, label.column});
        return add_node(std::move(node));
    }

    const LeafSite& site_of(const std::string& label) const {
        for (const auto& s : leaf_sites_)
            if (s.label == label)
                return s;
        return leaf_sites_.front();
    }

    void finish() {
        if (!have_system_)
            fail(peek(), "missing system equation");
        for (const auto& [name, value] : overrides_)
            if (!model_.constants.count(name))
                throw model_error("override names unknown constant '" + name + "'");

        auto& eq = model_.equation;
        std::set<std::string> labels;
        for (int n : eq.leaves()) {
            auto& leaf = eq.nodes[static_cast<std::size_t>(n)];
            const auto& site = site_of(leaf.label);
            if (!labels.insert(leaf.label).second)
                throw ParseError(site.line, site.column, "duplicate group label '" + leaf.label + "'");
            for (const auto& [state, count] : leaf.initial_counts)
                if (model_.definition(state) == nullptr)
                    throw ParseError(site.line, site.column,
                                     "undefined process '" + state + "' in group '" + leaf.label + "'");
            if (leaf.population() < 1)
                throw ParseError(site.line, site.column,
                                 "group '" + leaf.label + "' has no instances");
            leaf.component = leaf.initial_counts.front().first;
            if (!model_.components.count(leaf.component))
                model_.components.emplace(leaf.component, local_automaton(model_, leaf.component));
            const auto& comp = model_.components.at(leaf.component);
            for (const auto& [state, count] : leaf.initial_counts)
                if (comp.index_of(state) < 0)
                    throw ParseError(site.line, site.column,
                                     "'" + state + "' is not a derivative of '" + comp.name +
                                         "' in group '" + leaf.label + "'");
        }

        for (const auto& [label, cls] : model_.size_hints)
            if (!labels.count(label)) {
                const auto& t = hint_sites_.at(label);
                throw ParseError(t.line, t.column, "size class for unknown group '" + label + "'");
            }

        check_passive_completeness();
        warn_inert_cooperations();
        warn_unreachable();
    }

    void check_passive_completeness() {
        const auto& eq = model_.equation;
        for (int n : eq.leaves()) {
            const auto& leaf = eq.at(n);
            ActionSet scope;
            for (int p : eq.path_to(n))
                if (eq.at(p).kind == EquationNode::Kind::cooperation)
                    scope.insert(eq.at(p).coop_set.begin(), eq.at(p).coop_set.end());
            for (const auto& t : model_.components.at(leaf.component).transitions)
                if (t.rate.is_passive() && !scope.count(t.action)) {
                    const auto& site = site_of(leaf.label);
                    throw ParseError(site.line, site.column,
                                     "passive action '" + t.action + "' of group '" + leaf.label +
                                         "' has no enclosing cooperation on it");
                }
        }
    }

    ActionSet subtree_actions(int n) const {
        const auto& node = model_.equation.at(n);
        if (node.kind == EquationNode::Kind::group)
            return model_.components.at(node.component).actions();
        ActionSet out;
        if (node.kind == EquationNode::Kind::cooperation) {
            out = subtree_actions(node.left);
            auto r = subtree_actions(node.right);
            out.insert(r.begin(), r.end());
        }
        return out;
    }

    void warn(const std::string& message) {
        model_.warnings.push_back(message);
        log::warn(message);
    }

    void warn_inert_cooperations() {
        for (const auto& node : model_.equation.nodes) {
            if (node.kind != EquationNode::Kind::cooperation)
                continue;
            auto left = subtree_actions(node.left);
            auto right = subtree_actions(node.right);
            for (const auto& a : node.coop_set) {
                if (!left.count(a) && !right.count(a))
                    warn("cooperation on '" + a + "' is inert: neither side enables it");
                else if (!left.count(a) || !right.count(a))
                    warn("cooperation on '" + a +
                         "' has one side that never performs it; that action proceeds independently");
            }
        }
    }

    void warn_unreachable() {
        std::set<std::string> used;
        for (const auto& [name, comp] : model_.components)
            used.insert(comp.states.begin(), comp.states.end());
        for (const auto& d : model_.definitions)
            if (!used.count(d.name)) {
                const auto& t = definition_sites_.at(d.name);
                warn(std::to_string(t.line) + ":" + std::to_string(t.column) + ": definition '" +
                     d.name + "' is never reached from any group");
            }
    }
};

} // namespace

GroupedModel parse_model(std::string_view text, const ParameterOverrides& overrides) {
    return Parser(text, overrides).run();
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::io, "cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

GroupedModel parse_model_file(const std::string& path, const ParameterOverrides& overrides) {
    return parse_model(read_text_file(path), overrides);
}

} // namespace pepa
