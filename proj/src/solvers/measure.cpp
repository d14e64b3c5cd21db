#include "pepa/measure.hpp"
#include "pepa/error.hpp"

#include <cctype>
#include <vector>

namespace pepa {

struct Predicate::Node {
    enum class Op { constant, count, add, sub, eq, ne, lt, le, gt, ge, conj, disj, negate };
    Op op = Op::constant;
    long value = 0;
    int coordinate = -1;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;

    long eval(const StateVector& s) const {
        switch (op) {
        case Op::constant: return value;
        case Op::count: return s.at(static_cast<std::size_t>(coordinate));
        case Op::add: return lhs->eval(s) + rhs->eval(s);
        case Op::sub: return lhs->eval(s) - rhs->eval(s);
        case Op::eq: return lhs->eval(s) == rhs->eval(s);
        case Op::ne: return lhs->eval(s) != rhs->eval(s);
        case Op::lt: return lhs->eval(s) < rhs->eval(s);
        case Op::le: return lhs->eval(s) <= rhs->eval(s);
        case Op::gt: return lhs->eval(s) > rhs->eval(s);
        case Op::ge: return lhs->eval(s) >= rhs->eval(s);
        case Op::conj: return lhs->eval(s) && rhs->eval(s);
        case Op::disj: return lhs->eval(s) || rhs->eval(s);
        case Op::negate: return !lhs->eval(s);
        }
        return 0;
    }
};

namespace {

using NodePtr = std::shared_ptr<const Predicate::Node>;
using Op = Predicate::Node::Op;

class ExprParser {
public:
    ExprParser(std::string_view text, const StateLayout& layout) : text_(text), layout_(layout) {}

    NodePtr parse() {
        NodePtr n = disjunction();
        skip();
        if (pos_ != text_.size())
            fail("unexpected '" + std::string(text_.substr(pos_, 1)) + "'");
        return n;
    }

private:
    std::string_view text_;
    const StateLayout& layout_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& message) const {
        throw Error(ErrorKind::usage, "measure '" + std::string(text_) + "' at column " +
                                          std::to_string(pos_ + 1) + ": " + message);
    }

    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool accept(std::string_view token) {
        skip();
        if (text_.substr(pos_, token.size()) != token)
            return false;
        pos_ += token.size();
        return true;
    }

    static NodePtr make(Op op, NodePtr l, NodePtr r = nullptr) {
        auto n = std::make_shared<Predicate::Node>();
        n->op = op;
        n->lhs = std::move(l);
        n->rhs = std::move(r);
        return n;
    }

    NodePtr disjunction() {
        NodePtr n = conjunction();
        while (accept("||"))
            n = make(Op::disj, n, conjunction());
        return n;
    }

    NodePtr conjunction() {
        NodePtr n = negation();
        while (accept("&&"))
            n = make(Op::conj, n, negation());
        return n;
    }

    NodePtr negation() {
        skip();
        if (text_.substr(pos_, 2) != "!=" && accept("!"))
            return make(Op::negate, negation());
        return comparison();
    }

    NodePtr comparison() {
        NodePtr n = sum();
        static const std::pair<std::string_view, Op> ops[] = {
            {"==", Op::eq}, {"!=", Op::ne}, {"<=", Op::le}, {">=", Op::ge}, {"<", Op::lt}, {">", Op::gt}};
        for (const auto& [token, op] : ops)
            if (accept(token))
                return make(op, n, sum());
        return n;
    }

    NodePtr sum() {
        NodePtr n = atom();
        for (;;) {
            if (accept("+"))
                n = make(Op::add, n, atom());
            else if (accept("-"))
                n = make(Op::sub, n, atom());
            else
                return n;
        }
    }

    NodePtr atom() {
        skip();
        if (accept("(")) {
            NodePtr n = disjunction();
            if (!accept(")"))
                fail("expected ')'");
            return n;
        }
        if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            auto n = std::make_shared<Predicate::Node>();
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                n->value = n->value * 10 + (text_[pos_++] - '0');
            return n;
        }
        std::size_t start = pos_;
        auto ident_char = [&](char c) {
            return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '.';
        };
        if (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            while (pos_ < text_.size() && ident_char(text_[pos_]))
                ++pos_;
        if (start == pos_)
            fail("expected a count name, number or '('");
        std::string name(text_.substr(start, pos_ - start));
        auto n = std::make_shared<Predicate::Node>();
        if (name == "true" || name == "false") {
            n->value = name == "true";
            return n;
        }
        n->op = Op::count;
        try {
            n->coordinate = layout_.resolve(name);
        } catch (const Error& e) {
            pos_ = start;
            fail(e.what());
        }
        return n;
    }
};

} // namespace

Predicate Predicate::compile(std::string_view text, const StateLayout& layout) {
    Predicate p;
    p.root_ = ExprParser(text, layout).parse();
    p.text_ = std::string(text);
    return p;
}

bool Predicate::operator()(const StateVector& state) const { return root_->eval(state) != 0; }

} // namespace pepa
