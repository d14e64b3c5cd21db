#include "pepa/printer.hpp"

#include <charconv>
#include <sstream>

namespace pepa {

namespace {

std::string number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string rate_text(const Rate& r) {
    if (r.is_active())
        return number(r.value());
    return r.value() == 1.0 ? "T" : number(r.value()) + "*T";
}

void print_node(std::ostream& out, const SystemEquation& eq, int n, bool nested) {
    const auto& node = eq.at(n);
    switch (node.kind) {
    case EquationNode::Kind::nil:
        out << "Nil";
        return;
    case EquationNode::Kind::group: {
        out << node.label << "{";
        bool first = true;
        for (const auto& [state, count] : node.initial_counts) {
            out << (first ? "" : " || ") << state << "[" << count << "]";
            first = false;
        }
        out << "}";
        return;
    }
    case EquationNode::Kind::cooperation: {
        if (nested)
            out << "(";
        print_node(out, eq, node.left, true);
        out << " <";
        bool first = true;
        for (const auto& a : node.coop_set) {
            out << (first ? "" : ", ") << a;
            first = false;
        }
        out << "> ";
        print_node(out, eq, node.right, true);
        if (nested)
            out << ")";
        return;
    }
    }
}

} // namespace

std::string print_equation(const SystemEquation& equation) {
    std::ostringstream out;
    if (equation.root >= 0)
        print_node(out, equation, equation.root, false);
    return out.str();
}

std::string print_model(const GroupedModel& model) {
    std::ostringstream out;
    if (!model.constants.empty()) {
        out << "rates {\n";
        for (const auto& [name, value] : model.constants)
            out << "    " << name << " = " << number(value) << ";\n";
        out << "}\n\n";
    }
    for (const auto& def : model.definitions) {
        out << def.name << " = ";
        for (std::size_t i = 0; i < def.choices.size(); ++i) {
            const auto& a = def.choices[i];
            out << (i ? " + " : "") << "(" << a.action << ", " << rate_text(a.rate) << ")."
                << a.target;
        }
        out << ";\n";
    }
    out << "\nsystem = " << print_equation(model.equation) << ";\n";
    for (SizeClass cls : {SizeClass::small, SizeClass::large}) {
        std::string names;
        for (const auto& [label, c] : model.size_hints)
            if (c == cls)
                names += (names.empty() ? "" : ", ") + label;
        if (!names.empty())
            out << (cls == SizeClass::small ? "small " : "large ") << names << ";\n";
    }
    if (model.threshold)
        out << "threshold " << *model.threshold << ";\n";
    return out.str();
}

} // namespace pepa
