#include "pepa/rate.hpp"
#include "pepa/error.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

namespace pepa {

Rate Rate::operator+(const Rate& other) const {
    if (other.is_zero())
        return *this;
    if (is_zero())
        return other;
    if (kind_ != other.kind_)
        throw model_error("cannot add an active rate to a passive rate");
    return Rate(kind_, value_ + other.value_);
}

std::string Rate::to_string() const {
    std::ostringstream out;
    out << *this;
    return out.str();
}

Rate min(const Rate& a, const Rate& b) {
    if (a.kind() == b.kind())
        return a.is_passive() ? Rate::passive(std::min(a.value(), b.value()))
                              : Rate::active(std::min(a.value(), b.value()));
    const Rate& act = a.is_active() ? a : b;
    const Rate& pas = a.is_active() ? b : a;
    return pas.is_zero() ? Rate::zero() : act;
}

double fraction(const Rate& part, const Rate& total) {
    if (total.is_zero())
        return 0.0;
    if (part.is_zero())
        return 0.0;
    if (part.kind() != total.kind())
        throw model_error("rate fraction between different kinds");
    return part.value() / total.value();
}

std::ostream& operator<<(std::ostream& out, const Rate& rate) {
    if (rate.is_active())
        return out << rate.value();
    if (rate.value() == 1.0)
        return out << "T";
    return out << rate.value() << "*T";
}

} // namespace pepa
