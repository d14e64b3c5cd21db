#pragma once

#include <iosfwd>
#include <string>

namespace pepa {

// A rate as it appears on an activity or as the apparent rate of a
// component or group. Passive rates carry a weight w and stand for w*T.
// Weights are integers in source text; after cooperation between two
// passive sides the product of fractions can leave a non-integer weight,
// so the weight is stored as a double.
class Rate {
public:
    enum class Kind { active, passive };

    constexpr Rate() = default;

    static constexpr Rate active(double value) { return Rate(Kind::active, value); }
    static constexpr Rate passive(double weight = 1.0) { return Rate(Kind::passive, weight); }
    static constexpr Rate zero() { return Rate(); }

    constexpr Kind kind() const { return kind_; }
    constexpr bool is_passive() const { return kind_ == Kind::passive; }
    constexpr bool is_active() const { return kind_ == Kind::active; }
    // Rate value when active, weight when passive.
    constexpr double value() const { return value_; }
    constexpr bool is_zero() const { return value_ == 0.0; }

    // Sum of like kinds. A zero of either kind is the identity; mixing a
    // non-zero active rate with a non-zero passive one throws.
    Rate operator+(const Rate& other) const;
    Rate& operator+=(const Rate& other) { return *this = *this + other; }

    // Scalar multiple, same kind.
    Rate scaled(double factor) const { return Rate(kind_, value_ * factor); }

    friend bool operator==(const Rate&, const Rate&) = default;

    std::string to_string() const;

private:
    constexpr Rate(Kind kind, double value) : kind_(kind), value_(value) {}

    Kind kind_ = Kind::active;
    double value_ = 0.0;
};

// Minimum of two apparent rates. Passive/passive gives the passive of the
// smaller weight; an active rate against a passive one gives the active rate
// unless the passive side offers nothing, in which case the result is zero.
Rate min(const Rate& a, const Rate& b);

// part / total for two rates of the same kind; zero when total is zero.
double fraction(const Rate& part, const Rate& total);

std::ostream& operator<<(std::ostream& out, const Rate& rate);

} // namespace pepa
