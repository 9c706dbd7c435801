#pragma once

#include <string>
#include <vector>

#include "tdma/rational.hpp"

namespace tdma {

/// Half-open [lo, hi) with 0 <= lo < hi <= 1.
struct Interval {
    Rational lo;
    Rational hi;

    Rational length() const { return hi - lo; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Normalised set of disjoint half-open subintervals of [0,1): sorted by
/// left endpoint, touching intervals merged, empty intervals dropped.
class IntervalSet {
public:
    IntervalSet() = default;

    /// Normalises arbitrary input. Throws std::invalid_argument for an
    /// interval outside [0,1) or with lo > hi.
    explicit IntervalSet(std::vector<Interval> intervals);

    static IntervalSet full();

    const std::vector<Interval>& intervals() const { return intervals_; }
    bool empty() const { return intervals_.empty(); }
    Rational measure() const;

    bool contains(const Rational& x) const;
    bool intersects(const IntervalSet& other) const;

    IntervalSet unite(const IntervalSet& other) const;
    IntervalSet intersect(const IntervalSet& other) const;
    /// [0,1) minus this set.
    IntervalSet complement() const;

    friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

private:
    std::vector<Interval> intervals_;
};

std::string to_string(const Rational& r);
std::string to_string(const IntervalSet& s);

}  // namespace tdma
