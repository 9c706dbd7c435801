#include "tdma/interval_set.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace tdma {

IntervalSet::IntervalSet(std::vector<Interval> intervals) {
    for (const auto& iv : intervals) {
        if (iv.lo < 0 || iv.hi > 1 || iv.lo > iv.hi)
            throw std::invalid_argument("interval outside [0,1): " + to_string(iv.lo) + "," + to_string(iv.hi));
    }
    std::erase_if(intervals, [](const Interval& iv) { return iv.lo == iv.hi; });
    std::sort(intervals.begin(), intervals.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    for (auto& iv : intervals) {
        if (!intervals_.empty() && iv.lo <= intervals_.back().hi) {
            if (iv.hi > intervals_.back().hi) intervals_.back().hi = iv.hi;
        } else {
            intervals_.push_back(std::move(iv));
        }
    }
}

IntervalSet IntervalSet::full() { return IntervalSet({Interval{0, 1}}); }

Rational IntervalSet::measure() const {
    Rational total = 0;
    for (const auto& iv : intervals_) total += iv.length();
    return total;
}

bool IntervalSet::contains(const Rational& x) const {
    auto it = std::upper_bound(intervals_.begin(), intervals_.end(), x,
                               [](const Rational& v, const Interval& iv) { return v < iv.lo; });
    if (it == intervals_.begin()) return false;
    --it;
    return x < it->hi;
}

bool IntervalSet::intersects(const IntervalSet& other) const {
    auto a = intervals_.begin();
    auto b = other.intervals_.begin();
    while (a != intervals_.end() && b != other.intervals_.end()) {
        if (a->lo < b->hi && b->lo < a->hi) return true;
        if (a->hi <= b->hi)
            ++a;
        else
            ++b;
    }
    return false;
}

IntervalSet IntervalSet::unite(const IntervalSet& other) const {
    std::vector<Interval> all = intervals_;
    all.insert(all.end(), other.intervals_.begin(), other.intervals_.end());
    return IntervalSet(std::move(all));
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const {
    std::vector<Interval> out;
    auto a = intervals_.begin();
    auto b = other.intervals_.begin();
    while (a != intervals_.end() && b != other.intervals_.end()) {
        Rational lo = std::max(a->lo, b->lo);
        Rational hi = std::min(a->hi, b->hi);
        if (lo < hi) out.push_back({lo, hi});
        if (a->hi <= b->hi)
            ++a;
        else
            ++b;
    }
    return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::complement() const {
    std::vector<Interval> out;
    Rational cursor = 0;
    for (const auto& iv : intervals_) {
        if (cursor < iv.lo) out.push_back({cursor, iv.lo});
        cursor = iv.hi;
    }
    if (cursor < 1) out.push_back({cursor, 1});
    IntervalSet s;
    s.intervals_ = std::move(out);
    return s;
}

std::string to_string(const Rational& r) {
    return r.str();
}

std::string to_string(const IntervalSet& s) {
    std::string out = "{";
    for (std::size_t i = 0; i < s.intervals().size(); ++i) {
        if (i) out += ", ";
        out += "[" + to_string(s.intervals()[i].lo) + "," + to_string(s.intervals()[i].hi) + ")";
    }
    return out + "}";
}

}  // namespace tdma
