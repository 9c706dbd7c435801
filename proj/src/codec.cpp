#include "tdma/codec.hpp"

#include <algorithm>

namespace tdma {

using nlohmann::json;

FrameCodec parse_codec(const std::string& name) {
    if (name == "none") return FrameCodec::none;
    if (name == "binary") return FrameCodec::binary;
    if (name == "json") return FrameCodec::json;
    throw std::invalid_argument("unknown frame codec: " + name);
}

std::string codec_name(FrameCodec c) {
    switch (c) {
        case FrameCodec::none: return "none";
        case FrameCodec::binary: return "binary";
        case FrameCodec::json: return "json";
    }
    return "none";
}

std::string rational_to_string(const Rational& r) { return to_string(r); }

Rational rational_from_string(const std::string& s) {
    using boost::multiprecision::cpp_int;
    const auto digits = [](const std::string& t, bool allow_sign) {
        std::size_t i = allow_sign && !t.empty() && t[0] == '-' ? 1 : 0;
        return i < t.size() && std::all_of(t.begin() + static_cast<std::ptrdiff_t>(i), t.end(),
                                           [](char c) { return c >= '0' && c <= '9'; });
    };
    const auto slash = s.find('/');
    const std::string num = s.substr(0, slash);
    const std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!digits(num, true) || !digits(den, false)) throw CodecError("bad rational: " + s);
    if (num.size() <= 18 && den.size() <= 18) {
        const long long d = std::stoll(den);
        if (d == 0) throw CodecError("zero denominator: " + s);
        return Rational(std::stoll(num), d);
    }
    const cpp_int d(den);
    if (d == 0) throw CodecError("zero denominator: " + s);
    return Rational(cpp_int(num), d);
}

namespace {

template <typename F>
auto guarded(F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const CodecError&) {
        throw;
    } catch (const std::exception& e) {
        throw CodecError(std::string("malformed payload: ") + e.what());
    }
}

json rank_json(const std::optional<Rank>& r) {
    if (!r) return nullptr;
    return json::array({r->name, r->node.value});
}

std::optional<Rank> rank_from(const json& j) {
    if (j.is_null()) return std::nullopt;
    return Rank{j.at(0).get<Name>(), NodeId{j.at(1).get<std::uint32_t>()}};
}

}  // namespace

json to_json(const IntervalSet& s) {
    json out = json::array();
    for (const auto& iv : s.intervals()) out.push_back({rational_to_string(iv.lo), rational_to_string(iv.hi)});
    return out;
}

IntervalSet interval_set_from_json(const json& j) {
    return guarded([&] {
        std::vector<Interval> parts;
        for (const auto& iv : j)
            parts.push_back({rational_from_string(iv.at(0).get<std::string>()),
                             rational_from_string(iv.at(1).get<std::string>())});
        return IntervalSet(std::move(parts));
    });
}

json to_json(const SharedVars& v) {
    json nbrs = json::array();
    for (auto q : v.sl.neighbors) nbrs.push_back(q.value);
    json setcol = json::array();
    for (const auto& [q, c] : v.setcol) setcol.push_back({q.value, c});
    json spectrum = json::array();
    for (const auto& e : v.spectrum) spectrum.push_back({e.node.value, e.color, rank_json(e.assigner)});
    return json{
        {"sl", {{"self", v.sl.self.value}, {"neighbors", nbrs}}},
        {"id", v.id},
        {"leader", v.leader},
        {"min_leader", rank_json(v.min_leader)},
        {"color", v.color ? json(*v.color) : json(nullptr)},
        {"setcol", setcol},
        {"spectrum", spectrum},
        {"base", v.base ? json(*v.base) : json(nullptr)},
        {"itvl", to_json(v.itvl)},
    };
}

SharedVars shared_vars_from_json(const json& j) {
    return guarded([&] {
        SharedVars v;
        v.sl.self = NodeId{j.at("sl").at("self").get<std::uint32_t>()};
        for (const auto& q : j.at("sl").at("neighbors")) v.sl.neighbors.push_back(NodeId{q.get<std::uint32_t>()});
        v.id = j.at("id").get<Name>();
        v.leader = j.at("leader").get<bool>();
        v.min_leader = rank_from(j.at("min_leader"));
        if (!j.at("color").is_null()) v.color = j.at("color").get<Color>();
        for (const auto& e : j.at("setcol")) v.setcol[NodeId{e.at(0).get<std::uint32_t>()}] = e.at(1).get<Color>();
        for (const auto& e : j.at("spectrum"))
            v.spectrum.push_back({NodeId{e.at(0).get<std::uint32_t>()}, e.at(1).get<Color>(), rank_from(e.at(2))});
        if (!j.at("base").is_null()) v.base = j.at("base").get<int>();
        v.itvl = interval_set_from_json(j.at("itvl"));
        return v;
    });
}

json to_json(const Frame& f) {
    json relayed = json::array();
    for (const auto& r : f.relayed)
        relayed.push_back({{"origin", r.origin.value}, {"stamp", r.stamp}, {"vars", to_json(r.vars)}});
    return json{{"sender", f.sender.value},
                {"kind", f.kind == FrameKind::overhead ? "overhead" : "tdma"},
                {"vars", to_json(f.vars)},
                {"relayed", relayed}};
}

Frame frame_from_json(const json& j) {
    return guarded([&] {
        Frame f;
        f.sender = NodeId{j.at("sender").get<std::uint32_t>()};
        const auto kind = j.at("kind").get<std::string>();
        if (kind != "overhead" && kind != "tdma") throw CodecError("bad frame kind: " + kind);
        f.kind = kind == "tdma" ? FrameKind::tdma : FrameKind::overhead;
        f.vars = shared_vars_from_json(j.at("vars"));
        for (const auto& r : j.at("relayed"))
            f.relayed.push_back({NodeId{r.at("origin").get<std::uint32_t>()}, r.at("stamp").get<Time>(),
                                 shared_vars_from_json(r.at("vars"))});
        return f;
    });
}

// --- binary -----------------------------------------------------------------

namespace {

class Writer {
public:
    void u8(std::uint8_t v) { out_.push_back(v); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
    void i64(std::int64_t v) {
        const auto u = static_cast<std::uint64_t>(v);
        for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(u >> (8 * i)));
    }
    void str(const std::string& s) {
        u32(static_cast<std::uint32_t>(s.size()));
        out_.insert(out_.end(), s.begin(), s.end());
    }
    std::vector<std::uint8_t>& bytes() { return out_; }

private:
    std::vector<std::uint8_t> out_;
};

class Reader {
public:
    Reader(const std::vector<std::uint8_t>& b, std::size_t pos, std::size_t end) : b_(b), pos_(pos), end_(end) {}

    std::uint8_t u8() {
        need(1);
        return b_[pos_++];
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b_[pos_++]) << (8 * i);
        return v;
    }
    std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
    std::int64_t i64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b_[pos_++]) << (8 * i);
        return static_cast<std::int64_t>(v);
    }
    std::string str() {
        const auto n = u32();
        need(n);
        std::string s(b_.begin() + static_cast<std::ptrdiff_t>(pos_), b_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
        pos_ += n;
        return s;
    }
    /// Element count, sanity-checked against the bytes left.
    std::uint32_t count() {
        const auto n = u32();
        if (n > end_ - pos_) throw CodecError("element count exceeds payload");
        return n;
    }
    bool done() const { return pos_ == end_; }

private:
    void need(std::size_t n) const {
        if (end_ - pos_ < n) throw CodecError("truncated frame");
    }
    const std::vector<std::uint8_t>& b_;
    std::size_t pos_;
    std::size_t end_;
};

void put_rank(Writer& w, const std::optional<Rank>& r) {
    w.u8(r ? 1 : 0);
    if (r) {
        w.u32(r->name);
        w.u32(r->node.value);
    }
}

std::optional<Rank> get_rank(Reader& r) {
    const auto flag = r.u8();
    if (flag > 1) throw CodecError("bad optional flag");
    if (!flag) return std::nullopt;
    const auto name = r.u32();
    return Rank{name, NodeId{r.u32()}};
}

void put_vars(Writer& w, const SharedVars& v) {
    w.u32(v.sl.self.value);
    w.u32(static_cast<std::uint32_t>(v.sl.neighbors.size()));
    for (auto q : v.sl.neighbors) w.u32(q.value);
    w.u32(v.id);
    w.u8(v.leader ? 1 : 0);
    put_rank(w, v.min_leader);
    w.u8(v.color ? 1 : 0);
    if (v.color) w.i32(*v.color);
    w.u32(static_cast<std::uint32_t>(v.setcol.size()));
    for (const auto& [q, c] : v.setcol) {
        w.u32(q.value);
        w.i32(c);
    }
    w.u32(static_cast<std::uint32_t>(v.spectrum.size()));
    for (const auto& e : v.spectrum) {
        w.u32(e.node.value);
        w.i32(e.color);
        put_rank(w, e.assigner);
    }
    w.u8(v.base ? 1 : 0);
    if (v.base) w.i32(*v.base);
    w.u32(static_cast<std::uint32_t>(v.itvl.intervals().size()));
    for (const auto& iv : v.itvl.intervals()) {
        w.str(rational_to_string(iv.lo));
        w.str(rational_to_string(iv.hi));
    }
}

bool get_flag(Reader& r) {
    const auto f = r.u8();
    if (f > 1) throw CodecError("bad flag byte");
    return f == 1;
}

SharedVars get_vars(Reader& r) {
    SharedVars v;
    v.sl.self = NodeId{r.u32()};
    for (auto n = r.count(); n > 0; --n) v.sl.neighbors.push_back(NodeId{r.u32()});
    v.id = r.u32();
    v.leader = get_flag(r);
    v.min_leader = get_rank(r);
    if (get_flag(r)) v.color = r.i32();
    for (auto n = r.count(); n > 0; --n) {
        const NodeId q{r.u32()};
        v.setcol[q] = r.i32();
    }
    for (auto n = r.count(); n > 0; --n) {
        SpectrumEntry e;
        e.node = NodeId{r.u32()};
        e.color = r.i32();
        e.assigner = get_rank(r);
        v.spectrum.push_back(e);
    }
    if (get_flag(r)) v.base = r.i32();
    std::vector<Interval> parts;
    for (auto n = r.count(); n > 0; --n) {
        auto lo = rational_from_string(r.str());
        auto hi = rational_from_string(r.str());
        parts.push_back({std::move(lo), std::move(hi)});
    }
    v.itvl = guarded([&] { return IntervalSet(std::move(parts)); });
    return v;
}

}  // namespace

std::vector<std::uint8_t> encode_binary(const Frame& f) {
    Writer body;
    body.u32(f.sender.value);
    body.u8(f.kind == FrameKind::tdma ? 1 : 0);
    put_vars(body, f.vars);
    body.u32(static_cast<std::uint32_t>(f.relayed.size()));
    for (const auto& rel : f.relayed) {
        body.u32(rel.origin.value);
        body.i64(rel.stamp);
        put_vars(body, rel.vars);
    }
    Writer out;
    out.u32(static_cast<std::uint32_t>(body.bytes().size()));
    out.bytes().insert(out.bytes().end(), body.bytes().begin(), body.bytes().end());
    return std::move(out.bytes());
}

Frame decode_binary(const std::vector<std::uint8_t>& bytes) {
    Reader head(bytes, 0, bytes.size());
    const auto len = head.u32();
    if (bytes.size() != 4 + static_cast<std::size_t>(len)) throw CodecError("length prefix mismatch");
    Reader r(bytes, 4, bytes.size());
    Frame f;
    f.sender = NodeId{r.u32()};
    f.kind = get_flag(r) ? FrameKind::tdma : FrameKind::overhead;
    f.vars = get_vars(r);
    for (auto n = r.count(); n > 0; --n) {
        RelayEntry rel;
        rel.origin = NodeId{r.u32()};
        rel.stamp = r.i64();
        rel.vars = get_vars(r);
        f.relayed.push_back(std::move(rel));
    }
    if (!r.done()) throw CodecError("trailing bytes after frame");
    return f;
}

Frame round_trip(const Frame& f, FrameCodec codec) {
    switch (codec) {
        case FrameCodec::none: return f;
        case FrameCodec::binary: return decode_binary(encode_binary(f));
        case FrameCodec::json: return frame_from_json(json::parse(to_json(f).dump()));
    }
    return f;
}

}  // namespace tdma
