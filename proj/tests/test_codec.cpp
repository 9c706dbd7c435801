#include <gtest/gtest.h>

#include "tdma/codec.hpp"
#include "tdma/runtime.hpp"
#include "test_util.hpp"

using namespace tdma;
using tdma::test::id;

namespace {

Frame random_frame(Rng& rng) {
    RuntimeParams params;
    params.naming.delta = 3;
    std::vector<NodeId> universe;
    for (std::uint32_t i = 0; i < 12; ++i) universe.push_back(id(i));
    auto s = arbitrary_state(id(static_cast<std::uint32_t>(uniform_int(rng, 0, 11))), universe, params, 5000, rng);
    auto f = make_frame(s, estimate(s, 5000, params));
    if (coin(rng)) f.kind = FrameKind::tdma;
    return f;
}

}  // namespace

TEST(Codec, Names) {
    for (auto c : {FrameCodec::none, FrameCodec::binary, FrameCodec::json}) EXPECT_EQ(parse_codec(codec_name(c)), c);
    EXPECT_THROW(parse_codec("xml"), std::invalid_argument);
}

TEST(Codec, Rationals) {
    EXPECT_EQ(rational_to_string(Rational(3, 9)), "1/3");
    EXPECT_EQ(rational_from_string("2/4"), Rational(1, 2));
    EXPECT_EQ(rational_from_string("-5"), Rational(-5));
    const std::string big = "123456789012345678901234567890/11";
    EXPECT_EQ(rational_to_string(rational_from_string(big)), big);
    EXPECT_THROW(rational_from_string("1/0"), CodecError);
    EXPECT_THROW(rational_from_string("a/2"), CodecError);
    EXPECT_THROW(rational_from_string(""), CodecError);
}

TEST(Codec, RoundTripProperty) {
    auto rng = make_rng(31);
    for (int i = 0; i < 300; ++i) {
        auto f = random_frame(rng);
        ASSERT_EQ(decode_binary(encode_binary(f)), f);
        ASSERT_EQ(frame_from_json(to_json(f)), f);
        ASSERT_EQ(frame_from_json(nlohmann::json::parse(to_json(f).dump())), f);
        for (auto c : {FrameCodec::none, FrameCodec::binary, FrameCodec::json}) ASSERT_EQ(round_trip(f, c), f);
        ASSERT_EQ(shared_vars_from_json(to_json(f.vars)), f.vars);
        ASSERT_EQ(interval_set_from_json(to_json(f.vars.itvl)), f.vars.itvl);
    }
}

TEST(Codec, RoundTripsLargeRationals) {
    Frame f;
    f.sender = id(4);
    f.vars.sl.self = id(4);
    const Rational tiny = Rational(1, std::numeric_limits<std::int64_t>::max()) * Rational(1, 3);
    ASSERT_FALSE(tiny.is_small());
    f.vars.itvl = IntervalSet({{Rational(0), tiny}});
    EXPECT_EQ(decode_binary(encode_binary(f)), f);
    EXPECT_EQ(frame_from_json(to_json(f)), f);
}

TEST(Codec, RejectsCorruptInput) {
    auto rng = make_rng(32);
    auto bytes = encode_binary(random_frame(rng));
    auto truncated = bytes;
    truncated.pop_back();
    EXPECT_THROW(decode_binary(truncated), CodecError);
    auto longer = bytes;
    longer.push_back(0);
    EXPECT_THROW(decode_binary(longer), CodecError);
    EXPECT_THROW(decode_binary({}), CodecError);
    EXPECT_THROW(frame_from_json(nlohmann::json{{"sender", 1}}), CodecError);
    // random byte flips either decode or fail cleanly
    for (int i = 0; i < 2000; ++i) {
        auto b = bytes;
        b[static_cast<std::size_t>(uniform_int(rng, 4, static_cast<std::int64_t>(b.size()) - 1))] ^=
            static_cast<std::uint8_t>(uniform_int(rng, 1, 255));
        try {
            (void)decode_binary(b);
        } catch (const CodecError&) {
        }
    }
}
