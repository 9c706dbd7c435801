#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "tdma/frame.hpp"

namespace tdma {

class CodecError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class FrameCodec { none, binary, json };
FrameCodec parse_codec(const std::string& name);
std::string codec_name(FrameCodec c);

/// "n/d" (or "n" for integers).
std::string rational_to_string(const Rational& r);
Rational rational_from_string(const std::string& s);

nlohmann::json to_json(const IntervalSet& s);
IntervalSet interval_set_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SharedVars& v);
SharedVars shared_vars_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Frame& f);
Frame frame_from_json(const nlohmann::json& j);

/// Canonical little-endian encoding, prefixed by the payload length.
std::vector<std::uint8_t> encode_binary(const Frame& f);
/// Throws CodecError on truncated or inconsistent input.
Frame decode_binary(const std::vector<std::uint8_t>& bytes);

/// Encodes and decodes with the given codec; identity for `none`.
Frame round_trip(const Frame& f, FrameCodec codec);

}  // namespace tdma
