#pragma once

namespace decolemma {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace decolemma
