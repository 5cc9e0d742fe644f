#pragma once

namespace ctxprob {
inline constexpr const char* kVersion = "0.1.0";
}
