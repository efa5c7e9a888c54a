#pragma once

#include <ostream>

namespace eegvote::cli {

// Exit codes; stable across releases.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitDataset = 2;
inline constexpr int kExitSpec = 3;
inline constexpr int kExitInternal = 4;
inline constexpr int kExitModel = 5;

// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace eegvote::cli
