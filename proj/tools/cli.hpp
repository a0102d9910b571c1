#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ksubdiv::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;  // a certification or identity check failed
inline constexpr int kExitUsage = 2;   // bad flags or parameters

/// Runs one invocation; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "1e8", "100000000", "2.5e9"; throws ksubdiv::Error(ParseError) otherwise.
std::uint64_t parse_budget(const std::string& text);

/// "17..101" expands to the admissible primes in range; "17,23,29" is taken
/// as given. Throws ksubdiv::Error(ParseError).
std::vector<std::uint64_t> parse_prime_list(const std::string& text);

}  // namespace ksubdiv::cli
