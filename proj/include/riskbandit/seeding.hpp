#pragma once

#include <cstdint>
#include <string_view>

namespace riskbandit {

/// SplitMix64 finaliser; a bijection on 64-bit words.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// FNV-1a over bytes, then mixed.
constexpr std::uint64_t hash_text(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return splitmix64(h);
}

/// seed = base XOR hash(policy, scenario, run).
constexpr std::uint64_t replication_seed(std::uint64_t base, std::string_view policy,
                                         std::string_view scenario, std::uint64_t run) {
  const std::uint64_t h =
      splitmix64(hash_text(policy) ^ splitmix64(hash_text(scenario) ^ splitmix64(run)));
  return base ^ h;
}

/// Independent sub-stream seeds for the environment and the policy of one
/// replication.
constexpr std::uint64_t environment_seed(std::uint64_t replication) {
  return splitmix64(replication ^ 0x656e76ULL);
}
constexpr std::uint64_t policy_seed(std::uint64_t replication) {
  return splitmix64(replication ^ 0x706f6cULL);
}

}  // namespace riskbandit
