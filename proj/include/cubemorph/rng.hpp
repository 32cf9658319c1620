#pragma once

// Deterministic randomness.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the
// standard. Standard distributions are not (their algorithms are left to the
// library), so every draw goes through the helpers here instead.
//
// Substreams: an experiment seed is expanded into independent per-trial seeds
// with derive_seed(seed, tag, index), which runs the splitmix64 finalizer over
// the three inputs. Tags are fixed 64-bit constants, one per consumer.

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>

namespace cubemorph
{

inline constexpr std::uint64_t splitmix64_mix( std::uint64_t z ) noexcept
{
  z += 0x9e3779b97f4a7c15ull;
  z = ( z ^ ( z >> 30 ) ) * 0xbf58476d1ce4e5b9ull;
  z = ( z ^ ( z >> 27 ) ) * 0x94d049bb133111ebull;
  return z ^ ( z >> 31 );
}

/// FNV-1a, used to turn a stream name into a tag.
inline constexpr std::uint64_t stream_tag( std::string_view name ) noexcept
{
  std::uint64_t h = 0xcbf29ce484222325ull;
  for ( char c : name )
  {
    h ^= static_cast<unsigned char>( c );
    h *= 0x100000001b3ull;
  }
  return h;
}

inline constexpr std::uint64_t derive_seed( std::uint64_t seed, std::uint64_t tag, std::uint64_t index ) noexcept
{
  return splitmix64_mix( splitmix64_mix( splitmix64_mix( seed ) ^ tag ) + index );
}

class Rng
{
public:
  explicit Rng( std::uint64_t seed ) : engine_( seed ) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, bound), bound > 0. Rejection sampling on the top of the range.
  std::uint64_t below( std::uint64_t bound )
  {
    const std::uint64_t limit = ~std::uint64_t{ 0 } - ( ~std::uint64_t{ 0 } % bound );
    std::uint64_t r;
    do
    {
      r = engine_();
    } while ( r >= limit );
    return r % bound;
  }

  bool coin() { return ( engine_() >> 63 ) != 0; }

  double uniform01() { return static_cast<double>( engine_() >> 11 ) * 0x1.0p-53; }

private:
  std::mt19937_64 engine_;
};

} // namespace cubemorph
