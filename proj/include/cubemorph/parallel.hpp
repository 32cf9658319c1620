#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace cubemorph
{

/// Worker count from an explicit request, else $CUBEMORPH_WORKERS, else 1.
inline unsigned resolve_workers( unsigned requested = 0 )
{
  if ( requested > 0 )
  {
    return requested;
  }
  if ( const char* env = std::getenv( "CUBEMORPH_WORKERS" ) )
  {
    try
    {
      const long v = std::stol( env );
      if ( v > 0 )
      {
        return static_cast<unsigned>( std::min( v, 1024L ) );
      }
    }
    catch ( const std::exception& )
    {
    }
  }
  return 1;
}

/// Splits [0, count) into `shards` contiguous ranges and runs body(shard, begin, end)
/// on up to `workers` threads. Shard boundaries depend only on `count` and `shards`.
template<typename Body>
void parallel_shards( std::uint64_t count, unsigned shards, unsigned workers, Body&& body )
{
  shards = std::max( 1u, shards );
  auto bounds = [&]( unsigned s ) { return count * s / shards; };
  if ( workers <= 1 || shards == 1 )
  {
    for ( unsigned s = 0; s < shards; ++s )
    {
      body( s, bounds( s ), bounds( s + 1 ) );
    }
    return;
  }
  std::vector<std::exception_ptr> errors( workers );
  std::vector<std::thread> pool;
  pool.reserve( workers );
  for ( unsigned w = 0; w < workers; ++w )
  {
    pool.emplace_back( [&, w] {
      try
      {
        for ( unsigned s = w; s < shards; s += workers )
        {
          body( s, bounds( s ), bounds( s + 1 ) );
        }
      }
      catch ( ... )
      {
        errors[w] = std::current_exception();
      }
    } );
  }
  for ( auto& t : pool )
  {
    t.join();
  }
  for ( auto& e : errors )
  {
    if ( e )
    {
      std::rethrow_exception( e );
    }
  }
}

} // namespace cubemorph
