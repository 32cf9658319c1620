#pragma once

// Edge stretch of cube maps, validity of maps between Boolean functions,
// brute-force and heuristic searches for low-stretch maps, and the binomial
// counting facts behind the XOR-to-Majority lower bound.
//
// Edges are undirected and counted once: there are n * 2^(n-1) of them, and
// the average over them equals the average over (x, i) pairs.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "boolean_function.hpp"
#include "mapping.hpp"
#include "parallel.hpp"
#include "point.hpp"
#include "rng.hpp"

namespace cubemorph
{

using Rational = mpq_class;

inline constexpr int kMaxStretchDim = 24;

inline Rational make_rational( std::uint64_t num, std::uint64_t den )
{
  Rational r( mpz_class( std::to_string( num ) ), mpz_class( std::to_string( den ) ) );
  r.canonicalize();
  return r;
}

struct StretchReport
{
  int n = 0;
  std::string mapping;
  bool exhaustive = true;
  Rational avg;
  std::vector<Rational> per_direction;
  int max = 0;
  std::vector<std::uint64_t> histogram; ///< histogram[d] = number of edges stretched to distance d
  std::uint64_t edges_total = 0;

  // Sampled mode only.
  std::uint64_t seed = 0;
  double std_error = 0.0;

  double avg_value() const { return avg.get_d(); }
};

namespace detail
{

inline void finish_report( StretchReport& r, const std::vector<std::uint64_t>& dir_sums, const std::vector<std::uint64_t>& dir_counts )
{
  std::uint64_t total = 0;
  r.edges_total = 0;
  r.per_direction.clear();
  for ( std::size_t i = 0; i < dir_sums.size(); ++i )
  {
    total += dir_sums[i];
    r.edges_total += dir_counts[i];
    r.per_direction.push_back( dir_counts[i] ? make_rational( dir_sums[i], dir_counts[i] ) : Rational( 0 ) );
  }
  r.avg = r.edges_total ? make_rational( total, r.edges_total ) : Rational( 0 );
  r.max = 0;
  for ( std::size_t d = 0; d < r.histogram.size(); ++d )
  {
    if ( r.histogram[d] )
    {
      r.max = static_cast<int>( d );
    }
  }
  while ( r.histogram.size() > static_cast<std::size_t>( r.max ) + 1 )
  {
    r.histogram.pop_back();
  }
}

} // namespace detail

/// Exact statistics over every edge of a tabulated map.
inline StretchReport stretch_report( int n, const PointTable& table, std::string name = "table", unsigned workers = 1 )
{
  check_dim( n, kMaxStretchDim );
  if ( table.size() != ( std::size_t{ 1 } << n ) )
  {
    throw std::invalid_argument( "stretch_report: table must have 2^n entries" );
  }
  const unsigned shards = 16;
  const std::size_t dims = static_cast<std::size_t>( n );
  std::vector<std::vector<std::uint64_t>> hist( shards, std::vector<std::uint64_t>( dims + 1, 0 ) );
  std::vector<std::vector<std::uint64_t>> sums( shards, std::vector<std::uint64_t>( dims, 0 ) );
  parallel_shards( table.size(), shards, workers, [&]( unsigned s, std::uint64_t lo, std::uint64_t hi ) {
    auto& h = hist[s];
    auto& sm = sums[s];
    for ( std::uint64_t x = lo; x < hi; ++x )
    {
      const std::uint32_t fx = table[x];
      for ( std::size_t i = 0; i < dims; ++i )
      {
        const std::uint64_t y = x | ( std::uint64_t{ 1 } << i );
        if ( y != x )
        {
          const int d = std::popcount( fx ^ table[y] );
          ++h[static_cast<std::size_t>( d )];
          sm[i] += static_cast<std::uint64_t>( d );
        }
      }
    }
  } );
  StretchReport r;
  r.n = n;
  r.mapping = std::move( name );
  r.exhaustive = true;
  r.histogram.assign( dims + 1, 0 );
  std::vector<std::uint64_t> dir_sums( dims, 0 );
  for ( unsigned s = 0; s < shards; ++s )
  {
    for ( std::size_t d = 0; d <= dims; ++d )
    {
      r.histogram[d] += hist[s][d];
    }
    for ( std::size_t i = 0; i < dims; ++i )
    {
      dir_sums[i] += sums[s][i];
    }
  }
  detail::finish_report( r, dir_sums, std::vector<std::uint64_t>( dims, std::uint64_t{ 1 } << ( n - 1 ) ) );
  return r;
}

inline StretchReport stretch_report( const Mapping& phi, unsigned workers = 1 )
{
  check_dim( phi.n, kMaxStretchDim );
  return stretch_report( phi.n, phi.tabulate(), phi.name, workers );
}

/// Monte Carlo estimate from `samples` uniformly random (x, i) pairs. The
/// reported averages are the exact sample means.
inline StretchReport stretch_report_sampled( const Mapping& phi, std::uint64_t samples, std::uint64_t seed )
{
  check_dim( phi.n );
  if ( samples == 0 )
  {
    throw std::invalid_argument( "stretch_report_sampled: need at least one sample" );
  }
  const auto dims = static_cast<std::size_t>( phi.n );
  Rng rng( derive_seed( seed, stream_tag( "stretch-sample" ), 0 ) );
  StretchReport r;
  r.n = phi.n;
  r.mapping = phi.name;
  r.exhaustive = false;
  r.seed = seed;
  r.histogram.assign( dims + 1, 0 );
  std::vector<std::uint64_t> dir_sums( dims, 0 ), dir_counts( dims, 0 );
  double sum = 0, sum_sq = 0;
  const std::uint64_t mask = low_mask( phi.n );
  for ( std::uint64_t s = 0; s < samples; ++s )
  {
    const std::uint64_t x = rng.next() & mask;
    const auto i = static_cast<std::size_t>( rng.below( dims ) );
    const int d = std::popcount( phi.forward( x ) ^ phi.forward( x ^ ( std::uint64_t{ 1 } << i ) ) );
    ++r.histogram[static_cast<std::size_t>( d )];
    dir_sums[i] += static_cast<std::uint64_t>( d );
    ++dir_counts[i];
    sum += d;
    sum_sq += static_cast<double>( d ) * d;
  }
  detail::finish_report( r, dir_sums, dir_counts );
  const double m = sum / static_cast<double>( samples );
  const double var = samples > 1 ? ( sum_sq - static_cast<double>( samples ) * m * m ) / static_cast<double>( samples - 1 ) : 0.0;
  r.std_error = std::sqrt( std::max( 0.0, var ) / static_cast<double>( samples ) );
  return r;
}

/// Average of dist(phi(x), phi(x + e_i)) over all x, i in 1..n.
inline Rational directional_avg_stretch( const Mapping& phi, int i )
{
  check_dim( phi.n, kMaxStretchDim );
  if ( i < 1 || i > phi.n )
  {
    throw std::out_of_range( "directional_avg_stretch: direction out of range" );
  }
  const std::uint64_t bit = std::uint64_t{ 1 } << ( i - 1 );
  std::uint64_t sum = 0;
  for ( std::uint64_t x = 0; x < ( std::uint64_t{ 1 } << phi.n ); ++x )
  {
    if ( !( x & bit ) )
    {
      sum += static_cast<std::uint64_t>( std::popcount( phi.forward( x ) ^ phi.forward( x | bit ) ) );
    }
  }
  return make_rational( sum, std::uint64_t{ 1 } << ( phi.n - 1 ) );
}

/// phi is a bijection with f(x) = g(phi(x)) everywhere.
inline bool is_mapping_between( int n, const PointTable& table, const BooleanFunction& f, const BooleanFunction& g )
{
  if ( f.num_vars() != n || g.num_vars() != n || table.size() != ( std::size_t{ 1 } << n ) )
  {
    throw std::invalid_argument( "is_mapping_between: dimension mismatch" );
  }
  std::vector<bool> seen( table.size(), false );
  for ( std::uint64_t x = 0; x < table.size(); ++x )
  {
    const std::uint32_t y = table[x];
    if ( y >= table.size() || seen[y] || f( x ) != g( y ) )
    {
      return false;
    }
    seen[y] = true;
  }
  return true;
}

inline bool is_mapping_between( const Mapping& phi, const BooleanFunction& f, const BooleanFunction& g )
{
  check_dim( phi.n, kMaxStretchDim );
  if ( f.num_vars() != phi.n || g.num_vars() != phi.n )
  {
    throw std::invalid_argument( "is_mapping_between: dimension mismatch" );
  }
  return is_mapping_between( phi.n, phi.tabulate(), f, g );
}

// ---------------------------------------------------------------------------
// Searching over all maps between two functions

enum class StretchMetric
{
  average,
  maximum
};

struct SearchResult
{
  Rational value;      ///< average stretch, or the maximum edge stretch as an integer
  PointTable witness;  ///< one map attaining the value
  std::uint64_t visited = 0;
};

inline constexpr int kMaxBruteForceDim = 3;

namespace detail
{

struct ClassPlan
{
  std::vector<std::uint32_t> ones_f, zeros_f, ones_g, zeros_g;
};

inline ClassPlan class_plan( const BooleanFunction& f, const BooleanFunction& g, int n )
{
  if ( f.num_vars() != n || g.num_vars() != n )
  {
    throw std::invalid_argument( "search: dimension mismatch" );
  }
  ClassPlan p;
  for ( std::uint32_t x = 0; x < ( 1u << n ); ++x )
  {
    ( f( x ) ? p.ones_f : p.zeros_f ).push_back( x );
    ( g( x ) ? p.ones_g : p.zeros_g ).push_back( x );
  }
  if ( p.ones_f.size() != p.ones_g.size() )
  {
    throw std::invalid_argument( "no map exists: f and g have different numbers of ones" );
  }
  return p;
}

inline std::uint64_t edge_count( int n ) { return static_cast<std::uint64_t>( n ) << ( n - 1 ); }

} // namespace detail

/// Calls visit(table) for every map from f to g; n <= 3.
template<typename Visit>
void enumerate_mappings( const BooleanFunction& f, const BooleanFunction& g, int n, Visit&& visit )
{
  check_dim( n, kMaxBruteForceDim );
  const auto plan = detail::class_plan( f, g, n );
  auto ones = plan.ones_g;
  auto zeros = plan.zeros_g;
  PointTable t( std::size_t{ 1 } << n );
  do
  {
    for ( std::size_t k = 0; k < ones.size(); ++k )
    {
      t[plan.ones_f[k]] = ones[k];
    }
    do
    {
      for ( std::size_t k = 0; k < zeros.size(); ++k )
      {
        t[plan.zeros_f[k]] = zeros[k];
      }
      visit( static_cast<const PointTable&>( t ) );
    } while ( std::next_permutation( zeros.begin(), zeros.end() ) );
  } while ( std::next_permutation( ones.begin(), ones.end() ) );
}

/// Global minimum of the chosen stretch metric over all maps from f to g.
/// Branch and bound over sources in increasing order; a branch is cut once
/// its lower bound reaches the incumbent, so the witness is the first optimum
/// in enumeration order.
inline SearchResult exhaustive_min_stretch( const BooleanFunction& f, const BooleanFunction& g, int n,
                                           StretchMetric metric = StretchMetric::average )
{
  check_dim( n, kMaxBruteForceDim );
  const auto plan = detail::class_plan( f, g, n );
  const std::uint32_t size = 1u << n;
  const std::uint64_t edges = detail::edge_count( n );

  PointTable t( size, 0 );
  std::vector<bool> used( size, false );
  SearchResult best;
  std::uint64_t best_cost = std::numeric_limits<std::uint64_t>::max();

  auto rec = [&]( auto&& self, std::uint32_t x, std::uint64_t cost, std::uint64_t done_edges ) -> void {
    if ( x == size )
    {
      ++best.visited;
      best_cost = cost;
      best.witness = t;
      return;
    }
    const auto& targets = f( x ) ? plan.ones_g : plan.zeros_g;
    for ( auto y : targets )
    {
      if ( used[y] )
      {
        continue;
      }
      std::uint64_t c = cost;
      std::uint64_t e = done_edges;
      for ( int i = 0; i < n; ++i )
      {
        const std::uint32_t z = x ^ ( 1u << i );
        if ( z < x )
        {
          const auto d = static_cast<std::uint64_t>( std::popcount( y ^ t[z] ) );
          c = metric == StretchMetric::average ? c + d : std::max( c, d );
          ++e;
        }
      }
      // every remaining edge costs at least 1
      const std::uint64_t bound = metric == StretchMetric::average ? c + ( edges - e ) : std::max<std::uint64_t>( c, edges > e ? 1 : 0 );
      if ( bound >= best_cost )
      {
        continue;
      }
      used[y] = true;
      t[x] = y;
      self( self, x + 1, c, e );
      used[y] = false;
    }
  };
  rec( rec, 0, 0, 0 );
  best.value = metric == StretchMetric::average ? make_rational( best_cost, edges ) : Rational( static_cast<unsigned long>( best_cost ) );
  return best;
}

namespace detail
{

inline std::uint64_t total_stretch( const PointTable& t, int n )
{
  std::uint64_t s = 0;
  for ( std::uint32_t x = 0; x < t.size(); ++x )
  {
    for ( int i = 0; i < n; ++i )
    {
      const std::uint32_t z = x | ( 1u << i );
      if ( z != x )
      {
        s += static_cast<std::uint64_t>( std::popcount( t[x] ^ t[z] ) );
      }
    }
  }
  return s;
}

/// Change in total stretch if the images of a and b are exchanged.
inline std::int64_t swap_delta( const PointTable& t, int n, std::uint32_t a, std::uint32_t b )
{
  const std::uint32_t ta = t[a], tb = t[b];
  std::int64_t delta = 0;
  for ( int i = 0; i < n; ++i )
  {
    const std::uint32_t na = a ^ ( 1u << i );
    const std::uint32_t nb = b ^ ( 1u << i );
    if ( na != b )
    {
      delta += std::popcount( tb ^ t[na] ) - std::popcount( ta ^ t[na] );
    }
    if ( nb != a )
    {
      delta += std::popcount( ta ^ t[nb] ) - std::popcount( tb ^ t[nb] );
    }
  }
  return delta;
}

} // namespace detail

/// Transposition descent over maps from f to g (average metric), best of
/// `restarts` seeded starts. When the identity is itself a map from f to g it
/// is the first start. Small cubes (n <= 9) descend until no improving swap
/// exists; larger ones sample candidate swaps until 20 * 2^n fail in a row.
inline SearchResult local_search_min_stretch( const BooleanFunction& f, const BooleanFunction& g, int n, std::uint64_t seed,
                                              unsigned restarts = 32 )
{
  check_dim( n, 20 );
  const auto plan = detail::class_plan( f, g, n );
  const std::uint32_t size = 1u << n;
  const std::uint64_t edges = detail::edge_count( n );

  bool identity_valid = true;
  for ( std::uint32_t x = 0; x < size && identity_valid; ++x )
  {
    identity_valid = f( x ) == g( x );
  }

  SearchResult best;
  std::uint64_t best_cost = std::numeric_limits<std::uint64_t>::max();
  restarts = std::max( 1u, restarts );

  for ( unsigned r = 0; r < restarts; ++r )
  {
    Rng rng( derive_seed( seed, stream_tag( "local-search" ), r ) );
    PointTable t( size );
    if ( r == 0 && identity_valid )
    {
      std::iota( t.begin(), t.end(), 0u );
    }
    else
    {
      for ( auto [src, dst] : { std::pair{ &plan.ones_f, plan.ones_g }, std::pair{ &plan.zeros_f, plan.zeros_g } } )
      {
        for ( std::size_t k = dst.size(); k > 1; --k )
        {
          std::swap( dst[k - 1], dst[rng.below( k )] );
        }
        for ( std::size_t k = 0; k < dst.size(); ++k )
        {
          t[( *src )[k]] = dst[k];
        }
      }
    }
    std::uint64_t cost = detail::total_stretch( t, n );

    if ( n <= 9 )
    {
      bool improved = true;
      while ( improved )
      {
        improved = false;
        for ( const auto* cls : { &plan.ones_f, &plan.zeros_f } )
        {
          for ( std::size_t p = 0; p < cls->size(); ++p )
          {
            for ( std::size_t q = p + 1; q < cls->size(); ++q )
            {
              const auto d = detail::swap_delta( t, n, ( *cls )[p], ( *cls )[q] );
              if ( d < 0 )
              {
                std::swap( t[( *cls )[p]], t[( *cls )[q]] );
                cost = static_cast<std::uint64_t>( static_cast<std::int64_t>( cost ) + d );
                improved = true;
              }
            }
          }
        }
      }
    }
    else
    {
      const std::uint64_t patience = 20ull * size;
      std::uint64_t stale = 0;
      while ( stale < patience )
      {
        const auto& cls = rng.coin() ? plan.ones_f : plan.zeros_f;
        if ( cls.size() < 2 )
        {
          ++stale;
          continue;
        }
        const auto a = cls[rng.below( cls.size() )];
        const auto b = cls[rng.below( cls.size() )];
        const auto d = a == b ? 0 : detail::swap_delta( t, n, a, b );
        if ( d < 0 )
        {
          std::swap( t[a], t[b] );
          cost = static_cast<std::uint64_t>( static_cast<std::int64_t>( cost ) + d );
          stale = 0;
        }
        else
        {
          ++stale;
        }
      }
    }
    ++best.visited;
    if ( cost < best_cost )
    {
      best_cost = cost;
      best.witness = t;
    }
  }
  best.value = make_rational( best_cost, edges );
  return best;
}

// ---------------------------------------------------------------------------
// Binomial counting

/// Fraction of points x of the n-cube with | |x| - n/2 | > c * sqrt(n), exact.
inline Rational typical_fraction( unsigned long n, double c )
{
  if ( n < 1 || n > 1000000 )
  {
    throw std::out_of_range( "typical_fraction: n must be in [1, 10^6]" );
  }
  const long double radius = 2.0L * static_cast<long double>( c ) * std::sqrt( static_cast<long double>( n ) );
  mpz_class central = 0;
  mpz_class term;
  for ( unsigned long w = 0; w <= n; ++w )
  {
    const long double off = std::fabs( 2.0L * static_cast<long double>( w ) - static_cast<long double>( n ) );
    if ( off <= radius )
    {
      mpz_bin_uiui( term.get_mpz_t(), n, w );
      central += term;
    }
    else if ( 2 * w > n )
    {
      break;
    }
  }
  mpz_class total = 1;
  total <<= static_cast<mp_bitcnt_t>( n );
  Rational r( total - central, total );
  r.canonicalize();
  return r;
}

/// binom(n, floor(n/2)) < 2^n / sqrt(n), decided exactly as binom^2 * n < 4^n.
inline bool middle_binomial_check( unsigned long n )
{
  if ( n < 1 )
  {
    throw std::out_of_range( "middle_binomial_check: n must be positive" );
  }
  mpz_class b;
  mpz_bin_uiui( b.get_mpz_t(), n, n / 2 );
  mpz_class lhs = b * b * n;
  mpz_class rhs = 1;
  rhs <<= static_cast<mp_bitcnt_t>( 2 * n );
  return lhs < rhs;
}

} // namespace cubemorph
