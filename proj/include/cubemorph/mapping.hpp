#pragma once

// Maps of the n-cube to itself, as a forward evaluator plus an optional inverse.

#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "chain_mappings.hpp"
#include "gf2.hpp"
#include "point.hpp"

namespace cubemorph
{

using PointTable = std::vector<std::uint32_t>;

struct Mapping
{
  using Fn = std::function<std::uint64_t( std::uint64_t )>;

  int n = 0;
  std::string name;
  Fn forward;
  Fn inverse; ///< empty when unknown

  bool has_inverse() const noexcept { return static_cast<bool>( inverse ); }

  Point operator()( const Point& x ) const
  {
    if ( x.n != n )
    {
      throw std::invalid_argument( "mapping " + name + ": dimension mismatch" );
    }
    return Point( forward( x.bits ), n );
  }

  Point invert( const Point& y ) const
  {
    if ( !inverse )
    {
      throw std::logic_error( "mapping " + name + " has no inverse" );
    }
    if ( y.n != n )
    {
      throw std::invalid_argument( "mapping " + name + ": dimension mismatch" );
    }
    return Point( inverse( y.bits ), n );
  }

  Mapping inverted() const
  {
    if ( !inverse )
    {
      throw std::logic_error( "mapping " + name + " has no inverse" );
    }
    return { n, name + "^-1", inverse, forward };
  }

  /// forward(x) for every x; n must be at most kMaxExhaustiveDim.
  PointTable tabulate() const
  {
    check_dim( n, kMaxExhaustiveDim );
    PointTable t( std::size_t{ 1 } << n );
    for ( std::uint64_t x = 0; x < t.size(); ++x )
    {
      t[x] = static_cast<std::uint32_t>( forward( x ) );
    }
    return t;
  }

  static Mapping from_table( int n, std::string name, PointTable table, PointTable inverse_table = {} )
  {
    check_dim( n, kMaxExhaustiveDim );
    if ( table.size() != ( std::size_t{ 1 } << n ) || ( !inverse_table.empty() && inverse_table.size() != table.size() ) )
    {
      throw std::invalid_argument( "mapping table must have 2^n entries" );
    }
    auto fwd = std::make_shared<const PointTable>( std::move( table ) );
    Mapping m{ n, std::move( name ), [fwd]( std::uint64_t x ) -> std::uint64_t { return ( *fwd )[x]; }, {} };
    if ( !inverse_table.empty() )
    {
      auto inv = std::make_shared<const PointTable>( std::move( inverse_table ) );
      m.inverse = [inv]( std::uint64_t y ) -> std::uint64_t { return ( *inv )[y]; };
    }
    return m;
  }
};

/// Inverse of a permutation table. Throws if it is not one.
inline PointTable invert_table( const PointTable& t )
{
  PointTable inv( t.size(), 0 );
  std::vector<bool> seen( t.size(), false );
  for ( std::size_t x = 0; x < t.size(); ++x )
  {
    if ( t[x] >= t.size() || seen[t[x]] )
    {
      throw std::invalid_argument( "table is not a permutation" );
    }
    seen[t[x]] = true;
    inv[t[x]] = static_cast<std::uint32_t>( x );
  }
  return inv;
}

inline Mapping compose( const Mapping& outer, const Mapping& inner )
{
  if ( outer.n != inner.n )
  {
    throw std::invalid_argument( "compose: dimension mismatch" );
  }
  Mapping m{ inner.n, outer.name + "*" + inner.name,
             [o = outer.forward, i = inner.forward]( std::uint64_t x ) { return o( i( x ) ); }, {} };
  if ( outer.has_inverse() && inner.has_inverse() )
  {
    m.inverse = [o = outer.inverse, i = inner.inverse]( std::uint64_t y ) { return i( o( y ) ); };
  }
  return m;
}

namespace mappings
{

inline Mapping identity( int n )
{
  check_dim( n );
  auto id = []( std::uint64_t x ) { return x; };
  return { n, "identity", id, id };
}

inline Mapping maj2dict( int n )
{
  require_odd_dim( n );
  return { n, "maj2dict", [n]( std::uint64_t x ) { return detail::maj_to_dict_bits( x, n ); },
           [n]( std::uint64_t y ) { return detail::dict_to_maj_bits( y, n ); } };
}

inline Mapping dict2maj( int n ) { return maj2dict( n ).inverted(); }

inline Mapping maj2xor( int n )
{
  require_odd_dim( n );
  return { n, "maj2xor", [n]( std::uint64_t x ) { return prefix_xor_bits( detail::maj_to_dict_bits( x, n ) ); },
           [n]( std::uint64_t y ) { return detail::dict_to_maj_bits( prefix_xor_inverse_bits( y ), n ); } };
}

inline Mapping prefix( int n )
{
  check_dim( n );
  return { n, "prefix", prefix_xor_bits, prefix_xor_inverse_bits };
}

inline Mapping xorhead( int n )
{
  check_dim( n );
  return { n, "xorhead", xor_head_bits, xor_head_bits };
}

/// The tree map on at most 63 coordinates, evaluated through per-row masks.
inline Mapping tree( int n, std::size_t arity )
{
  check_dim( n );
  const TreeLabeling t( static_cast<std::size_t>( n ), arity );
  auto rows = std::make_shared<std::vector<std::uint64_t>>( static_cast<std::size_t>( n ), 0u );
  auto subtrees = std::make_shared<std::vector<std::uint64_t>>( static_cast<std::size_t>( n ), 0u );
  for ( std::size_t i = static_cast<std::size_t>( n ); i >= 1; --i )
  {
    std::uint64_t row = std::uint64_t{ 1 } << ( i - 1 );
    std::uint64_t sub = row;
    for ( std::size_t c = t.first_child( i ); c <= t.last_child( i ); ++c )
    {
      row |= std::uint64_t{ 1 } << ( c - 1 );
      sub |= ( *subtrees )[c - 1];
    }
    ( *rows )[i - 1] = row;
    ( *subtrees )[i - 1] = sub;
  }
  auto by_masks = []( std::shared_ptr<std::vector<std::uint64_t>> masks ) {
    return [masks]( std::uint64_t x ) {
      std::uint64_t y = 0;
      for ( std::size_t i = 0; i < masks->size(); ++i )
      {
        y |= static_cast<std::uint64_t>( std::popcount( x & ( *masks )[i] ) & 1 ) << i;
      }
      return y;
    };
  };
  return { n, arity == 2 ? "tree" : "tree" + std::to_string( arity ), by_masks( rows ), by_masks( subtrees ) };
}

} // namespace mappings

} // namespace cubemorph
