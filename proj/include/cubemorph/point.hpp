#pragma once

// Vertices of the Hamming cube {0,1}^n packed into a single machine word.
//
// Coordinate i (1-based, as written in strings) lives in bit i-1, so the
// leftmost character of the string form is the lowest bit.

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cubemorph
{

/// Largest dimension that formula-backed maps accept.
inline constexpr int kMaxFormulaDim = 63;
/// Largest dimension for anything that enumerates or tabulates the cube.
inline constexpr int kMaxExhaustiveDim = 30;

inline constexpr std::uint64_t low_mask( int n ) noexcept
{
  return n >= 64 ? ~std::uint64_t{ 0 } : ( ( std::uint64_t{ 1 } << n ) - 1u );
}

inline void check_dim( int n, int max_dim = kMaxFormulaDim )
{
  if ( n < 1 || n > max_dim )
  {
    throw std::out_of_range( "dimension " + std::to_string( n ) + " outside [1, " + std::to_string( max_dim ) + "]" );
  }
}

struct Point
{
  std::uint64_t bits = 0;
  int n = 0;

  Point() = default;

  Point( std::uint64_t packed, int dim ) : bits( packed ), n( dim )
  {
    check_dim( dim );
    if ( ( packed & ~low_mask( dim ) ) != 0 )
    {
      throw std::invalid_argument( "point has bits set above its dimension" );
    }
  }

  static Point zero( int dim ) { return Point( 0, dim ); }

  /// Coordinate i in 1..n.
  bool operator[]( int i ) const noexcept { return ( bits >> ( i - 1 ) ) & 1u; }

  friend bool operator==( const Point&, const Point& ) = default;
};

inline int weight( std::uint64_t bits ) noexcept { return std::popcount( bits ); }
inline int weight( const Point& x ) noexcept { return std::popcount( x.bits ); }

inline int dist( const Point& x, const Point& y )
{
  if ( x.n != y.n )
  {
    throw std::invalid_argument( "dist: dimension mismatch" );
  }
  return std::popcount( x.bits ^ y.bits );
}

inline Point flip( const Point& x, int i )
{
  if ( i < 1 || i > x.n )
  {
    throw std::out_of_range( "flip: direction " + std::to_string( i ) + " outside [1, " + std::to_string( x.n ) + "]" );
  }
  return Point( x.bits ^ ( std::uint64_t{ 1 } << ( i - 1 ) ), x.n );
}

/// Parses a string of '0'/'1' characters; character 1 is coordinate 1.
inline Point parse_point( std::string_view s )
{
  if ( s.empty() || s.size() > static_cast<std::size_t>( kMaxFormulaDim ) )
  {
    throw std::invalid_argument( "point string must have 1.." + std::to_string( kMaxFormulaDim ) + " characters" );
  }
  std::uint64_t bits = 0;
  for ( std::size_t i = 0; i < s.size(); ++i )
  {
    if ( s[i] == '1' )
    {
      bits |= std::uint64_t{ 1 } << i;
    }
    else if ( s[i] != '0' )
    {
      throw std::invalid_argument( std::string( "bad character '" ) + s[i] + "' in point string" );
    }
  }
  return Point( bits, static_cast<int>( s.size() ) );
}

/// Parses and additionally requires exactly `n` characters.
inline Point parse_point( std::string_view s, int n )
{
  if ( static_cast<int>( s.size() ) != n )
  {
    throw std::invalid_argument( "point string has length " + std::to_string( s.size() ) + ", expected " + std::to_string( n ) );
  }
  return parse_point( s );
}

inline std::string format_bits( std::uint64_t bits, int n )
{
  std::string s( static_cast<std::size_t>( n ), '0' );
  for ( int i = 0; i < n; ++i )
  {
    if ( ( bits >> i ) & 1u )
    {
      s[static_cast<std::size_t>( i )] = '1';
    }
  }
  return s;
}

inline std::string format_point( const Point& x ) { return format_bits( x.bits, x.n ); }

} // namespace cubemorph
