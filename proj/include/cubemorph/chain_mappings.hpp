#pragma once

// Lipschitz bijection from Majority to Dictator built on the symmetric chain
// partition of the (n-1)-cube, its inverse, and the composition into XOR.
//
// Write x = x' o x_n with x' the first n-1 coordinates. If x' = c_j in a chain
// c_k..c_{n-1-k}, then
//   psi(x) = 1 o c_{2j-(n-k)+x_n}   when |x| >= (n+1)/2,
//   psi(x) = 0 o c_{(n+k)-2j-1-x_n} when |x| <= (n-1)/2,
// where the leading bit becomes coordinate 1 of the image.

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "btk.hpp"
#include "gf2.hpp"
#include "point.hpp"

namespace cubemorph
{

inline void require_odd_dim( int n )
{
  check_dim( n );
  if ( n % 2 == 0 )
  {
    throw std::invalid_argument( "dimension must be odd, got " + std::to_string( n ) );
  }
}

namespace detail
{

inline std::uint64_t maj_to_dict_bits( std::uint64_t bits, int n ) noexcept
{
  const int m = n - 1;
  const std::uint64_t head = bits & low_mask( m );
  const int last = static_cast<int>( ( bits >> m ) & 1u );
  const Signature sig = signature_of( head, m );
  const int k = sig.min_level();
  const int j = std::popcount( head );
  int level;
  std::uint64_t lead;
  if ( 2 * std::popcount( bits ) >= n + 1 )
  {
    level = 2 * j - ( n - k ) + last;
    lead = 1;
  }
  else
  {
    level = ( n + k ) - 2 * j - 1 - last;
    lead = 0;
  }
  return lead | ( fill_blanks( sig, level - k ) << 1 );
}

inline std::uint64_t dict_to_maj_bits( std::uint64_t bits, int n ) noexcept
{
  const int m = n - 1;
  const std::uint64_t tail = bits >> 1;
  const Signature sig = signature_of( tail, m );
  const int k = sig.min_level();
  const int level = std::popcount( tail );
  int last;
  int j;
  if ( bits & 1u )
  {
    last = ( level + n - k ) & 1;
    j = ( level + n - k - last ) / 2;
  }
  else
  {
    last = ( n + k - 1 - level ) & 1;
    j = ( n + k - 1 - level - last ) / 2;
  }
  return fill_blanks( sig, j - k ) | ( static_cast<std::uint64_t>( last ) << m );
}

} // namespace detail

inline Point maj_to_dict( const Point& x )
{
  require_odd_dim( x.n );
  return Point( detail::maj_to_dict_bits( x.bits, x.n ), x.n );
}

inline Point dict_to_maj( const Point& y )
{
  require_odd_dim( y.n );
  return Point( detail::dict_to_maj_bits( y.bits, y.n ), y.n );
}

/// Majority to XOR: the chain map followed by the adjacent-sum map.
inline Point maj_to_xor( const Point& x )
{
  require_odd_dim( x.n );
  return prefix_xor_map( maj_to_dict( x ) );
}

inline Point xor_to_maj( const Point& y )
{
  require_odd_dim( y.n );
  return dict_to_maj( prefix_xor_inverse( y ) );
}

} // namespace cubemorph
