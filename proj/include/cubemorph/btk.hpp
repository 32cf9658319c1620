#pragma once

// De Bruijn-Tengbergen-Kruyswijk symmetric chain partition of the n-cube.
//
// Marking: read 1 as '(' and 0 as ')'; every matched pair is marked. What is
// left unmarked has the shape 0...01...1. The signature keeps the bits of the
// marked coordinates and blanks the rest; points with the same signature form
// one chain c_k, ..., c_{n-k}, where c_j fills the blanks with 0^(u-(j-k)) 1^(j-k)
// and u = n - 2k is the number of blanks.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "point.hpp"
#include "rng.hpp"

namespace cubemorph
{

inline constexpr int kMaxPartitionDim = 24;

/// A point together with the set of coordinates the marking stage marked.
struct MarkedString
{
  Point point;
  std::uint64_t marked = 0;

  /// Unicode rendering, marked symbols carry a combining circumflex.
  std::string to_string() const
  {
    std::string s;
    for ( int i = 1; i <= point.n; ++i )
    {
      s += point[i] ? '1' : '0';
      if ( ( marked >> ( i - 1 ) ) & 1u )
      {
        s += "\xCC\x82";
      }
    }
    return s;
  }

  friend bool operator==( const MarkedString&, const MarkedString& ) = default;
};

/// A word over {0, 1, blank}. Blank coordinates have `marked` bit 0; `ones` is zero there.
struct Signature
{
  int n = 0;
  std::uint64_t marked = 0;
  std::uint64_t ones = 0;

  std::uint64_t blanks() const noexcept { return ~marked & low_mask( n ); }
  int blank_count() const noexcept { return std::popcount( blanks() ); }
  /// Lowest level of the chain.
  int min_level() const noexcept { return ( n - blank_count() ) / 2; }
  int max_level() const noexcept { return n - min_level(); }

  /// '0', '1' and '_' for a blank, coordinate 1 first.
  std::string to_string() const
  {
    std::string s( static_cast<std::size_t>( n ), '_' );
    for ( int i = 0; i < n; ++i )
    {
      if ( ( marked >> i ) & 1u )
      {
        s[static_cast<std::size_t>( i )] = ( ( ones >> i ) & 1u ) ? '1' : '0';
      }
    }
    return s;
  }

  friend bool operator==( const Signature&, const Signature& ) = default;
};

inline Signature parse_signature( std::string_view s )
{
  if ( s.empty() || s.size() > static_cast<std::size_t>( kMaxFormulaDim ) )
  {
    throw std::invalid_argument( "signature string has bad length" );
  }
  Signature sig;
  sig.n = static_cast<int>( s.size() );
  for ( std::size_t i = 0; i < s.size(); ++i )
  {
    const std::uint64_t bit = std::uint64_t{ 1 } << i;
    switch ( s[i] )
    {
    case '1':
      sig.ones |= bit;
      [[fallthrough]];
    case '0':
      sig.marked |= bit;
      break;
    case '_':
      break;
    default:
      throw std::invalid_argument( std::string( "bad character '" ) + s[i] + "' in signature" );
    }
  }
  return sig;
}

/// Mask of marked coordinates of the packed word `bits` of dimension n, single stack pass.
inline std::uint64_t marked_mask( std::uint64_t bits, int n ) noexcept
{
  int stack[64];
  int top = 0;
  std::uint64_t marked = 0;
  for ( int i = 0; i < n; ++i )
  {
    if ( ( bits >> i ) & 1u )
    {
      stack[top++] = i;
    }
    else if ( top > 0 )
    {
      marked |= ( std::uint64_t{ 1 } << i ) | ( std::uint64_t{ 1 } << stack[--top] );
    }
  }
  return marked;
}

inline MarkedString mark( const Point& x ) { return { x, marked_mask( x.bits, x.n ) }; }

/// The iterative marking stage with a random choice of the next 10 pair at every step.
/// Only useful for checking that the result does not depend on the order.
inline MarkedString mark( const Point& x, std::uint64_t order_seed )
{
  Rng rng( order_seed );
  std::vector<int> unmarked( static_cast<std::size_t>( x.n ) );
  for ( int i = 0; i < x.n; ++i )
  {
    unmarked[static_cast<std::size_t>( i )] = i;
  }
  std::uint64_t marked = 0;
  std::vector<std::size_t> eligible;
  for ( ;; )
  {
    eligible.clear();
    for ( std::size_t p = 0; p + 1 < unmarked.size(); ++p )
    {
      if ( ( ( x.bits >> unmarked[p] ) & 1u ) && !( ( x.bits >> unmarked[p + 1] ) & 1u ) )
      {
        eligible.push_back( p );
      }
    }
    if ( eligible.empty() )
    {
      break;
    }
    const std::size_t p = eligible[rng.below( eligible.size() )];
    marked |= ( std::uint64_t{ 1 } << unmarked[p] ) | ( std::uint64_t{ 1 } << unmarked[p + 1] );
    unmarked.erase( unmarked.begin() + static_cast<std::ptrdiff_t>( p ), unmarked.begin() + static_cast<std::ptrdiff_t>( p + 2 ) );
  }
  return { x, marked };
}

inline Signature signature_of( std::uint64_t bits, int n ) noexcept
{
  const std::uint64_t m = marked_mask( bits, n );
  return { n, m, bits & m };
}

inline Signature signature( const Point& x ) { return signature_of( x.bits, x.n ); }

/// Chain point at level min_level + t: the highest t blanks are set.
inline std::uint64_t fill_blanks( const Signature& sig, int t ) noexcept
{
  std::uint64_t bits = sig.ones;
  std::uint64_t blanks = sig.blanks();
  for ( int s = sig.blank_count() - t; s > 0; --s )
  {
    blanks &= blanks - 1u;
  }
  return bits | blanks;
}

inline Point chain_element( const Signature& sig, int j )
{
  const int k = sig.min_level();
  if ( j < k || j > sig.n - k )
  {
    throw std::out_of_range( "chain_element: level " + std::to_string( j ) + " outside [" + std::to_string( k ) + ", " +
                             std::to_string( sig.n - k ) + "]" );
  }
  return Point( fill_blanks( sig, j - k ), sig.n );
}

struct ChainIndex
{
  int k = 0; ///< lowest level of the chain
  int j = 0; ///< level of the point itself

  friend bool operator==( const ChainIndex&, const ChainIndex& ) = default;
};

inline ChainIndex index_in_chain( const Point& x )
{
  return { signature( x ).min_level(), weight( x ) };
}

struct Chain
{
  Signature signature;
  std::vector<Point> elements; ///< elements[j - k] has weight j

  int min_level() const noexcept { return signature.min_level(); }
  int max_level() const noexcept { return signature.max_level(); }
  const Point& at_level( int j ) const { return elements.at( static_cast<std::size_t>( j - min_level() ) ); }
};

inline Chain chain_from_signature( const Signature& sig )
{
  Chain c{ sig, {} };
  const int u = sig.blank_count();
  c.elements.reserve( static_cast<std::size_t>( u + 1 ) );
  for ( int t = 0; t <= u; ++t )
  {
    c.elements.emplace_back( fill_blanks( sig, t ), sig.n );
  }
  return c;
}

inline Chain chain_of( const Point& x ) { return chain_from_signature( signature( x ) ); }

/// True iff `sig` is the signature of the points it describes: the marked
/// symbols form balanced parentheses and every blank sits outside all pairs.
inline bool is_valid_signature( const Signature& sig ) noexcept
{
  int depth = 0;
  for ( int i = 0; i < sig.n; ++i )
  {
    if ( !( ( sig.marked >> i ) & 1u ) )
    {
      if ( depth != 0 )
      {
        return false;
      }
    }
    else if ( ( sig.ones >> i ) & 1u )
    {
      ++depth;
    }
    else if ( --depth < 0 )
    {
      return false;
    }
  }
  return depth == 0 && ( sig.ones & ~sig.marked ) == 0;
}

/// Visits every chain of the partition once, in lexicographic signature order with '_' < '1' < '0'.
inline void enumerate_partition( int n, const std::function<void( const Chain& )>& visit )
{
  if ( n < 1 || n > kMaxPartitionDim )
  {
    throw std::out_of_range( "enumerate_partition: n must be in [1, " + std::to_string( kMaxPartitionDim ) + "]" );
  }
  Signature sig{ n, 0, 0 };
  auto rec = [&]( auto&& self, int pos, int depth ) -> void {
    if ( pos == n )
    {
      if ( depth == 0 )
      {
        visit( chain_from_signature( sig ) );
      }
      return;
    }
    const std::uint64_t bit = std::uint64_t{ 1 } << pos;
    const int remaining = n - pos - 1;
    if ( depth == 0 )
    {
      self( self, pos + 1, 0 );
    }
    if ( depth + 1 <= remaining )
    {
      sig.marked |= bit;
      sig.ones |= bit;
      self( self, pos + 1, depth + 1 );
      sig.ones &= ~bit;
      sig.marked &= ~bit;
    }
    if ( depth > 0 )
    {
      sig.marked |= bit;
      self( self, pos + 1, depth - 1 );
      sig.marked &= ~bit;
    }
  };
  rec( rec, 0, 0 );
}

inline int signature_distance( const Signature& a, const Signature& b )
{
  if ( a.n != b.n )
  {
    throw std::invalid_argument( "signature_distance: dimension mismatch" );
  }
  const std::uint64_t diff = ( a.marked ^ b.marked ) | ( a.marked & b.marked & ( a.ones ^ b.ones ) );
  return std::popcount( diff );
}

inline int signature_distance( const Point& x, const Point& y )
{
  if ( x.n != y.n )
  {
    throw std::invalid_argument( "signature_distance: dimension mismatch" );
  }
  return signature_distance( signature( x ), signature( y ) );
}

/// Symmetrized max-min Hamming distance between the element sets.
inline int hausdorff_chain_distance( const Chain& a, const Chain& b )
{
  if ( a.signature.n != b.signature.n )
  {
    throw std::invalid_argument( "hausdorff_chain_distance: dimension mismatch" );
  }
  auto directed = []( const Chain& from, const Chain& to ) {
    int worst = 0;
    for ( const auto& p : from.elements )
    {
      int best = p.n + 1;
      for ( const auto& q : to.elements )
      {
        best = std::min( best, std::popcount( p.bits ^ q.bits ) );
      }
      worst = std::max( worst, best );
    }
    return worst;
  };
  return std::max( directed( a, b ), directed( b, a ) );
}

} // namespace cubemorph
