#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "point.hpp"
#include "rng.hpp"

namespace cubemorph
{

/// A packed truth table of 2^n bits; bit x is the value at the point with packed bits x.
class TruthTable
{
public:
  TruthTable() = default;

  explicit TruthTable( int n ) : n_( ( check_dim( n, kMaxExhaustiveDim ), n ) ), words_( word_count( n ), 0u ) {}

  static std::size_t word_count( int n ) { return n >= 6 ? ( std::size_t{ 1 } << ( n - 6 ) ) : 1u; }

  int num_vars() const noexcept { return n_; }
  std::uint64_t size() const noexcept { return std::uint64_t{ 1 } << n_; }

  bool get( std::uint64_t x ) const noexcept { return ( words_[x >> 6] >> ( x & 63u ) ) & 1u; }

  void set( std::uint64_t x, bool v ) noexcept
  {
    const std::uint64_t m = std::uint64_t{ 1 } << ( x & 63u );
    if ( v )
    {
      words_[x >> 6] |= m;
    }
    else
    {
      words_[x >> 6] &= ~m;
    }
  }

  std::uint64_t count_ones() const noexcept
  {
    std::uint64_t c = 0;
    for ( auto w : words_ )
    {
      c += static_cast<std::uint64_t>( std::popcount( w ) );
    }
    return c;
  }

  const std::vector<std::uint64_t>& words() const noexcept { return words_; }
  std::vector<std::uint64_t>& words() noexcept { return words_; }

  void mask_tail() noexcept
  {
    if ( n_ < 6 )
    {
      words_[0] &= low_mask( 1 << n_ );
    }
  }

  friend bool operator==( const TruthTable&, const TruthTable& ) = default;

private:
  int n_ = 0;
  std::vector<std::uint64_t> words_;
};

class BooleanFunction
{
public:
  enum class Kind
  {
    majority,
    dictator,
    xor_parity,
    table
  };

  static BooleanFunction majority( int n ) { return BooleanFunction( Kind::majority, n ); }
  static BooleanFunction dictator( int n ) { return BooleanFunction( Kind::dictator, n ); }
  static BooleanFunction parity( int n ) { return BooleanFunction( Kind::xor_parity, n ); }

  /// Wraps a truth table. With `require_balanced`, throws unless exactly half the points are ones.
  static BooleanFunction from_table( TruthTable table, bool require_balanced = false )
  {
    if ( require_balanced && table.count_ones() != table.size() / 2 )
    {
      throw std::invalid_argument( "truth table is not balanced" );
    }
    BooleanFunction f( Kind::table, table.num_vars() );
    f.table_ = std::move( table );
    return f;
  }

  int num_vars() const noexcept { return n_; }
  Kind kind() const noexcept { return kind_; }

  bool operator()( std::uint64_t x ) const noexcept
  {
    switch ( kind_ )
    {
    case Kind::majority:
      return 2 * std::popcount( x ) > n_;
    case Kind::dictator:
      return x & 1u;
    case Kind::xor_parity:
      return std::popcount( x ) & 1;
    case Kind::table:
      return table_.get( x );
    }
    return false;
  }

  bool eval( const Point& x ) const
  {
    if ( x.n != n_ )
    {
      throw std::invalid_argument( "eval: dimension mismatch" );
    }
    return ( *this )( x.bits );
  }

  std::string name() const
  {
    switch ( kind_ )
    {
    case Kind::majority:
      return "majority";
    case Kind::dictator:
      return "dictator";
    case Kind::xor_parity:
      return "xor";
    case Kind::table:
      return "table";
    }
    return "?";
  }

  /// Truth table form; n must be small enough to tabulate.
  TruthTable tabulate() const
  {
    if ( kind_ == Kind::table )
    {
      return table_;
    }
    TruthTable t( n_ );
    for ( std::uint64_t x = 0; x < t.size(); ++x )
    {
      t.set( x, ( *this )( x ) );
    }
    return t;
  }

  std::uint64_t count_ones() const { return tabulate().count_ones(); }

  bool is_balanced() const { return count_ones() * 2 == ( std::uint64_t{ 1 } << n_ ); }

  const TruthTable& table() const noexcept { return table_; }

private:
  BooleanFunction( Kind k, int n ) : kind_( k ), n_( n ) { check_dim( n ); }

  Kind kind_;
  int n_;
  TruthTable table_;
};

/// Uniformly random balanced function: Fisher-Yates shuffle of a table holding 2^(n-1) ones.
inline BooleanFunction random_balanced( int n, std::uint64_t seed )
{
  check_dim( n, kMaxExhaustiveDim );
  TruthTable t( n );
  const std::uint64_t size = t.size();
  for ( std::uint64_t x = 0; x < size / 2; ++x )
  {
    t.set( x, true );
  }
  Rng rng( seed );
  for ( std::uint64_t i = size - 1; i > 0; --i )
  {
    const std::uint64_t j = rng.below( i + 1 );
    const bool a = t.get( i );
    const bool b = t.get( j );
    if ( a != b )
    {
      t.set( i, b );
      t.set( j, a );
    }
  }
  return BooleanFunction::from_table( std::move( t ), true );
}

/// Random subset of the n-cube, each point included independently with probability 1/2.
inline TruthTable random_subset( int n, std::uint64_t seed )
{
  TruthTable t( n );
  Rng rng( seed );
  for ( auto& w : t.words() )
  {
    w = rng.next();
  }
  t.mask_tail();
  return t;
}

// Binary table format: 8-byte header then the 2^n-bit little-endian bitmap.
//   bytes 0..3  magic "CMBF"
//   bytes 4..5  format version, little-endian (currently 1)
//   bytes 6..7  n, little-endian
// Bit x of the bitmap is byte x/8, bit x%8. Tables with n < 3 still occupy one byte.
inline constexpr std::array<char, 4> kTableMagic{ 'C', 'M', 'B', 'F' };
inline constexpr std::uint16_t kTableVersion = 1;

inline void write_table( std::ostream& os, const TruthTable& t )
{
  const auto n = static_cast<std::uint16_t>( t.num_vars() );
  os.write( kTableMagic.data(), 4 );
  const char header[4] = { static_cast<char>( kTableVersion & 0xff ), static_cast<char>( kTableVersion >> 8 ),
                           static_cast<char>( n & 0xff ), static_cast<char>( n >> 8 ) };
  os.write( header, 4 );
  const std::uint64_t bytes = t.size() >= 8 ? t.size() / 8 : 1u;
  for ( std::uint64_t b = 0; b < bytes; ++b )
  {
    const auto byte = static_cast<char>( ( t.words()[b >> 3] >> ( 8 * ( b & 7u ) ) ) & 0xffu );
    os.put( byte );
  }
}

inline TruthTable read_table( std::istream& is )
{
  char header[8];
  if ( !is.read( header, 8 ) )
  {
    throw std::runtime_error( "truth table: truncated header" );
  }
  if ( !std::equal( kTableMagic.begin(), kTableMagic.end(), header ) )
  {
    throw std::runtime_error( "truth table: bad magic" );
  }
  const auto u8 = []( char c ) { return static_cast<std::uint16_t>( static_cast<unsigned char>( c ) ); };
  const std::uint16_t version = static_cast<std::uint16_t>( u8( header[4] ) | ( u8( header[5] ) << 8 ) );
  const std::uint16_t n = static_cast<std::uint16_t>( u8( header[6] ) | ( u8( header[7] ) << 8 ) );
  if ( version != kTableVersion )
  {
    throw std::runtime_error( "truth table: unsupported version " + std::to_string( version ) );
  }
  TruthTable t( n );
  const std::uint64_t bytes = t.size() >= 8 ? t.size() / 8 : 1u;
  for ( std::uint64_t b = 0; b < bytes; ++b )
  {
    char c;
    if ( !is.get( c ) )
    {
      throw std::runtime_error( "truth table: truncated bitmap" );
    }
    t.words()[b >> 3] |= static_cast<std::uint64_t>( static_cast<unsigned char>( c ) ) << ( 8 * ( b & 7u ) );
  }
  t.mask_tail();
  return t;
}

} // namespace cubemorph
