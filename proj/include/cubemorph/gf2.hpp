#pragma once

// Linear bijections over GF(2) from Dictator to XOR.
//
// The main one is A = I + M, M the adjacency matrix of the complete arity-ary
// tree on vertices 1..n labeled in level order (root 1, the children of i are
// arity*(i-1)+2 .. arity*(i-1)+arity+1). Its inverse B has B[i][j] = 1 iff j is
// in the subtree of i, so (B y)_i is the parity of y over that subtree.
//
// Two small maps sit next to it: the adjacent-sum map
// (x1+x2, ..., x_{n-1}+x_n, x_n) and the head map (XOR(x), x2, ..., xn).

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "point.hpp"
#include "rng.hpp"

namespace cubemorph
{

// ---------------------------------------------------------------------------
// Simple maps

inline std::uint64_t prefix_xor_bits( std::uint64_t x ) noexcept { return x ^ ( x >> 1 ); }

/// Suffix parities: bit i of the result is the XOR of bits i..63 of y.
inline std::uint64_t prefix_xor_inverse_bits( std::uint64_t y ) noexcept
{
  y ^= y >> 1;
  y ^= y >> 2;
  y ^= y >> 4;
  y ^= y >> 8;
  y ^= y >> 16;
  y ^= y >> 32;
  return y;
}

inline Point prefix_xor_map( const Point& x ) { return Point( prefix_xor_bits( x.bits ), x.n ); }
inline Point prefix_xor_inverse( const Point& y ) { return Point( prefix_xor_inverse_bits( y.bits ), y.n ); }

inline std::uint64_t xor_head_bits( std::uint64_t x ) noexcept
{
  return ( x & ~std::uint64_t{ 1 } ) | static_cast<std::uint64_t>( std::popcount( x ) & 1 );
}

/// Its own inverse.
inline Point xor_head_map( const Point& x ) { return Point( xor_head_bits( x.bits ), x.n ); }

// ---------------------------------------------------------------------------
// Bit vectors longer than a machine word

class BitVector
{
public:
  BitVector() = default;
  explicit BitVector( std::size_t size ) : size_( size ), words_( ( size + 63 ) / 64, 0u ) {}

  static BitVector from_point( const Point& p )
  {
    BitVector v( static_cast<std::size_t>( p.n ) );
    v.words_[0] = p.bits;
    return v;
  }

  static BitVector random( std::size_t size, Rng& rng )
  {
    BitVector v( size );
    for ( auto& w : v.words_ )
    {
      w = rng.next();
    }
    v.clear_tail();
    return v;
  }

  std::size_t size() const noexcept { return size_; }

  /// Index is 0-based (coordinate i is index i-1).
  bool get( std::size_t i ) const noexcept { return ( words_[i >> 6] >> ( i & 63u ) ) & 1u; }
  void flip( std::size_t i ) noexcept { words_[i >> 6] ^= std::uint64_t{ 1 } << ( i & 63u ); }
  void set( std::size_t i, bool v ) noexcept
  {
    if ( get( i ) != v )
    {
      flip( i );
    }
  }

  std::size_t popcount() const noexcept
  {
    std::size_t c = 0;
    for ( auto w : words_ )
    {
      c += static_cast<std::size_t>( std::popcount( w ) );
    }
    return c;
  }

  bool parity() const noexcept { return popcount() & 1u; }

  std::uint64_t word( std::size_t q ) const noexcept { return q < words_.size() ? words_[q] : 0u; }
  std::vector<std::uint64_t>& words() noexcept { return words_; }
  const std::vector<std::uint64_t>& words() const noexcept { return words_; }

  Point to_point() const { return Point( word( 0 ), static_cast<int>( size_ ) ); }

  std::size_t distance( const BitVector& o ) const
  {
    if ( o.size_ != size_ )
    {
      throw std::invalid_argument( "BitVector distance: size mismatch" );
    }
    std::size_t d = 0;
    for ( std::size_t q = 0; q < words_.size(); ++q )
    {
      d += static_cast<std::size_t>( std::popcount( words_[q] ^ o.words_[q] ) );
    }
    return d;
  }

  void clear_tail() noexcept
  {
    if ( size_ % 64 != 0 )
    {
      words_.back() &= low_mask( static_cast<int>( size_ % 64 ) );
    }
  }

  friend bool operator==( const BitVector&, const BitVector& ) = default;

private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

// ---------------------------------------------------------------------------
// Trees and matrices

/// Complete arity-ary tree on 1..n in level order.
struct TreeLabeling
{
  std::size_t n = 1;
  std::size_t arity = 2;

  TreeLabeling( std::size_t vertices, std::size_t branching ) : n( vertices ), arity( branching )
  {
    if ( vertices < 1 )
    {
      throw std::invalid_argument( "tree needs at least one vertex" );
    }
    if ( branching < 2 )
    {
      throw std::invalid_argument( "tree arity must be at least 2" );
    }
  }

  /// 0 for the root.
  std::size_t parent( std::size_t j ) const noexcept { return j == 1 ? 0 : ( j - 2 ) / arity + 1; }
  std::size_t first_child( std::size_t i ) const noexcept { return arity * ( i - 1 ) + 2; }
  std::size_t last_child( std::size_t i ) const noexcept { return std::min( n, arity * ( i - 1 ) + arity + 1 ); }

  std::size_t depth( std::size_t j ) const noexcept
  {
    std::size_t d = 0;
    while ( j != 1 )
    {
      j = parent( j );
      ++d;
    }
    return d;
  }

  /// Depth of the deepest vertex, which is vertex n.
  std::size_t height() const noexcept { return depth( n ); }
};

/// Smallest h with arity^h >= n.
inline std::size_t min_height_covering( std::size_t n, std::size_t arity ) noexcept
{
  std::size_t h = 0;
  for ( std::size_t p = 1; p < n; p *= arity )
  {
    ++h;
  }
  return h;
}

/// Row-sparse 0/1 matrix, compressed rows, 1-based column indices.
class SparseGF2Matrix
{
public:
  SparseGF2Matrix() = default;

  explicit SparseGF2Matrix( const std::vector<std::vector<std::uint32_t>>& rows )
      : n_( rows.size() ), offsets_{ 0 }
  {
    for ( const auto& r : rows )
    {
      for ( std::size_t t = 0; t < r.size(); ++t )
      {
        if ( r[t] < 1 || r[t] > n_ || ( t > 0 && r[t] <= r[t - 1] ) )
        {
          throw std::invalid_argument( "SparseGF2Matrix: row indices must be strictly increasing within 1..n" );
        }
      }
      cols_.insert( cols_.end(), r.begin(), r.end() );
      offsets_.push_back( cols_.size() );
    }
  }

  static SparseGF2Matrix identity( std::size_t n )
  {
    SparseGF2Matrix m;
    m.n_ = n;
    m.offsets_.resize( n + 1 );
    m.cols_.resize( n );
    for ( std::size_t i = 0; i < n; ++i )
    {
      m.offsets_[i] = i;
      m.cols_[i] = static_cast<std::uint32_t>( i + 1 );
    }
    m.offsets_[n] = n;
    return m;
  }

  std::size_t size() const noexcept { return n_; }
  std::size_t nonzeros() const noexcept { return cols_.size(); }

  /// Columns of row i (1-based).
  std::span<const std::uint32_t> row( std::size_t i ) const noexcept
  {
    return { cols_.data() + offsets_[i - 1], offsets_[i] - offsets_[i - 1] };
  }

  bool operator()( std::size_t i, std::size_t j ) const noexcept
  {
    const auto r = row( i );
    return std::binary_search( r.begin(), r.end(), static_cast<std::uint32_t>( j ) );
  }

  /// One line per row, column indices separated by single spaces.
  void write_rows( std::ostream& os ) const
  {
    for ( std::size_t i = 1; i <= n_; ++i )
    {
      bool first = true;
      for ( auto c : row( i ) )
      {
        os << ( first ? "" : " " ) << c;
        first = false;
      }
      os << '\n';
    }
  }

  friend bool operator==( const SparseGF2Matrix&, const SparseGF2Matrix& ) = default;

private:
  friend SparseGF2Matrix build_tree_matrix( std::size_t, std::size_t );

  std::size_t n_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> cols_;
};

inline SparseGF2Matrix build_tree_matrix( std::size_t n, std::size_t arity )
{
  const TreeLabeling tree( n, arity );
  SparseGF2Matrix m;
  m.n_ = n;
  m.offsets_.reserve( n + 1 );
  m.cols_.reserve( 2 * n );
  m.offsets_.push_back( 0 );
  for ( std::size_t i = 1; i <= n; ++i )
  {
    m.cols_.push_back( static_cast<std::uint32_t>( i ) );
    for ( std::size_t c = tree.first_child( i ); c <= tree.last_child( i ); ++c )
    {
      m.cols_.push_back( static_cast<std::uint32_t>( c ) );
    }
    m.offsets_.push_back( m.cols_.size() );
  }
  return m;
}

inline BitVector apply( const SparseGF2Matrix& a, const BitVector& x )
{
  if ( a.size() != x.size() )
  {
    throw std::invalid_argument( "apply: dimension mismatch" );
  }
  BitVector y( x.size() );
  for ( std::size_t i = 1; i <= a.size(); ++i )
  {
    bool p = false;
    for ( auto c : a.row( i ) )
    {
      p ^= x.get( c - 1 );
    }
    if ( p )
    {
      y.flip( i - 1 );
    }
  }
  return y;
}

inline Point apply( const SparseGF2Matrix& a, const Point& x )
{
  if ( a.size() != static_cast<std::size_t>( x.n ) )
  {
    throw std::invalid_argument( "apply: dimension mismatch" );
  }
  std::uint64_t y = 0;
  for ( std::size_t i = 1; i <= a.size(); ++i )
  {
    std::uint64_t p = 0;
    for ( auto c : a.row( i ) )
    {
      p ^= x.bits >> ( c - 1 );
    }
    y |= ( p & 1u ) << ( i - 1 );
  }
  return Point( y, x.n );
}

namespace detail
{

/// Packs the even-position bits of w into the low 32 bits.
inline std::uint64_t compress_even_bits( std::uint64_t w ) noexcept
{
  w &= 0x5555555555555555ull;
  w = ( w | ( w >> 1 ) ) & 0x3333333333333333ull;
  w = ( w | ( w >> 2 ) ) & 0x0f0f0f0f0f0f0f0full;
  w = ( w | ( w >> 4 ) ) & 0x00ff00ff00ff00ffull;
  w = ( w | ( w >> 8 ) ) & 0x0000ffff0000ffffull;
  w = ( w | ( w >> 16 ) ) & 0x00000000ffffffffull;
  return w;
}

/// Word q of the vector z with z_t = v_{t+1} ^ v_{t+2}.
inline std::uint64_t sibling_sum_word( const BitVector& v, std::size_t q ) noexcept
{
  const std::uint64_t lo = v.word( q );
  const std::uint64_t hi = v.word( q + 1 );
  return ( ( lo >> 1 ) | ( hi << 63 ) ) ^ ( ( lo >> 2 ) | ( hi << 62 ) );
}

/// Word w of M v for the binary tree, bit b being v_{2b+1} ^ v_{2b+2} (0-based).
inline std::uint64_t binary_children_word( const BitVector& v, std::size_t w ) noexcept
{
  return compress_even_bits( sibling_sum_word( v, 2 * w ) ) | ( compress_even_bits( sibling_sum_word( v, 2 * w + 1 ) ) << 32 );
}

} // namespace detail

/// The tree map on a long vector; binary trees take a word-parallel path.
inline BitVector tree_apply( std::size_t arity, const BitVector& x )
{
  const TreeLabeling tree( x.size(), arity );
  BitVector y( x.size() );
  if ( arity == 2 )
  {
    for ( std::size_t w = 0; w < y.words().size(); ++w )
    {
      y.words()[w] = x.word( w ) ^ detail::binary_children_word( x, w );
    }
    y.clear_tail();
    return y;
  }
  for ( std::size_t i = 1; i <= tree.n; ++i )
  {
    bool p = x.get( i - 1 );
    for ( std::size_t c = tree.first_child( i ); c <= tree.last_child( i ); ++c )
    {
      p ^= x.get( c - 1 );
    }
    y.set( i - 1, p );
  }
  return y;
}

/// Subtree parities: bit i of the result is the XOR of y over the subtree rooted at i.
inline BitVector tree_inverse_apply( std::size_t arity, const BitVector& y )
{
  const TreeLabeling tree( y.size(), arity );
  BitVector s( y.size() );
  auto bitwise = [&]( std::size_t hi, std::size_t lo ) {
    for ( std::size_t i = hi; i >= lo; --i )
    {
      bool p = y.get( i - 1 );
      for ( std::size_t c = tree.first_child( i ); c <= tree.last_child( i ); ++c )
      {
        p ^= s.get( c - 1 );
      }
      s.set( i - 1, p );
    }
  };
  if ( arity == 2 && s.words().size() > 1 )
  {
    // Children of word w >= 1 live in words >= 2w, already final when sweeping down.
    for ( std::size_t w = s.words().size() - 1; w >= 1; --w )
    {
      s.words()[w] = y.word( w ) ^ detail::binary_children_word( s, w );
      if ( w == s.words().size() - 1 )
      {
        s.clear_tail();
      }
    }
    bitwise( 64, 1 );
    return s;
  }
  bitwise( tree.n, 1 );
  return s;
}

inline Point tree_apply( std::size_t arity, const Point& x ) { return tree_apply( arity, BitVector::from_point( x ) ).to_point(); }

inline Point tree_inverse_apply( std::size_t n, std::size_t arity, const Point& y )
{
  if ( static_cast<std::size_t>( y.n ) != n )
  {
    throw std::invalid_argument( "tree_inverse_apply: dimension mismatch" );
  }
  return tree_inverse_apply( arity, BitVector::from_point( y ) ).to_point();
}

// ---------------------------------------------------------------------------
// Conditions that make a linear map a local Lipschitz bijection from Dictator to XOR

struct ConditionBounds
{
  std::size_t max_row_weight = 3;
  std::size_t max_column_weight = 2;
  std::size_t max_inverse_column_weight = 1;

  /// Bounds for the arity-ary tree on n vertices. For binary trees the deepest
  /// vertex has floor(log2 n) proper ancestors; otherwise the bound is h+1 for
  /// the smallest h with arity^h >= n.
  static ConditionBounds for_tree( std::size_t n, std::size_t arity )
  {
    const std::size_t inv = arity == 2 ? static_cast<std::size_t>( std::bit_width( n ) ) : min_height_covering( n, arity ) + 1;
    return { arity + 1, 2, inv };
  }
};

struct ConditionReport
{
  bool invertible = false;
  bool column_parity = false; ///< first column odd, the rest even
  bool row_weight = false;
  bool column_weight = false;
  bool inverse_column_weight = false;

  std::size_t max_row_weight = 0;
  std::size_t max_column_weight = 0;
  std::optional<std::size_t> max_inverse_column_weight;

  bool eliminated = false;        ///< dense elimination ran
  bool structural = false;        ///< forest-structure argument applied
  bool methods_agree = true;      ///< only meaningful when both ran

  bool all() const noexcept { return invertible && column_parity && row_weight && column_weight && inverse_column_weight; }
};

/// Dense elimination is used up to this size.
inline constexpr std::size_t kDenseEliminationLimit = 256;

namespace detail
{

struct DenseInverse
{
  std::size_t rank = 0;
  std::vector<std::size_t> column_weights; ///< empty unless invertible
};

/// Gauss-Jordan on [A | I] over GF(2).
inline DenseInverse dense_inverse( const SparseGF2Matrix& a )
{
  const std::size_t n = a.size();
  const std::size_t words = ( 2 * n + 63 ) / 64;
  std::vector<std::vector<std::uint64_t>> m( n, std::vector<std::uint64_t>( words, 0u ) );
  auto set = []( std::vector<std::uint64_t>& r, std::size_t c ) { r[c >> 6] |= std::uint64_t{ 1 } << ( c & 63u ); };
  auto get = []( const std::vector<std::uint64_t>& r, std::size_t c ) { return ( r[c >> 6] >> ( c & 63u ) ) & 1u; };
  for ( std::size_t i = 0; i < n; ++i )
  {
    for ( auto c : a.row( i + 1 ) )
    {
      set( m[i], c - 1 );
    }
    set( m[i], n + i );
  }
  DenseInverse out;
  std::size_t r = 0;
  for ( std::size_t c = 0; c < n && r < n; ++c )
  {
    std::size_t p = r;
    while ( p < n && !get( m[p], c ) )
    {
      ++p;
    }
    if ( p == n )
    {
      continue;
    }
    std::swap( m[p], m[r] );
    for ( std::size_t i = 0; i < n; ++i )
    {
      if ( i != r && get( m[i], c ) )
      {
        for ( std::size_t w = 0; w < words; ++w )
        {
          m[i][w] ^= m[r][w];
        }
      }
    }
    ++r;
  }
  out.rank = r;
  if ( r == n )
  {
    out.column_weights.assign( n, 0 );
    for ( std::size_t i = 0; i < n; ++i )
    {
      for ( std::size_t j = 0; j < n; ++j )
      {
        out.column_weights[j] += get( m[i], n + j );
      }
    }
  }
  return out;
}

} // namespace detail

inline ConditionReport verify_conditions( const SparseGF2Matrix& a, const ConditionBounds& bounds )
{
  const std::size_t n = a.size();
  ConditionReport rep;

  std::vector<std::size_t> col_weight( n + 1, 0 );
  std::vector<std::size_t> upper_entries( n + 1, 0 ); // off-diagonal entries above the diagonal, per column
  std::vector<std::size_t> parent( n + 1, 0 );
  bool forest = true;
  for ( std::size_t i = 1; i <= n; ++i )
  {
    const auto r = a.row( i );
    rep.max_row_weight = std::max( rep.max_row_weight, r.size() );
    bool diag = false;
    for ( auto c : r )
    {
      ++col_weight[c];
      if ( c == i )
      {
        diag = true;
      }
      else if ( c < i )
      {
        forest = false;
      }
      else
      {
        ++upper_entries[c];
        parent[c] = i;
      }
    }
    forest = forest && diag;
  }
  rep.column_parity = n >= 1 && ( col_weight[1] % 2 == 1 );
  for ( std::size_t j = 1; j <= n; ++j )
  {
    rep.max_column_weight = std::max( rep.max_column_weight, col_weight[j] );
    forest = forest && upper_entries[j] <= 1;
    if ( j > 1 && col_weight[j] % 2 != 0 )
    {
      rep.column_parity = false;
    }
  }
  rep.row_weight = rep.max_row_weight <= bounds.max_row_weight;
  rep.column_weight = rep.max_column_weight <= bounds.max_column_weight;

  // Forest structure: unit diagonal, nothing below it, at most one entry above
  // it per column. Then A is unit upper triangular and the inverse's column j
  // is the ancestor set of j, of size depth + 1.
  std::optional<std::size_t> structural_inverse;
  if ( forest )
  {
    rep.structural = true;
    std::vector<std::size_t> depth( n + 1, 0 );
    std::size_t deepest = 0;
    for ( std::size_t j = 1; j <= n; ++j )
    {
      depth[j] = parent[j] == 0 ? 0 : depth[parent[j]] + 1;
      deepest = std::max( deepest, depth[j] );
    }
    structural_inverse = deepest + 1;
  }

  std::optional<std::size_t> dense_inverse;
  bool dense_invertible = false;
  if ( n <= kDenseEliminationLimit )
  {
    rep.eliminated = true;
    const auto inv = detail::dense_inverse( a );
    dense_invertible = inv.rank == n;
    if ( dense_invertible )
    {
      dense_inverse = n == 0 ? 0 : *std::max_element( inv.column_weights.begin(), inv.column_weights.end() );
    }
  }

  if ( rep.eliminated && rep.structural )
  {
    rep.methods_agree = dense_invertible && dense_inverse == structural_inverse;
  }
  rep.invertible = rep.eliminated ? dense_invertible : rep.structural;
  rep.max_inverse_column_weight = rep.eliminated ? dense_inverse : structural_inverse;
  rep.inverse_column_weight = rep.max_inverse_column_weight && *rep.max_inverse_column_weight <= bounds.max_inverse_column_weight;
  return rep;
}

} // namespace cubemorph
