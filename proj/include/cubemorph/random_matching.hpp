#pragma once

// Round-based matching of poor vertices to rich neighbours, the injective
// map phi_A from the (n-1)-cube towards a target set A, and the bijections
// from Dictator to a random balanced function built from it.
//
// A vertex x of the (n-1)-cube looks at its two extensions x o 0 and x o 1
// (the extension bit is coordinate n): rich if both are in A, poor if neither,
// mixed otherwise. In round i = 1..R every poor unmatched x whose neighbour
// x + e_i is rich and unmatched is matched to it. Direction-i edges form a
// perfect matching of the vertices, so a round has no conflicts and an
// in-place sweep is the same as a synchronous update.

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "boolean_function.hpp"
#include "mapping.hpp"
#include "point.hpp"
#include "rng.hpp"
#include "stretch.hpp"

namespace cubemorph
{

enum class VertexKind : std::uint8_t
{
  mixed,
  rich,
  poor
};

inline VertexKind classify( const TruthTable& a, std::uint64_t x ) noexcept
{
  const int n = a.num_vars();
  const bool lo = a.get( x );
  const bool hi = a.get( x | ( std::uint64_t{ 1 } << ( n - 1 ) ) );
  return lo && hi ? VertexKind::rich : ( !lo && !hi ? VertexKind::poor : VertexKind::mixed );
}

inline VertexKind classify( const TruthTable& a, const Point& x )
{
  if ( x.n != a.num_vars() - 1 )
  {
    throw std::invalid_argument( "classify: vertex must have dimension n-1" );
  }
  return classify( a, x.bits );
}

/// Number of matching rounds for the ambient dimension n.
inline int matching_rounds( int n ) noexcept { return ( n - 1 ) / 2; }

struct RoundStats
{
  std::uint64_t poor_unmatched = 0;
  std::uint64_t rich_unmatched = 0;
};

struct MatchState
{
  int n = 0; ///< ambient dimension; vertices live in the (n-1)-cube
  std::vector<VertexKind> kind;
  std::vector<std::uint8_t> matched_dir; ///< 0 if unmatched, else the round's direction
  std::vector<RoundStats> rounds;        ///< rounds[0] before any matching, rounds[i] after round i

  std::uint64_t vertices() const noexcept { return kind.size(); }
  bool matched( std::uint64_t x ) const noexcept { return matched_dir[x] != 0; }
  std::uint64_t partner( std::uint64_t x ) const noexcept { return x ^ ( std::uint64_t{ 1 } << ( matched_dir[x] - 1 ) ); }
};

inline MatchState run_matching( const TruthTable& a )
{
  const int n = a.num_vars();
  if ( n < 2 )
  {
    throw std::invalid_argument( "run_matching: need n >= 2" );
  }
  const std::uint64_t size = std::uint64_t{ 1 } << ( n - 1 );
  MatchState s;
  s.n = n;
  s.kind.resize( size );
  s.matched_dir.assign( size, 0 );
  RoundStats st;
  for ( std::uint64_t x = 0; x < size; ++x )
  {
    s.kind[x] = classify( a, x );
    st.poor_unmatched += s.kind[x] == VertexKind::poor;
    st.rich_unmatched += s.kind[x] == VertexKind::rich;
  }
  s.rounds.push_back( st );

  auto open = [&]( std::uint64_t x, VertexKind k ) { return s.kind[x] == k && s.matched_dir[x] == 0; };
  for ( int i = 1; i <= matching_rounds( n ); ++i )
  {
    const std::uint64_t bit = std::uint64_t{ 1 } << ( i - 1 );
    for ( std::uint64_t x = 0; x < size; ++x )
    {
      if ( x & bit )
      {
        continue;
      }
      const std::uint64_t y = x | bit;
      if ( ( open( x, VertexKind::poor ) && open( y, VertexKind::rich ) ) ||
           ( open( y, VertexKind::poor ) && open( x, VertexKind::rich ) ) )
      {
        s.matched_dir[x] = s.matched_dir[y] = static_cast<std::uint8_t>( i );
        --st.poor_unmatched;
        --st.rich_unmatched;
      }
    }
    s.rounds.push_back( st );
  }
  return s;
}

/// Fraction of vertices still poor and unmatched after the last round.
inline Rational unmatched_poor_fraction( const MatchState& s )
{
  return make_rational( s.rounds.back().poor_unmatched, s.vertices() );
}

/// phi_A as a table from the (n-1)-cube into the n-cube:
///   mixed x            -> x o b with x o b in A
///   rich, unmatched    -> x o 1
///   rich, matched      -> x o 0 (x o 1 is taken by its poor partner)
///   poor, matched to y -> y o 1
///   poor, unmatched    -> x o 0, the only case that can leave A
inline PointTable build_phi_a( const TruthTable& a, const MatchState& s )
{
  const int n = a.num_vars();
  const std::uint64_t top = std::uint64_t{ 1 } << ( n - 1 );
  PointTable phi( s.vertices() );
  for ( std::uint64_t x = 0; x < s.vertices(); ++x )
  {
    std::uint64_t img = x;
    switch ( s.kind[x] )
    {
    case VertexKind::mixed:
      img = a.get( x ) ? x : ( x | top );
      break;
    case VertexKind::rich:
      img = s.matched( x ) ? x : ( x | top );
      break;
    case VertexKind::poor:
      img = s.matched( x ) ? ( s.partner( x ) | top ) : x;
      break;
    }
    phi[x] = static_cast<std::uint32_t>( img );
  }
  return phi;
}

inline PointTable build_phi_a( const TruthTable& a ) { return build_phi_a( a, run_matching( a ) ); }

/// Per-trial fractions (p_hat_i, q_hat_i) for i = 0..R on fresh random sets.
struct CurvePoint
{
  double p_hat = 0;
  double q_hat = 0;
};

inline TruthTable matching_trial_set( int n, std::uint64_t seed, std::uint64_t trial )
{
  return random_subset( n, derive_seed( seed, stream_tag( "matching-set" ), trial ) );
}

inline std::vector<std::vector<CurvePoint>> recursion_curve_trials( int n, unsigned trials, std::uint64_t seed )
{
  if ( n < 2 || n > 26 )
  {
    throw std::out_of_range( "recursion_curve: n must be in [2, 26]" );
  }
  if ( trials < 1 )
  {
    throw std::invalid_argument( "recursion_curve: need at least one trial" );
  }
  std::vector<std::vector<CurvePoint>> out;
  for ( unsigned t = 0; t < trials; ++t )
  {
    const auto s = run_matching( matching_trial_set( n, seed, t ) );
    const auto v = static_cast<double>( s.vertices() );
    std::vector<CurvePoint> curve;
    for ( const auto& r : s.rounds )
    {
      curve.push_back( { static_cast<double>( r.poor_unmatched ) / v, static_cast<double>( r.rich_unmatched ) / v } );
    }
    out.push_back( std::move( curve ) );
  }
  return out;
}

/// Trial-averaged curve.
inline std::vector<CurvePoint> recursion_curve( int n, unsigned trials, std::uint64_t seed )
{
  const auto per_trial = recursion_curve_trials( n, trials, seed );
  std::vector<CurvePoint> avg( per_trial.front().size() );
  for ( const auto& c : per_trial )
  {
    for ( std::size_t i = 0; i < c.size(); ++i )
    {
      avg[i].p_hat += c[i].p_hat / trials;
      avg[i].q_hat += c[i].q_hat / trials;
    }
  }
  return avg;
}

// ---------------------------------------------------------------------------
// Dictator to a balanced function

struct DictToRandom
{
  Mapping phi;                      ///< table-backed, with inverse
  std::uint64_t unmatched_poor = 0; ///< sources phi_A sent outside their class, both halves
};

/// Bijection phi with Dictator(x) = f(phi(x)). The half x1 = h is sent into
/// f^-1(h) by phi_A, run with coordinate 1 playing the extension bit;
/// sources that land outside f^-1(h) are then paired with the uncovered
/// targets, both in ascending order.
inline DictToRandom build_dict_to_random( const BooleanFunction& f )
{
  const int n = f.num_vars();
  check_dim( n, kMaxExhaustiveDim );
  if ( n < 2 )
  {
    throw std::invalid_argument( "build_dict_to_random: need n >= 2" );
  }
  const TruthTable ft = f.tabulate();
  if ( ft.count_ones() * 2 != ft.size() )
  {
    throw std::invalid_argument( "build_dict_to_random: f is not balanced" );
  }
  const std::uint64_t size = ft.size();
  const std::uint64_t mask = size - 1;
  // phi_A works on rotated coordinates where coordinate 1 sits last
  auto unrot = [n, mask]( std::uint64_t z ) { return ( ( z << 1 ) & mask ) | ( z >> ( n - 1 ) ); };

  PointTable table( size, 0 );
  DictToRandom out;
  for ( int h = 0; h <= 1; ++h )
  {
    TruthTable target( n );
    for ( std::uint64_t z = 0; z < size; ++z )
    {
      if ( ft.get( unrot( z ) ) == static_cast<bool>( h ) )
      {
        target.set( z, true );
      }
    }
    const auto phi_a = build_phi_a( target );
    std::vector<bool> covered( size, false );
    std::vector<std::uint64_t> leftover;
    for ( std::uint64_t xr = 0; xr < phi_a.size(); ++xr )
    {
      const std::uint64_t src = static_cast<std::uint64_t>( h ) | ( xr << 1 );
      const std::uint64_t img = unrot( phi_a[xr] );
      if ( ft.get( img ) == static_cast<bool>( h ) )
      {
        table[src] = static_cast<std::uint32_t>( img );
        covered[img] = true;
      }
      else
      {
        leftover.push_back( src );
      }
    }
    out.unmatched_poor += leftover.size();
    std::size_t k = 0;
    for ( std::uint64_t y = 0; y < size && k < leftover.size(); ++y )
    {
      if ( !covered[y] && ft.get( y ) == static_cast<bool>( h ) )
      {
        table[leftover[k++]] = static_cast<std::uint32_t>( y );
      }
    }
    if ( k != leftover.size() )
    {
      throw std::logic_error( "build_dict_to_random: phi_A was not injective" );
    }
  }
  auto inverse = invert_table( table );
  out.phi = Mapping::from_table( n, "dict2random", std::move( table ), std::move( inverse ) );
  return out;
}

/// phi_g o phi_f^-1, a map from f to g.
inline Mapping build_random_to_random( const BooleanFunction& f, const BooleanFunction& g )
{
  if ( f.num_vars() != g.num_vars() )
  {
    throw std::invalid_argument( "build_random_to_random: dimension mismatch" );
  }
  const auto pf = build_dict_to_random( f );
  const auto pg = build_dict_to_random( g );
  auto m = compose( pg.phi, pf.phi.inverted() );
  m.name = "random2random";
  return m;
}

/// Fraction of x with dist(x, phi(x)) <= d.
inline double fraction_within( const Mapping& phi, int d )
{
  check_dim( phi.n, kMaxExhaustiveDim );
  std::uint64_t good = 0;
  const std::uint64_t size = std::uint64_t{ 1 } << phi.n;
  for ( std::uint64_t x = 0; x < size; ++x )
  {
    good += std::popcount( x ^ phi.forward( x ) ) <= d;
  }
  return static_cast<double>( good ) / static_cast<double>( size );
}

} // namespace cubemorph
