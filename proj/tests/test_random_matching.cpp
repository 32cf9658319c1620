#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include <cubemorph/random_matching.hpp>

using namespace cubemorph;

namespace
{

TruthTable set_of( int n, std::initializer_list<const char*> pts )
{
  TruthTable t( n );
  for ( auto p : pts )
  {
    t.set( parse_point( p, n ).bits, true );
  }
  return t;
}

TruthTable full( int n )
{
  TruthTable t( n );
  for ( std::uint64_t x = 0; x < t.size(); ++x )
  {
    t.set( x, true );
  }
  return t;
}

} // namespace

TEST( random_matching, classify_cases )
{
  const auto a = set_of( 3, { "000", "001", "100", "111" } );
  EXPECT_EQ( classify( a, parse_point( "00" ) ), VertexKind::rich );
  EXPECT_EQ( classify( a, parse_point( "01" ) ), VertexKind::poor );
  EXPECT_EQ( classify( a, parse_point( "10" ) ), VertexKind::mixed );
  EXPECT_EQ( classify( a, parse_point( "11" ) ), VertexKind::mixed );
  EXPECT_THROW( classify( a, parse_point( "011" ) ), std::invalid_argument );
}

TEST( random_matching, hand_trace_n3 )
{
  const auto a = set_of( 3, { "000", "001", "100", "111" } );
  const auto s = run_matching( a );
  ASSERT_EQ( s.rounds.size(), 2u );
  EXPECT_EQ( s.rounds[1].poor_unmatched, 1u );
  EXPECT_EQ( s.rounds[1].rich_unmatched, 1u );
  EXPECT_FALSE( s.matched( parse_point( "01" ).bits ) );
  EXPECT_FALSE( s.matched( parse_point( "00" ).bits ) );
  EXPECT_EQ( unmatched_poor_fraction( s ), Rational( 1, 4 ) );

  const auto phi = build_phi_a( a, s );
  EXPECT_EQ( format_bits( phi[parse_point( "00" ).bits], 3 ), "001" ); // rich, unmatched
  EXPECT_EQ( format_bits( phi[parse_point( "01" ).bits], 3 ), "010" ); // poor, unmatched: leaves A
  EXPECT_EQ( format_bits( phi[parse_point( "10" ).bits], 3 ), "100" ); // mixed
  EXPECT_EQ( format_bits( phi[parse_point( "11" ).bits], 3 ), "111" ); // mixed
}

TEST( random_matching, matched_pair_images )
{
  // 2-cube vertex 00 poor, 10 rich: matched in round 1
  const auto a = set_of( 3, { "100", "101" } );
  const auto s = run_matching( a );
  EXPECT_TRUE( s.matched( 0 ) );
  EXPECT_EQ( s.partner( 0 ), 1u );
  const auto phi = build_phi_a( a, s );
  EXPECT_EQ( format_bits( phi[0], 3 ), "101" ); // poor goes to its partner's x o 1
  EXPECT_EQ( format_bits( phi[1], 3 ), "100" ); // consumed rich falls back to x o 0
}

TEST( random_matching, extreme_sets )
{
  const auto f = run_matching( full( 6 ) );
  EXPECT_EQ( f.rounds.front().poor_unmatched, 0u );
  EXPECT_EQ( unmatched_poor_fraction( f ), 0 );
  const auto e = run_matching( TruthTable( 6 ) );
  EXPECT_EQ( e.rounds.front().rich_unmatched, 0u );
  EXPECT_EQ( unmatched_poor_fraction( e ), 1 );
  EXPECT_THROW( run_matching( TruthTable( 1 ) ), std::invalid_argument );
}

TEST( random_matching, matching_and_phi_invariants )
{
  for ( int n = 2; n <= 14; ++n )
  {
    for ( std::uint64_t t = 0; t < 10; ++t )
    {
      const auto a = matching_trial_set( n, 123, t );
      const auto s = run_matching( a );
      for ( std::size_t r = 1; r < s.rounds.size(); ++r )
      {
        ASSERT_LE( s.rounds[r].poor_unmatched, s.rounds[r - 1].poor_unmatched );
      }
      for ( std::uint64_t x = 0; x < s.vertices(); ++x )
      {
        if ( s.matched( x ) )
        {
          const auto y = s.partner( x );
          ASSERT_LE( s.matched_dir[x], matching_rounds( n ) );
          ASSERT_EQ( s.partner( y ), x );
          ASSERT_NE( s.kind[x], VertexKind::mixed );
          ASSERT_NE( s.kind[x], s.kind[y] );
        }
      }
      const auto phi = build_phi_a( a, s );
      std::set<std::uint32_t> images( phi.begin(), phi.end() );
      ASSERT_EQ( images.size(), phi.size() );
      std::uint64_t outside = 0;
      for ( std::uint64_t x = 0; x < phi.size(); ++x )
      {
        ASSERT_LE( std::popcount( ( phi[x] & low_mask( n - 1 ) ) ^ x ), 1 );
        outside += !a.get( phi[x] );
      }
      ASSERT_EQ( outside, s.rounds.back().poor_unmatched );
    }
  }
}

TEST( random_matching, recursion_statistics )
{
  const int n = 16;
  const unsigned trials = 20;
  const auto curve = recursion_curve( n, trials, 1 );
  ASSERT_EQ( curve.size(), static_cast<std::size_t>( matching_rounds( n ) ) + 1 );
  EXPECT_NEAR( curve[0].p_hat, 0.25, 0.01 );
  EXPECT_NEAR( curve[1].p_hat, 0.1875, 0.01 );
  for ( std::size_t i = 0; i + 1 < curve.size(); ++i )
  {
    EXPECT_NEAR( curve[i + 1].p_hat, curve[i].p_hat * ( 1 - curve[i].p_hat ), 0.01 ) << i;
    EXPECT_NEAR( curve[i].p_hat, curve[i].q_hat, 0.01 ) << i;
  }
  EXPECT_LT( curve.back().p_hat, 2.0 / n );
  // deterministic for a fixed seed
  const auto again = recursion_curve( n, trials, 1 );
  EXPECT_EQ( again.back().p_hat, curve.back().p_hat );
  EXPECT_THROW( recursion_curve( 27, 1, 1 ), std::out_of_range );
}

TEST( random_matching, dictator_to_random_law )
{
  for ( int n = 2; n <= 12; ++n )
  {
    for ( std::uint64_t seed = 0; seed < 5; ++seed )
    {
      const auto f = random_balanced( n, seed );
      const auto r = build_dict_to_random( f );
      const auto t = r.phi.tabulate();
      ASSERT_TRUE( is_mapping_between( n, t, BooleanFunction::dictator( n ), f ) ) << n << " " << seed;
      for ( std::uint64_t x = 0; x < t.size(); ++x )
      {
        ASSERT_EQ( r.phi.inverse( t[x] ), x );
      }
    }
  }
}

TEST( random_matching, dictator_target_stays_local )
{
  for ( int n = 2; n <= 12; ++n )
  {
    const auto r = build_dict_to_random( BooleanFunction::dictator( n ) );
    EXPECT_EQ( r.unmatched_poor, 0u );
    EXPECT_EQ( fraction_within( r.phi, 2 ), 1.0 );
  }
}

TEST( random_matching, random_instances_are_mostly_local )
{
  const int n = 16;
  for ( std::uint64_t seed = 0; seed < 3; ++seed )
  {
    const auto f = random_balanced( n, seed );
    const auto r = build_dict_to_random( f );
    EXPECT_GE( fraction_within( r.phi, 2 ), 1.0 - 5.0 / n );
    EXPECT_LE( stretch_report( r.phi ).avg_value(), 10.0 );
    EXPECT_LE( stretch_report( r.phi.inverted() ).avg_value(), 10.0 );
  }
}

TEST( random_matching, random_to_random )
{
  const int n = 12;
  const auto f = random_balanced( n, 1 );
  const auto g = random_balanced( n, 2 );
  const auto phi = build_random_to_random( f, g );
  EXPECT_TRUE( is_mapping_between( phi, f, g ) );
  EXPECT_EQ( phi.name, "random2random" );
  const auto self = build_random_to_random( f, f );
  EXPECT_EQ( stretch_report( self ).avg, 1 );
  EXPECT_THROW( build_random_to_random( f, random_balanced( n + 1, 2 ) ), std::invalid_argument );
}

TEST( random_matching, unbalanced_rejected )
{
  EXPECT_THROW( build_dict_to_random( BooleanFunction::majority( 4 ) ), std::invalid_argument );
  EXPECT_THROW( build_dict_to_random( BooleanFunction::dictator( 1 ) ), std::invalid_argument );
}
