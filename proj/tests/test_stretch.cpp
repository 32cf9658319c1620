#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include <cubemorph/boolean_function.hpp>
#include <cubemorph/mapping.hpp>
#include <cubemorph/report_io.hpp>
#include <cubemorph/stretch.hpp>

using namespace cubemorph;

namespace
{

Rational q( long num, long den )
{
  Rational r( num, den );
  r.canonicalize();
  return r;
}

const auto xor3 = BooleanFunction::parity( 3 );
const auto maj3 = BooleanFunction::majority( 3 );
const auto dict3 = BooleanFunction::dictator( 3 );

} // namespace

TEST( stretch, identity_report )
{
  for ( int n = 1; n <= 10; ++n )
  {
    const auto r = stretch_report( mappings::identity( n ) );
    EXPECT_EQ( r.avg, 1 );
    EXPECT_EQ( r.max, 1 );
    EXPECT_EQ( r.edges_total, static_cast<std::uint64_t>( n ) << ( n - 1 ) );
    EXPECT_EQ( directional_avg_stretch( mappings::identity( n ), n ), 1 );
  }
}

TEST( stretch, prefix_map_n3 )
{
  const auto r = stretch_report( mappings::prefix( 3 ) );
  EXPECT_EQ( r.avg, q( 5, 3 ) );
  EXPECT_EQ( r.max, 2 );
  EXPECT_EQ( r.per_direction, ( std::vector<Rational>{ q( 1, 1 ), q( 2, 1 ), q( 2, 1 ) } ) );
  EXPECT_EQ( r.histogram, ( std::vector<std::uint64_t>{ 0, 4, 8 } ) );
  EXPECT_EQ( directional_avg_stretch( mappings::prefix( 3 ), 1 ), 1 );
  EXPECT_EQ( directional_avg_stretch( mappings::prefix( 3 ), 3 ), 2 );
  EXPECT_THROW( directional_avg_stretch( mappings::prefix( 3 ), 4 ), std::out_of_range );
}

TEST( stretch, report_invariants )
{
  for ( int n : { 5, 7, 9 } )
  {
    const auto r = stretch_report( mappings::maj2dict( n ) );
    std::uint64_t weighted = 0, edges = 0;
    for ( std::size_t d = 0; d < r.histogram.size(); ++d )
    {
      weighted += d * r.histogram[d];
      edges += r.histogram[d];
    }
    EXPECT_EQ( edges, r.edges_total );
    EXPECT_EQ( r.avg, make_rational( weighted, edges ) );
    EXPECT_GT( r.histogram.back(), 0u );
    Rational mean = 0;
    for ( const auto& p : r.per_direction )
    {
      mean += p;
    }
    EXPECT_EQ( mean / n, r.avg );
    EXPECT_GE( r.avg, 1 );
    // shard and worker count do not change the result
    const auto r4 = stretch_report( mappings::maj2dict( n ), 4 );
    EXPECT_EQ( r4.histogram, r.histogram );
    EXPECT_EQ( r4.per_direction, r.per_direction );
  }
}

TEST( stretch, mapping_between_examples )
{
  EXPECT_TRUE( is_mapping_between( mappings::identity( 3 ), xor3, xor3 ) );
  EXPECT_TRUE( is_mapping_between( mappings::maj2dict( 3 ), maj3, dict3 ) );
  EXPECT_FALSE( is_mapping_between( mappings::identity( 3 ), xor3, maj3 ) );
  EXPECT_FALSE( is_mapping_between( 2, PointTable{ 0, 0, 1, 2 }, BooleanFunction::parity( 2 ), BooleanFunction::parity( 2 ) ) );
  EXPECT_THROW( is_mapping_between( mappings::identity( 3 ), BooleanFunction::parity( 4 ), xor3 ), std::invalid_argument );
}

TEST( stretch, enumeration_counts )
{
  std::uint64_t count = 0;
  enumerate_mappings( xor3, maj3, 3, [&]( const PointTable& ) { ++count; } );
  EXPECT_EQ( count, 576u );
  EXPECT_THROW( enumerate_mappings( BooleanFunction::parity( 4 ), BooleanFunction::parity( 4 ), 4, []( const PointTable& ) {} ),
                std::out_of_range );
}

TEST( stretch, exhaustive_xor_to_majority )
{
  const auto res = exhaustive_min_stretch( xor3, maj3, 3 );
  EXPECT_EQ( res.value, q( 3, 2 ) );
  EXPECT_GT( res.value, 1 );
  EXPECT_TRUE( is_mapping_between( 3, res.witness, xor3, maj3 ) );
  EXPECT_EQ( stretch_report( 3, res.witness ).avg, res.value );

  // brute force over all 576 maps: global minimum and per-direction minima
  Rational best = 100;
  std::vector<Rational> dir_min( 3, Rational( 100 ) );
  enumerate_mappings( xor3, maj3, 3, [&]( const PointTable& t ) {
    const auto r = stretch_report( 3, t );
    best = std::min( best, r.avg );
    for ( int i = 0; i < 3; ++i )
    {
      dir_min[static_cast<std::size_t>( i )] = std::min( dir_min[static_cast<std::size_t>( i )], r.per_direction[static_cast<std::size_t>( i )] );
    }
  } );
  EXPECT_EQ( best, res.value );
  EXPECT_EQ( dir_min, ( std::vector<Rational>{ q( 3, 2 ), q( 3, 2 ), q( 3, 2 ) } ) );

  EXPECT_EQ( exhaustive_min_stretch( xor3, maj3, 3, StretchMetric::maximum ).value, 2 );
}

TEST( stretch, exhaustive_dictator_to_majority )
{
  const auto worst = exhaustive_min_stretch( dict3, maj3, 3, StretchMetric::maximum );
  EXPECT_EQ( worst.value, 2 );
  EXPECT_EQ( stretch_report( 3, worst.witness ).max, 2 );
  EXPECT_EQ( exhaustive_min_stretch( dict3, maj3, 3 ).value, q( 3, 2 ) );
}

TEST( stretch, exhaustive_trivial_cases )
{
  const auto x2 = BooleanFunction::parity( 2 );
  const auto res = exhaustive_min_stretch( x2, x2, 2 );
  EXPECT_EQ( res.value, 1 );
  EXPECT_EQ( res.witness, ( PointTable{ 0, 1, 2, 3 } ) );
  EXPECT_THROW( exhaustive_min_stretch( BooleanFunction::dictator( 2 ), BooleanFunction::majority( 2 ), 2 ), std::invalid_argument );
}

TEST( stretch, local_search )
{
  EXPECT_EQ( local_search_min_stretch( xor3, maj3, 3, 1 ).value, q( 3, 2 ) );
  for ( int n : { 3, 6, 11 } )
  {
    const auto f = random_balanced( n, 77 );
    EXPECT_EQ( local_search_min_stretch( f, f, n, 5, 2 ).value, 1 );
  }
  const auto x11 = BooleanFunction::parity( 11 );
  const auto m11 = BooleanFunction::majority( 11 );
  const auto a = local_search_min_stretch( x11, m11, 11, 42, 2 );
  const auto b = local_search_min_stretch( x11, m11, 11, 42, 2 );
  EXPECT_EQ( a.value, b.value );
  EXPECT_EQ( a.witness, b.witness );
  EXPECT_TRUE( is_mapping_between( 11, a.witness, x11, m11 ) );
  EXPECT_EQ( stretch_report( 11, a.witness ).avg, a.value );
}

TEST( stretch, typical_fraction_values )
{
  for ( unsigned long n = 1; n <= 2500; n += 2 )
  {
    ASSERT_EQ( typical_fraction( n, 0.01 ), 1 ) << n;
  }
  EXPECT_EQ( typical_fraction( 16, 0.01 ), 1 - q( 12870, 65536 ) );
  EXPECT_GE( typical_fraction( 10000, 0.01 ), Rational( 9, 10 ) );
  for ( unsigned long n : { 64ul, 256ul, 1024ul, 4096ul } )
  {
    EXPECT_GE( typical_fraction( n, 0.01 ), Rational( 9, 10 ) ) << n;
  }
  EXPECT_THROW( typical_fraction( 0, 0.01 ), std::out_of_range );
}

TEST( stretch, middle_binomial )
{
  EXPECT_TRUE( middle_binomial_check( 1 ) );
  EXPECT_TRUE( middle_binomial_check( 4 ) );
  EXPECT_TRUE( middle_binomial_check( 16 ) );
  for ( unsigned long n = 1; n <= 10000; ++n )
  {
    ASSERT_TRUE( middle_binomial_check( n ) ) << n;
  }
}

TEST( stretch, sampled_agrees_with_exhaustive )
{
  for ( const auto& m : { mappings::maj2dict( 13 ), mappings::prefix( 12 ), mappings::tree( 14, 2 ).inverted() } )
  {
    const auto exact = stretch_report( m );
    const auto est = stretch_report_sampled( m, 200000, 9 );
    EXPECT_FALSE( est.exhaustive );
    EXPECT_EQ( est.edges_total, 200000u );
    EXPECT_LE( std::abs( est.avg_value() - exact.avg_value() ), 3 * est.std_error ) << m.name;
    EXPECT_LE( est.max, exact.max );
    const auto again = stretch_report_sampled( m, 200000, 9 );
    EXPECT_EQ( again.histogram, est.histogram );
  }
}

TEST( stretch, json_schema )
{
  const auto j = to_json( stretch_report( mappings::prefix( 3 ) ) );
  std::vector<std::string> keys;
  for ( auto it = j.begin(); it != j.end(); ++it )
  {
    keys.push_back( it.key() );
  }
  EXPECT_EQ( keys, ( std::vector<std::string>{ "n", "mapping", "mode", "avg", "max", "per_direction", "histogram", "edges_total" } ) );
  EXPECT_EQ( j.dump(), R"({"n":3,"mapping":"prefix","mode":"exhaustive","avg":{"num":5,"den":3},"max":2,)"
                       R"("per_direction":[{"num":1,"den":1},{"num":2,"den":1},{"num":2,"den":1}],)"
                       R"("histogram":{"0":0,"1":4,"2":8},"edges_total":12})" );

  std::ostringstream csv;
  write_histogram_csv( csv, stretch_report( mappings::prefix( 3 ) ) );
  EXPECT_EQ( csv.str(), "distance,count\n0,0\n1,4\n2,8\n" );

  const auto s = to_json( stretch_report_sampled( mappings::prefix( 8 ), 1000, 3 ) );
  EXPECT_EQ( s["mode"], "sampled" );
  EXPECT_EQ( s["samples"], 1000 );
  EXPECT_TRUE( s.contains( "std_error" ) );
}
