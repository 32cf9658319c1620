#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace
{

struct Result
{
  int status = -1;
  std::string out;
};

Result run( const std::string& args, const std::string& env = "" )
{
  const std::string cmd = env + ( env.empty() ? "" : " " ) + "\"" CUBEMORPH_CLI_PATH "\" " + args + " 2>/dev/null";
  Result r;
  FILE* p = popen( cmd.c_str(), "r" );
  if ( !p )
  {
    return r;
  }
  std::array<char, 4096> buf;
  std::size_t got;
  while ( ( got = fread( buf.data(), 1, buf.size(), p ) ) > 0 )
  {
    r.out.append( buf.data(), got );
  }
  const int st = pclose( p );
  r.status = WIFEXITED( st ) ? WEXITSTATUS( st ) : -1;
  return r;
}

std::string slurp( const std::filesystem::path& p )
{
  std::ifstream in( p, std::ios::binary );
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string golden( const std::string& name ) { return slurp( std::filesystem::path( CUBEMORPH_GOLDEN_DIR ) / name ); }

std::filesystem::path scratch( const std::string& name )
{
  const auto dir = std::filesystem::temp_directory_path() / "cubemorph_cli_test";
  std::filesystem::create_directories( dir );
  return dir / name;
}

} // namespace

TEST( cli, chains_golden )
{
  auto r = run( "chains --n 8 --point 01100110" );
  EXPECT_EQ( r.status, 0 );
  EXPECT_EQ( r.out, golden( "chains_n8_point.txt" ) );

  r = run( "chains --n 3" );
  EXPECT_EQ( r.status, 0 );
  EXPECT_EQ( r.out, golden( "chains_n3.txt" ) );

  r = run( "chains --n 1" );
  EXPECT_EQ( r.status, 0 );
  EXPECT_EQ( r.out, "_ : 0 1\n" );
}

TEST( cli, chains_errors )
{
  EXPECT_EQ( run( "chains --n 21" ).status, 2 );
  EXPECT_EQ( run( "chains --n 4 --point 011" ).status, 2 );
  EXPECT_EQ( run( "chains --n 3 --point 0a1" ).status, 2 );
}

TEST( cli, map_table_golden )
{
  std::istringstream table( golden( "map_maj2dict_n3.txt" ) );
  std::string x, y;
  int rows = 0;
  while ( table >> x >> y )
  {
    ++rows;
    auto r = run( "map --mapping maj2dict --n 3 --x " + x );
    EXPECT_EQ( r.status, 0 );
    EXPECT_EQ( r.out, y + "\n" ) << x;
    r = run( "map --mapping dict2maj --n 3 --x " + y );
    EXPECT_EQ( r.out, x + "\n" ) << y;
    r = run( "map --mapping maj2dict --inverse --n 3 --x " + y );
    EXPECT_EQ( r.out, x + "\n" ) << y;
  }
  EXPECT_EQ( rows, 8 );
}

TEST( cli, map_other_mappings )
{
  EXPECT_EQ( run( "map --mapping tree --n 3 --x 010" ).out, "110\n" );
  EXPECT_EQ( run( "map --mapping tree --n 3 --x 110 --inverse" ).out, "010\n" );
  EXPECT_EQ( run( "map --mapping maj2xor --n 3 --x 111" ).out, "001\n" );
  EXPECT_EQ( run( "map --mapping prefix --n 3 --x 110" ).out, "010\n" );
  EXPECT_EQ( run( "map --mapping xorhead --n 3 --x 110" ).out, "010\n" );

  // beyond one machine word the tree map runs on long vectors
  std::string x( 200, '0' );
  for ( std::size_t i = 0; i < x.size(); i += 3 )
  {
    x[i] = '1';
  }
  const auto y = run( "map --mapping tree --n 200 --x " + x );
  ASSERT_EQ( y.status, 0 );
  ASSERT_EQ( y.out.size(), 201u );
  EXPECT_EQ( run( "map --mapping tree --inverse --n 200 --x " + y.out.substr( 0, 200 ) ).out, x + "\n" );
}

TEST( cli, map_errors )
{
  EXPECT_EQ( run( "map --mapping maj2dict --n 4 --x 1100" ).status, 2 );
  EXPECT_EQ( run( "map --mapping maj2dict --n 3 --x 11" ).status, 2 );
  EXPECT_EQ( run( "map --mapping maj2dict --n 3 --x 1x1" ).status, 2 );
  EXPECT_EQ( run( "map --mapping nonsense --n 3 --x 111" ).status, 2 );
  EXPECT_EQ( run( "map --mapping tree --arity 1 --n 3 --x 111" ).status, 2 );
}

TEST( cli, analyze_json )
{
  auto r = run( "analyze --mapping prefix --n 3" );
  EXPECT_EQ( r.status, 0 );
  EXPECT_EQ( r.out, golden( "analyze_prefix_n3.json" ) );

  const auto id = nlohmann::json::parse( run( "analyze --mapping identity --n 8" ).out );
  EXPECT_EQ( id["avg"]["num"], 1 );
  EXPECT_EQ( id["avg"]["den"], 1 );
  EXPECT_EQ( id["max"], 1 );
  EXPECT_EQ( id["edges_total"], 8 * 128 );

  const auto psi = nlohmann::json::parse( run( "analyze --mapping maj2dict --n 11" ).out );
  EXPECT_LE( psi["max"].get<int>(), 11 );
  const auto tree = nlohmann::json::parse( run( "analyze --mapping tree --n 14" ).out );
  EXPECT_LE( tree["max"].get<int>(), 2 );
  EXPECT_EQ( tree["per_direction"].size(), 14u );
}

TEST( cli, analyze_outputs_and_modes )
{
  EXPECT_EQ( run( "analyze --mapping prefix --n 3 --format csv" ).out, "distance,count\n0,0\n1,4\n2,8\n" );
  const auto path = scratch( "analyze.json" );
  EXPECT_EQ( run( "analyze --mapping prefix --n 3 --out " + path.string() ).status, 0 );
  EXPECT_EQ( slurp( path ), golden( "analyze_prefix_n3.json" ) );

  const auto s = nlohmann::json::parse( run( "analyze --mapping maj2dict --n 27 --samples 5000 --seed 4" ).out );
  EXPECT_EQ( s["mode"], "sampled" );
  EXPECT_EQ( s["samples"], 5000 );
  EXPECT_EQ( run( "analyze --mapping maj2dict --n 27 --samples 5000" ).status, 2 );
  EXPECT_EQ( run( "analyze --mapping dict2random --n 10" ).status, 2 );
  EXPECT_EQ( run( "analyze --mapping dict2random --n 10 --seed 3" ).status, 0 );
  EXPECT_EQ( run( "analyze --mapping maj2dict --n 10" ).status, 2 );
}

TEST( cli, workers_do_not_change_results )
{
  const auto one = run( "analyze --mapping maj2xor --n 13 --workers 1" ).out;
  EXPECT_EQ( run( "analyze --mapping maj2xor --n 13 --workers 3" ).out, one );
  EXPECT_EQ( run( "analyze --mapping maj2xor --n 13", "CUBEMORPH_WORKERS=2" ).out, one );
  EXPECT_EQ( run( "random --n 12 --trials 4 --seed 8 --workers 1" ).out, run( "random --n 12 --trials 4 --seed 8 --workers 4" ).out );
}

TEST( cli, random_is_deterministic )
{
  const auto a = scratch( "curve_a.csv" );
  const auto b = scratch( "curve_b.csv" );
  ASSERT_EQ( run( "random --n 16 --trials 20 --seed 1 --curve --out " + a.string() ).status, 0 );
  ASSERT_EQ( run( "random --n 16 --trials 20 --seed 1 --curve --out " + b.string() ).status, 0 );
  const auto text = slurp( a );
  EXPECT_EQ( text, slurp( b ) );
  EXPECT_EQ( text.substr( 0, text.find( '\n' ) ), "trial,round,p_hat,q_hat" );

  // mean p_hat at round 0 is close to 1/4
  std::istringstream in( text );
  std::string line;
  std::getline( in, line );
  double sum = 0;
  int count = 0;
  while ( std::getline( in, line ) )
  {
    int trial, round;
    double p, q;
    ASSERT_EQ( std::sscanf( line.c_str(), "%d,%d,%lf,%lf", &trial, &round, &p, &q ), 4 );
    if ( round == 0 )
    {
      sum += p;
      ++count;
    }
  }
  EXPECT_EQ( count, 20 );
  EXPECT_NEAR( sum / count, 0.25, 0.01 );

  EXPECT_NE( run( "random --n 16 --trials 3 --seed 2 --curve" ).out, run( "random --n 16 --trials 3 --seed 1 --curve" ).out );
  const auto exp = run( "random --n 10 --trials 2 --seed 1" ).out;
  EXPECT_EQ( exp.substr( 0, exp.find( '\n' ) ), "trial,frac_unmatched_poor,frac_dist_le2,avg_stretch,avg_stretch_inv" );
}

TEST( cli, random_requires_seed )
{
  EXPECT_EQ( run( "random --n 16 --trials 20" ).status, 2 );
  EXPECT_EQ( run( "random --n 16 --trials 20 --curve" ).status, 2 );
  EXPECT_EQ( run( "random --n 40 --trials 2 --seed 1" ).status, 2 );
}

TEST( cli, search )
{
  auto r = run( "search --from xor --to maj --n 3 --mode exhaustive" );
  EXPECT_EQ( r.status, 0 );
  EXPECT_EQ( r.out.substr( 0, r.out.find( '\n' ) ), "min_avg_stretch 3/2" );
  // 8 witness lines in ascending input order
  std::istringstream in( r.out );
  std::string line;
  std::getline( in, line );
  int rows = 0;
  while ( std::getline( in, line ) )
  {
    ++rows;
    EXPECT_NE( line.find( " → " ), std::string::npos );
  }
  EXPECT_EQ( rows, 8 );

  r = run( "search --from dict --to maj --n 3 --mode exhaustive --metric max" );
  EXPECT_EQ( r.out.substr( 0, r.out.find( '\n' ) ), "min_max_stretch 2" );
  r = run( "search --from xor --to xor --n 3 --mode local --seed 1" );
  EXPECT_EQ( r.out.substr( 0, r.out.find( '\n' ) ), "min_avg_stretch 1" );

  EXPECT_EQ( run( "search --from xor --to maj --n 3 --mode local" ).status, 2 );
  EXPECT_EQ( run( "search --from xor --to maj --n 4 --mode exhaustive" ).status, 2 );
  EXPECT_EQ( run( "search --from xor --to maj --n 2 --mode exhaustive" ).status, 2 );
}

TEST( cli, verify )
{
  auto r = run( "verify --suite btk --max-n 12" );
  EXPECT_EQ( r.status, 0 );
  EXPECT_EQ( r.out.find( "FAIL" ), std::string::npos );
  EXPECT_NE( r.out.find( "PASS btk/partition_cover" ), std::string::npos );

  r = run( "verify --suite lowerbound --max-n 3" );
  EXPECT_EQ( r.status, 0 );
  EXPECT_NE( r.out.find( "PASS lowerbound/xor_to_majority_min_avg_n3 min_avg=3/2" ), std::string::npos );

  EXPECT_EQ( run( "verify --suite nonsense" ).status, 2 );
}

TEST( cli, exit_codes )
{
  EXPECT_EQ( run( "" ).status, 2 );
  EXPECT_EQ( run( "frobnicate" ).status, 2 );
  EXPECT_EQ( run( "--help" ).status, 0 );
  EXPECT_EQ( run( "map --help" ).status, 0 );
}
