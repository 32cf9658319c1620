// cubemorph: build, inspect and verify maps between Boolean functions on the cube.
//
// Exit codes: 0 success, 1 a verified invariant failed, 2 usage or argument error.
// Data goes to stdout (or --out), summaries to stderr.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include <cubemorph/cubemorph.hpp>

using namespace cubemorph;

namespace
{

struct UsageError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

struct InvariantFailure : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

std::string fixed( double v )
{
  char buf[64];
  std::snprintf( buf, sizeof buf, "%.6f", v );
  return buf;
}

/// Writes to --out when given, else stdout.
class Sink
{
public:
  explicit Sink( const std::string& path )
  {
    if ( !path.empty() )
    {
      file_.open( path, std::ios::binary | std::ios::trunc );
      if ( !file_ )
      {
        throw UsageError( "cannot open output file " + path );
      }
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>( file_ ) : std::cout; }

private:
  std::ofstream file_;
};

BooleanFunction named_function( const std::string& name, int n )
{
  if ( name == "xor" )
    return BooleanFunction::parity( n );
  if ( name == "maj" )
    return BooleanFunction::majority( n );
  if ( name == "dict" )
    return BooleanFunction::dictator( n );
  throw UsageError( "unknown function " + name );
}

Mapping make_mapping( const std::string& name, int n, std::size_t arity, std::optional<std::uint64_t> seed )
{
  if ( name == "identity" )
    return mappings::identity( n );
  if ( name == "maj2dict" )
    return mappings::maj2dict( n );
  if ( name == "dict2maj" )
    return mappings::dict2maj( n );
  if ( name == "maj2xor" )
    return mappings::maj2xor( n );
  if ( name == "tree" )
    return mappings::tree( n, arity );
  if ( name == "prefix" )
    return mappings::prefix( n );
  if ( name == "xorhead" )
    return mappings::xorhead( n );
  if ( name == "dict2random" || name == "random2random" )
  {
    if ( !seed )
    {
      throw UsageError( name + " is random: --seed is required" );
    }
    const auto f = random_balanced( n, derive_seed( *seed, stream_tag( "balanced-function" ), 0 ) );
    if ( name == "dict2random" )
    {
      return build_dict_to_random( f ).phi;
    }
    const auto g = random_balanced( n, derive_seed( *seed, stream_tag( "balanced-function" ), 1 ) );
    return build_random_to_random( f, g );
  }
  throw UsageError( "unknown mapping " + name );
}

const std::vector<std::string> kMapNames{ "maj2dict", "dict2maj", "maj2xor", "tree", "prefix", "xorhead" };
const std::vector<std::string> kAnalyzeNames{ "identity", "maj2dict", "dict2maj", "maj2xor", "tree",
                                              "prefix",   "xorhead",  "dict2random", "random2random" };

// ---------------------------------------------------------------------------

struct ChainsArgs
{
  int n = 0;
  std::string point;
};

int cmd_chains( const ChainsArgs& a )
{
  if ( !a.point.empty() )
  {
    const Point x = a.n > 0 ? parse_point( a.point, a.n ) : parse_point( a.point );
    const auto c = chain_of( x );
    std::cout << c.signature.to_string() << " :";
    for ( const auto& e : c.elements )
    {
      std::cout << ' ' << format_point( e );
    }
    std::cout << '\n';
    return 0;
  }
  if ( a.n < 1 || a.n > 20 )
  {
    throw UsageError( "chains: full dump needs 1 <= n <= 20 (2^n points); pass --point for a single chain" );
  }
  std::string line;
  enumerate_partition( a.n, [&]( const Chain& c ) {
    line = c.signature.to_string() + " :";
    for ( const auto& e : c.elements )
    {
      line += ' ';
      line += format_point( e );
    }
    line += '\n';
    std::cout << line;
  } );
  return 0;
}

struct MapArgs
{
  std::string mapping;
  int n = 0;
  std::string x;
  bool inverse = false;
  std::size_t arity = 2;
};

int cmd_map( const MapArgs& a )
{
  if ( static_cast<int>( a.x.size() ) != a.n )
  {
    throw UsageError( "map: --x must have exactly n characters" );
  }
  if ( a.mapping == "tree" && a.n > kMaxFormulaDim )
  {
    BitVector v( a.x.size() );
    for ( std::size_t i = 0; i < a.x.size(); ++i )
    {
      if ( a.x[i] != '0' && a.x[i] != '1' )
      {
        throw UsageError( "map: --x must be a 0/1 string" );
      }
      v.set( i, a.x[i] == '1' );
    }
    const auto y = a.inverse ? tree_inverse_apply( a.arity, v ) : tree_apply( a.arity, v );
    std::string out( y.size(), '0' );
    for ( std::size_t i = 0; i < y.size(); ++i )
    {
      out[i] = y.get( i ) ? '1' : '0';
    }
    std::cout << out << '\n';
    return 0;
  }
  const auto m = make_mapping( a.mapping, a.n, a.arity, std::nullopt );
  const Point x = parse_point( a.x, a.n );
  std::cout << format_point( a.inverse ? m.invert( x ) : m( x ) ) << '\n';
  return 0;
}

struct AnalyzeArgs
{
  std::string mapping;
  int n = 0;
  std::size_t arity = 2;
  bool inverse = false;
  std::string mode;
  std::uint64_t samples = 100000;
  std::optional<std::uint64_t> seed;
  std::string format = "json";
  std::string out;
  unsigned workers = 0;
};

int cmd_analyze( const AnalyzeArgs& a )
{
  std::string mode = a.mode;
  if ( mode.empty() )
  {
    mode = a.n <= kMaxStretchDim ? "exhaustive" : "sampled";
  }
  if ( mode == "exhaustive" && a.n > kMaxStretchDim )
  {
    throw UsageError( "analyze: exhaustive mode needs n <= 24; use --mode sampled" );
  }
  if ( mode == "sampled" && !a.seed )
  {
    throw UsageError( "analyze: sampled mode is random: --seed is required" );
  }
  auto m = make_mapping( a.mapping, a.n, a.arity, a.seed );
  if ( a.inverse )
  {
    m = m.inverted();
  }
  const auto rep = mode == "exhaustive" ? stretch_report( m, resolve_workers( a.workers ) ) : stretch_report_sampled( m, a.samples, *a.seed );
  Sink sink( a.out );
  if ( a.format == "csv" )
  {
    write_histogram_csv( sink.stream(), rep );
  }
  else
  {
    sink.stream() << to_json( rep ).dump( 2 ) << '\n';
  }
  std::cerr << rep.mapping << " n=" << rep.n << " avg=" << rep.avg.get_str() << " (" << fixed( rep.avg_value() ) << ") max=" << rep.max
            << '\n';
  return 0;
}

struct VerifyArgs
{
  std::string suite = "all";
  int max_n = 14;
  std::uint64_t seed = 1;
  unsigned workers = 0;
};

int cmd_verify( const VerifyArgs& a )
{
  VerifyOptions opt;
  opt.max_n = a.max_n;
  opt.seed = a.seed;
  opt.workers = resolve_workers( a.workers );
  if ( !run_verify( a.suite, opt, std::cout ) )
  {
    throw InvariantFailure( "verify: at least one check failed" );
  }
  return 0;
}

struct RandomArgs
{
  int n = 0;
  unsigned trials = 1;
  std::optional<std::uint64_t> seed;
  bool curve = false;
  std::string out;
  unsigned workers = 0;
};

int cmd_random( const RandomArgs& a )
{
  if ( !a.seed )
  {
    throw UsageError( "random: --seed is required" );
  }
  if ( a.trials < 1 )
  {
    throw UsageError( "random: --trials must be positive" );
  }
  const unsigned workers = resolve_workers( a.workers );
  std::vector<std::string> rows( a.trials );
  if ( a.curve )
  {
    if ( a.n < 2 || a.n > 26 )
    {
      throw UsageError( "random --curve: n must be in [2, 26]" );
    }
    parallel_shards( a.trials, a.trials, workers, [&]( unsigned t, std::uint64_t, std::uint64_t ) {
      const auto s = run_matching( matching_trial_set( a.n, *a.seed, t ) );
      const auto v = static_cast<double>( s.vertices() );
      std::string r;
      for ( std::size_t i = 0; i < s.rounds.size(); ++i )
      {
        r += std::to_string( t ) + ',' + std::to_string( i ) + ',' + fixed( static_cast<double>( s.rounds[i].poor_unmatched ) / v ) + ',' +
             fixed( static_cast<double>( s.rounds[i].rich_unmatched ) / v ) + '\n';
      }
      rows[t] = std::move( r );
    } );
  }
  else
  {
    if ( a.n < 2 || a.n > kMaxStretchDim )
    {
      throw UsageError( "random: n must be in [2, 24]" );
    }
    parallel_shards( a.trials, a.trials, workers, [&]( unsigned t, std::uint64_t, std::uint64_t ) {
      const auto f = random_balanced( a.n, derive_seed( *a.seed, stream_tag( "balanced-function" ), t ) );
      const auto r = build_dict_to_random( f );
      const double size = static_cast<double>( std::uint64_t{ 1 } << a.n );
      rows[t] = std::to_string( t ) + ',' + fixed( static_cast<double>( r.unmatched_poor ) / size ) + ',' + fixed( fraction_within( r.phi, 2 ) ) +
                ',' + fixed( stretch_report( r.phi ).avg_value() ) + ',' + fixed( stretch_report( r.phi.inverted() ).avg_value() ) + '\n';
    } );
  }
  Sink sink( a.out );
  sink.stream() << ( a.curve ? "trial,round,p_hat,q_hat\n" : "trial,frac_unmatched_poor,frac_dist_le2,avg_stretch,avg_stretch_inv\n" );
  for ( const auto& r : rows )
  {
    sink.stream() << r;
  }
  return 0;
}

struct SearchArgs
{
  std::string from, to;
  int n = 0;
  std::string mode = "exhaustive";
  std::string metric = "avg";
  std::optional<std::uint64_t> seed;
  unsigned restarts = 32;
  std::string out;
};

int cmd_search( const SearchArgs& a )
{
  const auto f = named_function( a.from, a.n );
  const auto g = named_function( a.to, a.n );
  SearchResult res;
  if ( a.mode == "exhaustive" )
  {
    if ( a.n > kMaxBruteForceDim )
    {
      throw UsageError( "search: exhaustive mode needs n <= 3" );
    }
    res = exhaustive_min_stretch( f, g, a.n, a.metric == "max" ? StretchMetric::maximum : StretchMetric::average );
  }
  else
  {
    if ( !a.seed )
    {
      throw UsageError( "search: local mode is random: --seed is required" );
    }
    if ( a.metric != "avg" )
    {
      throw UsageError( "search: local mode supports --metric avg only" );
    }
    res = local_search_min_stretch( f, g, a.n, *a.seed, a.restarts );
  }
  std::cout << ( a.metric == "max" ? "min_max_stretch " : "min_avg_stretch " ) << res.value.get_str() << '\n';
  auto write_witness = [&]( std::ostream& os ) {
    for ( std::uint64_t x = 0; x < res.witness.size(); ++x )
    {
      os << format_bits( x, a.n ) << " → " << format_bits( res.witness[x], a.n ) << '\n';
    }
  };
  if ( !a.out.empty() )
  {
    Sink sink( a.out );
    write_witness( sink.stream() );
  }
  else if ( a.n <= 6 )
  {
    write_witness( std::cout );
  }
  else
  {
    std::cerr << "witness has 2^" << a.n << " lines; pass --out to save it\n";
  }
  std::cerr << a.from << " -> " << a.to << " n=" << a.n << " (" << a.mode << ", " << res.visited
            << ( a.mode == "exhaustive" ? " improving maps" : " starts" ) << ")\n";
  return 0;
}

void add_workers( CLI::App* sub, unsigned& workers )
{
  sub->add_option( "--workers", workers, "Worker threads (default: $CUBEMORPH_WORKERS or 1)" )->check( CLI::PositiveNumber );
}

} // namespace

int main( int argc, char** argv )
{
  CLI::App app{ "Maps between Boolean functions on the Hamming cube" };
  app.require_subcommand( 1 );

  ChainsArgs chains;
  auto* c = app.add_subcommand( "chains", "Dump the symmetric chain partition, or the chain through one point" );
  c->add_option( "--n", chains.n, "Dimension" );
  c->add_option( "--point", chains.point, "Print only the chain of this point" );

  MapArgs map;
  auto* m = app.add_subcommand( "map", "Image of one point" );
  m->add_option( "--mapping", map.mapping )->required()->check( CLI::IsMember( kMapNames ) );
  m->add_option( "--n", map.n )->required()->check( CLI::PositiveNumber );
  m->add_option( "--x", map.x )->required();
  m->add_flag( "--inverse", map.inverse );
  m->add_option( "--arity", map.arity, "Tree arity" )->check( CLI::Range( 2, 1 << 20 ) );

  AnalyzeArgs analyze;
  auto* an = app.add_subcommand( "analyze", "Stretch report of a mapping" );
  an->add_option( "--mapping", analyze.mapping )->required()->check( CLI::IsMember( kAnalyzeNames ) );
  an->add_option( "--n", analyze.n )->required()->check( CLI::Range( 1, kMaxExhaustiveDim ) );
  an->add_option( "--arity", analyze.arity )->check( CLI::Range( 2, 64 ) );
  an->add_flag( "--inverse", analyze.inverse );
  an->add_option( "--mode", analyze.mode )->check( CLI::IsMember( { "exhaustive", "sampled" } ) );
  an->add_option( "--samples", analyze.samples )->check( CLI::PositiveNumber );
  an->add_option( "--seed", analyze.seed );
  an->add_option( "--format", analyze.format )->check( CLI::IsMember( { "json", "csv" } ) );
  an->add_option( "--out", analyze.out );
  add_workers( an, analyze.workers );

  VerifyArgs verify;
  auto* v = app.add_subcommand( "verify", "Run invariant suites" );
  v->add_option( "--suite", verify.suite )->check( CLI::IsMember( { "btk", "maj2dict", "tree", "lowerbound", "matching", "all" } ) );
  v->add_option( "--max-n", verify.max_n )->check( CLI::Range( 1, 24 ) );
  v->add_option( "--seed", verify.seed );
  add_workers( v, verify.workers );

  RandomArgs random;
  auto* r = app.add_subcommand( "random", "Seeded matching experiments" );
  r->add_option( "--n", random.n )->required();
  r->add_option( "--trials", random.trials )->check( CLI::PositiveNumber );
  r->add_option( "--seed", random.seed );
  r->add_flag( "--curve", random.curve, "Per-round unmatched fractions instead of the bijection experiment" );
  r->add_option( "--out", random.out );
  add_workers( r, random.workers );

  SearchArgs search;
  auto* s = app.add_subcommand( "search", "Minimum-stretch maps between two functions" );
  s->add_option( "--from", search.from )->required()->check( CLI::IsMember( { "xor", "maj", "dict" } ) );
  s->add_option( "--to", search.to )->required()->check( CLI::IsMember( { "xor", "maj", "dict" } ) );
  s->add_option( "--n", search.n )->required()->check( CLI::Range( 1, 20 ) );
  s->add_option( "--mode", search.mode )->check( CLI::IsMember( { "exhaustive", "local" } ) );
  s->add_option( "--metric", search.metric )->check( CLI::IsMember( { "avg", "max" } ) );
  s->add_option( "--seed", search.seed );
  s->add_option( "--restarts", search.restarts )->check( CLI::PositiveNumber );
  s->add_option( "--out", search.out, "Write the witness here" );

  try
  {
    app.parse( argc, argv );
  }
  catch ( const CLI::ParseError& e )
  {
    app.exit( e );
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try
  {
    if ( c->parsed() )
      return cmd_chains( chains );
    if ( m->parsed() )
      return cmd_map( map );
    if ( an->parsed() )
      return cmd_analyze( analyze );
    if ( v->parsed() )
      return cmd_verify( verify );
    if ( r->parsed() )
      return cmd_random( random );
    if ( s->parsed() )
      return cmd_search( search );
  }
  catch ( const InvariantFailure& e )
  {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  catch ( const UsageError& e )
  {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  catch ( const std::invalid_argument& e )
  {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  catch ( const std::out_of_range& e )
  {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  catch ( const std::exception& e )
  {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
