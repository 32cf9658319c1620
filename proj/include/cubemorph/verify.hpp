#pragma once

// Named invariant suites behind `cubemorph verify`. Each check reports a
// pass/fail flag and a short detail string; suites never throw on a failed
// invariant, only on bad arguments.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "boolean_function.hpp"
#include "btk.hpp"
#include "chain_mappings.hpp"
#include "gf2.hpp"
#include "mapping.hpp"
#include "random_matching.hpp"
#include "stretch.hpp"

namespace cubemorph
{

struct Check
{
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyOptions
{
  int max_n = 14;
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

namespace detail
{

inline std::string rational_string( const Rational& q ) { return q.get_str(); }

template<typename... Ts>
std::string cat( const Ts&... parts )
{
  std::ostringstream os;
  ( os << ... << parts );
  return os.str();
}

} // namespace detail

inline std::vector<Check> verify_btk( const VerifyOptions& opt )
{
  std::vector<Check> out;
  const int cover_n = std::min( opt.max_n, 16 );
  {
    bool ok = true;
    std::uint64_t chains_total = 0;
    for ( int n = 1; n <= cover_n && ok; ++n )
    {
      std::vector<std::uint8_t> hits( std::size_t{ 1 } << n, 0 );
      enumerate_partition( n, [&]( const Chain& c ) {
        ++chains_total;
        ok = ok && c.min_level() + c.max_level() == n;
        for ( std::size_t t = 0; t < c.elements.size(); ++t )
        {
          ++hits[c.elements[t].bits];
          ok = ok && weight( c.elements[t] ) == c.min_level() + static_cast<int>( t );
          ok = ok && ( t == 0 || dist( c.elements[t], c.elements[t - 1] ) == 1 );
        }
      } );
      ok = ok && std::all_of( hits.begin(), hits.end(), []( std::uint8_t h ) { return h == 1; } );
    }
    out.push_back( { "partition_cover", ok, detail::cat( "n<=", cover_n, " chains=", chains_total ) } );
  }
  {
    const int lemma_n = std::min( opt.max_n, 14 );
    std::uint64_t violations = 0, edges = 0;
    int worst_sig = 0, worst_haus = 0;
    for ( int n = 1; n <= lemma_n; ++n )
    {
      std::vector<Chain> chain( std::size_t{ 1 } << n );
      for ( std::uint64_t b = 0; b < chain.size(); ++b )
      {
        chain[b] = chain_of( Point( b, n ) );
      }
      for ( std::uint64_t b = 0; b < chain.size(); ++b )
      {
        for ( int i = 0; i < n; ++i )
        {
          const std::uint64_t c = b | ( std::uint64_t{ 1 } << i );
          if ( c == b )
          {
            continue;
          }
          ++edges;
          const auto& cx = chain[b];
          const auto& cy = chain[c];
          const int sd = signature_distance( cx.signature, cy.signature );
          const int hd = hausdorff_chain_distance( cx, cy );
          worst_sig = std::max( worst_sig, sd );
          worst_haus = std::max( worst_haus, hd );
          bool ok = sd <= 3 && std::abs( cx.min_level() - cy.min_level() ) <= 1 && hd <= 7;
          for ( int j = cx.min_level(); j <= cx.max_level() && ok; ++j )
          {
            for ( int jj = cy.min_level(); jj <= cy.max_level() && ok; ++jj )
            {
              ok = dist( cx.at_level( j ), cy.at_level( jj ) ) <= std::abs( j - jj ) + 6;
            }
          }
          violations += !ok;
        }
      }
    }
    out.push_back( { "neighbouring_chains", violations == 0,
                     detail::cat( "n<=", lemma_n, " edges=", edges, " violations=", violations, " max_sig_dist=", worst_sig,
                                  " max_hausdorff=", worst_haus ) } );
  }
  {
    std::uint64_t violations = 0;
    for ( int a = 0; a <= 6; ++a )
      for ( int b = 0; b <= 6; ++b )
        for ( int c = 0; c <= 6; ++c )
          for ( int d = 0; d <= 6; ++d )
          {
            const std::string left = std::string( a, '0' ) + std::string( b, '1' );
            const std::string right = std::string( c, '0' ) + std::string( d, '1' );
            violations += signature_distance( parse_point( left + "0" + right ), parse_point( left + "1" + right ) ) > 3;
          }
    out.push_back( { "sorted_block_generator", violations == 0, detail::cat( "a,b,c,d<=6 violations=", violations ) } );
  }
  return out;
}

inline std::vector<Check> verify_maj2dict( const VerifyOptions& opt )
{
  std::vector<Check> out;
  {
    const std::vector<std::pair<const char*, const char*>> block{ { "111", "111" }, { "110", "101" }, { "011", "100" },
                                                                  { "010", "000" }, { "001", "001" }, { "000", "011" } };
    bool ok = true;
    for ( auto [x, y] : block )
    {
      ok = ok && format_point( maj_to_dict( parse_point( x ) ) ) == y;
    }
    out.push_back( { "example_block_n3", ok, "6 pairs" } );
  }
  const int top = std::min( opt.max_n, 15 );
  for ( int n = 1; n <= top; n += 2 )
  {
    const auto psi = mappings::maj2dict( n );
    const auto t = psi.tabulate();
    bool inverse_ok = true;
    for ( std::uint64_t x = 0; x < t.size(); ++x )
    {
      inverse_ok = inverse_ok && psi.inverse( t[x] ) == x && t[psi.inverse( x )] == x;
    }
    const bool law = is_mapping_between( n, t, BooleanFunction::majority( n ), BooleanFunction::dictator( n ) );
    const auto rep = stretch_report( n, t, psi.name, opt.workers );
    out.push_back( { detail::cat( "maj2dict_n", n ), law && inverse_ok && rep.max <= 11,
                     detail::cat( "bijection=", law, " inverse=", inverse_ok, " max=", rep.max,
                                  " avg=", detail::rational_string( rep.avg ) ) } );

    const auto comp = mappings::maj2xor( n );
    const auto ct = comp.tabulate();
    const bool claw = is_mapping_between( n, ct, BooleanFunction::majority( n ), BooleanFunction::parity( n ) );
    const auto crep = stretch_report( n, ct, comp.name, opt.workers );
    out.push_back( { detail::cat( "maj2xor_n", n ), claw && crep.max <= 22,
                     detail::cat( "bijection=", claw, " max=", crep.max ) } );
  }
  return out;
}

inline std::vector<Check> verify_tree( const VerifyOptions& opt )
{
  std::vector<Check> out;
  {
    const std::size_t top = std::size_t{ 1 } << std::clamp( opt.max_n, 1, 16 );
    std::size_t bad = 0, disagree = 0;
    for ( std::size_t n = 1; n <= top; ++n )
    {
      const auto r = verify_conditions( build_tree_matrix( n, 2 ), ConditionBounds::for_tree( n, 2 ) );
      bad += !r.all();
      disagree += !r.methods_agree;
    }
    out.push_back( { "conditions_binary", bad == 0 && disagree == 0,
                     detail::cat( "n<=", top, " failures=", bad, " method_disagreements=", disagree ) } );
  }
  {
    std::size_t bad = 0, cases = 0;
    for ( std::size_t arity : { 3u, 4u, 8u } )
    {
      for ( std::size_t n = 1; n <= 1000; ++n )
      {
        ++cases;
        const auto r = verify_conditions( build_tree_matrix( n, arity ), ConditionBounds::for_tree( n, arity ) );
        bad += !r.all() || !r.methods_agree;
      }
    }
    out.push_back( { "conditions_higher_arity", bad == 0, detail::cat( "arity in {3,4,8}, n<=1000, failures=", bad, "/", cases ) } );
  }
  const int top = std::min( opt.max_n, 16 );
  {
    bool ok = true;
    int worst_inv = 0;
    for ( int n = 1; n <= top; ++n )
    {
      const auto m = mappings::tree( n, 2 );
      const auto t = m.tabulate();
      ok = ok && is_mapping_between( n, t, BooleanFunction::dictator( n ), BooleanFunction::parity( n ) );
      for ( std::uint64_t x = 0; x < t.size() && ok; ++x )
      {
        ok = m.inverse( t[x] ) == x;
      }
      const auto fwd = stretch_report( n, t, m.name, opt.workers );
      const auto inv = stretch_report( m.inverted(), opt.workers );
      worst_inv = std::max( worst_inv, inv.max );
      ok = ok && fwd.max <= 2 && inv.max <= static_cast<int>( std::bit_width( static_cast<unsigned>( n ) ) );
    }
    out.push_back( { "tree_exhaustive", ok, detail::cat( "n<=", top, " max_inverse_stretch=", worst_inv ) } );
  }
  {
    const std::size_t n = std::size_t{ 1 } << 16;
    Rng rng( derive_seed( opt.seed, stream_tag( "tree-points" ), 0 ) );
    bool ok = true;
    for ( int t = 0; t < 1000 && ok; ++t )
    {
      const auto x = BitVector::random( n, rng );
      const auto y = tree_apply( 2, x );
      ok = y.parity() == x.get( 0 ) && tree_inverse_apply( 2, y ) == x;
    }
    out.push_back( { "tree_law_long_vectors", ok, "n=65536, 1000 random points" } );
  }
  return out;
}

inline std::vector<Check> verify_lowerbound( const VerifyOptions& opt )
{
  std::vector<Check> out;
  const auto x3 = BooleanFunction::parity( 3 );
  const auto m3 = BooleanFunction::majority( 3 );
  const auto d3 = BooleanFunction::dictator( 3 );
  const auto ex = exhaustive_min_stretch( x3, m3, 3 );
  out.push_back( { "xor_to_majority_min_avg_n3", ex.value > 1,
                   detail::cat( "min_avg=", detail::rational_string( ex.value ) ) } );
  const auto mx = exhaustive_min_stretch( d3, m3, 3, StretchMetric::maximum );
  out.push_back( { "dict_to_majority_min_max_n3", mx.value >= 2, detail::cat( "min_max=", detail::rational_string( mx.value ) ) } );
  const auto ls = local_search_min_stretch( x3, m3, 3, opt.seed );
  out.push_back( { "local_search_matches_n3", ls.value == ex.value, detail::cat( "local=", detail::rational_string( ls.value ) ) } );
  {
    const unsigned long top = opt.max_n >= 14 ? 10000 : 1000;
    bool ok = true;
    for ( unsigned long n = 1; n <= top && ok; ++n )
    {
      ok = middle_binomial_check( n );
    }
    out.push_back( { "middle_binomial", ok, detail::cat( "n<=", top ) } );
  }
  {
    bool ok = true;
    std::ostringstream d;
    for ( unsigned long n : { 64ul, 256ul, 1024ul, 4096ul } )
    {
      const auto f = typical_fraction( n, 0.01 );
      ok = ok && f >= Rational( 9, 10 );
      d << " n" << n << '=' << f.get_d();
    }
    out.push_back( { "typical_fraction", ok, d.str().substr( 1 ) } );
  }
  return out;
}

inline std::vector<Check> verify_matching( const VerifyOptions& opt )
{
  std::vector<Check> out;
  const int n = std::clamp( opt.max_n, 4, 20 );
  const unsigned trials = 20;
  {
    bool ok = true;
    for ( unsigned t = 0; t < trials && ok; ++t )
    {
      const auto a = matching_trial_set( n, opt.seed, t );
      const auto s = run_matching( a );
      const auto phi = build_phi_a( a, s );
      std::vector<bool> seen( std::size_t{ 1 } << n, false );
      for ( std::uint64_t x = 0; x < phi.size() && ok; ++x )
      {
        ok = !seen[phi[x]] && std::popcount( ( phi[x] & low_mask( n - 1 ) ) ^ x ) <= 1;
        seen[phi[x]] = true;
        if ( s.matched( x ) )
        {
          ok = ok && s.kind[x] != VertexKind::mixed && s.kind[x] != s.kind[s.partner( x )] && s.partner( s.partner( x ) ) == x;
        }
      }
    }
    out.push_back( { "phi_a_injective_local", ok, detail::cat( "n=", n, " trials=", trials ) } );
  }
  {
    const auto curve = recursion_curve( n, trials, opt.seed );
    double worst_rec = 0, worst_pq = 0;
    for ( std::size_t i = 0; i < curve.size(); ++i )
    {
      worst_pq = std::max( worst_pq, std::abs( curve[i].p_hat - curve[i].q_hat ) );
      if ( i + 1 < curve.size() )
      {
        worst_rec = std::max( worst_rec, std::abs( curve[i + 1].p_hat - curve[i].p_hat * ( 1 - curve[i].p_hat ) ) );
      }
    }
    const bool ok = std::abs( curve[0].p_hat - 0.25 ) <= 0.01 && worst_rec <= 0.01 && worst_pq <= 0.01;
    out.push_back( { "recursion", ok,
                     detail::cat( "p0=", curve[0].p_hat, " max_recursion_gap=", worst_rec, " max_p_q_gap=", worst_pq,
                                  " final_p=", curve.back().p_hat ) } );
  }
  {
    const int dn = std::clamp( opt.max_n, 2, 14 );
    bool ok = true;
    for ( std::uint64_t t = 0; t < 5 && ok; ++t )
    {
      const auto f = random_balanced( dn, derive_seed( opt.seed, stream_tag( "balanced-function" ), t ) );
      const auto r = build_dict_to_random( f );
      ok = is_mapping_between( r.phi, BooleanFunction::dictator( dn ), f );
    }
    out.push_back( { "dict_to_random_law", ok, detail::cat( "n=", dn, " functions=5" ) } );
  }
  return out;
}

inline const std::map<std::string, std::function<std::vector<Check>( const VerifyOptions& )>>& verify_suites()
{
  static const std::map<std::string, std::function<std::vector<Check>( const VerifyOptions& )>> suites{
      { "btk", verify_btk },
      { "maj2dict", verify_maj2dict },
      { "tree", verify_tree },
      { "lowerbound", verify_lowerbound },
      { "matching", verify_matching } };
  return suites;
}

/// Runs one suite, or every suite for "all", printing one line per check.
/// Returns true iff every check passed.
inline bool run_verify( const std::string& suite, const VerifyOptions& opt, std::ostream& os )
{
  const auto& suites = verify_suites();
  std::vector<std::string> names;
  if ( suite == "all" )
  {
    for ( const char* s : { "btk", "maj2dict", "tree", "lowerbound", "matching" } )
    {
      names.push_back( s );
    }
  }
  else if ( suites.count( suite ) )
  {
    names.push_back( suite );
  }
  else
  {
    throw std::invalid_argument( "unknown suite: " + suite );
  }
  bool all = true;
  for ( const auto& s : names )
  {
    for ( const auto& c : suites.at( s )( opt ) )
    {
      os << ( c.pass ? "PASS " : "FAIL " ) << s << '/' << c.name << ' ' << c.detail << '\n';
      all = all && c.pass;
    }
  }
  return all;
}

} // namespace cubemorph
