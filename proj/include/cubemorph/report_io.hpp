#pragma once

// JSON and CSV renderings of stretch reports.
//
// JSON layout (keys in this order):
//   {"n", "mapping", "mode": "exhaustive"|"sampled",
//    "avg": {"num", "den"}, "max", "per_direction": [{"num", "den"}, ...],
//    "histogram": {"<distance>": count, ...}, "edges_total"}
// Sampled reports append "samples", "seed" and "std_error"; there "edges_total"
// is the number of sampled edges. Histogram keys cover every distance 0..max.

#include <ostream>
#include <string>

#include "json.hpp"

#include "stretch.hpp"

namespace cubemorph
{

inline nlohmann::ordered_json integer_json( const mpz_class& z )
{
  if ( z.fits_ulong_p() )
  {
    return static_cast<std::uint64_t>( z.get_ui() );
  }
  return z.get_str();
}

inline nlohmann::ordered_json rational_json( const Rational& q )
{
  nlohmann::ordered_json j;
  j["num"] = integer_json( q.get_num() );
  j["den"] = integer_json( q.get_den() );
  return j;
}

inline nlohmann::ordered_json to_json( const StretchReport& r )
{
  nlohmann::ordered_json j;
  j["n"] = r.n;
  j["mapping"] = r.mapping;
  j["mode"] = r.exhaustive ? "exhaustive" : "sampled";
  j["avg"] = rational_json( r.avg );
  j["max"] = r.max;
  auto dirs = nlohmann::ordered_json::array();
  for ( const auto& q : r.per_direction )
  {
    dirs.push_back( rational_json( q ) );
  }
  j["per_direction"] = dirs;
  auto hist = nlohmann::ordered_json::object();
  for ( std::size_t d = 0; d < r.histogram.size(); ++d )
  {
    hist[std::to_string( d )] = r.histogram[d];
  }
  j["histogram"] = hist;
  j["edges_total"] = r.edges_total;
  if ( !r.exhaustive )
  {
    j["samples"] = r.edges_total;
    j["seed"] = r.seed;
    j["std_error"] = r.std_error;
  }
  return j;
}

/// Columns `distance,count`, one row per distance 0..max.
inline void write_histogram_csv( std::ostream& os, const StretchReport& r )
{
  os << "distance,count\n";
  for ( std::size_t d = 0; d < r.histogram.size(); ++d )
  {
    os << d << ',' << r.histogram[d] << '\n';
  }
}

} // namespace cubemorph
