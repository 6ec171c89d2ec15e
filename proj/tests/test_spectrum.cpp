#include <doctest.h>

#include <cubetrades/spectrum.hpp>
#include <cubetrades/trades.hpp>
#include <cubetrades/unitrades.hpp>

#include "oracles.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

using namespace cubetrades;

namespace
{

std::uint64_t form_value( int form, int exponent, int t )
{
  const std::uint64_t base = std::uint64_t{ 1 } << ( t + 1 );
  const std::uint64_t half = std::uint64_t{ 1 } << ( t - 1 );
  switch ( form )
  {
  case 1:
    return base - ( std::uint64_t{ 1 } << exponent );
  case 2:
    return base + ( std::uint64_t{ 1 } << exponent );
  case 3:
    return base + half - ( std::uint64_t{ 1 } << exponent );
  default:
    return base + half - ( std::uint64_t{ 3 } << exponent );
  }
}

bool exponent_in_range( int form, int exponent, int t )
{
  switch ( form )
  {
  case 1:
    return exponent >= 0 && exponent <= t + 1;
  case 2:
    return exponent >= t / 2 && exponent <= t - 2;
  case 3:
    return exponent >= 0 && exponent <= t - 1;
  default:
    return exponent >= 0 && exponent <= t - 3;
  }
}

/*! \brief Volumes realized by brute force over all disjoint equal-size leg pairs. */
std::set<std::uint64_t> direct_volume_spectrum( int v, int t, int max_volume )
{
  const int points = 1 << v;
  std::set<std::uint64_t> realized;
  for ( int k = 1; k <= max_volume; ++k )
  {
    std::vector<std::uint64_t> masks;
    for_each_combination( points, k, [&]( Block mask ) { masks.push_back( mask ); } );
    const auto to_blocks = []( std::uint64_t mask ) {
      std::vector<Block> out;
      while ( mask != 0 )
      {
        out.push_back( static_cast<Block>( std::countr_zero( mask ) ) );
        mask &= mask - 1;
      }
      return out;
    };
    for ( std::size_t a = 0; a < masks.size(); ++a )
    {
      if ( realized.count( static_cast<std::uint64_t>( k ) ) != 0 )
      {
        break;
      }
      for ( std::size_t b = a + 1; b < masks.size(); ++b )
      {
        if ( ( masks[a] & masks[b] ) != 0 )
        {
          continue;
        }
        if ( oracles::is_trade( to_blocks( masks[a] ), to_blocks( masks[b] ), v, t ) )
        {
          realized.insert( static_cast<std::uint64_t>( k ) );
          break;
        }
      }
    }
  }
  return realized;
}

std::set<std::uint64_t> volume_set( const VolumeSpectrum& spectrum )
{
  const auto volumes = spectrum.volumes();
  return { volumes.begin(), volumes.end() };
}

} /* namespace */

TEST_CASE( "classify_volume matches the known classifications" )
{
  const auto nine = classify_volume( 9, 2 );
  CHECK( nine.matches == std::vector<FormMatch>{ { 3, 0 } } );
  CHECK( nine.verdict == Verdict::allowed );

  const auto five = classify_volume( 5, 2 );
  CHECK( five.matches.empty() );
  CHECK( five.verdict == Verdict::forbidden );

  for ( int t = 1; t <= 10; ++t )
  {
    const auto next = classify_volume( std::uint64_t{ 1 } << ( t + 1 ), t );
    CHECK( next.matches == std::vector<FormMatch>{ { 3, t - 1 } } );
    CHECK( next.verdict == Verdict::allowed );

    const auto smallest = classify_volume( std::uint64_t{ 1 } << t, t );
    CHECK( smallest.matches == std::vector<FormMatch>{ { 1, t } } );
    CHECK( smallest.verdict == Verdict::allowed );
  }

  const auto both = classify_volume( 68, 5 );
  CHECK( both.matches == std::vector<FormMatch>{ { 2, 2 }, { 4, 2 } } );
  CHECK( both.verdict == Verdict::allowed );

  CHECK( classify_volume( 0, 3 ).matches == std::vector<FormMatch>{ { 1, 4 } } );
  CHECK( classify_volume( 0, 3 ).verdict == Verdict::allowed );

  CHECK( classify_volume( 20, 3 ).verdict == Verdict::unconstrained );
  CHECK( classify_volume( 20, 3 ).matches.empty() );
  CHECK( classify_volume( 19, 3 ).matches == std::vector<FormMatch>{ { 3, 0 } } );

  CHECK( classify_volume( 1, 1 ).verdict == Verdict::forbidden );
  CHECK( classify_volume( 5, 1 ).verdict == Verdict::unconstrained );

  CHECK_THROWS_AS( (void)classify_volume( 4, 0 ), parameter_error );
  CHECK_THROWS_AS( (void)classify_volume( 4, -2 ), parameter_error );
  CHECK_THROWS_AS( (void)classify_volume( 4, 62 ), capacity_error );
}

TEST_CASE( "classify_volume verdicts and matches are complete and consistent" )
{
  for ( int t = 1; t <= 8; ++t )
  {
    const std::uint64_t bound =
        ( std::uint64_t{ 1 } << ( t + 1 ) ) + ( std::uint64_t{ 1 } << ( t - 1 ) );
    for ( std::uint64_t vol = 0; vol <= bound + 16; ++vol )
    {
      const auto result = classify_volume( vol, t );
      CHECK( ( result.verdict == Verdict::unconstrained ) == ( vol >= bound ) );
      if ( vol < bound )
      {
        CHECK( ( result.verdict == Verdict::forbidden ) == result.matches.empty() );
      }
      else
      {
        CHECK( result.matches.empty() );
      }
      for ( const auto& match : result.matches )
      {
        CHECK( exponent_in_range( match.form, match.exponent, t ) );
        CHECK( form_value( match.form, match.exponent, t ) == vol );
      }
    }

    /* completeness: every in-range form value is matched when below the bound */
    for ( int form = 1; form <= 4; ++form )
    {
      for ( int exponent = 0; exponent <= t + 1; ++exponent )
      {
        if ( !exponent_in_range( form, exponent, t ) )
        {
          continue;
        }
        const std::uint64_t vol = form_value( form, exponent, t );
        if ( vol >= bound )
        {
          continue;
        }
        const auto result = classify_volume( vol, t );
        CHECK( std::find( result.matches.begin(), result.matches.end(),
                          FormMatch{ form, exponent } ) != result.matches.end() );
      }
    }
  }
}

TEST_CASE( "rm_weight_distribution matches frozen censuses" )
{
  using Counts = std::map<std::uint64_t, std::uint64_t>;

  const auto rm13 = rm_weight_distribution( 1, 3 );
  CHECK( rm13.dim == 4 );
  CHECK( rm13.counts == Counts{ { 0, 1 }, { 4, 14 }, { 8, 1 } } );

  const auto rm14 = rm_weight_distribution( 1, 4 );
  CHECK( rm14.dim == 5 );
  CHECK( rm14.counts == Counts{ { 0, 1 }, { 8, 30 }, { 16, 1 } } );

  const auto rm24 = rm_weight_distribution( 2, 4 );
  CHECK( rm24.dim == 11 );
  CHECK( rm24.counts == Counts{ { 0, 1 },
                                { 4, 140 },
                                { 6, 448 },
                                { 8, 870 },
                                { 10, 448 },
                                { 12, 140 },
                                { 16, 1 } } );

  const auto rm25 = rm_weight_distribution( 2, 5 );
  CHECK( rm25.dim == 16 );
  CHECK( rm25.counts == Counts{ { 0, 1 },
                                { 8, 620 },
                                { 12, 13888 },
                                { 16, 36518 },
                                { 20, 13888 },
                                { 24, 620 },
                                { 32, 1 } } );

  for ( int v : { 1, 5, 20, 63 } )
  {
    const auto constants = rm_weight_distribution( 0, v );
    CHECK( constants.dim == 1 );
    CHECK( constants.counts ==
           Counts{ { 0, 1 }, { std::uint64_t{ 1 } << v, 1 } } );
  }

  CHECK_THROWS_AS( (void)rm_weight_distribution( 0, 64 ), capacity_error );
  CHECK_THROWS_AS( (void)rm_weight_distribution( -1, 4 ), parameter_error );
  CHECK_THROWS_AS( (void)rm_weight_distribution( 5, 4 ), parameter_error );
  CHECK_THROWS_AS( (void)rm_weight_distribution( 3, 6 ), capacity_error );
}

TEST_CASE( "rm_weight_distribution agrees with a truth-table oracle" )
{
  for ( int v = 1; v <= 4; ++v )
  {
    const int points = 1 << v;
    std::vector<std::map<std::uint64_t, std::uint64_t>> tally(
        static_cast<std::size_t>( v ) + 1 );
    for ( std::uint64_t f = 0; f < ( std::uint64_t{ 1 } << points ); ++f )
    {
      std::vector<Block> support;
      for ( int x = 0; x < points; ++x )
      {
        if ( ( f >> x ) & 1 )
        {
          support.push_back( static_cast<Block>( x ) );
        }
      }
      const int degree = support.empty() ? 0 : oracles::anf_degree( support, v );
      for ( int r = degree; r <= v; ++r )
      {
        ++tally[static_cast<std::size_t>( r )][support.size()];
      }
    }
    for ( int r = 0; r <= v; ++r )
    {
      CHECK( rm_weight_distribution( r, v ).counts == tally[static_cast<std::size_t>( r )] );
    }
  }
}

TEST_CASE( "rm_weight_distribution invariants hold and threads do not matter" )
{
  for ( int v = 2; v <= 6; ++v )
  {
    for ( int r = 1; r < v; ++r )
    {
      if ( binomial_sum( v, r ) > 22 )
      {
        continue;
      }
      const auto distribution = rm_weight_distribution( r, v );
      std::uint64_t total = 0;
      for ( const auto& [weight, count] : distribution.counts )
      {
        total += count;
        const auto mirrored = distribution.counts.find( ( std::uint64_t{ 1 } << v ) - weight );
        REQUIRE( mirrored != distribution.counts.end() );
        CHECK( mirrored->second == count );
      }
      CHECK( total == std::uint64_t{ 1 } << distribution.dim );
    }
  }

  const auto single = rm_weight_distribution( 2, 6, 1 );
  const auto eight = rm_weight_distribution( 2, 6, 8 );
  CHECK( single.counts == eight.counts );
  CHECK( rm_weight_distribution( 2, 5, 3 ).counts == rm_weight_distribution( 2, 5 ).counts );
}

TEST_CASE( "check_weight_gaps passes with the expected allowed families" )
{
  const auto rm24 = check_weight_gaps( 2, 4 );
  CHECK( rm24.pass );
  CHECK( rm24.violations.empty() );
  CHECK( rm24.allowed == std::vector<std::uint64_t>{ 4, 6, 8 } );

  const auto rm14 = check_weight_gaps( 1, 4 );
  CHECK( rm14.pass );
  CHECK( rm14.allowed == std::vector<std::uint64_t>{ 8, 12, 14, 16, 18 } );

  for ( int v = 2; v <= 6; ++v )
  {
    for ( int r = 1; r < v; ++r )
    {
      if ( binomial_sum( v, r ) > 22 )
      {
        continue;
      }
      const auto report = check_weight_gaps( r, v );
      CHECK( report.pass );
      CHECK( report.violations.empty() );
    }
  }
}

TEST_CASE( "enumerate_unitrades lists every support up to the cardinality cap" )
{
  const auto small = enumerate_unitrades( 3, 1, 8 );
  CHECK( small.size() == 15 );
  std::map<std::size_t, int> histogram;
  std::set<std::vector<Block>> distinct;
  for ( const auto& support : small )
  {
    ++histogram[support.size()];
    distinct.insert( support );
    CHECK( std::is_sorted( support.begin(), support.end(), lex_less ) );
    CHECK( is_unitrade_parity( support, 3, 1 ) );
    CHECK( is_unitrade_anf( support, 3, 1 ) );
  }
  CHECK( histogram == std::map<std::size_t, int>{ { 4, 14 }, { 8, 1 } } );
  CHECK( distinct.size() == 15 );
  CHECK( enumerate_unitrades( 3, 1, 8 ) == small );

  std::set<std::size_t> cardinalities;
  for ( const auto& support : enumerate_unitrades( 4, 2, 16 ) )
  {
    cardinalities.insert( support.size() );
  }
  CHECK( cardinalities == std::set<std::size_t>{ 8, 16 } );

  CHECK( enumerate_unitrades( 4, 2, 7 ).empty() );
  CHECK( enumerate_unitrades( 3, 1, 3 ).empty() );
  CHECK( enumerate_unitrades( 5, 3, 15 ).empty() );
}

TEST_CASE( "enumerate_unitrades census matches the weight distribution" )
{
  const std::pair<int, int> cases[] = { { 3, 1 }, { 4, 1 }, { 4, 2 }, { 5, 2 }, { 5, 3 } };
  for ( const auto& [v, t] : cases )
  {
    const std::uint64_t max_card = ( std::uint64_t{ 1 } << ( t + 2 ) ) - 2;
    std::map<std::uint64_t, std::uint64_t> census;
    for ( const auto& support : enumerate_unitrades( v, t, max_card ) )
    {
      ++census[support.size()];
    }
    std::map<std::uint64_t, std::uint64_t> expected;
    for ( const auto& [weight, count] : rm_weight_distribution( v - t - 1, v ).counts )
    {
      if ( weight > 0 && weight <= max_card )
      {
        expected[weight] = count;
      }
    }
    CHECK( census == expected );
  }
}

TEST_CASE( "enumerate_unitrades handles the constants-only code" )
{
  const auto full = enumerate_unitrades( 3, 2, 8 );
  REQUIRE( full.size() == 1 );
  CHECK( full.front().size() == 8 );
  CHECK( enumerate_unitrades( 3, 2, 7 ).empty() );
  CHECK( enumerate_unitrades( 30, 29, std::uint64_t{ 1 } << 20 ).empty() );
  CHECK_THROWS_AS( (void)enumerate_unitrades( 30, 29, std::uint64_t{ 1 } << 30 ),
                   capacity_error );
  CHECK_THROWS_AS( (void)enumerate_unitrades( 4, 4, 8 ), parameter_error );
}

TEST_CASE( "trade_volume_spectrum realizes the expected volumes" )
{
  const auto spectrum41 = trade_volume_spectrum( 4, 1, 4 );
  CHECK( volume_set( spectrum41 ) == std::set<std::uint64_t>{ 2, 3, 4 } );
  for ( const auto& [vol, example] : spectrum41.examples )
  {
    CHECK( example.v == 4 );
    CHECK( example.t == 1 );
    CHECK( volume( example ) == vol );
    CHECK( oracles::is_trade( example.leg0, example.leg1, 4, 1 ) );
  }

  CHECK( volume_set( trade_volume_spectrum( 3, 1, 4 ) ) == std::set<std::uint64_t>{ 2, 4 } );
  CHECK( volume_set( trade_volume_spectrum( 4, 2, 8 ) ) == std::set<std::uint64_t>{ 4, 8 } );
  CHECK( volume_set( trade_volume_spectrum( 5, 3, 8 ) ) == std::set<std::uint64_t>{ 8 } );

  const auto spectrum52 = trade_volume_spectrum( 5, 2, 7 );
  CHECK( volume_set( spectrum52 ) == std::set<std::uint64_t>{ 4, 6 } );
  CHECK( classify_volume( 5, 2 ).verdict == Verdict::forbidden );

  /* smallest realized volume is 2^t; the next is 3 * 2^(t-1) when v >= t+3 */
  CHECK( *volume_set( spectrum41 ).begin() == 2 );
  CHECK( *std::next( volume_set( spectrum41 ).begin() ) == 3 );
  CHECK( *volume_set( spectrum52 ).begin() == 4 );
  CHECK( *std::next( volume_set( spectrum52 ).begin() ) == 6 );

  for ( const auto& [vol, example] : spectrum52.examples )
  {
    CHECK( classify_volume( vol, 2 ).verdict != Verdict::forbidden );
  }

  /* threads must not change the result, examples included */
  CHECK( trade_volume_spectrum( 4, 1, 4, 8 ).examples == spectrum41.examples );
  CHECK( trade_volume_spectrum( 5, 2, 7, 8 ).examples == spectrum52.examples );
}

TEST_CASE( "trade_volume_spectrum agrees with direct leg-pair enumeration" )
{
  CHECK( volume_set( trade_volume_spectrum( 3, 1, 4 ) ) == direct_volume_spectrum( 3, 1, 4 ) );
  CHECK( volume_set( trade_volume_spectrum( 4, 1, 4 ) ) == direct_volume_spectrum( 4, 1, 4 ) );
}

TEST_CASE( "trade_volume_spectrum covers the strength v-1 case" )
{
  const auto spectrum = trade_volume_spectrum( 3, 2, 4 );
  CHECK( volume_set( spectrum ) == std::set<std::uint64_t>{ 4 } );
  CHECK( trade_volume_spectrum( 3, 2, 3 ).examples.empty() );
}

TEST_CASE( "trade_volume_spectrum rejects bad parameters" )
{
  CHECK_THROWS_AS( (void)trade_volume_spectrum( 4, 0, 4 ), parameter_error );
  CHECK_THROWS_AS( (void)trade_volume_spectrum( 4, 4, 4 ), parameter_error );
  CHECK_THROWS_AS( (void)trade_volume_spectrum( 4, 1, 33 ), capacity_error );
  CHECK_THROWS_AS( (void)trade_volume_spectrum( 4, 1, 4, 2, 0 ), capacity_error );
}
