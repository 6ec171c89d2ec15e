/*! \file trades.hpp
  \brief Bitrades over the Boolean cube: verification and transformations

  A trade of strength t is a pair of disjoint block sets {T0, T1} such
  that every subset s with |s| <= t is contained in equally many blocks
  of each leg.  Equivalently, every subcube of codimension t meets both
  legs in sets of the same size.  Both criteria are implemented
  independently and agree on every input.
*/

#pragma once

#include "boolcube.hpp"
#include "errors.hpp"

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace cubetrades
{

/*! \brief A trade candidate with canonically ordered legs.

  Legs are stored sorted lexicographically; the leg containing the
  lexicographically smallest block overall is leg 0.  With legs as an
  unordered pair, equality of canonical forms is set equality.  Objects
  built by make_trade are verified; make_trade_unchecked performs only
  structural checks so that invalid candidates can be represented (for
  file loading and for negative tests).
*/
struct Trade
{
  int v = 0;
  int t = 0;
  std::vector<Block> leg0;
  std::vector<Block> leg1;

  bool operator==( const Trade& other ) const = default;
};

enum class ViolationKind
{
  overlap,         /* a block appears in both legs */
  inclusion_count, /* some subset is covered unevenly */
  subcube_balance  /* some subcube meets the legs unevenly */
};

struct TradeViolation
{
  ViolationKind kind;
  std::variant<Block, Subcube> witness;
  std::pair<std::uint64_t, std::uint64_t> counts;

  bool operator==( const TradeViolation& other ) const = default;
};

inline std::string violation_to_string( const TradeViolation& violation, int v )
{
  switch ( violation.kind )
  {
  case ViolationKind::overlap:
    return "overlap: block " + block_to_string( std::get<Block>( violation.witness ), v ) +
           " appears in both legs";
  case ViolationKind::inclusion_count:
    return "inclusion-count: subset " + block_to_string( std::get<Block>( violation.witness ), v ) +
           " is covered " + std::to_string( violation.counts.first ) + " vs " +
           std::to_string( violation.counts.second ) + " times";
  case ViolationKind::subcube_balance:
  default:
    return "subcube-balance: subcube " + subcube_to_string( std::get<Subcube>( violation.witness ), v ) +
           " meets the legs " + std::to_string( violation.counts.first ) + " vs " +
           std::to_string( violation.counts.second ) + " times";
  }
}

namespace detail
{

inline void require_trade_params( std::span<const Block> t0, std::span<const Block> t1, int v, int t )
{
  require_ground_set( v );
  if ( t < 0 || t > v )
  {
    throw parameter_error( "trade strength must be between 0 and v, got " + std::to_string( t ) );
  }
  for ( Block x : t0 )
  {
    require_block( x, v );
  }
  for ( Block x : t1 )
  {
    require_block( x, v );
  }
}

/*! \brief First blocks common to both legs, in lexicographic order.

  Also rejects repeated blocks inside a single leg, which no criterion
  below is defined for (legs are block sets).
*/
inline std::vector<TradeViolation> overlap_violations(
    std::span<const Block> t0, std::span<const Block> t1, std::size_t max_violations )
{
  std::vector<Block> a( t0.begin(), t0.end() ), b( t1.begin(), t1.end() );
  std::sort( a.begin(), a.end(), lex_less );
  std::sort( b.begin(), b.end(), lex_less );
  for ( const auto& leg : { a, b } )
  {
    if ( std::adjacent_find( leg.begin(), leg.end() ) != leg.end() )
    {
      throw parameter_error( "a leg contains a repeated block" );
    }
  }
  std::vector<Block> common;
  std::set_intersection( a.begin(), a.end(), b.begin(), b.end(), std::back_inserter( common ), lex_less );
  std::vector<TradeViolation> out;
  for ( Block x : common )
  {
    if ( out.size() >= max_violations )
    {
      break;
    }
    out.push_back( { ViolationKind::overlap, x, { 1, 1 } } );
  }
  return out;
}

} /* namespace detail */

/*! \brief Checks the inclusion-count definition directly.

  Violating subsets are reported in deterministic order: by subset size
  0..t, then by ascending mask within each size.  An overlap between the
  legs is reported before any count comparison.
*/
inline std::vector<TradeViolation> trade_violations_definition(
    std::span<const Block> t0, std::span<const Block> t1, int v, int t, std::size_t max_violations )
{
  detail::require_trade_params( t0, t1, v, t );
  if ( max_violations == 0 )
  {
    return {};
  }
  auto out = detail::overlap_violations( t0, t1, max_violations );
  if ( !out.empty() )
  {
    return out;
  }
  const auto counts0 = superset_counts( t0, t, v );
  const auto counts1 = superset_counts( t1, t, v );
  for ( int size = 0; size <= t && out.size() < max_violations; ++size )
  {
    for_each_combination( v, size, [&]( Block s ) {
      if ( out.size() >= max_violations )
      {
        return;
      }
      const std::uint64_t c0 = counts0.at( s );
      const std::uint64_t c1 = counts1.at( s );
      if ( c0 != c1 )
      {
        out.push_back( { ViolationKind::inclusion_count, s, { c0, c1 } } );
      }
    } );
  }
  return out;
}

/*! \brief Checks balance of every codimension-t subcube.

  Subcubes are scanned in enumeration order (fixed-position masks
  ascending, then fixed values ascending); the first unbalanced subcube
  is the deterministic witness.  Subcubes disjoint from both legs are
  balanced trivially, so only value patterns realized by some block are
  inspected.
*/
inline std::vector<TradeViolation> trade_violations_subcubes(
    std::span<const Block> t0, std::span<const Block> t1, int v, int t, std::size_t max_violations )
{
  detail::require_trade_params( t0, t1, v, t );
  if ( max_violations == 0 )
  {
    return {};
  }
  auto out = detail::overlap_violations( t0, t1, max_violations );
  if ( !out.empty() )
  {
    return out;
  }
  const std::uint64_t work = binomial( v, t ) * ( t0.size() + t1.size() );
  if ( work > ( std::uint64_t{ 1 } << 27 ) )
  {
    throw capacity_error( "subcube verification exceeds the 2^27 work gate" );
  }
  std::vector<std::pair<Block, int>> values; /* (fixed values, leg) */
  for_each_combination( v, t, [&]( Block mask ) {
    if ( out.size() >= max_violations )
    {
      return;
    }
    values.clear();
    for ( Block x : t0 )
    {
      values.emplace_back( x & mask, 0 );
    }
    for ( Block x : t1 )
    {
      values.emplace_back( x & mask, 1 );
    }
    std::sort( values.begin(), values.end() );
    std::size_t i = 0;
    while ( i < values.size() && out.size() < max_violations )
    {
      const Block value = values[i].first;
      std::uint64_t c0 = 0, c1 = 0;
      for ( ; i < values.size() && values[i].first == value; ++i )
      {
        ++( values[i].second == 0 ? c0 : c1 );
      }
      if ( c0 != c1 )
      {
        out.push_back( { ViolationKind::subcube_balance, Subcube{ mask, value }, { c0, c1 } } );
      }
    }
  } );
  return out;
}

inline std::optional<TradeViolation> verify_trade_definition(
    std::span<const Block> t0, std::span<const Block> t1, int v, int t )
{
  auto violations = trade_violations_definition( t0, t1, v, t, 1 );
  if ( violations.empty() )
  {
    return std::nullopt;
  }
  return violations.front();
}

inline std::optional<TradeViolation> verify_trade_subcubes(
    std::span<const Block> t0, std::span<const Block> t1, int v, int t )
{
  auto violations = trade_violations_subcubes( t0, t1, v, t, 1 );
  if ( violations.empty() )
  {
    return std::nullopt;
  }
  return violations.front();
}

namespace detail
{

inline std::uint64_t saturating_mul( std::uint64_t a, std::uint64_t b )
{
  const auto p = static_cast<unsigned __int128>( a ) * b;
  return p > ~std::uint64_t{ 0 } ? ~std::uint64_t{ 0 } : static_cast<std::uint64_t>( p );
}

} /* namespace detail */

/*! \brief Dispatches to whichever criterion is cheaper for the given sizes.

  The subcube scan costs about C(v, t) passes over the blocks; the
  definitional check enumerates subsets of every block (or runs a zeta
  transform over the whole cube when that is cheaper).
*/
inline std::vector<TradeViolation> trade_violations_auto(
    std::span<const Block> t0, std::span<const Block> t1, int v, int t,
    std::size_t max_violations = ~std::size_t{ 0 } )
{
  detail::require_trade_params( t0, t1, v, t );
  const std::uint64_t cardinality = t0.size() + t1.size();
  const std::uint64_t subcube_cost = detail::saturating_mul( binomial( v, t ), cardinality );
  std::uint64_t definition_cost = detail::saturating_mul( cardinality, binomial_sum( v, t ) );
  if ( v <= superset_zeta_max_dimension )
  {
    definition_cost = std::min( definition_cost, 2 * ( std::uint64_t{ 1 } << v ) * v );
  }
  if ( subcube_cost < definition_cost )
  {
    return trade_violations_subcubes( t0, t1, v, t, max_violations );
  }
  return trade_violations_definition( t0, t1, v, t, max_violations );
}

inline std::optional<TradeViolation> verify_trade_auto(
    std::span<const Block> t0, std::span<const Block> t1, int v, int t )
{
  auto violations = trade_violations_auto( t0, t1, v, t, 1 );
  if ( violations.empty() )
  {
    return std::nullopt;
  }
  return violations.front();
}

namespace detail
{

inline Block lex_min_or_sentinel( const std::vector<Block>& blocks )
{
  /* callers only compare results of equal width, so the sentinel sorts last */
  return blocks.empty() ? ~Block{ 0 } : blocks.front();
}

} /* namespace detail */

/*! \brief Sorts legs and applies the canonical leg order. */
inline Trade make_trade_unchecked( std::vector<Block> t0, std::vector<Block> t1, int v, int t )
{
  detail::require_trade_params( t0, t1, v, t );
  Trade trade;
  trade.v = v;
  trade.t = t;
  trade.leg0 = canonical_blocks( std::move( t0 ), v );
  trade.leg1 = canonical_blocks( std::move( t1 ), v );
  const Block m0 = detail::lex_min_or_sentinel( trade.leg0 );
  const Block m1 = detail::lex_min_or_sentinel( trade.leg1 );
  if ( m0 != m1 && lex_less( m1, m0 ) )
  {
    std::swap( trade.leg0, trade.leg1 );
  }
  return trade;
}

/*! \brief Builds a verified trade; throws parameter_error describing the first violation. */
inline Trade make_trade( std::vector<Block> t0, std::vector<Block> t1, int v, int t )
{
  Trade trade = make_trade_unchecked( std::move( t0 ), std::move( t1 ), v, t );
  if ( const auto violation = verify_trade_auto( trade.leg0, trade.leg1, v, t ) )
  {
    throw parameter_error( "not a trade of strength " + std::to_string( t ) + ": " +
                           violation_to_string( *violation, v ) );
  }
  return trade;
}

inline std::uint64_t volume( const Trade& trade )
{
  return trade.leg0.size();
}

/*! \brief XORs every block of both legs with w. */
inline Trade translate( const Trade& trade, Block w )
{
  require_block( w, trade.v );
  std::vector<Block> t0( trade.leg0 ), t1( trade.leg1 );
  for ( Block& x : t0 )
  {
    x ^= w;
  }
  for ( Block& x : t1 )
  {
    x ^= w;
  }
  return make_trade_unchecked( std::move( t0 ), std::move( t1 ), trade.v, trade.t );
}

/*! \brief Appends a copy of coordinate i (1-based) as new coordinate v+1.

  The result is a trade of the same strength and volume over v+1 points.
*/
inline Trade duplicate_coordinate( const Trade& trade, int i )
{
  if ( i < 1 || i > trade.v )
  {
    throw parameter_error( "coordinate to duplicate must be between 1 and v" );
  }
  if ( trade.v + 1 > max_ground_set )
  {
    throw capacity_error( "duplicating a coordinate would exceed 64 elements" );
  }
  const auto extend = [&]( std::vector<Block> leg ) {
    for ( Block& x : leg )
    {
      x |= ( ( x >> ( i - 1 ) ) & 1 ) << trade.v;
    }
    return leg;
  };
  return make_trade_unchecked( extend( trade.leg0 ), extend( trade.leg1 ), trade.v + 1, trade.t );
}

/*! \brief Appends the complement of each block, giving uniform block size v over 2v elements. */
inline Trade lift_to_design_trade( const Trade& trade )
{
  if ( 2 * trade.v > max_ground_set )
  {
    throw capacity_error( "lifting needs 2v <= 64 elements" );
  }
  const Block mask = width_mask( trade.v );
  const auto extend = [&]( std::vector<Block> leg ) {
    for ( Block& x : leg )
    {
      x |= ( ~x & mask ) << trade.v;
    }
    return leg;
  };
  return make_trade_unchecked( extend( trade.leg0 ), extend( trade.leg1 ), 2 * trade.v, trade.t );
}

/*! \brief Merges two trades given explicitly paired legs.

  Preconditions: a0 and b0 share no block, a1 and b1 share no block.
  The result has legs (a0 u b0) \ (a1 u b1) and (a1 u b1) \ (a0 u b0),
  which is again a trade of the same strength.  Exposed separately from
  merge(Trade, Trade) because the pairing matters: swapping one input's
  legs changes the outcome, and canonical leg order would hide that.
*/
inline Trade merge_legs( std::span<const Block> a0, std::span<const Block> a1,
                         std::span<const Block> b0, std::span<const Block> b1, int v, int t )
{
  detail::require_trade_params( a0, a1, v, t );
  detail::require_trade_params( b0, b1, v, t );
  for ( Block x : a0 )
  {
    for ( Block y : b0 )
    {
      if ( x == y )
      {
        throw parameter_error( "merge: block " + block_to_string( x, v ) +
                               " appears in the first leg of both trades" );
      }
    }
  }
  for ( Block x : a1 )
  {
    for ( Block y : b1 )
    {
      if ( x == y )
      {
        throw parameter_error( "merge: block " + block_to_string( x, v ) +
                               " appears in the second leg of both trades" );
      }
    }
  }
  std::vector<Block> union0( a0.begin(), a0.end() ), union1( a1.begin(), a1.end() );
  union0.insert( union0.end(), b0.begin(), b0.end() );
  union1.insert( union1.end(), b1.begin(), b1.end() );
  std::sort( union0.begin(), union0.end(), lex_less );
  std::sort( union1.begin(), union1.end(), lex_less );
  std::vector<Block> leg0, leg1;
  std::set_difference( union0.begin(), union0.end(), union1.begin(), union1.end(),
                       std::back_inserter( leg0 ), lex_less );
  std::set_difference( union1.begin(), union1.end(), union0.begin(), union0.end(),
                       std::back_inserter( leg1 ), lex_less );
  return make_trade_unchecked( std::move( leg0 ), std::move( leg1 ), v, t );
}

/*! \brief Merges two trades using their stored leg order. */
inline Trade merge( const Trade& a, const Trade& b )
{
  if ( a.v != b.v || a.t != b.t )
  {
    throw parameter_error( "merge requires matching ground set and strength" );
  }
  return merge_legs( a.leg0, a.leg1, b.leg0, b.leg1, a.v, a.t );
}

/*! \brief The uniform block size when all blocks of both legs share one, else nullopt. */
inline std::optional<int> is_design_trade( const Trade& trade )
{
  std::optional<int> k;
  for ( const auto* leg : { &trade.leg0, &trade.leg1 } )
  {
    for ( Block x : *leg )
    {
      const int size = block_size( x );
      if ( !k )
      {
        k = size;
      }
      else if ( *k != size )
      {
        return std::nullopt;
      }
    }
  }
  return k;
}

} /* namespace cubetrades */
