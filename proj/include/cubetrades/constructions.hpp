/*! \file constructions.hpp
  \brief Generators for explicitly constructible trades and unitrades

  Every generator re-verifies its output through the independent
  verification routines instead of trusting its own construction; a
  verification failure therefore raises logic_error, never silently
  returning a bad object.
*/

#pragma once

#include "boolcube.hpp"
#include "errors.hpp"
#include "trades.hpp"
#include "unitrades.hpp"

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cubetrades
{

namespace detail
{

inline void require_disjoint_bases( std::span<const Block> bases, int v )
{
  if ( bases.empty() )
  {
    throw parameter_error( "at least one base block is required" );
  }
  if ( bases.size() > 20 )
  {
    throw capacity_error( "base sets are gated at 20 blocks" );
  }
  Block seen = 0;
  for ( std::size_t j = 0; j < bases.size(); ++j )
  {
    const Block x = bases[j];
    require_block( x, v );
    if ( x == 0 )
    {
      throw parameter_error( "base blocks must be nonzero" );
    }
    if ( ( seen & x ) != 0 )
    {
      for ( std::size_t k = 0; k < j; ++k )
      {
        if ( ( bases[k] & x ) != 0 )
        {
          throw parameter_error( "base blocks must be pairwise disjoint: " +
                                 block_to_string( bases[k], v ) + " and " +
                                 block_to_string( x, v ) + " intersect" );
        }
      }
    }
    seen |= x;
  }
}

/*! \brief Blocks w ^ (xor of chosen bases), split by the parity of the choice. */
inline std::pair<std::vector<Block>, std::vector<Block>> parity_legs(
    std::span<const Block> bases, Block w )
{
  std::vector<Block> even, odd;
  for ( std::uint64_t pick = 0; pick < ( std::uint64_t{ 1 } << bases.size() ); ++pick )
  {
    Block x = w;
    for ( std::size_t j = 0; j < bases.size(); ++j )
    {
      if ( ( pick >> j ) & 1 )
      {
        x ^= bases[j];
      }
    }
    ( std::popcount( pick ) % 2 == 0 ? even : odd ).push_back( x );
  }
  return { std::move( even ), std::move( odd ) };
}

inline Trade reverify( Trade trade )
{
  if ( const auto violation = verify_trade_auto( trade.leg0, trade.leg1, trade.v, trade.t ) )
  {
    throw std::logic_error( "internal error: construction produced an invalid trade: " +
                            violation_to_string( *violation, trade.v ) );
  }
  return trade;
}

} /* namespace detail */

/*! \brief The minimum-volume trade spanned by disjoint bases, translated by w.

  T consists of the 2^(t+1) blocks w XOR (any subset of the bases
  XORed together); the legs split T by the parity of the subset.  The
  result is a trade of strength t = #bases - 1 and volume 2^t.
*/
inline Trade minimum_trade( std::span<const Block> bases, Block w, int v )
{
  require_ground_set( v );
  detail::require_disjoint_bases( bases, v );
  require_block( w, v );
  auto [even, odd] = detail::parity_legs( bases, w );
  return detail::reverify( make_trade_unchecked(
      std::move( even ), std::move( odd ), v, static_cast<int>( bases.size() ) - 1 ) );
}

/*! \brief Merge of two minimum trades with opposite parity pairings.

  The first trade contributes (even, odd) legs and the second (odd,
  even); blocks common to a pair of merged legs cancel.  Both base
  lists must have the same size, so the strengths match.
*/
inline Trade merged_minimum_trades( std::span<const Block> bases_a, Block w_a,
                                    std::span<const Block> bases_b, Block w_b, int v )
{
  require_ground_set( v );
  detail::require_disjoint_bases( bases_a, v );
  detail::require_disjoint_bases( bases_b, v );
  require_block( w_a, v );
  require_block( w_b, v );
  if ( bases_a.size() != bases_b.size() )
  {
    throw parameter_error( "merged minimum trades need equally many bases on both sides" );
  }
  const auto [even_a, odd_a] = detail::parity_legs( bases_a, w_a );
  const auto [even_b, odd_b] = detail::parity_legs( bases_b, w_b );
  return detail::reverify( merge_legs( even_a, odd_a, odd_b, even_b, v,
                                       static_cast<int>( bases_a.size() ) - 1 ) );
}

/*! \brief Trade of volume 2^(t+1) - 2^i from two overlapping interval subcubes.

  The subcubes are spanned by the singleton bases {1..t+1} and
  {1..i} u {t+2..2t+2-i}; their symmetric difference is a unitrade of
  cardinality 2^(t+2) - 2^(i+1), split by merging the parity legs with
  opposite pairings.
*/
inline Trade type_a_trade( int t, int i, int v )
{
  require_ground_set( v );
  if ( t < 1 )
  {
    throw parameter_error( "strength t must be at least 1" );
  }
  if ( i < 0 || i >= t )
  {
    throw parameter_error( "intersection dimension i must satisfy 0 <= i < t" );
  }
  if ( 2 * t + 2 - i > v )
  {
    throw parameter_error( "ground set too small: need 2t+2-i <= v" );
  }
  std::vector<Block> bases_a, bases_b;
  for ( int e = 1; e <= t + 1; ++e )
  {
    bases_a.push_back( Block{ 1 } << ( e - 1 ) );
  }
  for ( int e = 1; e <= i; ++e )
  {
    bases_b.push_back( Block{ 1 } << ( e - 1 ) );
  }
  for ( int e = t + 2; e <= 2 * t + 2 - i; ++e )
  {
    bases_b.push_back( Block{ 1 } << ( e - 1 ) );
  }
  Trade trade = merged_minimum_trades( bases_a, 0, bases_b, 0, v );
  if ( volume( trade ) != ( std::uint64_t{ 1 } << ( t + 1 ) ) - ( std::uint64_t{ 1 } << i ) )
  {
    throw std::logic_error( "internal error: unexpected volume from the subcube merge" );
  }
  return trade;
}

namespace detail
{

/*! \brief Mask of elements from..to inclusive, 1-based. */
inline Block element_range_mask( int from, int to )
{
  if ( to < from )
  {
    return 0;
  }
  const Block upper = to == 64 ? ~Block{ 0 } : ( Block{ 1 } << to ) - 1;
  return upper ^ ( ( Block{ 1 } << ( from - 1 ) ) - 1 );
}

inline void require_enumerable_width( int v )
{
  if ( v > CubeFunction::max_dimension )
  {
    throw capacity_error( "point evaluation is gated at v <= " +
                          std::to_string( CubeFunction::max_dimension ) );
  }
}

} /* namespace detail */

/*! \brief Support of the first canonical form: a prefix times a difference of monomials.

  The function is y_1..y_{r-mu} (y_{r-mu+1}..y_r + y_{r+1}..y_{r+mu});
  its support is the symmetric difference of the supersets of
  {1..r} and of {1..r-mu} u {r+1..r+mu}, two flats sharing a flat, and
  its weight is 2*2^(v-r) - 2^(v-r-mu+1).
*/
inline std::vector<Block> kasami_form_a( int r, int mu, int v )
{
  require_ground_set( v );
  if ( mu < 2 || r < mu || v < r + mu )
  {
    throw parameter_error( "canonical form (A) needs mu >= 2, r >= mu and v >= r+mu" );
  }
  detail::require_enumerable_width( v );
  const Block prefix = detail::element_range_mask( 1, r - mu );
  const Block first = detail::element_range_mask( r - mu + 1, r );
  const Block second = detail::element_range_mask( r + 1, r + mu );
  std::vector<Block> support;
  for ( Block x = 0; x < ( Block{ 1 } << v ); ++x )
  {
    if ( ( x & prefix ) == prefix &&
         ( ( ( x & first ) == first ) != ( ( x & second ) == second ) ) )
    {
      support.push_back( x );
    }
  }
  return canonical_blocks( std::move( support ), v );
}

/*! \brief Support of the second canonical form: a prefix times a nondegenerate quadratic.

  The function is y_1..y_{r-2} (y_{r-1}y_r + y_{r+1}y_{r+2} + ... +
  y_{r+2nu-3}y_{r+2nu-2}), nu quadratic terms in disjoint variable
  pairs; its weight is 2*2^(v-r) - 2^(v-r-nu+1).
*/
inline std::vector<Block> kasami_form_b( int r, int nu, int v )
{
  require_ground_set( v );
  if ( nu < 3 || r < 2 || v < r - 2 + 2 * nu )
  {
    throw parameter_error( "canonical form (B) needs nu >= 3, r >= 2 and v >= r-2+2nu" );
  }
  detail::require_enumerable_width( v );
  const Block prefix = detail::element_range_mask( 1, r - 2 );
  std::vector<std::pair<Block, Block>> pairs;
  pairs.emplace_back( Block{ 1 } << ( r - 2 ), Block{ 1 } << ( r - 1 ) );
  for ( int k = 1; k < nu; ++k )
  {
    pairs.emplace_back( Block{ 1 } << ( r + 2 * k - 2 ), Block{ 1 } << ( r + 2 * k - 1 ) );
  }
  std::vector<Block> support;
  for ( Block x = 0; x < ( Block{ 1 } << v ); ++x )
  {
    if ( ( x & prefix ) != prefix )
    {
      continue;
    }
    bool value = false;
    for ( const auto& [a, b] : pairs )
    {
      value ^= ( ( x & a ) != 0 ) && ( ( x & b ) != 0 );
    }
    if ( value )
    {
      support.push_back( x );
    }
  }
  return canonical_blocks( std::move( support ), v );
}

/*! \brief Two fixed 8-block linear subspaces of the 7-cube.

  Each is a non-splittable unitrade of strength 2; their symmetric
  difference splits into a trade of volume 7 whose blocks all have
  size 4.
*/
inline std::pair<std::vector<Block>, std::vector<Block>> simplex_fixture()
{
  const auto parse = []( std::initializer_list<const char*> strings ) {
    std::vector<Block> out;
    for ( const char* s : strings )
    {
      out.push_back( block_from_string( s ) );
    }
    return canonical_blocks( std::move( out ), 7 );
  };
  return {
      parse( { "0000000", "0011101", "0111010", "1110100", "1101001", "1010011", "0100111",
               "1001110" } ),
      parse( { "0000000", "0010111", "0101110", "1011100", "0111001", "1110010", "1100101",
               "1001011" } ) };
}

/*! \brief Applies the invertible affine point map x -> M x + shift.

  columns[j] is the image of the j-th unit vector (element j+1), so
  the image of x is the XOR of the columns selected by x, plus the
  shift.  The matrix must be invertible; strengths of trades and
  unitrades are preserved under such maps.
*/
inline std::vector<Block> apply_affine_transform(
    std::span<const Block> blocks, std::span<const Block> columns, Block shift, int v )
{
  require_ground_set( v );
  if ( columns.size() != static_cast<std::size_t>( v ) )
  {
    throw parameter_error( "the transform needs exactly v columns" );
  }
  for ( Block c : columns )
  {
    require_block( c, v );
  }
  require_block( shift, v );
  if ( gf2_rank( columns ) != v )
  {
    throw parameter_error( "transform matrix is not invertible" );
  }
  std::vector<Block> out;
  out.reserve( blocks.size() );
  for ( Block x : blocks )
  {
    require_block( x, v );
    Block y = shift;
    for ( int j = 0; j < v; ++j )
    {
      if ( ( x >> j ) & 1 )
      {
        y ^= columns[static_cast<std::size_t>( j )];
      }
    }
    out.push_back( y );
  }
  return canonical_blocks( std::move( out ), v );
}

} /* namespace cubetrades */
