/*! \file unitrades.hpp
  \brief Unitrades and the splittability decision

  A unitrade of strength t is a block set meeting every subcube of
  codimension t in an even number of blocks; equivalently, a set whose
  characteristic function has algebraic degree at most v - t - 1.  Both
  recognitions are implemented and agree on every input.  A unitrade is
  splittable when it can be partitioned into the two legs of a trade of
  strength t; split() decides this exhaustively and returns either the
  trade or a checkable certificate that none exists.
*/

#pragma once

#include "boolcube.hpp"
#include "errors.hpp"
#include "trades.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cubetrades
{

/*! \brief A unitrade candidate with canonically ordered blocks. */
struct Unitrade
{
  int v = 0;
  int t = 0;
  std::vector<Block> blocks;

  bool operator==( const Unitrade& other ) const = default;
};

/*! \brief A subcube meeting the set an odd number of times. */
struct ParityViolation
{
  Subcube subcube;
  std::uint64_t count = 0;

  bool operator==( const ParityViolation& other ) const = default;
};

namespace detail
{

inline void require_unitrade_params( std::span<const Block> blocks, int v, int t )
{
  require_ground_set( v );
  if ( t < 0 || t >= v )
  {
    throw parameter_error( "unitrade strength must satisfy 0 <= t < v, got " + std::to_string( t ) );
  }
  for ( Block x : blocks )
  {
    require_block( x, v );
  }
}

inline void require_distinct_blocks( std::span<const Block> blocks )
{
  std::vector<Block> sorted( blocks.begin(), blocks.end() );
  std::sort( sorted.begin(), sorted.end() );
  if ( std::adjacent_find( sorted.begin(), sorted.end() ) != sorted.end() )
  {
    throw parameter_error( "block set contains a repeated block" );
  }
}

/*! \brief Calls fn(subcube, members) for every codim-t subcube meeting the blocks.

  Subcubes are visited with fixed-position masks ascending and fixed
  values ascending; members is the set of indices into blocks.  fn
  returns false to stop early.
*/
template<typename Fn>
void for_each_meeting_subcube( std::span<const Block> blocks, int v, int t, Fn&& fn )
{
  std::vector<std::pair<Block, std::size_t>> values;
  values.reserve( blocks.size() );
  bool stop = false;
  for_each_combination( v, t, [&]( Block mask ) {
    if ( stop )
    {
      return;
    }
    values.clear();
    for ( std::size_t i = 0; i < blocks.size(); ++i )
    {
      values.emplace_back( blocks[i] & mask, i );
    }
    std::sort( values.begin(), values.end() );
    std::size_t i = 0;
    while ( i < values.size() && !stop )
    {
      const Block value = values[i].first;
      std::vector<std::size_t> members;
      for ( ; i < values.size() && values[i].first == value; ++i )
      {
        members.push_back( values[i].second );
      }
      stop = !fn( Subcube{ mask, value }, members );
    }
  } );
}

} /* namespace detail */

/*! \brief Subcubes of codimension t with odd intersection, in enumeration order. */
inline std::vector<ParityViolation> unitrade_parity_violations(
    std::span<const Block> blocks, int v, int t, std::size_t max_violations )
{
  detail::require_unitrade_params( blocks, v, t );
  detail::require_distinct_blocks( blocks );
  std::vector<ParityViolation> out;
  if ( max_violations == 0 || blocks.empty() )
  {
    return out;
  }
  if ( detail::saturating_mul( binomial( v, t ), blocks.size() ) > ( std::uint64_t{ 1 } << 27 ) )
  {
    throw capacity_error( "parity verification exceeds the 2^27 work gate" );
  }
  detail::for_each_meeting_subcube( blocks, v, t, [&]( const Subcube& s, const std::vector<std::size_t>& members ) {
    if ( members.size() % 2 != 0 )
    {
      out.push_back( { s, members.size() } );
    }
    return out.size() < max_violations;
  } );
  return out;
}

inline std::optional<ParityViolation> unitrade_parity_violation(
    std::span<const Block> blocks, int v, int t )
{
  auto violations = unitrade_parity_violations( blocks, v, t, 1 );
  if ( violations.empty() )
  {
    return std::nullopt;
  }
  return violations.front();
}

inline bool is_unitrade_parity( std::span<const Block> blocks, int v, int t )
{
  return !unitrade_parity_violation( blocks, v, t ).has_value();
}

/*! \brief Recognition through the algebraic degree of the characteristic function. */
inline bool is_unitrade_anf( std::span<const Block> blocks, int v, int t )
{
  detail::require_unitrade_params( blocks, v, t );
  if ( blocks.empty() )
  {
    return true;
  }
  return anf( blocks, v ).degree <= v - t - 1;
}

/*! \brief Dispatches to whichever recognition is cheaper for the given sizes. */
inline bool is_unitrade( std::span<const Block> blocks, int v, int t )
{
  detail::require_unitrade_params( blocks, v, t );
  const std::uint64_t parity_cost = detail::saturating_mul( binomial( v, t ), blocks.size() );
  if ( v <= CubeFunction::max_dimension && ( std::uint64_t{ 1 } << v ) < parity_cost )
  {
    return is_unitrade_anf( blocks, v, t );
  }
  return is_unitrade_parity( blocks, v, t );
}

inline Unitrade make_unitrade_unchecked( std::vector<Block> blocks, int v, int t )
{
  detail::require_unitrade_params( blocks, v, t );
  Unitrade u;
  u.v = v;
  u.t = t;
  u.blocks = canonical_blocks( std::move( blocks ), v );
  return u;
}

/*! \brief Builds a verified unitrade; the error names an odd subcube when feasible. */
inline Unitrade make_unitrade( std::vector<Block> blocks, int v, int t )
{
  Unitrade u = make_unitrade_unchecked( std::move( blocks ), v, t );
  const std::uint64_t parity_cost = detail::saturating_mul( binomial( v, t ), u.blocks.size() );
  if ( parity_cost <= ( std::uint64_t{ 1 } << 27 ) )
  {
    if ( const auto violation = unitrade_parity_violation( u.blocks, v, t ) )
    {
      throw parameter_error( "not a unitrade of strength " + std::to_string( t ) + ": subcube " +
                             subcube_to_string( violation->subcube, v ) + " meets the set " +
                             std::to_string( violation->count ) + " times" );
    }
  }
  else if ( !is_unitrade_anf( u.blocks, v, t ) )
  {
    throw parameter_error( "not a unitrade of strength " + std::to_string( t ) +
                           ": characteristic function has degree above " + std::to_string( v - t - 1 ) );
  }
  return u;
}

inline std::uint64_t cardinality( const Unitrade& u )
{
  return u.blocks.size();
}

/*! \brief Dimension of the affine span: rank of {x XOR x0} for any x0 in the set. */
inline int affine_rank( std::span<const Block> blocks, int v )
{
  require_ground_set( v );
  if ( blocks.empty() )
  {
    throw parameter_error( "affine rank of the empty set is undefined" );
  }
  Gf2Span span;
  for ( Block x : blocks )
  {
    require_block( x, v );
    span.insert( x ^ blocks.front() );
  }
  return span.rank();
}

/* --- splitting ------------------------------------------------------- */

enum class SplitOutcome
{
  split,              /* a trade with T0 u T1 = T was found */
  odd_cycle,          /* the must-differ graph has an odd cycle */
  unbalanced_subcube, /* a subcube inside one component cannot balance */
  exhausted           /* the full flip search found no balanced assignment */
};

inline std::string to_string( SplitOutcome outcome )
{
  switch ( outcome )
  {
  case SplitOutcome::split:
    return "split";
  case SplitOutcome::odd_cycle:
    return "odd-cycle";
  case SplitOutcome::unbalanced_subcube:
    return "unbalanced-subcube";
  case SplitOutcome::exhausted:
  default:
    return "exhausted";
  }
}

/*! \brief Result of the splittability decision.

  Exactly one certificate field is populated, matching the outcome:
  the trade for split, an odd-length block cycle whose consecutive
  members (cyclically) are forced into different legs, or the subcube
  that no component orientation can balance.  nodes counts assignments
  tried by the flip search; the search is exhaustive, so exhausted is a
  proof that no split exists.
*/
struct SplitResult
{
  SplitOutcome outcome = SplitOutcome::exhausted;
  std::optional<Trade> trade;
  std::vector<Block> cycle;
  std::optional<Subcube> subcube;
  std::uint64_t nodes = 0;
};

inline constexpr int split_max_blocks = 64;
inline constexpr std::uint64_t split_default_node_limit = std::uint64_t{ 1 } << 22;

namespace detail
{

/*! \brief Reconstructs the odd cycle closed by the non-tree edge (u, w). */
inline std::vector<std::size_t> odd_cycle_through(
    const std::vector<int>& parent, std::size_t u, std::size_t w )
{
  const auto path_to_root = [&]( std::size_t x ) {
    std::vector<std::size_t> path{ x };
    while ( parent[path.back()] >= 0 )
    {
      path.push_back( static_cast<std::size_t>( parent[path.back()] ) );
    }
    return path;
  };
  const auto pu = path_to_root( u ), pw = path_to_root( w );
  std::size_t common = 0;
  while ( common < pu.size() && common < pw.size() &&
          pu[pu.size() - 1 - common] == pw[pw.size() - 1 - common] )
  {
    ++common;
  }
  /* u .. lca, then back down to w; the closing edge w-u makes it a cycle */
  std::vector<std::size_t> cycle( pu.begin(), pu.end() - static_cast<std::ptrdiff_t>( common - 1 ) );
  for ( std::size_t j = pw.size() - common; j-- > 0; )
  {
    cycle.push_back( pw[j] );
  }
  return cycle;
}

} /* namespace detail */

/*! \brief Decides splittability of a unitrade of strength t, exhaustively.

  Every codim-t subcube meeting T in exactly two blocks forces those
  blocks into different legs; 2-coloring the resulting graph detects
  odd cycles and fixes each component up to a flip.  Components are
  then flipped by backtracking (largest first, ties by their
  lexicographically smallest block), pruning as soon as a subcube has
  more than half its blocks in one leg.  The lexicographically
  smallest block of T is pinned to leg 0.
*/
inline SplitResult split( std::span<const Block> input, int v, int t,
                          std::uint64_t node_limit = split_default_node_limit )
{
  detail::require_unitrade_params( input, v, t );
  const std::vector<Block> blocks = canonical_blocks( { input.begin(), input.end() }, v );
  const std::size_t n = blocks.size();
  if ( n > split_max_blocks )
  {
    throw capacity_error( "split is gated at " + std::to_string( split_max_blocks ) + " blocks" );
  }
  SplitResult result;
  if ( n == 0 )
  {
    result.outcome = SplitOutcome::split;
    result.trade = make_trade_unchecked( {}, {}, v, t );
    return result;
  }
  if ( detail::saturating_mul( binomial( v, t ), n ) > ( std::uint64_t{ 1 } << 22 ) )
  {
    throw capacity_error( "split incidence work exceeds the 2^22 gate" );
  }

  /* incidence of subcubes meeting T, as index masks; parity checked on the way */
  struct Entry
  {
    Subcube subcube;
    std::uint64_t members;
  };
  std::vector<Entry> entries;
  std::optional<std::string> odd_subcube_message;
  detail::for_each_meeting_subcube( blocks, v, t, [&]( const Subcube& s, const std::vector<std::size_t>& members ) {
    if ( members.size() % 2 != 0 )
    {
      odd_subcube_message = "not a unitrade of strength " + std::to_string( t ) + ": subcube " +
                            subcube_to_string( s, v ) + " meets the set " +
                            std::to_string( members.size() ) + " times";
      return false;
    }
    std::uint64_t mask = 0;
    for ( std::size_t i : members )
    {
      mask |= std::uint64_t{ 1 } << i;
    }
    entries.push_back( { s, mask } );
    return true;
  } );
  if ( odd_subcube_message )
  {
    throw parameter_error( *odd_subcube_message );
  }

  /* must-differ graph and 2-coloring */
  std::array<std::uint64_t, split_max_blocks> adj{};
  for ( const Entry& e : entries )
  {
    if ( std::popcount( e.members ) == 2 )
    {
      const auto i = static_cast<std::size_t>( std::countr_zero( e.members ) );
      const auto j = static_cast<std::size_t>( 63 - std::countl_zero( e.members ) );
      adj[i] |= std::uint64_t{ 1 } << j;
      adj[j] |= std::uint64_t{ 1 } << i;
    }
  }
  std::vector<int> color( n, -1 ), comp( n, -1 ), parent( n, -1 );
  int component_count = 0;
  for ( std::size_t s = 0; s < n; ++s )
  {
    if ( comp[s] >= 0 )
    {
      continue;
    }
    comp[s] = component_count;
    color[s] = 0;
    std::vector<std::size_t> queue{ s };
    for ( std::size_t qi = 0; qi < queue.size(); ++qi )
    {
      const std::size_t u = queue[qi];
      for ( std::uint64_t m = adj[u]; m != 0; m &= m - 1 )
      {
        const auto w = static_cast<std::size_t>( std::countr_zero( m ) );
        if ( comp[w] < 0 )
        {
          comp[w] = component_count;
          color[w] = color[u] ^ 1;
          parent[w] = static_cast<int>( u );
          queue.push_back( w );
        }
        else if ( color[w] == color[u] )
        {
          result.outcome = SplitOutcome::odd_cycle;
          for ( std::size_t i : detail::odd_cycle_through( parent, u, w ) )
          {
            result.cycle.push_back( blocks[i] );
          }
          return result;
        }
      }
    }
    ++component_count;
  }

  /* subcubes inside one component are balanced or hopeless regardless of flips */
  std::uint64_t color1_mask = 0;
  for ( std::size_t i = 0; i < n; ++i )
  {
    if ( color[i] == 1 )
    {
      color1_mask |= std::uint64_t{ 1 } << i;
    }
  }
  std::vector<std::uint64_t> comp_mask( static_cast<std::size_t>( component_count ), 0 );
  for ( std::size_t i = 0; i < n; ++i )
  {
    comp_mask[static_cast<std::size_t>( comp[i] )] |= std::uint64_t{ 1 } << i;
  }
  struct Constraint
  {
    std::uint64_t members;
    int half;
  };
  std::vector<Constraint> constraints; /* entries spanning several components */
  for ( const Entry& e : entries )
  {
    const std::size_t first = static_cast<std::size_t>( std::countr_zero( e.members ) );
    const std::uint64_t inside = e.members & comp_mask[static_cast<std::size_t>( comp[first] )];
    if ( inside == e.members )
    {
      const int ones = std::popcount( e.members & color1_mask );
      if ( 2 * ones != std::popcount( e.members ) )
      {
        result.outcome = SplitOutcome::unbalanced_subcube;
        result.subcube = e.subcube;
        return result;
      }
    }
    else
    {
      constraints.push_back( { e.members, std::popcount( e.members ) / 2 } );
    }
  }

  /* backtracking over component flips; component of block 0 is pinned */
  std::vector<int> order( static_cast<std::size_t>( component_count ) );
  for ( int c = 0; c < component_count; ++c )
  {
    order[static_cast<std::size_t>( c )] = c;
  }
  std::sort( order.begin(), order.end(), [&]( int a, int b ) {
    const int size_a = std::popcount( comp_mask[static_cast<std::size_t>( a )] );
    const int size_b = std::popcount( comp_mask[static_cast<std::size_t>( b )] );
    if ( size_a != size_b )
    {
      return size_a > size_b;
    }
    return std::countr_zero( comp_mask[static_cast<std::size_t>( a )] ) <
           std::countr_zero( comp_mask[static_cast<std::size_t>( b )] );
  } );
  /* per component and constraint: members going to leg 0 under flip 0 / flip 1 */
  struct Touch
  {
    std::size_t constraint;
    int to_leg0_unflipped;
    int to_leg0_flipped;
    int total;
  };
  std::vector<std::vector<Touch>> touches( static_cast<std::size_t>( component_count ) );
  for ( std::size_t e = 0; e < constraints.size(); ++e )
  {
    for ( int c = 0; c < component_count; ++c )
    {
      const std::uint64_t inside = constraints[e].members & comp_mask[static_cast<std::size_t>( c )];
      if ( inside != 0 )
      {
        const int ones = std::popcount( inside & color1_mask );
        const int total = std::popcount( inside );
        touches[static_cast<std::size_t>( c )].push_back( { e, total - ones, ones, total } );
      }
    }
  }
  std::vector<int> leg0_count( constraints.size(), 0 ), assigned( constraints.size(), 0 );
  std::vector<int> flip( static_cast<std::size_t>( component_count ), 0 );
  const int pinned = comp[0]; /* block 0 has color 0, so flip 0 keeps it in leg 0 */

  const auto apply = [&]( int c, int f, int direction ) {
    bool feasible = true;
    for ( const Touch& touch : touches[static_cast<std::size_t>( c )] )
    {
      leg0_count[touch.constraint] += direction * ( f ? touch.to_leg0_flipped : touch.to_leg0_unflipped );
      assigned[touch.constraint] += direction * touch.total;
      const int half = constraints[touch.constraint].half;
      if ( leg0_count[touch.constraint] > half ||
           assigned[touch.constraint] - leg0_count[touch.constraint] > half )
      {
        feasible = false;
      }
    }
    return feasible;
  };

  std::uint64_t nodes = 0;
  bool found = false;
  const auto dfs = [&]( auto&& self, std::size_t depth ) -> void {
    if ( found )
    {
      return;
    }
    if ( depth == order.size() )
    {
      found = true;
      return;
    }
    const int c = order[depth];
    for ( int f = 0; f < 2 && !found; ++f )
    {
      if ( c == pinned && f == 1 )
      {
        continue;
      }
      if ( ++nodes > node_limit )
      {
        throw capacity_error( "split search exceeded the node limit of " + std::to_string( node_limit ) );
      }
      flip[static_cast<std::size_t>( c )] = f;
      const bool feasible = apply( c, f, 1 );
      if ( feasible )
      {
        self( self, depth + 1 );
      }
      if ( !found )
      {
        apply( c, f, -1 );
      }
    }
  };
  dfs( dfs, 0 );
  result.nodes = nodes;
  if ( !found )
  {
    result.outcome = SplitOutcome::exhausted;
    return result;
  }

  std::vector<Block> leg0, leg1;
  for ( std::size_t i = 0; i < n; ++i )
  {
    ( ( color[i] ^ flip[static_cast<std::size_t>( comp[i] )] ) == 0 ? leg0 : leg1 ).push_back( blocks[i] );
  }
  try
  {
    result.trade = make_trade( std::move( leg0 ), std::move( leg1 ), v, t );
  }
  catch ( const parameter_error& e )
  {
    throw std::logic_error( std::string{ "internal error: split produced an invalid trade: " } + e.what() );
  }
  result.outcome = SplitOutcome::split;
  return result;
}

inline SplitResult split( const Unitrade& u, std::uint64_t node_limit = split_default_node_limit )
{
  return split( u.blocks, u.v, u.t, node_limit );
}

/* --- splitting affine subspaces by a disjoint basis ------------------- */

/*! \brief Certificate that an affine subspace splits: T = w XOR span(basis). */
struct AffineSplitBasis
{
  Block translation = 0;
  std::vector<Block> basis;

  bool operator==( const AffineSplitBasis& other ) const = default;
};

/*! \brief Disjoint-basis criterion for splitting an affine subspace.

  Translates T by its lexicographically smallest element w; the result
  L is the same linear subspace for every choice in T.  T splits as a
  trade of strength dim(T)-1 exactly when the minimal-by-inclusion
  nonzero elements of L are pairwise disjoint, in which case they form
  a basis and the legs are the even and odd basis combinations XOR w.
*/
inline std::optional<AffineSplitBasis> affine_split_basis( std::span<const Block> input, int v )
{
  require_ground_set( v );
  if ( input.empty() )
  {
    throw parameter_error( "affine subspace must be nonempty" );
  }
  if ( input.size() > ( std::size_t{ 1 } << 12 ) )
  {
    throw capacity_error( "affine split analysis is gated at 2^12 blocks" );
  }
  const std::vector<Block> blocks = canonical_blocks( { input.begin(), input.end() }, v );
  const Block w = blocks.front();
  std::vector<Block> shifted;
  shifted.reserve( blocks.size() );
  Gf2Span span;
  for ( Block x : blocks )
  {
    shifted.push_back( x ^ w );
    span.insert( x ^ w );
  }
  if ( ( std::uint64_t{ 1 } << span.rank() ) != blocks.size() )
  {
    throw parameter_error( "block set is not an affine subspace" );
  }
  std::vector<Block> minimal;
  for ( Block l : shifted )
  {
    if ( l == 0 )
    {
      continue;
    }
    bool is_minimal = true;
    for ( Block m : shifted )
    {
      if ( m != 0 && m != l && ( m & l ) == m )
      {
        is_minimal = false;
        break;
      }
    }
    if ( is_minimal )
    {
      minimal.push_back( l );
    }
  }
  for ( std::size_t i = 0; i < minimal.size(); ++i )
  {
    for ( std::size_t j = i + 1; j < minimal.size(); ++j )
    {
      if ( ( minimal[i] & minimal[j] ) != 0 )
      {
        return std::nullopt;
      }
    }
  }
  if ( minimal.size() != static_cast<std::size_t>( span.rank() ) )
  {
    return std::nullopt;
  }
  std::sort( minimal.begin(), minimal.end(), lex_less );
  return AffineSplitBasis{ w, std::move( minimal ) };
}

} /* namespace cubetrades */
