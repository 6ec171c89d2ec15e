/*! \file boolcube.hpp
  \brief Blocks, subcubes and transforms over the Boolean v-cube

  A block is a subset of the ground set {1, ..., v}, stored as a 64-bit
  mask with bit i set iff element i + 1 belongs to the subset.  Printed
  bitstrings follow the x1 x2 ... xv convention: the first character is
  element 1, so {2, 4, 5} with v = 7 prints as "0101100".  Lexicographic
  comparisons always refer to that printed form.
*/

#pragma once

#include "errors.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cubetrades
{

using Block = std::uint64_t;

inline constexpr int max_ground_set = 64;

/*! \brief Mask covering the v low bit positions. */
inline constexpr Block width_mask( int v )
{
  return v >= 64 ? ~Block{ 0 } : ( ( Block{ 1 } << v ) - 1 );
}

inline void require_ground_set( int v )
{
  if ( v < 1 || v > max_ground_set )
  {
    throw parameter_error( "ground set size must be between 1 and 64, got " + std::to_string( v ) );
  }
}

inline void require_block( Block x, int v )
{
  if ( ( x & ~width_mask( v ) ) != 0 )
  {
    throw parameter_error( "block has elements outside the ground set of size " + std::to_string( v ) );
  }
}

inline int block_size( Block x )
{
  return std::popcount( x );
}

/*! \brief Lexicographic order of the printed bitstrings (element 1 first). */
inline bool lex_less( Block a, Block b )
{
  if ( a == b )
  {
    return false;
  }
  const int i = std::countr_zero( a ^ b );
  return ( ( a >> i ) & 1 ) == 0;
}

inline std::string block_to_string( Block x, int v )
{
  require_ground_set( v );
  require_block( x, v );
  std::string s( static_cast<std::size_t>( v ), '0' );
  for ( int i = 0; i < v; ++i )
  {
    if ( ( x >> i ) & 1 )
    {
      s[static_cast<std::size_t>( i )] = '1';
    }
  }
  return s;
}

inline Block block_from_string( std::string_view s )
{
  if ( s.empty() || s.size() > static_cast<std::size_t>( max_ground_set ) )
  {
    throw parameter_error( "block string must have between 1 and 64 characters" );
  }
  Block x = 0;
  for ( std::size_t i = 0; i < s.size(); ++i )
  {
    if ( s[i] == '1' )
    {
      x |= Block{ 1 } << i;
    }
    else if ( s[i] != '0' )
    {
      throw parameter_error( "block string may contain only '0' and '1'" );
    }
  }
  return x;
}

/*! \brief Validates widths, sorts lexicographically and rejects repeated blocks. */
inline std::vector<Block> canonical_blocks( std::vector<Block> blocks, int v )
{
  require_ground_set( v );
  for ( Block x : blocks )
  {
    require_block( x, v );
  }
  std::sort( blocks.begin(), blocks.end(), lex_less );
  if ( std::adjacent_find( blocks.begin(), blocks.end() ) != blocks.end() )
  {
    throw parameter_error( "block set contains a repeated block" );
  }
  return blocks;
}

/*! \brief Exact binomial coefficient for n <= 64. */
inline std::uint64_t binomial( int n, int k )
{
  if ( k < 0 || k > n )
  {
    return 0;
  }
  k = std::min( k, n - k );
  unsigned __int128 r = 1;
  for ( int i = 1; i <= k; ++i )
  {
    r = r * static_cast<unsigned>( n - k + i ) / static_cast<unsigned>( i );
  }
  return static_cast<std::uint64_t>( r );
}

/*! \brief Sum of binomial(n, j) for j = 0..k, saturating at UINT64_MAX. */
inline std::uint64_t binomial_sum( int n, int k )
{
  unsigned __int128 total = 0;
  for ( int j = 0; j <= std::min( k, n ); ++j )
  {
    total += binomial( n, j );
    if ( total > ~std::uint64_t{ 0 } )
    {
      return ~std::uint64_t{ 0 };
    }
  }
  return static_cast<std::uint64_t>( total );
}

/*! \brief Calls fn with every k-subset of the low v positions, masks ascending. */
template<typename Fn>
void for_each_combination( int v, int k, Fn&& fn )
{
  if ( k < 0 || k > v )
  {
    return;
  }
  if ( k == 0 )
  {
    fn( Block{ 0 } );
    return;
  }
  const Block last = ( width_mask( v ) >> ( v - k ) ) << ( v - k );
  Block m = width_mask( k );
  while ( true )
  {
    fn( m );
    if ( m == last )
    {
      break;
    }
    const Block u = m & ( ~m + 1 );
    const Block y = m + u;
    m = y | ( ( ( m ^ y ) >> 2 ) / u );
  }
}

/*! \brief Spreads the low bits of compact onto the set positions of mask, ascending. */
inline Block deposit_bits( Block compact, Block mask )
{
  Block out = 0;
  while ( mask != 0 )
  {
    const Block low = mask & ( ~mask + 1 );
    if ( compact & 1 )
    {
      out |= low;
    }
    compact >>= 1;
    mask ^= low;
  }
  return out;
}

/*! \brief Subcube given by fixed coordinates: {x : x agrees with fixed_values on fixed_mask}. */
struct Subcube
{
  Block fixed_mask = 0;
  Block fixed_values = 0;

  bool operator==( const Subcube& other ) const = default;
};

inline bool subcube_contains( const Subcube& s, Block x )
{
  return ( x & s.fixed_mask ) == s.fixed_values;
}

inline int subcube_dimension( const Subcube& s, int v )
{
  return v - std::popcount( s.fixed_mask );
}

inline std::string subcube_to_string( const Subcube& s, int v )
{
  if ( s.fixed_mask == 0 )
  {
    return "(full cube)";
  }
  std::string out;
  for ( int i = 0; i < v; ++i )
  {
    if ( ( s.fixed_mask >> i ) & 1 )
    {
      if ( !out.empty() )
      {
        out += ',';
      }
      out += 'x';
      out += std::to_string( i + 1 );
      out += '=';
      out += ( ( s.fixed_values >> i ) & 1 ) ? '1' : '0';
    }
  }
  return out;
}

/*! \brief Calls fn with every subcube of the given codimension.

  Order: fixed-position masks ascending, and for each mask the fixed
  values ascending.  There are binomial(v, codim) * 2^codim subcubes.
*/
template<typename Fn>
void for_each_subcube( int v, int codim, Fn&& fn )
{
  for_each_combination( v, codim, [&]( Block mask ) {
    const std::uint64_t value_count = std::uint64_t{ 1 } << codim;
    for ( std::uint64_t c = 0; c < value_count; ++c )
    {
      fn( Subcube{ mask, deposit_bits( c, mask ) } );
    }
  } );
}

inline std::vector<Subcube> enumerate_subcubes( int v, int codim )
{
  require_ground_set( v );
  if ( codim < 0 || codim > v )
  {
    throw parameter_error( "subcube codimension must be between 0 and v" );
  }
  const std::uint64_t combos = binomial( v, codim );
  if ( codim > 24 || combos > ( std::uint64_t{ 1 } << ( 24 - codim ) ) )
  {
    throw capacity_error( "subcube enumeration exceeds the 2^24 output gate" );
  }
  const std::uint64_t count = combos << codim;
  std::vector<Subcube> out;
  out.reserve( count );
  for_each_subcube( v, codim, [&]( const Subcube& s ) { out.push_back( s ); } );
  return out;
}

using SupersetCounts = std::unordered_map<Block, std::uint64_t>;

/*! \brief Counts blocks containing each subset s with |s| <= t by direct scan. */
inline SupersetCounts superset_counts_direct( std::span<const Block> blocks, int t, int v )
{
  require_ground_set( v );
  if ( t < 0 || t > v )
  {
    throw parameter_error( "subset size bound must be between 0 and v" );
  }
  const std::uint64_t entries = binomial_sum( v, t );
  if ( entries > ( std::uint64_t{ 1 } << 24 ) )
  {
    throw capacity_error( "superset counting exceeds the 2^24 subset gate" );
  }
  if ( blocks.size() * entries > ( std::uint64_t{ 1 } << 27 ) )
  {
    throw capacity_error( "direct superset counting exceeds the 2^27 work gate" );
  }
  for ( Block x : blocks )
  {
    require_block( x, v );
  }
  SupersetCounts counts;
  counts.reserve( entries );
  for ( int size = 0; size <= t; ++size )
  {
    for_each_combination( v, size, [&]( Block s ) {
      std::uint64_t c = 0;
      for ( Block x : blocks )
      {
        if ( ( x & s ) == s )
        {
          ++c;
        }
      }
      counts.emplace( s, c );
    } );
  }
  return counts;
}

inline constexpr int superset_zeta_max_dimension = 22;

/*! \brief Same result as superset_counts_direct via a superset-sum transform over the cube. */
inline SupersetCounts superset_counts_zeta( std::span<const Block> blocks, int t, int v )
{
  require_ground_set( v );
  if ( t < 0 || t > v )
  {
    throw parameter_error( "subset size bound must be between 0 and v" );
  }
  if ( v > superset_zeta_max_dimension )
  {
    throw capacity_error( "superset-sum transform is gated at v <= 22" );
  }
  std::vector<std::uint32_t> f( std::size_t{ 1 } << v, 0 );
  for ( Block x : blocks )
  {
    require_block( x, v );
    if ( ++f[x] > 1 )
    {
      throw parameter_error( "block set contains a repeated block" );
    }
  }
  const std::uint64_t points = std::uint64_t{ 1 } << v;
  for ( int j = 0; j < v; ++j )
  {
    const std::uint64_t bit = std::uint64_t{ 1 } << j;
    for ( std::uint64_t x = 0; x < points; ++x )
    {
      if ( ( x & bit ) == 0 )
      {
        f[x] += f[x | bit];
      }
    }
  }
  SupersetCounts counts;
  counts.reserve( binomial_sum( v, t ) );
  for ( int size = 0; size <= t; ++size )
  {
    for_each_combination( v, size, [&]( Block s ) { counts.emplace( s, f[s] ); } );
  }
  return counts;
}

/*! \brief Map from every subset s with |s| <= t to the number of blocks containing s.

  Dispatches to the direct scan when blocks.size() * binomial_sum(v, t)
  stays below 2^20, and to the superset-sum transform otherwise.  Both
  strategies are exposed separately and agree on every input.
*/
inline SupersetCounts superset_counts( std::span<const Block> blocks, int t, int v )
{
  require_ground_set( v );
  if ( t < 0 || t > v )
  {
    throw parameter_error( "subset size bound must be between 0 and v" );
  }
  const std::uint64_t direct_work = blocks.size() * binomial_sum( v, t );
  if ( direct_work < ( std::uint64_t{ 1 } << 20 ) || v > superset_zeta_max_dimension )
  {
    return superset_counts_direct( blocks, t, v );
  }
  return superset_counts_zeta( blocks, t, v );
}

/*! \brief Boolean function on the v-cube, one bit per point, packed 64 per word.

  Bit x of the array is the value at the point whose block mask is x.
  Dimensions are gated at 26 (8 MiB per function).
*/
class CubeFunction
{
public:
  static constexpr int max_dimension = 26;

  CubeFunction() = default;

  explicit CubeFunction( int v ) : v_( v )
  {
    if ( v < 0 || v > max_dimension )
    {
      throw capacity_error( "cube functions are gated at dimension 26, got " + std::to_string( v ) );
    }
    words_.assign( word_count( v ), 0 );
  }

  static CubeFunction from_support( int v, std::span<const Block> support )
  {
    CubeFunction f( v );
    for ( Block x : support )
    {
      require_block( x, v );
      f.words_[x >> 6] ^= std::uint64_t{ 1 } << ( x & 63 );
    }
    return f;
  }

  int dimension() const { return v_; }

  std::uint64_t point_count() const { return std::uint64_t{ 1 } << v_; }

  bool test( Block x ) const { return ( words_[x >> 6] >> ( x & 63 ) ) & 1; }

  void set( Block x, bool value )
  {
    const std::uint64_t bit = std::uint64_t{ 1 } << ( x & 63 );
    if ( value )
    {
      words_[x >> 6] |= bit;
    }
    else
    {
      words_[x >> 6] &= ~bit;
    }
  }

  void flip( Block x ) { words_[x >> 6] ^= std::uint64_t{ 1 } << ( x & 63 ); }

  std::uint64_t weight() const
  {
    std::uint64_t w = 0;
    for ( std::uint64_t word : words_ )
    {
      w += static_cast<std::uint64_t>( std::popcount( word ) );
    }
    return w;
  }

  CubeFunction& operator^=( const CubeFunction& other )
  {
    for ( std::size_t i = 0; i < words_.size(); ++i )
    {
      words_[i] ^= other.words_[i];
    }
    return *this;
  }

  /*! \brief popcount of the pointwise AND, without materializing it. */
  std::uint64_t and_weight( const CubeFunction& other ) const
  {
    std::uint64_t w = 0;
    for ( std::size_t i = 0; i < words_.size(); ++i )
    {
      w += static_cast<std::uint64_t>( std::popcount( words_[i] & other.words_[i] ) );
    }
    return w;
  }

  /*! \brief XORs other into this and returns the AND weight before the update. */
  std::uint64_t xor_accumulate( const CubeFunction& other )
  {
    std::uint64_t w = 0;
    for ( std::size_t i = 0; i < words_.size(); ++i )
    {
      w += static_cast<std::uint64_t>( std::popcount( words_[i] & other.words_[i] ) );
      words_[i] ^= other.words_[i];
    }
    return w;
  }

  /*! \brief In-place subset-XOR butterfly; its own inverse over GF(2).

    Maps point values to algebraic normal form coefficients and back:
    after the transform, bit m is the XOR of the original bits over all
    subsets of m.
  */
  void mobius_transform()
  {
    static constexpr std::uint64_t lower_half[6] = {
        0x5555555555555555ull, 0x3333333333333333ull, 0x0f0f0f0f0f0f0f0full,
        0x00ff00ff00ff00ffull, 0x0000ffff0000ffffull, 0x00000000ffffffffull };
    const int in_word = std::min( v_, 6 );
    for ( int j = 0; j < in_word; ++j )
    {
      for ( auto& w : words_ )
      {
        w ^= ( w & lower_half[j] ) << ( 1u << j );
      }
    }
    for ( int j = 6; j < v_; ++j )
    {
      const std::size_t stride = std::size_t{ 1 } << ( j - 6 );
      for ( std::size_t base = 0; base < words_.size(); base += 2 * stride )
      {
        for ( std::size_t k = 0; k < stride; ++k )
        {
          words_[base + stride + k] ^= words_[base + k];
        }
      }
    }
  }

  /*! \brief Set points in ascending mask order. */
  std::vector<Block> support() const
  {
    std::vector<Block> out;
    for ( std::size_t i = 0; i < words_.size(); ++i )
    {
      std::uint64_t word = words_[i];
      while ( word != 0 )
      {
        const int b = std::countr_zero( word );
        out.push_back( ( static_cast<Block>( i ) << 6 ) | static_cast<Block>( b ) );
        word &= word - 1;
      }
    }
    return out;
  }

  /*! \brief Largest popcount over set positions, -1 when the function is zero. */
  int max_set_popcount() const
  {
    int best = -1;
    for ( std::size_t i = 0; i < words_.size(); ++i )
    {
      std::uint64_t word = words_[i];
      while ( word != 0 )
      {
        const int b = std::countr_zero( word );
        best = std::max( best, std::popcount( ( static_cast<Block>( i ) << 6 ) | static_cast<Block>( b ) ) );
        word &= word - 1;
      }
    }
    return best;
  }

  bool operator==( const CubeFunction& other ) const = default;

private:
  static std::size_t word_count( int v ) { return v <= 6 ? 1 : ( std::size_t{ 1 } << ( v - 6 ) ); }

  int v_ = 0;
  std::vector<std::uint64_t> words_;
};

/*! \brief Algebraic normal form: XOR of monomials, one coefficient bit per monomial mask. */
struct AnfPolynomial
{
  CubeFunction coefficients;
  int degree = -1; /* -1 encodes the zero polynomial */

  int dimension() const { return coefficients.dimension(); }

  bool coefficient( Block monomial ) const { return coefficients.test( monomial ); }

  std::vector<Block> monomials() const { return coefficients.support(); }

  /*! \brief Evaluates by XOR over the coefficient bits of all submasks of x. */
  bool evaluate( Block x ) const
  {
    bool value = false;
    Block m = x;
    while ( true )
    {
      value ^= coefficients.test( m );
      if ( m == 0 )
      {
        break;
      }
      m = ( m - 1 ) & x;
    }
    return value;
  }

  /*! \brief Inverse transform back to the point-value table. */
  CubeFunction truth_table() const
  {
    CubeFunction f = coefficients;
    f.mobius_transform();
    return f;
  }
};

inline AnfPolynomial anf( const CubeFunction& f )
{
  AnfPolynomial p{ f, -1 };
  p.coefficients.mobius_transform();
  p.degree = p.coefficients.max_set_popcount();
  return p;
}

/*! \brief Algebraic normal form of the characteristic function of a support set. */
inline AnfPolynomial anf( std::span<const Block> support, int v )
{
  require_ground_set( v );
  if ( v > CubeFunction::max_dimension )
  {
    throw capacity_error( "normal-form transforms are gated at v <= 26" );
  }
  CubeFunction f = CubeFunction::from_support( v, support );
  if ( f.weight() != support.size() )
  {
    throw parameter_error( "block set contains a repeated block" );
  }
  return anf( f );
}

/*! \brief Incremental GF(2) span with top-bit pivoting. */
class Gf2Span
{
public:
  /*! \brief Returns true when x enlarged the span. */
  bool insert( Block x )
  {
    x = reduce( x );
    if ( x == 0 )
    {
      return false;
    }
    pivots_[63 - std::countl_zero( x )] = x;
    ++rank_;
    return true;
  }

  Block reduce( Block x ) const
  {
    while ( x != 0 )
    {
      const Block p = pivots_[63 - std::countl_zero( x )];
      if ( p == 0 )
      {
        break;
      }
      x ^= p;
    }
    return x;
  }

  bool contains( Block x ) const { return reduce( x ) == 0; }

  int rank() const { return rank_; }

  /*! \brief Current pivot rows, ascending by leading bit. */
  std::vector<Block> basis() const
  {
    std::vector<Block> out;
    for ( Block p : pivots_ )
    {
      if ( p != 0 )
      {
        out.push_back( p );
      }
    }
    return out;
  }

private:
  std::array<Block, 64> pivots_{};
  int rank_ = 0;
};

inline int gf2_rank( std::span<const Block> vectors )
{
  Gf2Span span;
  for ( Block x : vectors )
  {
    span.insert( x );
  }
  return span.rank();
}

/*! \brief All 2^rank combinations of a basis; gated at rank <= 26. */
inline std::vector<Block> gf2_span( std::span<const Block> basis )
{
  if ( basis.size() > 26 )
  {
    throw capacity_error( "span expansion is gated at 26 generators" );
  }
  std::vector<Block> out( std::size_t{ 1 } << basis.size() );
  for ( std::uint64_t m = 0; m < out.size(); ++m )
  {
    Block x = 0;
    for ( std::size_t j = 0; j < basis.size(); ++j )
    {
      if ( ( m >> j ) & 1 )
      {
        x ^= basis[j];
      }
    }
    out[m] = x;
  }
  return out;
}

} /* namespace cubetrades */
