/*! \file spectrum.hpp
  \brief Volume classification, Reed-Muller weight distributions and realized volume spectra

  The classification lists, for a given strength, every closed form a
  trade volume below 2^(t+1) + 2^(t-1) can take; volumes at or above
  that bound are unconstrained.  The remaining operations enumerate
  Reed-Muller codewords exhaustively: supports of codewords of
  RM(v-t-1, v) are exactly the unitrades of strength t, so weight
  distributions, weight-gap checks, unitrade enumeration and realized
  trade volumes all ride on one Gray-code codeword walk.
*/

#pragma once

#include "boolcube.hpp"
#include "errors.hpp"
#include "trades.hpp"
#include "unitrades.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <exception>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace cubetrades
{

/*! \brief Verdict of the volume classification. */
enum class Verdict
{
  allowed,
  forbidden,
  unconstrained
};

inline std::string to_string( Verdict verdict )
{
  switch ( verdict )
  {
  case Verdict::allowed:
    return "allowed";
  case Verdict::forbidden:
    return "forbidden";
  default:
    return "unconstrained";
  }
}

/*! \brief One matched closed form: form index 1..4 and its exponent. */
struct FormMatch
{
  int form;
  int exponent;

  bool operator==( const FormMatch& other ) const = default;
};

/*! \brief A volume checked against the four closed forms at strength t. */
struct VolumeClassification
{
  std::uint64_t volume;
  int t;
  std::vector<FormMatch> matches;
  Verdict verdict;
};

/*! \brief Classifies a trade volume at strength t against the closed forms.

  The forms are: (1) 2^(t+1) - 2^i for 0 <= i <= t+1; (2) 2^(t+1) + 2^i
  for ceil((t-1)/2) <= i <= t-2; (3) 2^(t+1) + 2^(t-1) - 2^i for
  0 <= i <= t-1; (4) 2^(t+1) + 2^(t-1) - 3*2^i for 0 <= i <= t-3.
  Volumes of at least 2^(t+1) + 2^(t-1) are unconstrained; smaller
  volumes matching no form cannot be the volume of any trade of
  strength t.
*/
inline VolumeClassification classify_volume( std::uint64_t volume, int t )
{
  if ( t < 1 )
  {
    throw parameter_error( "volume classification needs strength t >= 1, got " +
                           std::to_string( t ) );
  }
  if ( t > 61 )
  {
    throw capacity_error( "volume classification is gated at t <= 61" );
  }
  const std::uint64_t base = std::uint64_t{ 1 } << ( t + 1 );
  const std::uint64_t bound = base + ( std::uint64_t{ 1 } << ( t - 1 ) );

  VolumeClassification out{ volume, t, {}, Verdict::allowed };
  for ( int i = 0; i <= t + 1; ++i )
  {
    if ( volume == base - ( std::uint64_t{ 1 } << i ) )
    {
      out.matches.push_back( { 1, i } );
    }
  }
  for ( int i = t / 2; i <= t - 2; ++i )
  {
    if ( volume == base + ( std::uint64_t{ 1 } << i ) )
    {
      out.matches.push_back( { 2, i } );
    }
  }
  for ( int i = 0; i <= t - 1; ++i )
  {
    if ( volume == bound - ( std::uint64_t{ 1 } << i ) )
    {
      out.matches.push_back( { 3, i } );
    }
  }
  for ( int i = 0; i <= t - 3; ++i )
  {
    if ( volume == bound - ( std::uint64_t{ 3 } << i ) )
    {
      out.matches.push_back( { 4, i } );
    }
  }

  if ( volume >= bound )
  {
    out.verdict = Verdict::unconstrained;
  }
  else
  {
    out.verdict = out.matches.empty() ? Verdict::forbidden : Verdict::allowed;
  }
  return out;
}

/*! \brief Full-enumeration gate: 2^26 codewords is the largest walk. */
inline constexpr int rm_enumeration_max_dimension = 26;

namespace detail
{

inline int checked_rm_dimension( int r, int v )
{
  const std::uint64_t dim = binomial_sum( v, r );
  if ( dim > rm_enumeration_max_dimension )
  {
    throw capacity_error( "Reed-Muller enumeration is gated at dimension " +
                          std::to_string( rm_enumeration_max_dimension ) + ", got " +
                          std::to_string( dim ) );
  }
  return static_cast<int>( dim );
}

/*! \brief Gray-code walk over all codewords of RM(r, v).

  The truth table is kept as a bitset over the 2^v points; stepping to
  the next coefficient vector XORs one monomial's superset flat into
  the table and updates the weight from the changed words only.
  Monomials are ordered by descending degree, so the most frequently
  toggled coefficients have the smallest flats.
*/
class RmWalker
{
public:
  RmWalker( int r, int v )
      : v_( v ), word_count_( std::size_t{ 1 } << ( v > 6 ? v - 6 : 0 ) )
  {
    if ( v > CubeFunction::max_dimension )
    {
      throw capacity_error( "codeword truth tables are gated at v <= " +
                            std::to_string( CubeFunction::max_dimension ) );
    }
    table_.assign( word_count_, 0 );
    for ( int d = r; d >= 0; --d )
    {
      for_each_combination( v, d, [&]( Block mask ) { add_monomial( mask ); } );
    }
  }

  int dimension() const
  {
    return static_cast<int>( monomials_.size() );
  }

  std::uint64_t weight() const
  {
    return weight_;
  }

  /*! \brief Support of the current codeword, in ascending numeric order. */
  std::vector<Block> support() const
  {
    std::vector<Block> out;
    out.reserve( weight_ );
    for ( std::size_t i = 0; i < word_count_; ++i )
    {
      std::uint64_t word = table_[i];
      while ( word != 0 )
      {
        out.push_back( ( Block{ i } << 6 ) | static_cast<Block>( std::countr_zero( word ) ) );
        word &= word - 1;
      }
    }
    return out;
  }

  /*! \brief Visits the codewords of coefficient indices [begin, end) in Gray order. */
  template<typename Fn>
  void walk( std::uint64_t begin, std::uint64_t end, Fn&& fn )
  {
    if ( begin >= end )
    {
      return;
    }
    seek( begin );
    fn( begin, *this );
    for ( std::uint64_t k = begin + 1; k < end; ++k )
    {
      toggle( static_cast<std::size_t>( std::countr_zero( k ) ) );
      fn( k, *this );
    }
  }

private:
  struct Monomial
  {
    std::uint64_t pattern;
    std::uint64_t word_base;
    std::uint64_t word_free;
  };

  void add_monomial( Block mask )
  {
    Monomial m{ 0, mask >> 6, ( word_count_ - 1 ) & ~( mask >> 6 ) };
    const Block lo = mask & 63;
    for ( std::uint64_t x = 0; x < ( std::uint64_t{ 1 } << std::min( v_, 6 ) ); ++x )
    {
      if ( ( x & lo ) == lo )
      {
        m.pattern |= std::uint64_t{ 1 } << x;
      }
    }
    monomials_.push_back( m );
  }

  void toggle( std::size_t j )
  {
    const Monomial& m = monomials_[j];
    std::uint64_t sub = m.word_free;
    while ( true )
    {
      std::uint64_t& word = table_[m.word_base | sub];
      weight_ -= static_cast<unsigned>( std::popcount( word ) );
      word ^= m.pattern;
      weight_ += static_cast<unsigned>( std::popcount( word ) );
      if ( sub == 0 )
      {
        break;
      }
      sub = ( sub - 1 ) & m.word_free;
    }
  }

  void seek( std::uint64_t index )
  {
    std::fill( table_.begin(), table_.end(), 0 );
    weight_ = 0;
    const std::uint64_t code = index ^ ( index >> 1 );
    for ( std::size_t j = 0; j < monomials_.size(); ++j )
    {
      if ( ( code >> j ) & 1 )
      {
        toggle( j );
      }
    }
  }

  int v_;
  std::size_t word_count_;
  std::vector<Monomial> monomials_;
  std::vector<std::uint64_t> table_;
  std::uint64_t weight_ = 0;
};

/*! \brief Runs fn(worker, chunk) over all chunks, round-robin across `threads` workers.

  A worker's first exception is captured and rethrown on the calling
  thread after all workers have joined; with several failing workers
  the lowest worker index wins, keeping the error deterministic.
*/
template<typename Fn>
void run_chunked( std::uint64_t chunk_count, int threads, Fn&& fn )
{
  if ( threads <= 1 || chunk_count <= 1 )
  {
    for ( std::uint64_t c = 0; c < chunk_count; ++c )
    {
      fn( static_cast<std::size_t>( 0 ), c );
    }
    return;
  }
  std::vector<std::exception_ptr> errors( static_cast<std::size_t>( threads ) );
  std::vector<std::thread> pool;
  for ( int w = 0; w < threads; ++w )
  {
    pool.emplace_back( [&, w]() {
      try
      {
        for ( std::uint64_t c = static_cast<std::uint64_t>( w ); c < chunk_count;
              c += static_cast<std::uint64_t>( threads ) )
        {
          fn( static_cast<std::size_t>( w ), c );
        }
      }
      catch ( ... )
      {
        errors[static_cast<std::size_t>( w )] = std::current_exception();
      }
    } );
  }
  for ( auto& worker : pool )
  {
    worker.join();
  }
  for ( const auto& error : errors )
  {
    if ( error )
    {
      std::rethrow_exception( error );
    }
  }
}

inline int clamped_threads( int threads )
{
  return std::clamp( threads, 1, 64 );
}

inline int chunk_bits_for( int threads, int dim )
{
  int bits = 0;
  while ( ( 1 << bits ) < threads && bits < dim )
  {
    ++bits;
  }
  return bits;
}

} /* namespace detail */

/*! \brief Weight census of a Reed-Muller code: weight -> codeword count. */
struct WeightDistribution
{
  int r;
  int v;
  int dim;
  std::map<std::uint64_t, std::uint64_t> counts;
};

/*! \brief Exact weight distribution of RM(r, v) by full codeword enumeration.

  The coefficient space may be partitioned across threads; the merged
  distribution is deterministic and identical for every thread count.
*/
inline WeightDistribution rm_weight_distribution( int r, int v, int threads = 1 )
{
  require_ground_set( v );
  if ( r < 0 || r > v )
  {
    throw parameter_error( "order r must satisfy 0 <= r <= v, got " + std::to_string( r ) );
  }
  if ( r == 0 )
  {
    if ( v > 63 )
    {
      throw capacity_error( "the full-cube weight exceeds the representable range at v = 64" );
    }
    WeightDistribution constants{ r, v, 1, {} };
    constants.counts[0] = 1;
    constants.counts[std::uint64_t{ 1 } << v] = 1;
    return constants;
  }

  const int dim = detail::checked_rm_dimension( r, v );
  threads = detail::clamped_threads( threads );
  const int chunk_bits = detail::chunk_bits_for( threads, dim );
  const std::uint64_t chunk_len = std::uint64_t{ 1 } << ( dim - chunk_bits );

  std::vector<std::map<std::uint64_t, std::uint64_t>> partial(
      static_cast<std::size_t>( threads ) );
  detail::run_chunked( std::uint64_t{ 1 } << chunk_bits, threads,
                       [&]( std::size_t worker, std::uint64_t chunk ) {
                         detail::RmWalker local( r, v );
                         local.walk( chunk * chunk_len, ( chunk + 1 ) * chunk_len,
                                     [&]( std::uint64_t, const detail::RmWalker& w ) {
                                       ++partial[worker][w.weight()];
                                     } );
                       } );

  WeightDistribution out{ r, v, dim, {} };
  for ( const auto& part : partial )
  {
    for ( const auto& [weight, count] : part )
    {
      out.counts[weight] += count;
    }
  }
  return out;
}

/*! \brief Outcome of checking a distribution against the low-weight families. */
struct WeightGapReport
{
  WeightDistribution distribution;
  std::vector<std::uint64_t> allowed;
  std::vector<std::uint64_t> violations;
  bool pass;
};

/*! \brief Verifies that every weight below 2.5 * 2^(v-r) is in a known family.

  The families, with q = v - r: the smallest weights 2^(q+1) - 2^j for
  1 <= j <= q; the weight 2 * 2^q; and above it 2 * 2^q + 2 * 2^(q-l)
  for 2 <= l <= (q+2)/2, 2.5 * 2^q - 2 * 2^i for 0 <= i <= q-3 and
  2.5 * 2^q - 6 * 2^i for 0 <= i <= q-4.  Comparisons run in doubled
  units so the 2.5 * 2^q bound stays integral.
*/
inline WeightGapReport check_weight_gaps( int r, int v, int threads = 1 )
{
  if ( v - r > 61 )
  {
    throw capacity_error( "gap checking is gated at v - r <= 61" );
  }
  WeightGapReport report{ rm_weight_distribution( r, v, threads ), {}, {}, true };
  const int q = v - r;
  const std::uint64_t doubled_bound = std::uint64_t{ 5 } << q;

  std::set<std::uint64_t> allowed_doubled;
  allowed_doubled.insert( std::uint64_t{ 2 } << q );
  for ( int j = 1; j <= q; ++j )
  {
    allowed_doubled.insert( ( std::uint64_t{ 1 } << ( q + 2 ) ) -
                            ( std::uint64_t{ 1 } << ( j + 1 ) ) );
  }
  allowed_doubled.insert( std::uint64_t{ 1 } << ( q + 2 ) );
  for ( int l = 2; 2 * l <= q + 2; ++l )
  {
    allowed_doubled.insert( ( std::uint64_t{ 1 } << ( q + 2 ) ) +
                            ( std::uint64_t{ 1 } << ( q - l + 2 ) ) );
  }
  for ( int i = 0; i + 3 <= q; ++i )
  {
    allowed_doubled.insert( doubled_bound - ( std::uint64_t{ 1 } << ( i + 2 ) ) );
  }
  for ( int i = 0; i + 4 <= q; ++i )
  {
    allowed_doubled.insert( doubled_bound - ( std::uint64_t{ 3 } << ( i + 2 ) ) );
  }
  std::erase_if( allowed_doubled,
                 [&]( std::uint64_t d ) { return d >= doubled_bound; } );

  for ( std::uint64_t d : allowed_doubled )
  {
    report.allowed.push_back( d / 2 );
  }
  for ( const auto& [weight, count] : report.distribution.counts )
  {
    if ( weight != 0 && 2 * weight < doubled_bound &&
         allowed_doubled.count( 2 * weight ) == 0 )
    {
      report.violations.push_back( weight );
    }
  }
  report.pass = report.violations.empty();
  return report;
}

/*! \brief All unitrades of strength t with cardinality in (0, max_card].

  Enumerates the supports of all codewords of RM(v-t-1, v) in a fixed
  Gray-code order; each support is returned in canonical block order.
*/
inline std::vector<std::vector<Block>> enumerate_unitrades( int v, int t,
                                                            std::uint64_t max_card )
{
  detail::require_unitrade_params( {}, v, t );
  const int r = v - t - 1;
  if ( r == 0 )
  {
    if ( v >= 64 || max_card < ( std::uint64_t{ 1 } << v ) )
    {
      return {};
    }
    if ( v > CubeFunction::max_dimension )
    {
      throw capacity_error( "materializing the full cube is gated at v <= " +
                            std::to_string( CubeFunction::max_dimension ) );
    }
    std::vector<Block> full( std::size_t{ 1 } << v );
    std::iota( full.begin(), full.end(), Block{ 0 } );
    return { canonical_blocks( std::move( full ), v ) };
  }

  const int dim = detail::checked_rm_dimension( r, v );
  std::vector<std::vector<Block>> out;
  detail::RmWalker walker( r, v );
  walker.walk( 0, std::uint64_t{ 1 } << dim,
               [&]( std::uint64_t, const detail::RmWalker& w ) {
                 if ( w.weight() == 0 || w.weight() > max_card )
                 {
                   return;
                 }
                 if ( out.size() >= ( std::uint64_t{ 1 } << 22 ) )
                 {
                   throw capacity_error( "unitrade enumeration is gated at 2^22 results" );
                 }
                 out.push_back( canonical_blocks( w.support(), v ) );
               } );
  return out;
}

/*! \brief Realized volumes up to max_volume, each with its first example trade. */
struct VolumeSpectrum
{
  int v;
  int t;
  std::uint64_t max_volume;
  std::map<std::uint64_t, Trade> examples;

  std::vector<std::uint64_t> volumes() const
  {
    std::vector<std::uint64_t> out;
    out.reserve( examples.size() );
    for ( const auto& [volume, trade] : examples )
    {
      out.push_back( volume );
    }
    return out;
  }
};

/*! \brief Exhaustive realized volume spectrum of trades of strength t.

  Enumerates every unitrade of cardinality at most 2 * max_volume, runs
  the split search on each, and collects the volumes of the successful
  splits; the example kept per volume is the first in enumeration
  order, independent of the thread count.  Every realized volume is
  checked against the classification: a forbidden volume would
  contradict it and raises logic_error.
*/
inline VolumeSpectrum trade_volume_spectrum( int v, int t, std::uint64_t max_volume,
                                             int threads = 1,
                                             std::uint64_t node_limit = split_default_node_limit )
{
  require_ground_set( v );
  if ( t < 1 || t >= v )
  {
    throw parameter_error( "trade volume spectra need 1 <= t < v" );
  }
  if ( max_volume > split_max_blocks / 2 )
  {
    throw capacity_error( "split searches are gated at 64 blocks, so max volume is 32" );
  }

  VolumeSpectrum out{ v, t, max_volume, {} };
  const int r = v - t - 1;
  if ( r == 0 )
  {
    if ( v <= 6 && ( std::uint64_t{ 1 } << v ) <= 2 * max_volume )
    {
      std::vector<Block> full( std::size_t{ 1 } << v );
      std::iota( full.begin(), full.end(), Block{ 0 } );
      const SplitResult result = split( full, v, t, node_limit );
      if ( result.outcome == SplitOutcome::split )
      {
        out.examples.emplace( volume( *result.trade ), *result.trade );
      }
    }
  }
  else
  {
    const int dim = detail::checked_rm_dimension( r, v );
    const int workers = detail::clamped_threads( threads );
    const int chunk_bits = detail::chunk_bits_for( workers, dim );
    const std::uint64_t chunk_len = std::uint64_t{ 1 } << ( dim - chunk_bits );

    struct Candidate
    {
      std::uint64_t rank;
      Trade trade;
    };
    std::vector<std::map<std::uint64_t, Candidate>> partial(
        static_cast<std::size_t>( workers ) );
    detail::run_chunked(
        std::uint64_t{ 1 } << chunk_bits, workers,
        [&]( std::size_t worker, std::uint64_t chunk ) {
          detail::RmWalker local( r, v );
          local.walk( chunk * chunk_len, ( chunk + 1 ) * chunk_len,
                      [&]( std::uint64_t rank, const detail::RmWalker& w ) {
                        if ( w.weight() == 0 || w.weight() > 2 * max_volume )
                        {
                          return;
                        }
                        const SplitResult result = split( w.support(), v, t, node_limit );
                        if ( result.outcome != SplitOutcome::split )
                        {
                          return;
                        }
                        auto& mine = partial[worker];
                        const std::uint64_t vol = w.weight() / 2;
                        auto it = mine.find( vol );
                        if ( it == mine.end() )
                        {
                          mine.emplace( vol, Candidate{ rank, *result.trade } );
                        }
                        else if ( rank < it->second.rank )
                        {
                          it->second = Candidate{ rank, *result.trade };
                        }
                      } );
        } );

    std::map<std::uint64_t, Candidate> merged;
    for ( auto& part : partial )
    {
      for ( auto& [vol, candidate] : part )
      {
        auto it = merged.find( vol );
        if ( it == merged.end() )
        {
          merged.emplace( vol, std::move( candidate ) );
        }
        else if ( candidate.rank < it->second.rank )
        {
          it->second = std::move( candidate );
        }
      }
    }
    for ( auto& [vol, candidate] : merged )
    {
      out.examples.emplace( vol, std::move( candidate.trade ) );
    }
  }

  for ( const auto& [vol, example] : out.examples )
  {
    if ( classify_volume( vol, t ).verdict == Verdict::forbidden )
    {
      throw std::logic_error( "internal error: realized volume " + std::to_string( vol ) +
                              " is forbidden by the volume classification" );
    }
  }
  return out;
}

} /* namespace cubetrades */
