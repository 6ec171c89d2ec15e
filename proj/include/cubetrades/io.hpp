/*! \file io.hpp
  \brief Text and JSON serialization of trades and unitrades

  The text format is line oriented with LF endings: a header line
  `trade v=<int> t=<int>` or `unitrade v=<int> t=<int>`, then for
  trades a `T0:` line followed by one bitstring per line and a `T1:`
  line followed by bitstrings, or for unitrades a single `T:` section.
  Bitstrings have length exactly v with element 1 leftmost.  Lines
  starting with `#` and blank lines are ignored when parsing; the
  serializer never emits them, so serialize-parse-serialize is byte
  identical.  Parsing canonicalizes block order but does not verify
  the trade or unitrade property; verification is a separate step.
*/

#pragma once

#include "boolcube.hpp"
#include "errors.hpp"
#include "trades.hpp"
#include "unitrades.hpp"

#include <json.hpp>

#include <charconv>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cubetrades
{

/*! \brief A parsed file holds either a trade or a unitrade. */
using TradeObject = std::variant<Trade, Unitrade>;

inline std::string serialize( const Trade& trade )
{
  std::string out = "trade v=" + std::to_string( trade.v ) +
                    " t=" + std::to_string( trade.t ) + "\nT0:\n";
  for ( Block x : trade.leg0 )
  {
    out += block_to_string( x, trade.v );
    out += '\n';
  }
  out += "T1:\n";
  for ( Block x : trade.leg1 )
  {
    out += block_to_string( x, trade.v );
    out += '\n';
  }
  return out;
}

inline std::string serialize( const Unitrade& unitrade )
{
  std::string out = "unitrade v=" + std::to_string( unitrade.v ) +
                    " t=" + std::to_string( unitrade.t ) + "\nT:\n";
  for ( Block x : unitrade.blocks )
  {
    out += block_to_string( x, unitrade.v );
    out += '\n';
  }
  return out;
}

inline std::string serialize( const TradeObject& object )
{
  return std::visit( []( const auto& inner ) { return serialize( inner ); }, object );
}

inline nlohmann::ordered_json to_json( const Trade& trade )
{
  nlohmann::ordered_json j;
  j["kind"] = "trade";
  j["v"] = trade.v;
  j["t"] = trade.t;
  auto strings = []( const std::vector<Block>& blocks, int v ) {
    std::vector<std::string> out;
    out.reserve( blocks.size() );
    for ( Block x : blocks )
    {
      out.push_back( block_to_string( x, v ) );
    }
    return out;
  };
  j["T0"] = strings( trade.leg0, trade.v );
  j["T1"] = strings( trade.leg1, trade.v );
  return j;
}

inline nlohmann::ordered_json to_json( const Unitrade& unitrade )
{
  nlohmann::ordered_json j;
  j["kind"] = "unitrade";
  j["v"] = unitrade.v;
  j["t"] = unitrade.t;
  std::vector<std::string> strings;
  strings.reserve( unitrade.blocks.size() );
  for ( Block x : unitrade.blocks )
  {
    strings.push_back( block_to_string( x, unitrade.v ) );
  }
  j["T"] = strings;
  return j;
}

inline nlohmann::ordered_json to_json( const TradeObject& object )
{
  return std::visit( []( const auto& inner ) { return to_json( inner ); }, object );
}

/*! \brief JSON text form: two-space indent plus a trailing newline. */
inline std::string serialize_json( const nlohmann::ordered_json& j )
{
  return j.dump( 2 ) + "\n";
}

namespace detail
{

inline int parse_keyed_int( std::string_view token, std::string_view key )
{
  if ( token.substr( 0, key.size() ) != key )
  {
    throw parameter_error( "malformed header: expected " + std::string( key ) + "<int>, got '" +
                           std::string( token ) + "'" );
  }
  const std::string_view digits = token.substr( key.size() );
  int value = 0;
  const auto [end, err] = std::from_chars( digits.data(), digits.data() + digits.size(), value );
  if ( err != std::errc{} || end != digits.data() + digits.size() )
  {
    throw parameter_error( "malformed header: expected " + std::string( key ) + "<int>, got '" +
                           std::string( token ) + "'" );
  }
  return value;
}

inline Block parse_block_line( std::string_view line, int v )
{
  if ( line.size() != static_cast<std::size_t>( v ) )
  {
    throw parameter_error( "block bitstring must have length v=" + std::to_string( v ) +
                           ", got '" + std::string( line ) + "'" );
  }
  for ( char c : line )
  {
    if ( c != '0' && c != '1' )
    {
      throw parameter_error( "block bitstring may contain only 0 and 1, got '" +
                             std::string( line ) + "'" );
    }
  }
  return block_from_string( line );
}

/*! \brief Content lines of the text format: comments and blanks dropped. */
inline std::vector<std::string_view> format_lines( std::string_view text )
{
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while ( start <= text.size() )
  {
    std::size_t stop = text.find( '\n', start );
    if ( stop == std::string_view::npos )
    {
      stop = text.size();
    }
    const std::string_view line = text.substr( start, stop - start );
    if ( line.find( '\r' ) != std::string_view::npos )
    {
      throw parameter_error( "carriage returns are not allowed; the format uses LF endings" );
    }
    if ( !line.empty() && line.front() != '#' )
    {
      lines.push_back( line );
    }
    start = stop + 1;
  }
  return lines;
}

inline TradeObject parse_text_object( std::string_view text )
{
  const auto lines = format_lines( text );
  if ( lines.empty() )
  {
    throw parameter_error( "empty input: expected a trade or unitrade header" );
  }

  /* header: `<kind> v=<int> t=<int>` */
  std::vector<std::string_view> tokens;
  std::size_t start = 0;
  const std::string_view header = lines.front();
  while ( start < header.size() )
  {
    std::size_t stop = header.find( ' ', start );
    if ( stop == std::string_view::npos )
    {
      stop = header.size();
    }
    if ( stop > start )
    {
      tokens.push_back( header.substr( start, stop - start ) );
    }
    start = stop + 1;
  }
  if ( tokens.size() != 3 || ( tokens[0] != "trade" && tokens[0] != "unitrade" ) )
  {
    throw parameter_error( "malformed header: expected 'trade v=<int> t=<int>' or "
                           "'unitrade v=<int> t=<int>', got '" +
                           std::string( header ) + "'" );
  }
  const int v = parse_keyed_int( tokens[1], "v=" );
  const int t = parse_keyed_int( tokens[2], "t=" );
  require_ground_set( v );

  if ( tokens[0] == "unitrade" )
  {
    if ( lines.size() < 2 || lines[1] != "T:" )
    {
      throw parameter_error( "unitrade file needs a 'T:' section after the header" );
    }
    std::vector<Block> blocks;
    for ( std::size_t i = 2; i < lines.size(); ++i )
    {
      blocks.push_back( parse_block_line( lines[i], v ) );
    }
    return make_unitrade_unchecked( std::move( blocks ), v, t );
  }

  if ( lines.size() < 2 || lines[1] != "T0:" )
  {
    throw parameter_error( "trade file needs a 'T0:' section after the header" );
  }
  std::vector<Block> leg0, leg1;
  std::size_t i = 2;
  for ( ; i < lines.size() && lines[i] != "T1:"; ++i )
  {
    leg0.push_back( parse_block_line( lines[i], v ) );
  }
  if ( i == lines.size() )
  {
    throw parameter_error( "trade file needs a 'T1:' section after the first leg" );
  }
  for ( ++i; i < lines.size(); ++i )
  {
    leg1.push_back( parse_block_line( lines[i], v ) );
  }
  return make_trade_unchecked( std::move( leg0 ), std::move( leg1 ), v, t );
}

inline TradeObject parse_json_object( std::string_view text )
{
  nlohmann::ordered_json j;
  try
  {
    j = nlohmann::ordered_json::parse( text );
  }
  catch ( const nlohmann::json::exception& e )
  {
    throw parameter_error( std::string( "malformed JSON: " ) + e.what() );
  }
  try
  {
    const std::string kind = j.at( "kind" ).get<std::string>();
    const int v = j.at( "v" ).get<int>();
    const int t = j.at( "t" ).get<int>();
    require_ground_set( v );
    const auto blocks_of = [&]( const char* key ) {
      std::vector<Block> out;
      for ( const auto& entry : j.at( key ) )
      {
        out.push_back( parse_block_line( entry.get<std::string>(), v ) );
      }
      return out;
    };
    if ( kind == "unitrade" )
    {
      return make_unitrade_unchecked( blocks_of( "T" ), v, t );
    }
    if ( kind == "trade" )
    {
      return make_trade_unchecked( blocks_of( "T0" ), blocks_of( "T1" ), v, t );
    }
    throw parameter_error( "unknown kind '" + kind + "': expected 'trade' or 'unitrade'" );
  }
  catch ( const nlohmann::json::exception& e )
  {
    throw parameter_error( std::string( "malformed JSON object: " ) + e.what() );
  }
}

} /* namespace detail */

/*! \brief Parses a trade or unitrade from text or JSON, autodetected.

  Input whose first non-whitespace character is `{` is treated as
  JSON.  Malformed input raises parameter_error; the parsed object is
  canonicalized but not verified.
*/
inline TradeObject parse_object( std::string_view text )
{
  const std::size_t first = text.find_first_not_of( " \t\n" );
  if ( first != std::string_view::npos && text[first] == '{' )
  {
    return detail::parse_json_object( text );
  }
  return detail::parse_text_object( text );
}

} /* namespace cubetrades */
