/*! \file cubetrades.cpp
  \brief Command-line front end for trades and unitrades over the Boolean cube

  Subcommands: verify, construct, split, classify, spectrum, rm-dist.
  Exit codes: 0 success, 1 negative mathematical answer (invalid object,
  non-splittable unitrade, forbidden volume), 2 input error, 3 capacity
  gate exceeded, 4 internal inconsistency.
*/

#include <cubetrades/constructions.hpp>
#include <cubetrades/io.hpp>
#include <cubetrades/spectrum.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace
{

using namespace cubetrades;

std::string read_file( const std::string& path )
{
  std::ifstream in( path, std::ios::binary );
  if ( !in )
  {
    throw parameter_error( "cannot read file '" + path + "'" );
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

/*! \brief Prints to stdout, or into the file when a path is set. */
void write_text( const std::string& text, const std::string& output )
{
  if ( output.empty() )
  {
    std::cout << text;
    return;
  }
  std::ofstream out( output, std::ios::binary );
  out << text;
  if ( !out )
  {
    throw parameter_error( "cannot write file '" + output + "'" );
  }
}

struct OutputOptions
{
  bool json = false;
  std::string output;
};

void add_output_flags( CLI::App* cmd, OutputOptions& opts )
{
  cmd->add_flag( "--json", opts.json, "write JSON instead of the text format" );
  cmd->add_option( "--output", opts.output, "write to this file instead of stdout" );
}

std::string render( const TradeObject& object, const OutputOptions& opts )
{
  return opts.json ? serialize_json( to_json( object ) ) : serialize( object );
}

Block parse_block_argument( const std::string& text, int v, const std::string& what )
{
  if ( text.size() != static_cast<std::size_t>( v ) ||
       text.find_first_not_of( "01" ) != std::string::npos )
  {
    throw parameter_error( what + " must be a bitstring of length " + std::to_string( v ) +
                           ", got '" + text + "'" );
  }
  return block_from_string( text );
}

Trade read_trade_file( const std::string& path, const std::string& kind )
{
  TradeObject object = parse_object( read_file( path ) );
  if ( !std::holds_alternative<Trade>( object ) )
  {
    throw parameter_error( kind + " needs a trade file, got a unitrade" );
  }
  return std::get<Trade>( std::move( object ) );
}

Unitrade read_unitrade_file( const std::string& path, const std::string& kind )
{
  TradeObject object = parse_object( read_file( path ) );
  if ( !std::holds_alternative<Unitrade>( object ) )
  {
    throw parameter_error( kind + " needs a unitrade file, got a trade" );
  }
  return std::get<Unitrade>( std::move( object ) );
}

int run_verify( const std::string& path, bool all_violations )
{
  const std::size_t max_violations = all_violations ? ~std::size_t{ 0 } : 1;
  const TradeObject object = parse_object( read_file( path ) );
  if ( std::holds_alternative<Trade>( object ) )
  {
    const Trade& trade = std::get<Trade>( object );
    const auto violations =
        trade_violations_auto( trade.leg0, trade.leg1, trade.v, trade.t, max_violations );
    if ( violations.empty() )
    {
      std::cout << "valid trade: v=" << trade.v << " t=" << trade.t
                << " volume=" << volume( trade ) << "\n";
      return 0;
    }
    for ( const auto& violation : violations )
    {
      std::cout << violation_to_string( violation, trade.v ) << "\n";
    }
    return 1;
  }

  const Unitrade& unitrade = std::get<Unitrade>( object );
  const std::uint64_t parity_cost =
      detail::saturating_mul( binomial( unitrade.v, unitrade.t ), unitrade.blocks.size() );
  if ( parity_cost <= ( std::uint64_t{ 1 } << 27 ) )
  {
    const auto violations =
        unitrade_parity_violations( unitrade.blocks, unitrade.v, unitrade.t, max_violations );
    if ( violations.empty() )
    {
      std::cout << "valid unitrade: v=" << unitrade.v << " t=" << unitrade.t
                << " cardinality=" << cardinality( unitrade ) << "\n";
      return 0;
    }
    for ( const auto& violation : violations )
    {
      std::cout << "subcube " << subcube_to_string( violation.subcube, unitrade.v )
                << " meets the set " << violation.count << " times\n";
    }
    return 1;
  }
  if ( is_unitrade_anf( unitrade.blocks, unitrade.v, unitrade.t ) )
  {
    std::cout << "valid unitrade: v=" << unitrade.v << " t=" << unitrade.t
              << " cardinality=" << cardinality( unitrade ) << "\n";
    return 0;
  }
  std::cout << "characteristic function has degree above "
            << ( unitrade.v - unitrade.t - 1 ) << "\n";
  return 1;
}

int run_split( const std::string& path, std::uint64_t node_limit, const OutputOptions& opts )
{
  const Unitrade unitrade = read_unitrade_file( path, "split" );
  const SplitResult result = split( unitrade, node_limit );
  switch ( result.outcome )
  {
  case SplitOutcome::split:
  {
    const std::string text = render( TradeObject{ *result.trade }, opts );
    write_text( text, opts.output );
    if ( !opts.output.empty() )
    {
      std::cout << "split volume=" << volume( *result.trade ) << "\n";
    }
    return 0;
  }
  case SplitOutcome::odd_cycle:
  {
    std::cout << "not splittable (odd-cycle):";
    for ( Block x : result.cycle )
    {
      std::cout << ' ' << block_to_string( x, unitrade.v );
    }
    std::cout << "\n";
    return 1;
  }
  case SplitOutcome::unbalanced_subcube:
    std::cout << "not splittable (unbalanced-subcube): "
              << subcube_to_string( *result.subcube, unitrade.v ) << "\n";
    return 1;
  case SplitOutcome::exhausted:
  default:
    std::cout << "not splittable (exhausted): searched " << result.nodes << " nodes\n";
    return 1;
  }
}

int run_classify( std::uint64_t volume, int t, const OutputOptions& opts )
{
  const VolumeClassification classification = classify_volume( volume, t );
  std::string text;
  if ( opts.json )
  {
    nlohmann::ordered_json j;
    j["volume"] = classification.volume;
    j["t"] = classification.t;
    j["verdict"] = to_string( classification.verdict );
    j["matches"] = nlohmann::ordered_json::array();
    for ( const FormMatch& match : classification.matches )
    {
      j["matches"].push_back( { { "form", match.form }, { "i", match.exponent } } );
    }
    text = serialize_json( j );
  }
  else
  {
    text = to_string( classification.verdict );
    for ( const FormMatch& match : classification.matches )
    {
      text += " form" + std::to_string( match.form ) + " i=" + std::to_string( match.exponent );
    }
    text += "\n";
  }
  write_text( text, opts.output );
  return classification.verdict == Verdict::forbidden ? 1 : 0;
}

int run_spectrum( int v, int t, std::uint64_t max_volume, int threads, const OutputOptions& opts )
{
  const VolumeSpectrum spectrum = trade_volume_spectrum( v, t, max_volume, threads );
  std::string text;
  if ( opts.json )
  {
    nlohmann::ordered_json j;
    j["v"] = spectrum.v;
    j["t"] = spectrum.t;
    j["max_volume"] = spectrum.max_volume;
    j["volumes"] = spectrum.volumes();
    j["examples"] = nlohmann::ordered_json::object();
    for ( const auto& [vol, example] : spectrum.examples )
    {
      j["examples"][std::to_string( vol )] = to_json( example );
    }
    text = serialize_json( j );
  }
  else
  {
    bool first = true;
    for ( const std::uint64_t vol : spectrum.volumes() )
    {
      text += first ? "" : " ";
      text += std::to_string( vol );
      first = false;
    }
    text += "\n";
  }
  write_text( text, opts.output );
  return 0;
}

int run_rm_dist( int r, int v, int threads, const OutputOptions& opts )
{
  const WeightDistribution distribution = rm_weight_distribution( r, v, threads );
  std::string text;
  if ( opts.json )
  {
    nlohmann::ordered_json j;
    j["r"] = distribution.r;
    j["v"] = distribution.v;
    j["dim"] = distribution.dim;
    j["counts"] = nlohmann::ordered_json::array();
    for ( const auto& [weight, count] : distribution.counts )
    {
      j["counts"].push_back( { { "weight", weight }, { "count", count } } );
    }
    text = serialize_json( j );
  }
  else
  {
    for ( const auto& [weight, count] : distribution.counts )
    {
      text += std::to_string( weight ) + "\t" + std::to_string( count ) + "\n";
    }
  }
  write_text( text, opts.output );
  return 0;
}

std::vector<Block> simplex_part( const std::string& part )
{
  const auto [c0, c1] = simplex_fixture();
  if ( part == "c0" )
  {
    return c0;
  }
  if ( part == "c1" )
  {
    return c1;
  }
  std::vector<Block> delta;
  std::set_symmetric_difference( c0.begin(), c0.end(), c1.begin(), c1.end(),
                                 std::back_inserter( delta ), lex_less );
  return delta;
}

} /* namespace */

int main( int argc, char** argv )
{
  CLI::App app{ "trades and unitrades over the Boolean cube" };
  app.require_subcommand( 1 );
  int status = 0;

  /* verify */
  std::string verify_path;
  bool all_violations = false;
  auto* verify = app.add_subcommand( "verify", "check a trade or unitrade file" );
  verify->add_option( "path", verify_path, "trade or unitrade file" )->required();
  verify->add_flag( "--all-violations", all_violations, "report every violation, not just the first" );
  verify->callback( [&]() { status = run_verify( verify_path, all_violations ); } );

  /* construct */
  auto* construct = app.add_subcommand( "construct", "build a trade or unitrade file" );
  construct->require_subcommand( 1 );

  std::vector<std::string> minimum_bases;
  std::string minimum_w;
  OutputOptions minimum_opts;
  auto* minimum = construct->add_subcommand( "minimum", "minimum trade from disjoint base blocks" );
  minimum->add_option( "bases", minimum_bases, "pairwise disjoint nonzero base blocks" )
      ->required();
  minimum->add_option( "--w", minimum_w, "translation block (default all zeros)" );
  add_output_flags( minimum, minimum_opts );
  minimum->callback( [&]() {
    const int v = static_cast<int>( minimum_bases.front().size() );
    std::vector<Block> bases;
    for ( const std::string& base : minimum_bases )
    {
      bases.push_back( parse_block_argument( base, v, "base block" ) );
    }
    const Block w = minimum_w.empty() ? Block{ 0 } : parse_block_argument( minimum_w, v, "--w" );
    write_text( render( TradeObject{ minimum_trade( bases, w, v ) }, minimum_opts ),
                minimum_opts.output );
  } );

  int type_a_t = 0, type_a_i = 0, type_a_v = 0;
  OutputOptions type_a_opts;
  auto* type_a = construct->add_subcommand( "type-a", "trade of volume 2^(t+1) - 2^i" );
  type_a->add_option( "--t", type_a_t, "strength" )->required();
  type_a->add_option( "--i", type_a_i, "volume exponent, 0 <= i < t" )->required();
  type_a->add_option( "--v", type_a_v, "ground set size, v >= 2t+2-i" )->required();
  add_output_flags( type_a, type_a_opts );
  type_a->callback( [&]() {
    write_text( render( TradeObject{ type_a_trade( type_a_t, type_a_i, type_a_v ) }, type_a_opts ),
                type_a_opts.output );
  } );

  int kasami_a_r = 0, kasami_a_mu = 0, kasami_a_v = 0;
  OutputOptions kasami_a_opts;
  auto* kasami_a = construct->add_subcommand( "kasami-a", "unitrade from the interval-flat canonical form" );
  kasami_a->add_option( "--r", kasami_a_r, "algebraic degree" )->required();
  kasami_a->add_option( "--mu", kasami_a_mu, "weight parameter, 2 <= mu <= r" )->required();
  kasami_a->add_option( "--v", kasami_a_v, "ground set size, v >= r+mu" )->required();
  add_output_flags( kasami_a, kasami_a_opts );
  kasami_a->callback( [&]() {
    const Unitrade unitrade = make_unitrade_unchecked(
        kasami_form_a( kasami_a_r, kasami_a_mu, kasami_a_v ), kasami_a_v,
        kasami_a_v - kasami_a_r - 1 );
    write_text( render( TradeObject{ unitrade }, kasami_a_opts ), kasami_a_opts.output );
  } );

  int kasami_b_r = 0, kasami_b_nu = 0, kasami_b_v = 0;
  OutputOptions kasami_b_opts;
  auto* kasami_b = construct->add_subcommand( "kasami-b", "unitrade from the quadratic canonical form" );
  kasami_b->add_option( "--r", kasami_b_r, "algebraic degree, r >= 2" )->required();
  kasami_b->add_option( "--nu", kasami_b_nu, "number of quadratic terms, nu >= 3" )->required();
  kasami_b->add_option( "--v", kasami_b_v, "ground set size, v >= r-2+2nu" )->required();
  add_output_flags( kasami_b, kasami_b_opts );
  kasami_b->callback( [&]() {
    const Unitrade unitrade = make_unitrade_unchecked(
        kasami_form_b( kasami_b_r, kasami_b_nu, kasami_b_v ), kasami_b_v,
        kasami_b_v - kasami_b_r - 1 );
    write_text( render( TradeObject{ unitrade }, kasami_b_opts ), kasami_b_opts.output );
  } );

  std::string simplex_part_name = "delta";
  OutputOptions simplex_opts;
  auto* simplex = construct->add_subcommand( "simplex", "simplex-code unitrades in the 7-cube" );
  simplex->add_option( "--part", simplex_part_name, "c0, c1, or their symmetric difference" )
      ->check( CLI::IsMember( { "c0", "c1", "delta" } ) );
  add_output_flags( simplex, simplex_opts );
  simplex->callback( [&]() {
    const Unitrade unitrade = make_unitrade_unchecked( simplex_part( simplex_part_name ), 7, 2 );
    write_text( render( TradeObject{ unitrade }, simplex_opts ), simplex_opts.output );
  } );

  std::string lift_input;
  OutputOptions lift_opts;
  auto* lift = construct->add_subcommand( "lift", "append block complements, giving uniform size v" );
  lift->add_option( "--input", lift_input, "trade file to lift" )->required();
  add_output_flags( lift, lift_opts );
  lift->callback( [&]() {
    const Trade trade = lift_to_design_trade( read_trade_file( lift_input, "lift" ) );
    write_text( render( TradeObject{ trade }, lift_opts ), lift_opts.output );
  } );

  std::string translate_input, translate_by;
  OutputOptions translate_opts;
  auto* translate_cmd = construct->add_subcommand( "translate", "XOR every block with a fixed block" );
  translate_cmd->add_option( "--input", translate_input, "trade file to translate" )->required();
  translate_cmd->add_option( "--by", translate_by, "translation block" )->required();
  add_output_flags( translate_cmd, translate_opts );
  translate_cmd->callback( [&]() {
    const Trade trade = read_trade_file( translate_input, "translate" );
    const Block w = parse_block_argument( translate_by, trade.v, "--by" );
    write_text( render( TradeObject{ translate( trade, w ) }, translate_opts ),
                translate_opts.output );
  } );

  std::string dup_input;
  int dup_element = 0;
  OutputOptions dup_opts;
  auto* dup = construct->add_subcommand( "dup-coordinate", "append a copy of one coordinate" );
  dup->add_option( "--input", dup_input, "trade file to extend" )->required();
  dup->add_option( "--element", dup_element, "1-based coordinate to duplicate" )->required();
  add_output_flags( dup, dup_opts );
  dup->callback( [&]() {
    const Trade trade = duplicate_coordinate( read_trade_file( dup_input, "dup-coordinate" ),
                                              dup_element );
    write_text( render( TradeObject{ trade }, dup_opts ), dup_opts.output );
  } );

  std::vector<std::string> merge_inputs;
  OutputOptions merge_opts;
  auto* merge_cmd = construct->add_subcommand( "merge", "merge two trades using their stored leg order" );
  merge_cmd->add_option( "--input", merge_inputs, "the two trade files to merge" )
      ->required()
      ->expected( 2 );
  add_output_flags( merge_cmd, merge_opts );
  merge_cmd->callback( [&]() {
    const Trade a = read_trade_file( merge_inputs[0], "merge" );
    const Trade b = read_trade_file( merge_inputs[1], "merge" );
    write_text( render( TradeObject{ merge( a, b ) }, merge_opts ), merge_opts.output );
  } );

  /* split */
  std::string split_path;
  std::uint64_t split_node_limit = split_default_node_limit;
  OutputOptions split_opts;
  auto* split_cmd = app.add_subcommand( "split", "split a unitrade into a trade or certify failure" );
  split_cmd->add_option( "path", split_path, "unitrade file" )->required();
  split_cmd->add_option( "--node-limit", split_node_limit, "search node budget" );
  add_output_flags( split_cmd, split_opts );
  split_cmd->callback( [&]() { status = run_split( split_path, split_node_limit, split_opts ); } );

  /* classify */
  std::uint64_t classify_volume_value = 0;
  int classify_t = 0;
  OutputOptions classify_opts;
  auto* classify = app.add_subcommand( "classify", "classify a trade volume for a given strength" );
  classify->add_option( "volume", classify_volume_value, "volume to classify" )->required();
  classify->add_option( "t", classify_t, "strength, t >= 1" )->required();
  add_output_flags( classify, classify_opts );
  classify->callback(
      [&]() { status = run_classify( classify_volume_value, classify_t, classify_opts ); } );

  /* spectrum */
  int spectrum_v = 0, spectrum_t = 0, spectrum_threads = 1;
  std::uint64_t spectrum_max_volume = 0;
  OutputOptions spectrum_opts;
  auto* spectrum = app.add_subcommand( "spectrum", "realized trade volumes up to a bound" );
  spectrum->add_option( "v", spectrum_v, "ground set size" )->required();
  spectrum->add_option( "t", spectrum_t, "strength, 1 <= t < v" )->required();
  spectrum->add_option( "max_volume", spectrum_max_volume, "largest volume to search" )->required();
  spectrum->add_option( "--threads", spectrum_threads, "worker threads (result independent)" );
  add_output_flags( spectrum, spectrum_opts );
  spectrum->callback( [&]() {
    status = run_spectrum( spectrum_v, spectrum_t, spectrum_max_volume, spectrum_threads,
                           spectrum_opts );
  } );

  /* rm-dist */
  int rm_r = 0, rm_v = 0, rm_threads = 1;
  OutputOptions rm_opts;
  auto* rm_dist = app.add_subcommand( "rm-dist", "Reed-Muller weight distribution" );
  rm_dist->add_option( "r", rm_r, "order, 0 <= r <= v" )->required();
  rm_dist->add_option( "v", rm_v, "number of variables" )->required();
  rm_dist->add_option( "--threads", rm_threads, "worker threads (result independent)" );
  add_output_flags( rm_dist, rm_opts );
  rm_dist->callback( [&]() { status = run_rm_dist( rm_r, rm_v, rm_threads, rm_opts ); } );

  try
  {
    app.parse( argc, argv );
  }
  catch ( const CLI::ParseError& e )
  {
    const int code = app.exit( e );
    return code == 0 ? 0 : 2;
  }
  catch ( const parameter_error& e )
  {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  catch ( const capacity_error& e )
  {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  catch ( const std::logic_error& e )
  {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
  catch ( const std::exception& e )
  {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return status;
}
