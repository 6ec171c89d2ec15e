/*! \file errors.hpp
  \brief Exception types thrown by the library
*/

#pragma once

#include <stdexcept>
#include <string>

namespace cubetrades
{

/*! \brief A caller violated a documented precondition (bad parameter, malformed set). */
class parameter_error : public std::invalid_argument
{
public:
  explicit parameter_error( const std::string& what ) : std::invalid_argument( what ) {}
};

/*! \brief The request is well-formed but exceeds a documented size gate. */
class capacity_error : public std::runtime_error
{
public:
  explicit capacity_error( const std::string& what ) : std::runtime_error( what ) {}
};

} /* namespace cubetrades */
