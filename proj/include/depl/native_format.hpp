#pragma once

#include <string>
#include <string_view>

#include "depl/config_model.hpp"
#include "depl/diagnostics.hpp"

namespace depl {

/// Reads the native configuration text. On success the returned
/// configuration is guaranteed to validate cleanly; otherwise at least one
/// diagnostic with a source location is reported.
///
/// The format is free-form with `#` line comments:
///
///   type <Name> {
///     provides <port>: <Interface>
///     requires <port>: <Interface>
///     attribute <name>: string|integer|boolean
///     artifact "<id>"
///   }
///   instance <id>: <TypeName> [@ <site>] [{ <attr> = <literal> ... }]
///   bind <client>.<port> -> <server>.<port>
///   contain <parent> <child> as <name>
///
/// Interface signatures are declared implicitly by their first use in a
/// port declaration. String literals are double-quoted with \\ \" \n \r \t
/// escapes; integers are decimal; booleans are true/false.
ParseResult<Configuration> parse_native(std::string_view text);

/// Writes a configuration back out as native text in canonical element
/// order. For any valid configuration, parsing the result yields the
/// canonical form of the original. Interface signatures that no port
/// references have no written form and are dropped.
std::string emit_native(const Configuration& config);

}  // namespace depl
