#pragma once

#include <string_view>

#include "depl/config_model.hpp"
#include "depl/diagnostics.hpp"

namespace depl {

/// Reads the XML architecture-description dialect. On success the returned
/// configuration validates cleanly; otherwise at least one located
/// diagnostic is reported.
///
/// Accepted document shape (exactly these elements; anything else is
/// UNSUPPORTED_ELEMENT):
///
///   <definition name="...">
///     <component name="cli" definition="Client">
///       <interface name="s" role="client" signature="IService"/>
///       <attributes>
///         <attribute name="nom" value="..."/>
///       </attributes>
///       <component .../>          <!-- nesting becomes a containment -->
///       <binding .../>
///     </component>
///     <binding client="cli.s" server="srv.s"/>
///   </definition>
///
/// Each component element becomes an instance (site "local" — this dialect
/// has no site syntax); its definition attribute names the component type,
/// whose ports and attributes are synthesized from the interface and
/// attribute declarations of every component sharing that type. role
/// "client" declares a required port, "server" a provided one. Attribute
/// values are strings, so synthesized attribute declarations are
/// string-kind.
ParseResult<Configuration> parse_adl(std::string_view xml);

}  // namespace depl
