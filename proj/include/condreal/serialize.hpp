#pragma once

#include <string>
#include <variant>

#include "condreal/computing_systems.hpp"
#include "condreal/tz_witnesses.hpp"

namespace condreal {

// File-level serialization.  Objects whose components are derived natives
// carry a `:source (<direction> <object>)` slot; loading such a file re-runs
// the pure construction on the embedded source, which re-registers the named
// components before the component slots are parsed.
std::string write_object_text(const UniformSystem&);
std::string write_object_text(const ConditionalSystem&);
std::string write_object_text(const TZUniformWitness&);
std::string write_object_text(const TZConditionalWitness&);

using LoadedObject =
    std::variant<UniformSystem, ConditionalSystem, TZUniformWitness, TZConditionalWitness>;

LoadedObject load_object_text(const std::string& text);
UniformSystem load_uniform_system(const std::string& text);
ConditionalSystem load_conditional_system(const std::string& text);
TZUniformWitness load_tz_uniform(const std::string& text);
TZConditionalWitness load_tz_conditional(const std::string& text);

}  // namespace condreal
