#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "proxyzoo/var_reduced_form.hpp"

namespace proxyzoo {

/// JSON document with row-major, labeled matrices. Doubles are written with
/// round-trip precision; `config_hash` is echoed at the top level.
std::string reduced_form_to_json(const ReducedForm& rf, std::string_view config_hash = {});

/// Inverse of reduced_form_to_json. The stored hash is returned through
/// `config_hash` when non-null.
ReducedForm reduced_form_from_json(std::string_view text, std::string* config_hash = nullptr);

ReducedForm load_reduced_form(const std::filesystem::path& path, std::string* config_hash = nullptr);

}  // namespace proxyzoo
