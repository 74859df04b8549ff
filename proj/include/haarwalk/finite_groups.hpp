#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "haarwalk/group.hpp"

namespace haarwalk {

/// Z_n with labels "0".."n-1".
FiniteTable cyclic_table(std::size_t n);

/// Closure of the given permutations of {0..degree-1} under composition
/// (g h)(x) = g(h(x)). Elements are sorted lexicographically by image
/// vector, so the identity is element 0. Labels use 1-based cycle notation,
/// "e" for the identity.
FiniteTable permutation_table(const std::vector<std::vector<std::size_t>>& generators,
                              std::size_t degree);

FiniteTable symmetric3_table();
/// Symmetries of the regular n-gon, order 2n.
FiniteTable dihedral_table(std::size_t n);
/// {1, -1, i, -i, j, -j, k, -k}.
FiniteTable quaternion8_table();
FiniteTable alternating4_table();

/// Built-in tables by name: "Z<n>" (e.g. "Z6"), "S3", "D<n>", "Q8", "A4".
FiniteTable builtin_table(const std::string& name);

/// Parses {"order": n, "labels": [...], "table": [[...]]} (0-based entries).
/// Shape problems and axiom violations raise GroupAxiomError; JSON type
/// errors raise std::invalid_argument.
FiniteTable finite_table_from_json(const nlohmann::json& doc);
FiniteTable load_finite_table(const std::filesystem::path& path);
nlohmann::ordered_json finite_table_to_json(const FiniteTable& table);

}  // namespace haarwalk
