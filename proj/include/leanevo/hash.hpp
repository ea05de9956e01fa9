#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "leanevo/ast.hpp"

namespace leanevo {

// Alpha-normalized form used for dedup keying: theorem name dropped,
// binder/hypothesis/quantifier names canonicalized positionally, header
// dropped, canonical printer spacing. Commutativity variants stay distinct.
std::string normalized_print(const Statement& stmt);

// FNV-1a (64-bit) of normalized_print. Stable across runs and platforms.
std::uint64_t structural_hash(const Statement& stmt);

// Fallback key for statements the parser rejects: FNV-1a of the text with
// whitespace runs collapsed to single spaces.
std::uint64_t whitespace_normalized_hash(std::string_view text);

std::uint64_t fnv1a(std::string_view data);

std::string hash_hex(std::uint64_t h);

}  // namespace leanevo
