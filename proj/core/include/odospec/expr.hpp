#pragma once

#include <map>
#include <string>

#include "odospec/diffop.hpp"

namespace odospec {

/// Parse an operator expression such as "d^2 - 2*u" with "d" the derivative,
/// "z" the variable, rational literals, and identifiers bound to series in
/// `env`.  Standard precedence; products are noncommutative and expand
/// through the operator product.
DiffOp parse_operator(const std::string& text, const std::map<std::string, Laurent>& env = {});

}  // namespace odospec
