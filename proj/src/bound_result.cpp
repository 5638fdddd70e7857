#include "gaussbound/bound_result.hpp"

#include <array>
#include <stdexcept>
#include <utility>

namespace gaussbound {

namespace {

constexpr std::array<std::pair<BoundFamily, const char*>, 14> kNames{{
    {BoundFamily::Theorem1, "theorem1"},
    {BoundFamily::Cor1First, "cor1_first"},
    {BoundFamily::Cor1Second, "cor1_second"},
    {BoundFamily::Cor2First, "cor2_first"},
    {BoundFamily::Cor3First, "cor3_first"},
    {BoundFamily::Cor3Second, "cor3_second"},
    {BoundFamily::Cor4, "cor4"},
    {BoundFamily::EqMibFirst, "eq_mib_first"},
    {BoundFamily::EqMibSecond, "eq_mib_second"},
    {BoundFamily::XuRaginsky, "xu_raginsky"},
    {BoundFamily::BuEtAl, "bu"},
    {BoundFamily::TrueGen, "true_gen"},
    {BoundFamily::DirectVec, "direct"},
    {BoundFamily::DecomposedVec, "decomposed"},
}};

}  // namespace

std::string to_string(BoundFamily f) {
  for (const auto& [family, name] : kNames)
    if (family == f) return name;
  throw std::invalid_argument("to_string: unknown bound family");
}

BoundFamily bound_family_from_string(const std::string& name) {
  for (const auto& [family, fname] : kNames)
    if (name == fname) return family;
  throw std::invalid_argument("unknown bound family: " + name);
}

}  // namespace gaussbound
