#include "atdev/curve.h"

#include <array>

#include "atdev/error.h"
#include "atdev/stats.h"

namespace atdev {

namespace {
constexpr std::array<std::pair<CurveKind, std::string_view>, 7> kKindNames{{
    {CurveKind::PD, "PD"},
    {CurveKind::Marginal, "Marginal"},
    {CurveKind::ALE, "ALE"},
    {CurveKind::ACE, "ACE"},
    {CurveKind::ATDEV, "ATDEV"},
    {CurveKind::LE, "LE"},
    {CurveKind::LECross, "LEcross"},
}};
}  // namespace

std::string to_string(CurveKind kind) {
  for (const auto& [k, name] : kKindNames)
    if (k == kind) return std::string(name);
  return "?";
}

CurveKind parse_curve_kind(std::string_view s) {
  for (const auto& [k, name] : kKindNames)
    if (name == s) return k;
  throw UsageError("unknown curve kind '" + std::string(s) + "'");
}

void EffectCurve::validate() const {
  if (values.size() != grid.size() || counts.size() != grid.size())
    throw UsageError("curve: grid/values/counts lengths differ");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw UsageError("curve: grid not strictly increasing");
}

double weighted_mean(const EffectCurve& c) { return stats::weighted_mean(c.values, c.counts); }

double weighted_variance(const EffectCurve& c) {
  return stats::weighted_variance(c.values, c.counts);
}

EffectCurve center(EffectCurve curve) {
  const double m = weighted_mean(curve);
  for (double& v : curve.values) v -= m;
  curve.centered = true;
  return curve;
}

}  // namespace atdev
