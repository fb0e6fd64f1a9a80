#pragma once

#include <cmath>
#include <string>
#include <string_view>

#include "cgeo/errors.hpp"
#include "cgeo/tensor.hpp"

namespace cgeo {

enum class ChartId {
  kGlobal,  // single chart covering R^n
  kNorth,   // stereographic projection from +e_6 (north pole excluded)
  kSouth,   // stereographic projection from -e_6 (south pole excluded)
};

constexpr std::string_view to_string(ChartId id) {
  switch (id) {
    case ChartId::kGlobal: return "global";
    case ChartId::kNorth: return "north";
    case ChartId::kSouth: return "south";
  }
  return "?";
}

struct ChartPoint {
  ChartId chart = ChartId::kGlobal;
  Point<double> coords{};
};

struct GlobalChart {
  static constexpr ChartId id() { return ChartId::kGlobal; }
  static bool contains(const Point<double>& x) {
    for (double v : x)
      if (!std::isfinite(v)) return false;
    return true;
  }
};

// Stereographic chart of the unit sphere S^5 in R^6. Points whose image lies
// too close to the excluded pole are rejected; |x| <= kMaxRadius keeps the
// chordal distance to the pole above ~0.2.
struct StereoChart {
  static constexpr double kMaxRadius = 10.0;

  ChartId which = ChartId::kNorth;

  constexpr ChartId id() const { return which; }
  // +1 when the excluded pole is +e_6.
  constexpr double pole() const { return which == ChartId::kNorth ? 1.0 : -1.0; }

  static bool contains(const Point<double>& x) {
    double r2 = 0.0;
    for (double v : x) {
      if (!std::isfinite(v)) return false;
      r2 += v * v;
    }
    return r2 <= kMaxRadius * kMaxRadius;
  }
};

template <class C>
void require_in_chart(const C& chart, const ChartPoint& p) {
  if (p.chart != chart.id())
    throw DomainError("point belongs to chart '" + std::string(to_string(p.chart)) +
                      "', structure is expressed in chart '" +
                      std::string(to_string(chart.id())) + "'");
  if (!chart.contains(p.coords))
    throw DomainError("point outside the validity region of chart '" +
                      std::string(to_string(chart.id())) + "'");
}

}  // namespace cgeo
