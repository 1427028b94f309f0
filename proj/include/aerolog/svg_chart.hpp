#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aerolog/storage.hpp"

namespace aerolog::svg {

struct ChartSpec {
  std::string title;
  std::string y_label;          // e.g. the channel's field label
  std::string x_label = "time (UTC)";
  int width = 800;
  int height = 400;
};

// Static line chart of aggregate points ((window midpoint, value) pairs).
// Pure function of its inputs: no timestamps, no randomness, byte-stable.
std::string render_line_chart(const std::vector<storage::AggregatePoint>& points,
                              storage::AggregateFn fn, const ChartSpec& spec);

}  // namespace aerolog::svg
