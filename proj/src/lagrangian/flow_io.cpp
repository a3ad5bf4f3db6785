#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include "json.hpp"

#include "egwp/lagrangian/flow.hpp"

namespace egwp::lagrangian {

void write_flow_csv(std::ostream& os, const FlowMap& flow) {
  os << "seed_i,seed_j,time,x1,x2\n";
  const int m = flow.seeds_per_side;
  for (std::size_t k = 0; k < flow.times.size(); ++k)
    for (std::size_t s = 0; s < flow.seed_count(); ++s) {
      const Point& p = flow.positions[k][s];
      fmt::print(os, "{},{},{:.17g},{:.17g},{:.17g}\n", s / m, s % m, flow.times[k], p.x1, p.x2);
    }
}

std::string flow_manifest_json(const FlowMap& flow) {
  nlohmann::ordered_json j;
  j["M"] = flow.seeds_per_side;
  j["T"] = flow.times.empty() ? 0.0 : flow.times.back();
  j["dt"] = flow.dt;
  j["direction"] = to_string(flow.direction);
  j["recorded_times"] = flow.times.size();
  return j.dump(2);
}

}  // namespace egwp::lagrangian
