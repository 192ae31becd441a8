#include <ostream>

#include "json.hpp"
#include "radionet/radio.hpp"

namespace radionet {

void Trace::write_csv(std::ostream& out) const {
  out << "round,lane,transmitters,receptions,collisions\n";
  for (const auto& rec : records_) {
    out << rec.round << ',' << to_string(rec.lane) << ',';
    for (std::size_t i = 0; i < rec.transmitters.size(); ++i) {
      if (i) out << ';';
      out << rec.transmitters[i];
    }
    out << ',';
    for (std::size_t i = 0; i < rec.receptions.size(); ++i) {
      if (i) out << ';';
      out << rec.receptions[i].first << ':' << rec.receptions[i].second;
    }
    out << ',' << rec.collisions << '\n';
  }
}

std::string trace_summary_json(const Trace& trace) {
  nlohmann::ordered_json doc;
  doc["rounds"] = trace.rounds();
  doc["charged_rounds"] = trace.charged_rounds();
  doc["success"] = trace.success;
  return doc.dump();
}

}  // namespace radionet
